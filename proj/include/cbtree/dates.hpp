#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace cbtree {

/// Calendar date stored as a serial day count (days since 1970-01-01,
/// proleptic Gregorian). Day resolution is all the schedules need.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(int serial) : serial_(serial) {}

    static Date from_ymd(int year, int month, int day);

    /// Parses "YYYY-MM-DD". Throws std::invalid_argument on malformed or
    /// non-existent dates.
    static Date parse(std::string_view iso);

    constexpr int serial() const noexcept { return serial_; }

    std::string to_string() const;

    friend constexpr auto operator<=>(Date, Date) noexcept = default;

private:
    int serial_ = 0;
};

constexpr int days_between(Date from, Date to) noexcept {
    return to.serial() - from.serial();
}

// Act/365 fixed.
constexpr double year_fraction(Date from, Date to) noexcept {
    return static_cast<double>(days_between(from, to)) / 365.0;
}

} // namespace cbtree
