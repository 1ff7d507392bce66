#include "cbtree/dates.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace cbtree {

namespace {

namespace chr = std::chrono;

chr::year_month_day to_ymd(Date d) {
    return chr::year_month_day{chr::sys_days{chr::days{d.serial()}}};
}

int parse_int(std::string_view text) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("bad date component '" + std::string(text) + "'");
    return value;
}

} // namespace

Date Date::from_ymd(int year, int month, int day) {
    const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                  chr::day{static_cast<unsigned>(day)}};
    if (!ymd.ok())
        throw std::invalid_argument("invalid calendar date");
    return Date{static_cast<int>(chr::sys_days{ymd}.time_since_epoch().count())};
}

Date Date::parse(std::string_view iso) {
    // strict YYYY-MM-DD, no whitespace tolerance here; callers trim.
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(iso) + "'");
    const int y = parse_int(iso.substr(0, 4));
    const int m = parse_int(iso.substr(5, 2));
    const int d = parse_int(iso.substr(8, 2));
    try {
        return from_ymd(y, m, d);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("invalid calendar date '" + std::string(iso) + "'");
    }
}

std::string Date::to_string() const {
    const auto ymd = to_ymd(*this);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace cbtree
