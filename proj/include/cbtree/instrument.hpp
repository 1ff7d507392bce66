#pragma once

#include <optional>
#include <vector>

#include "cbtree/dates.hpp"

namespace cbtree {

/// Issuer call right over [start, end] inclusive at a clean strike.
struct CallWindow {
    Date start;
    Date end;
    double price;

    friend bool operator==(const CallWindow&, const CallWindow&) = default;
};

/// Holder put right on one exact date.
struct PutDate {
    Date date;
    double price;

    friend bool operator==(const PutDate&, const PutDate&) = default;
};

/// Conversion ratio in force from `from` (inclusive) until the next period
/// starts; the last period runs to the end of the conversion window.
struct RatioPeriod {
    Date from;
    double ratio;

    friend bool operator==(const RatioPeriod&, const RatioPeriod&) = default;
};

/// Static description of one convertible issue. Plain data; validate() checks
/// the cross-field constraints after direct construction or parsing.
struct ConvertibleTerms {
    double face = 100.0;
    double coupon_rate = 0.0;          // annual rate, Act/365 accrual
    std::vector<Date> coupon_dates;    // strictly increasing, in (issue, maturity]
    Date conversion_start;             // window inclusive on both ends;
    Date conversion_end;               // ignored when conversion_ratios is empty
    std::vector<RatioPeriod> conversion_ratios;  // empty: conversion never permitted
    std::vector<CallWindow> calls;     // sorted, non-overlapping
    std::vector<PutDate> puts;         // strictly increasing dates
    double recovery = 0.0;             // fraction of face paid on default
    Date issue_date;
    Date maturity_date;

    bool convertible() const noexcept { return !conversion_ratios.empty(); }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const ConvertibleTerms&, const ConvertibleTerms&) = default;
};

struct CouponPayment {
    Date date;
    double amount;

    friend bool operator==(const CouponPayment&, const CouponPayment&) = default;
};

/// Cash coupons implied by coupon_rate and coupon_dates: each pays
/// face * rate * yearfrac(previous date or issue, this date).
std::vector<CouponPayment> coupon_amounts(const ConvertibleTerms& terms);

/// What the holder and issuer may do on one date.
struct Provisions {
    std::optional<double> conversion_ratio;
    std::optional<double> call_price;
    std::optional<double> put_price;

    friend bool operator==(const Provisions&, const Provisions&) = default;
};

/// Provisions active on the exact date t. The put is active only on its very
/// date; grid-based pricers snap it to the nearest time level instead of
/// calling this per level.
Provisions provisions_at(const ConvertibleTerms& terms, Date t);

} // namespace cbtree
