#include "cbtree/instrument.hpp"

#include <stdexcept>
#include <string>

namespace cbtree {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument(field + ": " + why);
}

void check_in_life(const ConvertibleTerms& t, Date d, const std::string& field) {
    if (d < t.issue_date || d > t.maturity_date)
        fail(field, "date " + d.to_string() + " outside [issue, maturity]");
}

} // namespace

void ConvertibleTerms::validate() const {
    if (!(face > 0.0))
        fail("face", "must be positive");
    if (!(coupon_rate >= 0.0))
        fail("coupon_rate", "must be non-negative");
    if (!(recovery >= 0.0 && recovery <= 1.0))
        fail("recovery", "must lie in [0,1]");
    if (!(issue_date < maturity_date))
        fail("maturity", "must be after the issue date");

    Date prev = issue_date;
    for (const Date d : coupon_dates) {
        if (d <= prev)
            fail("coupon.dates", "dates must be strictly increasing and after issue");
        if (d > maturity_date)
            fail("coupon.dates", "date " + d.to_string() + " after maturity");
        prev = d;
    }

    if (convertible()) {
        if (conversion_end < conversion_start)
            fail("conversion.window", "end before start");
        check_in_life(*this, conversion_start, "conversion.window");
        check_in_life(*this, conversion_end, "conversion.window");
        Date prev_from = Date{conversion_ratios.front().from.serial() - 1};
        for (const RatioPeriod& p : conversion_ratios) {
            if (!(p.ratio > 0.0))
                fail("conversion.ratio", "must be positive");
            if (p.from <= prev_from)
                fail("conversion.from", "period starts must be strictly increasing");
            check_in_life(*this, p.from, "conversion.from");
            prev_from = p.from;
        }
    }

    const CallWindow* prev_call = nullptr;
    for (const CallWindow& c : calls) {
        if (!(c.price > 0.0))
            fail("call.price", "must be positive");
        if (c.end < c.start)
            fail("call.window", "end before start");
        check_in_life(*this, c.start, "call.window");
        check_in_life(*this, c.end, "call.window");
        if (prev_call && c.start <= prev_call->end)
            fail("call.window", "windows must be sorted and non-overlapping");
        prev_call = &c;
    }

    const PutDate* prev_put = nullptr;
    for (const PutDate& p : puts) {
        if (!(p.price > 0.0))
            fail("put.price", "must be positive");
        check_in_life(*this, p.date, "put.date");
        if (prev_put && p.date <= prev_put->date)
            fail("put.date", "dates must be strictly increasing");
        prev_put = &p;
    }
}

std::vector<CouponPayment> coupon_amounts(const ConvertibleTerms& terms) {
    std::vector<CouponPayment> out;
    out.reserve(terms.coupon_dates.size());
    Date prev = terms.issue_date;
    for (const Date d : terms.coupon_dates) {
        out.push_back({d, terms.face * terms.coupon_rate * year_fraction(prev, d)});
        prev = d;
    }
    return out;
}

Provisions provisions_at(const ConvertibleTerms& terms, Date t) {
    Provisions out;
    if (terms.convertible() && t >= terms.conversion_start && t <= terms.conversion_end) {
        // Last period that has started by t; periods starting before the
        // window simply anchor the initial ratio.
        const RatioPeriod* active = nullptr;
        for (const RatioPeriod& p : terms.conversion_ratios) {
            if (p.from <= t)
                active = &p;
            else
                break;
        }
        if (active)
            out.conversion_ratio = active->ratio;
    }
    for (const CallWindow& c : terms.calls) {
        if (t >= c.start && t <= c.end) {
            out.call_price = c.price;
            break;
        }
    }
    for (const PutDate& p : terms.puts) {
        if (p.date == t) {
            out.put_price = p.price;
            break;
        }
    }
    return out;
}

} // namespace cbtree
