#include "cbtree/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbtree {

namespace {

// First grid level on or after a year offset x from valuation. Rounding to
// nearest would sometimes drag an event back across a coupon binned in the
// same step, so a put or call would floor a value still carrying the payment;
// that mistake is worth a whole coupon and does not shrink with the step
// count. On-or-after keeps every event on the ex side of its coupon. The
// epsilon forgives rounding noise on exact grid hits.
int event_level(double x, double dt) {
    return static_cast<int>(std::ceil(x / dt - 1e-9));
}

int snap_level(double x, double dt, int n) {
    return std::clamp(event_level(x, dt), 0, n);
}

} // namespace

TimeGridSchedule TimeGridSchedule::build(const ConvertibleTerms& terms, Date valuation,
                                         int n_steps, double rate) {
    terms.validate();
    if (n_steps < 1)
        throw std::invalid_argument("n_steps must be at least 1");
    if (valuation < terms.issue_date || valuation >= terms.maturity_date)
        throw std::invalid_argument("valuation date must lie in [issue, maturity)");

    TimeGridSchedule s;
    s.n_steps = n_steps;
    s.horizon = year_fraction(valuation, terms.maturity_date);
    s.dt = s.horizon / n_steps;
    s.levels.assign(static_cast<size_t>(n_steps) + 1, Provisions{});
    s.coupon_base.assign(static_cast<size_t>(n_steps), 0.0);

    const auto offset = [&](Date d) { return year_fraction(valuation, d); };

    if (terms.convertible() && terms.conversion_end >= valuation) {
        const Date start = std::max(terms.conversion_start, valuation);
        const int lo = snap_level(offset(start), s.dt, n_steps);
        const int hi = snap_level(offset(terms.conversion_end), s.dt, n_steps);
        // Ratio periods keep their raw (possibly negative) level so a period
        // that started before valuation still anchors the ratio.
        std::vector<std::pair<int, double>> period_levels;
        period_levels.reserve(terms.conversion_ratios.size());
        for (const RatioPeriod& p : terms.conversion_ratios)
            period_levels.emplace_back(event_level(offset(p.from), s.dt), p.ratio);
        for (int i = lo; i <= hi; ++i) {
            const double* ratio = nullptr;
            for (const auto& [from_level, r] : period_levels) {
                if (from_level <= i)
                    ratio = &r;
                else
                    break;
            }
            if (ratio)
                s.levels[static_cast<size_t>(i)].conversion_ratio = *ratio;
        }
    }

    for (const CallWindow& c : terms.calls) {
        if (c.end < valuation)
            continue;
        const Date start = std::max(c.start, valuation);
        const int lo = snap_level(offset(start), s.dt, n_steps);
        const int hi = snap_level(offset(c.end), s.dt, n_steps);
        for (int i = lo; i <= hi; ++i)
            s.levels[static_cast<size_t>(i)].call_price = c.price;
    }

    for (const PutDate& p : terms.puts) {
        if (p.date < valuation)
            continue;
        const int level = snap_level(offset(p.date), s.dt, n_steps);
        s.levels[static_cast<size_t>(level)].put_price = p.price;
    }

    for (const CouponPayment& c : coupon_amounts(terms)) {
        const double x = offset(c.date);
        if (x <= 0.0)
            continue;  // already paid; a coupon on the valuation date goes to the seller
        // Bin into the step (t_i, t_{i+1}]. The epsilon guards the exact
        // grid-point case, where x/dt is an integer up to rounding and the
        // coupon belongs to the step ending there.
        const int i = std::clamp(
            static_cast<int>(std::ceil(x / s.dt - 1e-9)) - 1, 0, n_steps - 1);
        s.coupon_base[static_cast<size_t>(i)] +=
            c.amount * std::exp(-rate * (x - static_cast<double>(i) * s.dt));
    }

    return s;
}

} // namespace cbtree
