#pragma once

#include <vector>

#include "cbtree/instrument.hpp"

namespace cbtree {

/// Term-sheet events snapped onto a uniform grid of n_steps time steps
/// between the valuation date and maturity. Both the tree and the
/// finite-difference solver price off this one projection so that a put date
/// or a ratio change lands on the same level in both.
struct TimeGridSchedule {
    int n_steps = 0;
    double dt = 0.0;            // years per step
    double horizon = 0.0;       // years from valuation to maturity

    /// Provisions active at each time level 0..n_steps. Dates snap to the
    /// nearest level; a put is active only at its snapped level.
    std::vector<Provisions> levels;

    /// Per step i: sum over coupons paid in (t_i, t_{i+1}] of
    /// amount * e^{-r (t_c - t_i)}, i.e. the value at t_i of that step's
    /// coupons discounted at the risk-free rate only. Pricers multiply by the
    /// step's survival factor to account for coupons lost on default.
    std::vector<double> coupon_base;

    static TimeGridSchedule build(const ConvertibleTerms& terms, Date valuation, int n_steps,
                                  double rate);
};

} // namespace cbtree
