#pragma once

#include <optional>

#include "cbtree/market.hpp"

namespace cbtree {

/// Default-intensity model: either a flat intensity or the equity-linked
/// power law lambda(S) = lambda0 * (S/S0)^alpha with alpha < 0, under which
/// the intensity blows up as the stock collapses.
class HazardModel {
public:
    enum class Kind { Constant, Synthesis };

    static HazardModel constant(double lambda0);
    static HazardModel synthesis(double lambda0, double alpha, double s0);

    Kind kind() const noexcept { return kind_; }
    bool is_constant() const noexcept { return kind_ == Kind::Constant; }

    double lambda0() const noexcept { return lambda0_; }
    double alpha() const noexcept { return alpha_; }  // Synthesis only
    double s0() const noexcept { return s0_; }        // Synthesis only

    friend bool operator==(const HazardModel&, const HazardModel&) = default;

private:
    HazardModel(Kind kind, double lambda0, double alpha, double s0)
        : kind_(kind), lambda0_(lambda0), alpha_(alpha), s0_(s0) {}

    Kind kind_;
    double lambda0_;
    double alpha_;
    double s0_;
};

/// Intensity at the given spot. Constant models accept any spot >= 0; the
/// power law needs spot > 0 and throws NonpositiveSpot otherwise.
double hazard_at(const HazardModel& model, double spot);

/// Lowest spot at which every branch probability of a standard step stays in
/// [0,1]: S* = S0 * (bound / (lambda0*dt))^(1/alpha) with bound from
/// max_hazard_step. Empty for a constant model whose (flat) intensity fits
/// under the bound; StepTooCoarse when no spot is admissible at this step
/// size (constant intensity over the bound, or a non-positive bound).
std::optional<double> stock_floor(const HazardModel& model, const MarketState& market,
                                  double eta, double dt);

/// Everything the tree needs to know about default: the fraction eta the
/// stock drops on default and the intensity model driving the jump times.
struct DefaultSpec {
    double eta;
    HazardModel hazard;

    DefaultSpec(double eta_, HazardModel hazard_);

    friend bool operator==(const DefaultSpec&, const DefaultSpec&) = default;
};

} // namespace cbtree
