#include "cbtree/hazard.hpp"

#include <cmath>
#include <stdexcept>

#include "cbtree/errors.hpp"
#include "cbtree/lattice.hpp"

namespace cbtree {

HazardModel HazardModel::constant(double lambda0) {
    if (!(lambda0 >= 0.0))
        throw std::invalid_argument("lambda0 must be non-negative");
    return HazardModel{Kind::Constant, lambda0, 0.0, 0.0};
}

HazardModel HazardModel::synthesis(double lambda0, double alpha, double s0) {
    if (!(lambda0 > 0.0))
        throw std::invalid_argument("lambda0 must be positive");
    if (!(alpha < 0.0))
        throw std::invalid_argument("alpha must be negative");
    if (!(s0 > 0.0))
        throw std::invalid_argument("s0 must be positive");
    return HazardModel{Kind::Synthesis, lambda0, alpha, s0};
}

double hazard_at(const HazardModel& model, double spot) {
    if (model.is_constant()) {
        if (!(spot >= 0.0))
            throw std::invalid_argument("spot must be non-negative");
        return model.lambda0();
    }
    if (!(spot > 0.0))
        throw NonpositiveSpot(spot);
    return model.lambda0() * std::pow(spot / model.s0(), model.alpha());
}

std::optional<double> stock_floor(const HazardModel& model, const MarketState& market,
                                  double eta, double dt) {
    const double bound = max_hazard_step(market, eta, dt);
    if (model.is_constant()) {
        // Same acceptance criterion as build_step_params (p_down within
        // kProbTolerance of [0,1]), not a re-derived comparison on the bound.
        if (!StepGeometry::standard(market, dt).step(eta, model.lambda0()).valid())
            throw StepTooCoarse(model.lambda0() * dt, bound);
        return std::nullopt;
    }
    if (bound <= 0.0) {
        // No spot is admissible: the geometry itself rejects every intensity.
        throw StepTooCoarse(model.lambda0() * dt, bound);
    }
    // Invert lambda(S)*dt = bound. alpha < 0, so spots below this make the
    // local intensity overflow the step budget.
    return model.s0() * std::pow(bound / (model.lambda0() * dt), 1.0 / model.alpha());
}

DefaultSpec::DefaultSpec(double eta_, HazardModel hazard_)
    : eta(eta_), hazard(std::move(hazard_)) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must lie in [0,1]");
}

} // namespace cbtree
