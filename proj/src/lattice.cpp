#include "cbtree/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include "cbtree/errors.hpp"

namespace cbtree {

namespace {

void check_step_inputs(double eta, double lambda, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("dt must be positive");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("lambda must be non-negative");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must lie in [0,1]");
}

} // namespace

bool StepParams::valid() const noexcept {
    const auto in_range = [](double p) {
        return p >= -kProbTolerance && p <= 1.0 + kProbTolerance;
    };
    return in_range(p_up) && in_range(p_down) && in_range(p_default);
}

StepGeometry StepGeometry::standard(const MarketState& market, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("dt must be positive");
    const double u = std::exp(market.sigma * std::sqrt(dt));
    return {u, 1.0 / u, std::exp(market.rate * dt), dt, market.sigma};
}

StepGeometry StepGeometry::hull(const MarketState& market, double lambda, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("dt must be positive");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("lambda must be non-negative");
    const double var = market.sigma * market.sigma - lambda;
    if (var <= 0.0)
        throw DegenerateVolatility(market.sigma, lambda);
    // sqrt(var) first so the lambda = 0 case reproduces the standard geometry
    // bit for bit (sqrt(sigma*sigma) == sigma in IEEE arithmetic).
    const double sigma_eff = std::sqrt(var);
    const double u = std::exp(sigma_eff * std::sqrt(dt));
    return {u, 1.0 / u, std::exp(market.rate * dt), dt, sigma_eff};
}

StepParams StepGeometry::step(double eta, double lambda) const noexcept {
    // Survival enters three times; computing it once keeps the probabilities
    // on an exact simplex: p_up + p_down + p_default == 1 up to rounding.
    const double survival = std::exp(-lambda * dt);
    const double p_default = 1.0 - survival;
    const double p_up = (growth - survival * down - (1.0 - eta) * p_default) / (up - down);
    const double p_down = survival - p_up;
    return {up, down, p_up, p_down, p_default, dt, lambda, growth};
}

double max_hazard_step(const MarketState& market, double eta, double dt) {
    check_step_inputs(eta, 0.0, dt);
    const StepGeometry g = StepGeometry::standard(market, dt);
    // ln((u - (1-eta)) / (e^{r dt} - (1-eta))): the intensity-time budget at
    // which the down probability hits zero. Not clamped: a geometry with
    // e^{r dt} >= u (huge dt relative to sigma) has no admissible intensity
    // and the bound comes back <= 0, which callers surface as StepTooCoarse.
    return std::log((g.up - (1.0 - eta)) / (g.growth - (1.0 - eta)));
}

StepParams build_step_params(const MarketState& market, double eta, double lambda, double dt) {
    check_step_inputs(eta, lambda, dt);
    const StepParams p = StepGeometry::standard(market, dt).step(eta, lambda);
    if (p.p_down < -kProbTolerance)
        throw StepTooCoarse(lambda * dt, max_hazard_step(market, eta, dt));
    return p;
}

StepParams hull_step_params(const MarketState& market, double lambda, double dt) {
    const StepGeometry g = StepGeometry::hull(market, lambda, dt);
    const StepParams p = g.step(1.0, lambda);
    if (p.p_down < -kProbTolerance) {
        // Same bound as max_hazard_step, written for the reduced geometry
        // with total default: ln(u) - r*dt.
        throw StepTooCoarse(lambda * dt, std::log(g.up) - market.rate * dt);
    }
    return p;
}

} // namespace cbtree
