#pragma once

#include "cbtree/market.hpp"

namespace cbtree {

/// Absolute tolerance on branch probabilities when deciding whether a step is
/// usable. Single source of truth: every validity check in the library (and
/// the documented CLI behaviour) compares p_down against -kProbTolerance.
inline constexpr double kProbTolerance = 1e-12;

/// One time step of the defaultable-stock tree: multiplicative moves plus the
/// three branch probabilities (up, down, default within the step).
struct StepParams {
    double up;
    double down;       // exactly 1/up
    double p_up;
    double p_down;
    double p_default;
    double dt;         // years
    double lambda;     // intensity used for this step, per year
    double growth;     // e^{r*dt}; rollback discounts by its reciprocal

    /// All three probabilities within [0,1] up to kProbTolerance. The binding
    /// constraint in practice is p_down >= -kProbTolerance; the others hold by
    /// construction whenever the inputs meet their preconditions.
    bool valid() const noexcept;
};

/// Move factors and growth shared by every step of one tree. Probabilities
/// then depend only on the per-node intensity, which is what a spot-linked
/// intensity model varies.
struct StepGeometry {
    double up;
    double down;        // 1/up
    double growth;      // e^{r*dt}
    double dt;
    double sigma_eff;   // diffusion actually driving the moves

    static StepGeometry standard(const MarketState& market, double dt);

    /// Reduced-volatility geometry u = e^{sqrt((sigma^2 - lambda) * dt)} used
    /// by the Hull total-default comparison model. Throws DegenerateVolatility
    /// when sigma^2 <= lambda.
    static StepGeometry hull(const MarketState& market, double lambda, double dt);

    /// Branch probabilities for this geometry. Never throws: callers that
    /// need a usable step check valid() or go through build_step_params.
    StepParams step(double eta, double lambda) const noexcept;
};

/// Largest intensity-time product lambda*dt the standard geometry admits at
/// this step size: ln((u - (1-eta)) / (e^{r*dt} - (1-eta))). A step is usable
/// iff lambda*dt stays at or below this bound, which is exactly p_down >= 0.
double max_hazard_step(const MarketState& market, double eta, double dt);

/// Checked step construction. Throws StepTooCoarse (carrying the bound from
/// max_hazard_step) when the down probability would go negative.
StepParams build_step_params(const MarketState& market, double eta, double lambda, double dt);

/// Checked step construction for the Hull reduced-volatility variant, which
/// folds the default intensity into the move size and prices total default
/// (the stock is worthless on the default branch).
StepParams hull_step_params(const MarketState& market, double lambda, double dt);

} // namespace cbtree
