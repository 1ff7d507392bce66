#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cbtree/hazard.hpp"
#include "cbtree/instrument.hpp"
#include "cbtree/lattice.hpp"
#include "cbtree/market.hpp"

namespace cbtree {

enum class ModelKind {
    ConstantIntensity,  // standard geometry, flat intensity
    Synthesis,          // standard geometry, spot-linked intensity per node
    Hull2011,           // reduced-volatility geometry, flat intensity, total default
};

std::string_view to_string(ModelKind kind) noexcept;

struct PricingConfig {
    int n_steps = 0;
    ModelKind model = ModelKind::ConstantIntensity;
    double spot = 0.0;
    Date valuation_date;
};

struct PriceResult {
    double value = 0.0;
    /// Hedge shares at the root: (V_up - V_down) / (S*(u - d)).
    double delta = 0.0;
    /// Stock floor S* (spot-linked intensity runs only).
    std::optional<double> floor;
    /// True when the value comes from the linear below-floor extension that
    /// only price_profile produces.
    bool floor_extended = false;
    /// min over evaluated nodes of (admissible bound - lambda*dt); negative
    /// only at clamped sub-floor nodes.
    double step_margin = 0.0;
    /// Sub-floor nodes priced with the intensity clamped to the step budget.
    long clamped_nodes = 0;
};

/// Holder claim on the default branch at date t: recovered face plus, while
/// conversion is permitted at t, the option to convert the post-default stock
/// (1-eta)*spot.
double default_payoff(const ConvertibleTerms& terms, double spot, double eta, Date t);

/// One backward step: e^{-r dt} * (p_up*value_up + p_down*value_down +
/// p_default*value_default) + coupon_pv. Throws InvalidStep when the step's
/// probabilities are outside [0,1] beyond kProbTolerance.
double rollback_step(double value_up, double value_down, double value_default,
                     const StepParams& step, double coupon_pv);

/// Holder/issuer optimality at one node: the issuer calls to minimise, the
/// holder converts or puts to maximise, and a call can always be answered by
/// converting. Entries absent from `active` leave the continuation alone.
double apply_provisions(double continuation, double spot, const Provisions& active);

/// Full backward induction over a recombining tree with default branches.
PriceResult price(const ConvertibleTerms& terms, const MarketState& market,
                  const DefaultSpec& def, const PricingConfig& config);

struct ProfilePoint {
    double spot;
    PriceResult result;
};

/// price() across a spot ladder. Under a spot-linked intensity the ladder may
/// dip below the stock floor; those points are filled by the chord from
/// (0, recovery*face) to (S*, value at the floor) and flagged floor_extended.
/// Points are computed concurrently; the output order matches `spots`.
std::vector<ProfilePoint> price_profile(const ConvertibleTerms& terms, const MarketState& market,
                                        const DefaultSpec& def, const PricingConfig& config,
                                        std::span<const double> spots);

} // namespace cbtree
