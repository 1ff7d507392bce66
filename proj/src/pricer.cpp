#include "cbtree/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "cbtree/errors.hpp"
#include "cbtree/schedule.hpp"

namespace cbtree {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::ConstantIntensity: return "constant";
        case ModelKind::Synthesis: return "synthesis";
        case ModelKind::Hull2011: return "hull";
    }
    return "?";
}

double default_payoff(const ConvertibleTerms& terms, double spot, double eta, Date t) {
    if (!(spot >= 0.0))
        throw std::invalid_argument("spot must be non-negative");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must lie in [0,1]");
    double x = terms.recovery * terms.face;
    const Provisions p = provisions_at(terms, t);
    if (p.conversion_ratio)
        x = std::max(x, *p.conversion_ratio * (1.0 - eta) * spot);
    return x;
}

double rollback_step(double value_up, double value_down, double value_default,
                     const StepParams& step, double coupon_pv) {
    if (!step.valid())
        throw InvalidStep("branch probabilities outside [0,1]");
    return (step.p_up * value_up + step.p_down * value_down +
            step.p_default * value_default) /
               step.growth +
           coupon_pv;
}

double apply_provisions(double continuation, double spot, const Provisions& active) {
    double v = continuation;
    const double conv = active.conversion_ratio ? *active.conversion_ratio * spot : 0.0;
    if (active.call_price) {
        // The issuer calls to minimise, but the holder answers a call by
        // converting, so the call can never push the value below conversion.
        const double call_floor =
            active.conversion_ratio ? std::max(*active.call_price, conv) : *active.call_price;
        v = std::min(v, call_floor);
    }
    if (active.conversion_ratio)
        v = std::max(v, conv);
    if (active.put_price)
        v = std::max(v, *active.put_price);
    return v;
}

double apply_provisions(double continuation, double spot, const ConvertibleTerms& terms, Date t) {
    return apply_provisions(continuation, spot, provisions_at(terms, t));
}

namespace {

void check_model_consistency(const DefaultSpec& def, const PricingConfig& config) {
    switch (config.model) {
        case ModelKind::ConstantIntensity:
            if (!def.hazard.is_constant())
                throw std::invalid_argument("constant-intensity model needs a constant hazard");
            break;
        case ModelKind::Synthesis:
            if (def.hazard.is_constant())
                throw std::invalid_argument("synthesis model needs a spot-linked hazard");
            break;
        case ModelKind::Hull2011:
            if (!def.hazard.is_constant())
                throw std::invalid_argument("hull model needs a constant hazard");
            if (def.eta != 1.0)
                throw std::invalid_argument("hull model prices total default; eta must be 1");
            break;
    }
}

struct Engine {
    const ConvertibleTerms& terms;
    const MarketState& market;
    const DefaultSpec& def;
    const PricingConfig& config;
    TimeGridSchedule schedule;
    StepGeometry geometry;
    double bound;  // admissible lambda*dt for this geometry

    Engine(const ConvertibleTerms& terms_, const MarketState& market_, const DefaultSpec& def_,
           const PricingConfig& config_)
        : terms(terms_),
          market(market_),
          def(def_),
          config(config_),
          schedule(TimeGridSchedule::build(terms_, config_.valuation_date, config_.n_steps,
                                           market_.rate)),
          geometry(config_.model == ModelKind::Hull2011
                       ? StepGeometry::hull(market_, def_.hazard.lambda0(), schedule.dt)
                       : StepGeometry::standard(market_, schedule.dt)),
          bound(config_.model == ModelKind::Hull2011
                    ? std::log(geometry.up) - market_.rate * schedule.dt
                    : max_hazard_step(market_, def_.eta, schedule.dt)) {
        if (config.model != ModelKind::Synthesis) {
            const StepParams p = geometry.step(def.eta, def.hazard.lambda0());
            if (p.p_down < -kProbTolerance)
                throw StepTooCoarse(def.hazard.lambda0() * schedule.dt, bound);
        } else if (bound <= 0.0) {
            throw StepTooCoarse(def.hazard.lambda0() * schedule.dt, bound);
        }
    }

    PriceResult run(double spot) const {
        const int n = schedule.n_steps;
        const double dt = schedule.dt;
        const bool spot_linked = config.model == ModelKind::Synthesis;

        // Node stock values come from power tables: S(i,j) = spot * u^j * d^(i-j).
        std::vector<double> powu(static_cast<size_t>(n) + 1);
        std::vector<double> powd(static_cast<size_t>(n) + 1);
        powu[0] = powd[0] = 1.0;
        for (int j = 1; j <= n; ++j) {
            powu[static_cast<size_t>(j)] = powu[static_cast<size_t>(j - 1)] * geometry.up;
            powd[static_cast<size_t>(j)] = powd[static_cast<size_t>(j - 1)] * geometry.down;
        }

        PriceResult out;
        out.step_margin = bound - def.hazard.lambda0() * dt;

        // Terminal: redeem or convert, nothing else.
        std::vector<double> value(static_cast<size_t>(n) + 1);
        std::vector<double> next(static_cast<size_t>(n) + 1);
        const Provisions& terminal = schedule.levels[static_cast<size_t>(n)];
        for (int j = 0; j <= n; ++j) {
            const double s = spot * powu[static_cast<size_t>(j)] * powd[static_cast<size_t>(n - j)];
            double v = terms.face;
            if (terminal.conversion_ratio)
                v = std::max(v, *terminal.conversion_ratio * s);
            value[static_cast<size_t>(j)] = v;
        }

        const double discount = 1.0 / geometry.growth;
        const double recovered = terms.recovery * terms.face;
        const StepParams flat = geometry.step(def.eta, def.hazard.lambda0());
        double delta_up = value[1], delta_down = value[0];

        for (int i = n - 1; i >= 0; --i) {
            if (i == 0) {
                delta_up = value[1];
                delta_down = value[0];
            }
            const Provisions& here = schedule.levels[static_cast<size_t>(i)];
            const Provisions& arrival = schedule.levels[static_cast<size_t>(i + 1)];
            const double coupon_base = schedule.coupon_base[static_cast<size_t>(i)];
            for (int j = 0; j <= i; ++j) {
                const double s =
                    spot * powu[static_cast<size_t>(j)] * powd[static_cast<size_t>(i - j)];

                StepParams p = flat;
                if (spot_linked) {
                    const double raw = hazard_at(def.hazard, s);
                    double used = raw;
                    const double margin = bound - raw * dt;
                    if (margin < out.step_margin)
                        out.step_margin = margin;
                    if (raw * dt > bound) {
                        // Sub-floor node: cap the local intensity at the step
                        // budget so the down branch stays non-negative.
                        used = bound / dt;
                        ++out.clamped_nodes;
                    }
                    p = geometry.step(def.eta, used);
                }

                // Claim on the default branch; conversion there happens at the
                // arrival level's ratio against the dropped stock.
                double x = recovered;
                if (arrival.conversion_ratio)
                    x = std::max(x, *arrival.conversion_ratio * (1.0 - def.eta) * s);

                const double survival = 1.0 - p.p_default;
                const double cont =
                    discount * (p.p_up * value[static_cast<size_t>(j + 1)] +
                                p.p_down * value[static_cast<size_t>(j)] +
                                p.p_default * x) +
                    coupon_base * survival;
                next[static_cast<size_t>(j)] = apply_provisions(cont, s, here);
            }
            std::swap(value, next);
        }

        out.value = value[0];
        out.delta = (delta_up - delta_down) / (spot * (geometry.up - geometry.down));
        return out;
    }
};

} // namespace

PriceResult price(const ConvertibleTerms& terms, const MarketState& market,
                  const DefaultSpec& def, const PricingConfig& config) {
    check_model_consistency(def, config);
    if (!(config.spot > 0.0))
        throw std::invalid_argument("spot must be positive");

    const Engine engine{terms, market, def, config};

    PriceResult result;
    std::optional<double> floor;
    if (config.model == ModelKind::Synthesis) {
        floor = stock_floor(def.hazard, market, def.eta, engine.schedule.dt);
        if (config.spot < *floor)
            throw FloorUnreachable(config.spot, *floor);
    }
    result = engine.run(config.spot);
    result.floor = floor;
    return result;
}

std::vector<ProfilePoint> price_profile(const ConvertibleTerms& terms, const MarketState& market,
                                        const DefaultSpec& def, const PricingConfig& config,
                                        std::span<const double> spots) {
    check_model_consistency(def, config);
    for (const double s : spots) {
        if (!(s >= 0.0))
            throw std::invalid_argument("profile spots must be non-negative");
        if (s == 0.0 && config.model != ModelKind::Synthesis)
            throw std::invalid_argument("spot must be positive");
    }

    const Engine engine{terms, market, def, config};

    std::optional<double> floor;
    PriceResult anchor;
    if (config.model == ModelKind::Synthesis) {
        floor = stock_floor(def.hazard, market, def.eta, engine.schedule.dt);
        const bool below = std::any_of(spots.begin(), spots.end(),
                                       [&](double s) { return s < *floor; });
        if (below) {
            anchor = engine.run(*floor);
            anchor.floor = floor;
        }
    }

    std::vector<ProfilePoint> out(spots.size());
    const auto worker = [&](size_t begin, size_t end) {
        for (size_t k = begin; k < end; ++k) {
            const double s = spots[k];
            if (floor && s < *floor) {
                // Chord from (0, recovered face) to the floor value; below the
                // floor the model itself has nothing finer to say.
                const double recovered = terms.recovery * terms.face;
                const double slope = (anchor.value - recovered) / *floor;
                PriceResult r = anchor;
                r.value = recovered + slope * s;
                r.delta = slope;
                r.floor_extended = true;
                out[k] = {s, r};
            } else {
                PriceResult r = engine.run(s);
                r.floor = floor;
                out[k] = {s, r};
            }
        }
    };

    const size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t chunks = std::min(spots.size(), hw);
    if (chunks <= 1) {
        worker(0, spots.size());
    } else {
        std::vector<std::future<void>> futures;
        futures.reserve(chunks);
        const size_t per = (spots.size() + chunks - 1) / chunks;
        for (size_t c = 0; c < chunks; ++c) {
            const size_t begin = c * per;
            const size_t end = std::min(spots.size(), begin + per);
            if (begin >= end)
                break;
            futures.push_back(
                std::async(std::launch::async, [&worker, begin, end] { worker(begin, end); }));
        }
        for (auto& f : futures)
            f.get();
    }
    return out;
}

} // namespace cbtree
