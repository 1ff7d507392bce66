#include "cbtree/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbtree/errors.hpp"
#include "cbtree/schedule.hpp"

namespace cbtree {

namespace {

double default_s_max(const ConvertibleTerms& terms, double spot_of_interest) {
    double anchor = std::max(terms.face, spot_of_interest);
    for (const CallWindow& c : terms.calls)
        anchor = std::max(anchor, c.price);
    for (const PutDate& p : terms.puts)
        anchor = std::max(anchor, p.price);
    if (terms.convertible()) {
        double min_ratio = terms.conversion_ratios.front().ratio;
        for (const RatioPeriod& p : terms.conversion_ratios)
            min_ratio = std::min(min_ratio, p.ratio);
        anchor = std::max(anchor, terms.face / min_ratio);
    }
    return 5.0 * anchor;
}

// Solves the tridiagonal system in place; lower/diag/upper are the three
// bands, rhs becomes the solution.
void thomas_solve(std::vector<double>& lower, std::vector<double>& diag,
                  std::vector<double>& upper, std::vector<double>& rhs) {
    const size_t n = diag.size();
    for (size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

} // namespace

double FdSolution::value_at(double spot) const {
    if (spots.empty())
        return 0.0;
    if (spot <= spots.front())
        return values.front();
    if (spot >= spots.back())
        return values.back();
    const auto it = std::upper_bound(spots.begin(), spots.end(), spot);
    const size_t hi = static_cast<size_t>(it - spots.begin());
    const size_t lo = hi - 1;
    const double w = (spot - spots[lo]) / (spots[hi] - spots[lo]);
    return values[lo] * (1.0 - w) + values[hi] * w;
}

double FdSolution::delta_at(double spot) const {
    if (spots.size() < 2)
        return 0.0;
    const double h = spots[1] - spots[0];
    return (value_at(spot + 0.5 * h) - value_at(spot - 0.5 * h)) / h;
}

FdSolution solve_afv(const ConvertibleTerms& terms, const MarketState& market,
                     const DefaultSpec& def, ModelKind model, Date valuation,
                     const FdGrid& grid) {
    switch (model) {
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
    if (grid.n_space < 3)
        throw std::invalid_argument("n_space must be at least 3");

    double sigma2 = market.sigma * market.sigma;
    if (model == ModelKind::Hull2011) {
        sigma2 -= def.hazard.lambda0();
        if (sigma2 <= 0.0)
            throw DegenerateVolatility(market.sigma, def.hazard.lambda0());
    }

    const TimeGridSchedule schedule =
        TimeGridSchedule::build(terms, valuation, grid.n_time, market.rate);
    const double s_max = grid.s_max > 0.0 ? grid.s_max : default_s_max(terms, 0.0);
    const int m_nodes = grid.n_space + 1;
    const double h = s_max / grid.n_space;
    const double dt = schedule.dt;
    const double theta = grid.scheme == FdScheme::Implicit ? 1.0 : 0.5;
    const double r = market.rate;
    const double recovered = terms.recovery * terms.face;

    FdSolution sol;
    sol.spots.resize(static_cast<size_t>(m_nodes));
    for (int i = 0; i < m_nodes; ++i)
        sol.spots[static_cast<size_t>(i)] = h * i;

    // Per-node intensity; the S = 0 row borrows the first interior node's so a
    // spot-linked intensity stays finite there.
    std::vector<double> lambda(static_cast<size_t>(m_nodes));
    for (int i = 1; i < m_nodes; ++i)
        lambda[static_cast<size_t>(i)] = hazard_at(def.hazard, sol.spots[static_cast<size_t>(i)]);
    lambda[0] = lambda[1];

    // Spatial operator L: (L V)_i = A_i V_{i-1} + B_i V_i + C_i V_{i+1}, with
    // one-sided convection wherever the central stencil would turn A negative.
    std::vector<double> big_a(static_cast<size_t>(m_nodes), 0.0);
    std::vector<double> big_b(static_cast<size_t>(m_nodes), 0.0);
    std::vector<double> big_c(static_cast<size_t>(m_nodes), 0.0);
    for (int i = 1; i < grid.n_space; ++i) {
        const double s = sol.spots[static_cast<size_t>(i)];
        const double li = lambda[static_cast<size_t>(i)];
        const double diffusion = 0.5 * sigma2 * s * s / (h * h);
        const double convection = (r + li * def.eta) * s / h;
        const double kill = r + li;
        if (diffusion >= 0.5 * convection) {
            big_a[static_cast<size_t>(i)] = diffusion - 0.5 * convection;
            big_c[static_cast<size_t>(i)] = diffusion + 0.5 * convection;
            big_b[static_cast<size_t>(i)] = -2.0 * diffusion - kill;
        } else {
            big_a[static_cast<size_t>(i)] = diffusion;
            big_c[static_cast<size_t>(i)] = diffusion + convection;
            big_b[static_cast<size_t>(i)] = -2.0 * diffusion - convection - kill;
        }
    }
    // S = 0: pure decay ODE row. The far row is filled per step (it switches
    // between a conversion Dirichlet row and the same decay ODE).
    big_b[0] = -(r + lambda[0]);
    const size_t last = static_cast<size_t>(grid.n_space);
    const double lambda_far = lambda[last];

    // Terminal claim.
    std::vector<double> v(static_cast<size_t>(m_nodes));
    {
        const Provisions& at_maturity = schedule.levels[static_cast<size_t>(grid.n_time)];
        for (int i = 0; i < m_nodes; ++i) {
            double value = terms.face;
            if (at_maturity.conversion_ratio)
                value = std::max(value, *at_maturity.conversion_ratio *
                                            sol.spots[static_cast<size_t>(i)]);
            v[static_cast<size_t>(i)] = value;
        }
    }

    std::vector<double> lo(static_cast<size_t>(m_nodes));
    std::vector<double> di(static_cast<size_t>(m_nodes));
    std::vector<double> up(static_cast<size_t>(m_nodes));
    std::vector<double> rhs(static_cast<size_t>(m_nodes));

    for (int m = grid.n_time - 1; m >= 0; --m) {
        const Provisions& here = schedule.levels[static_cast<size_t>(m)];
        const Provisions& arrival = schedule.levels[static_cast<size_t>(m + 1)];
        const double coupon = schedule.coupon_base[static_cast<size_t>(m)];

        for (int i = 0; i < m_nodes; ++i) {
            const size_t k = static_cast<size_t>(i);
            const double s = sol.spots[k];
            const double li = lambda[k];
            double x = recovered;
            if (arrival.conversion_ratio)
                x = std::max(x, *arrival.conversion_ratio * (1.0 - def.eta) * s);
            const double source = li * x + coupon * std::exp(-li * dt) / dt;

            if (i == grid.n_space) {
                if (here.conversion_ratio) {
                    lo[k] = 0.0;
                    di[k] = 1.0;
                    up[k] = 0.0;
                    rhs[k] = *here.conversion_ratio * s;
                } else {
                    const double b_far = -(r + lambda_far);
                    lo[k] = 0.0;
                    di[k] = 1.0 - theta * dt * b_far;
                    up[k] = 0.0;
                    rhs[k] = v[k] * (1.0 + (1.0 - theta) * dt * b_far) + dt * source;
                }
                continue;
            }

            const double a = big_a[k];
            const double b = big_b[k];
            const double c = big_c[k];
            lo[k] = -theta * dt * a;
            di[k] = 1.0 - theta * dt * b;
            up[k] = -theta * dt * c;
            double explicit_part = v[k] * (1.0 + (1.0 - theta) * dt * b);
            if (i > 0)
                explicit_part += (1.0 - theta) * dt * (a * v[k - 1] + c * v[k + 1]);
            rhs[k] = explicit_part + dt * source;
        }

        thomas_solve(lo, di, up, rhs);

        // Constraint projection, boundary rows included.
        for (int i = 0; i < m_nodes; ++i) {
            const size_t k = static_cast<size_t>(i);
            v[k] = apply_provisions(rhs[k], sol.spots[k], here);
        }
    }

    sol.values = std::move(v);
    return sol;
}

FdSolution solve_afv_checked(const ConvertibleTerms& terms, const MarketState& market,
                             const DefaultSpec& def, ModelKind model, Date valuation,
                             const FdGrid& grid, double spot, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("tolerance must be positive");
    FdGrid fine = grid;
    if (fine.s_max <= 0.0)
        fine.s_max = default_s_max(terms, spot);
    if (!(spot >= 0.0 && spot <= fine.s_max))
        throw std::invalid_argument("spot outside the grid");
    FdGrid coarse = fine;
    coarse.n_space = std::max(2, fine.n_space / 2);
    coarse.n_time = std::max(1, fine.n_time / 2);

    FdSolution full = solve_afv(terms, market, def, model, valuation, fine);
    const FdSolution half = solve_afv(terms, market, def, model, valuation, coarse);
    const double drift = std::abs(full.value_at(spot) - half.value_at(spot));
    if (drift > tol)
        throw GridTooCoarse(drift, tol);
    return full;
}

} // namespace cbtree
