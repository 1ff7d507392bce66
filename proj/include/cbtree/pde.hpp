#pragma once

#include <vector>

#include "cbtree/hazard.hpp"
#include "cbtree/instrument.hpp"
#include "cbtree/market.hpp"
#include "cbtree/pricer.hpp"

namespace cbtree {

enum class FdScheme { Implicit, CrankNicolson };

/// Finite-difference discretisation: uniform spots [0, s_max] with n_space
/// intervals, n_time backward steps. s_max = 0 picks a default far enough out
/// that the boundary rows cannot be felt at the spots of interest.
struct FdGrid {
    double s_max = 0.0;
    int n_space = 400;
    int n_time = 400;
    FdScheme scheme = FdScheme::Implicit;
};

struct FdSolution {
    std::vector<double> spots;
    std::vector<double> values;  // at the valuation date

    /// Linear interpolation; clamps to the grid ends.
    double value_at(double spot) const;
    /// Central difference of the interpolant, one space step wide.
    double delta_at(double spot) const;
};

/// Solves the continuous-time limit of the defaultable-stock tree: a
/// Black-Scholes operator with default-adjusted drift (r + lambda*eta)*S,
/// kill rate r + lambda, and the default claim max(recovery*face,
/// ratio*(1-eta)*S) as a source, with the holder/issuer constraints projected
/// after every step. The Hull variant solves its own limit: total default and
/// diffusion sigma^2 - lambda. Serves as the independent cross-check for the
/// tree, converging to the same value from a different discretisation family.
FdSolution solve_afv(const ConvertibleTerms& terms, const MarketState& market,
                     const DefaultSpec& def, ModelKind model, Date valuation,
                     const FdGrid& grid);

/// solve_afv plus a self-check: re-solves at half resolution and throws
/// GridTooCoarse when the value at `spot` moves by more than `tol`.
FdSolution solve_afv_checked(const ConvertibleTerms& terms, const MarketState& market,
                             const DefaultSpec& def, ModelKind model, Date valuation,
                             const FdGrid& grid, double spot, double tol);

} // namespace cbtree
