#pragma once

#include <stdexcept>

namespace cbtree {

/// Flat continuously-compounded risk-free rate and lognormal volatility.
struct MarketState {
    double rate;
    double sigma;

    MarketState(double rate_, double sigma_) : rate(rate_), sigma(sigma_) {
        if (!(sigma > 0.0))
            throw std::invalid_argument("sigma must be positive");
        if (!(rate >= 0.0))
            throw std::invalid_argument("rate must be non-negative");
    }

    friend bool operator==(const MarketState&, const MarketState&) = default;
};

} // namespace cbtree
