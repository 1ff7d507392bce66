#pragma once

#include <stdexcept>
#include <string>

namespace cbtree {

/// Base for model-level failures. `token()` is the stable machine-readable
/// code surfaced by the command-line tool on exit.
class PricingError : public std::runtime_error {
public:
    PricingError(std::string token, const std::string& message)
        : std::runtime_error(message), token_(std::move(token)) {}

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

/// The requested intensity-time product exceeds what the step geometry admits:
/// the down-branch probability would go negative. Refine the time step (or,
/// equivalently, lower the intensity) until lambda*dt fits under the bound.
class StepTooCoarse : public PricingError {
public:
    StepTooCoarse(double lambda_dt, double max_lambda_dt);

    double lambda_dt() const noexcept { return lambda_dt_; }
    /// Largest admissible lambda*dt for the offending step geometry.
    double max_lambda_dt() const noexcept { return max_lambda_dt_; }

private:
    double lambda_dt_;
    double max_lambda_dt_;
};

/// Reduced-volatility variant with sigma^2 <= lambda: the effective diffusion
/// vanishes and the up factor is not defined.
class DegenerateVolatility : public PricingError {
public:
    DegenerateVolatility(double sigma, double lambda);
};

/// Spot at or below zero where the intensity model requires a positive one.
class NonpositiveSpot : public PricingError {
public:
    explicit NonpositiveSpot(double spot);
};

/// Scalar valuation requested below the stock floor of a spot-linked
/// intensity model; only the profile variant extends below the floor.
class FloorUnreachable : public PricingError {
public:
    FloorUnreachable(double spot, double floor);

    double spot() const noexcept { return spot_; }
    double floor() const noexcept { return floor_; }

private:
    double spot_;
    double floor_;
};

/// Rollback asked to use branch probabilities outside [0,1].
class InvalidStep : public PricingError {
public:
    explicit InvalidStep(const std::string& message);
};

/// Finite-difference result failed its self-consistency check against a
/// half-resolution solve.
class GridTooCoarse : public PricingError {
public:
    GridTooCoarse(double difference, double tolerance);
};

/// Term-sheet text that does not parse; carries the 1-based line number and
/// the offending key or field.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, std::string field, const std::string& message);

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

} // namespace cbtree
