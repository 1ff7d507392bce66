#include "cbtree/errors.hpp"

#include <sstream>

namespace cbtree {

namespace {

std::string fmt_step_too_coarse(double lambda_dt, double max_lambda_dt) {
    std::ostringstream os;
    os << "step too coarse: lambda*dt = " << lambda_dt
       << " exceeds the admissible bound " << max_lambda_dt
       << "; use a finer time step";
    return os.str();
}

} // namespace

StepTooCoarse::StepTooCoarse(double lambda_dt, double max_lambda_dt)
    : PricingError("STEP_TOO_COARSE", fmt_step_too_coarse(lambda_dt, max_lambda_dt)),
      lambda_dt_(lambda_dt),
      max_lambda_dt_(max_lambda_dt) {}

DegenerateVolatility::DegenerateVolatility(double sigma, double lambda)
    : PricingError("DEGENERATE_VOL",
                   [&] {
                       std::ostringstream os;
                       os << "reduced-volatility variant needs sigma^2 > lambda, got sigma = "
                          << sigma << ", lambda = " << lambda;
                       return os.str();
                   }()) {}

NonpositiveSpot::NonpositiveSpot(double spot)
    : PricingError("NONPOSITIVE_SPOT", [&] {
          std::ostringstream os;
          os << "spot-linked intensity needs a positive spot, got " << spot;
          return os.str();
      }()) {}

FloorUnreachable::FloorUnreachable(double spot, double floor)
    : PricingError("FLOOR_UNREACHABLE",
                   [&] {
                       std::ostringstream os;
                       os << "spot " << spot << " lies below the stock floor " << floor
                          << "; scalar valuation is undefined there (the profile variant extends "
                             "linearly below the floor)";
                       return os.str();
                   }()),
      spot_(spot),
      floor_(floor) {}

InvalidStep::InvalidStep(const std::string& message)
    : PricingError("INVALID_STEP", message) {}

GridTooCoarse::GridTooCoarse(double difference, double tolerance)
    : PricingError("GRID_TOO_COARSE", [&] {
          std::ostringstream os;
          os << "half-resolution check moved the value by " << difference
             << ", above the tolerance " << tolerance << "; refine the grid";
          return os.str();
      }()) {}

ParseError::ParseError(int line, std::string field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", '" + field + "': " + message),
      line_(line),
      field_(std::move(field)) {}

} // namespace cbtree
