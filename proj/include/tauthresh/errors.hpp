#pragma once

#include <stdexcept>
#include <string>

namespace tauthresh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct NotPositiveDefiniteError : Error {
    using Error::Error;
};

struct InfeasibleModelError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Power iteration ran out of its iteration budget; carries the best value seen.
struct PowerIterationError : Error {
    double best_estimate;
    PowerIterationError(const std::string& msg, double best)
        : Error(msg), best_estimate(best) {}
};

// Alternating projections ran out of iterations; carries the last residual.
struct ProjectionError : Error {
    double residual;
    ProjectionError(const std::string& msg, double res)
        : Error(msg), residual(res) {}
};

} // namespace tauthresh
