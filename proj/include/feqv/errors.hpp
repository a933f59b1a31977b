#pragma once

#include <stdexcept>
#include <string>

namespace feqv {

// Base type for everything this library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation requested within 1e-12 of a pole.
struct pole_error : error {
    using error::error;
};

// Argument outside a function's documented domain.
struct domain_error : error {
    using error::error;
};

// Mellin transform requested outside a term's validity strip.
struct strip_error : error {
    using error::error;
};

// Quadrature levels failed to contract, or an integrand diverges on the
// declared region.
struct convergence_error : error {
    using error::error;
};

// A coefficient table is too short for the requested evaluation; carries the
// index count that would have sufficed.
struct coefficient_error : error {
    coefficient_error(const std::string& msg, long long required_count)
        : error(msg), required(required_count) {}
    long long required;
};

// Power-series summation cannot reach the requested accuracy in double
// precision (truncation or catastrophic cancellation).
struct series_error : error {
    using error::error;
};

// A registry or character lookup found no match, or too many.
struct lookup_error : error {
    using error::error;
};

} // namespace feqv
