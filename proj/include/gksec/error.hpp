#pragma once

#include <stdexcept>
#include <string>

namespace gksec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented range (bad L, k <= 0, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A function was evaluated outside its mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested case is deliberately not supported (e.g. k_d == m_d asymptotics).
class Unsupported : public Error {
public:
    using Error::Error;
};

/// Computed coefficients violate an invariant that holds analytically.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// A numerical evaluation produced a non-finite or out-of-range result.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of refinements before meeting its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_bound)
        : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

}  // namespace gksec
