#pragma once

#include <stdexcept>
#include <string>

namespace csrkit {

/// Raised when caller-supplied data or parameters violate a precondition.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a trainer cannot produce a model from otherwise valid input
/// (single-class data, infeasible box constraints, ...).
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver stopped at its iteration limit. `residual()` is the solver's own
/// optimality measure at that point (KKT gap, duality gap or gradient norm).
class ConvergenceError : public TrainingError {
public:
    ConvergenceError(const std::string& what, double residual)
        : TrainingError(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace csrkit
