#pragma once

#include "csrkit/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace csrkit {

enum class ClassifierKind { Svm, Svdd, Lr };

std::string to_string(ClassifierKind kind);
/// Accepts "svm", "svdd", "lr"; throws InputError otherwise.
ClassifierKind classifier_kind_from_string(const std::string& name);

/// How train_lr takes its steps. Both use the same Armijo backtracking.
enum class LrSolver {
    Newton,    ///< damped Newton on a pivoted-Cholesky reparametrisation (default)
    Gradient,  ///< plain gradient descent on the dual coefficients
};

std::string to_string(LrSolver solver);
LrSolver lr_solver_from_string(const std::string& name);

/// Hyperparameters of one training call.
struct TrainConfig {
    ClassifierKind kind = ClassifierKind::Svm;
    KernelSpec kernel = LinearKernel{};
    double C = 1.0;
    double tolerance = 1e-6;
    std::size_t max_iterations = 100000;
    double learning_rate = 0.1;  // initial step of the gradient solver
    LrSolver lr_solver = LrSolver::Newton;
    std::uint64_t seed = 0;

    bool operator==(const TrainConfig&) const = default;
};

/// Throws InputError for C <= 0, tolerance <= 0, max_iterations == 0,
/// learning_rate <= 0 or an invalid kernel.
void validate(const TrainConfig& config);

}  // namespace csrkit
