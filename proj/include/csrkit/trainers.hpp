#pragma once

#include "csrkit/errors.hpp"
#include "csrkit/model.hpp"
#include "csrkit/train_config.hpp"
#include "csrkit/types.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace csrkit {

/// Thrown when a solver hits max_iterations. Carries the model built from the
/// last iterate so callers can inspect how far it got.
class TrainingDidNotConverge : public ConvergenceError {
public:
    TrainingDidNotConverge(const std::string& what, double residual, ScalableModel partial)
        : ConvergenceError(what, residual), partial_(std::make_shared<const ScalableModel>(std::move(partial))) {}

    const ScalableModel& partial_model() const noexcept { return *partial_; }

private:
    std::shared_ptr<const ScalableModel> partial_;
};

/**
 * Soft-margin kernel SVM.
 *
 * Solves  max sum(a) - 1/2 sum_ij a_i a_j y_i y_j k(x_i, x_j)
 *         s.t. 0 <= a_i <= C, sum a_i y_i = 0
 * with SMO (two-variable updates, maximal violating pair chosen with
 * second-order information) until the KKT gap drops to `config.tolerance`.
 * The bias is averaged over free support vectors.
 *
 * The result is oriented so that class +1 gives f(x, 0) < 0: the stored
 * dual weights are -a_i y_i and the stored bias is -b.
 */
ScalableModel train_svm(const Dataset& data, const TrainConfig& config);

/**
 * Support vector data description around class +1.
 *
 * With negatives present this is the two-class formulation (negatives pushed
 * outside the sphere); otherwise the one-class minimal enclosing ball with
 * slack. The dual
 *     max sum_i b_i k(x_i, x_i) - sum_ij b_i b_j k(x_i, x_j),
 *     b_i = y_i a_i, 0 <= a_i <= C, sum_i b_i = 1
 * is solved by SMO in the variables a_i until the KKT gap drops to
 * `config.tolerance`. The stored dual weights are the b_i (negative for
 * class -1 support points). R^2 comes from the support points strictly
 * inside the box.
 */
ScalableModel train_svdd(const Dataset& data, const TrainConfig& config);

/// Loss trace of accepted LR steps, recorded when requested.
struct LrTrace {
    std::vector<double> objective;
};

/**
 * Kernel logistic regression in dual form.
 *
 * Minimises J(a, b) = sum_i log(1 + exp(-y_i f_i)) + 1/(2C) a^T K a with
 * f = K a - b, using Armijo backtracking on either damped Newton steps or
 * plain gradient steps (`config.lr_solver`), until the gradient norm of J is
 * at most `config.tolerance`. Oriented like train_svm.
 */
ScalableModel train_lr(const Dataset& data, const TrainConfig& config, LrTrace* trace = nullptr);

/// Dispatch on `config.kind`.
ScalableModel train(const Dataset& data, const TrainConfig& config);

/// Maximal KKT violation m(a) - M(a) of an SVM trained by train_svm on `data`.
double kkt_violation(const ScalableModel& model, const Dataset& data, const TrainConfig& config);

/// Value and gradient of the LR training objective.
struct LrObjective {
    double value = 0.0;
    Eigen::VectorXd grad_coefficients;
    double grad_bias = 0.0;
};

/// J(a, b) above on a precomputed Gram matrix; `labels` holds +-1.
LrObjective lr_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const Eigen::VectorXd& coefficients,
                         double bias, double C);

/// SVM dual objective sum(a) - 1/2 a^T Q a, Q_ij = y_i y_j K_ij.
double svm_dual_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const Eigen::VectorXd& alpha);

/// SVDD dual objective sum_i b_i K_ii - b^T K b.
double svdd_dual_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& beta);

}  // namespace csrkit
