#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace csrkit::detail {

/// min 1/2 a^T Q a + p^T a  s.t.  0 <= a_i <= C,  y^T a = y^T a0,
/// with Q_ij = y_i y_j K_ij. Pairwise updates on the maximal violating pair,
/// second-order choice of the partner.
struct SmoResult {
    Eigen::VectorXd alpha;
    Eigen::VectorXd grad;  // Q a + p
    std::size_t iterations = 0;
    double gap = 0.0;  // m(a) - M(a)
    bool converged = false;
};

SmoResult solve_smo(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                    const Eigen::VectorXd& alpha0, double C, double tolerance, std::size_t max_iterations);

/// Q a + p summed in ascending index order over the nonzero multipliers.
Eigen::VectorXd smo_gradient(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& alpha);

double smo_violation(const Eigen::VectorXd& y, const Eigen::VectorXd& alpha, const Eigen::VectorXd& grad, double C);

}  // namespace csrkit::detail
