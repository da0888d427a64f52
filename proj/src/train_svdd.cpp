#include "csrkit/trainers.hpp"

#include "smo.hpp"
#include "training_common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace csrkit {
namespace {

// Squared feature-space distance of training point i from the center.
double distance_sq(const Eigen::MatrixXd& K, const Eigen::VectorXd& k_beta, double center_norm_sq, Eigen::Index i) {
    return K(i, i) - 2.0 * k_beta[i] + center_norm_sq;
}

double radius_from_kkt(const Eigen::MatrixXd& K, const Eigen::VectorXd& alpha, const Eigen::VectorXd& k_beta,
                       const Eigen::VectorXd& labels, double C, double center_norm_sq) {
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double r_lower = 0.0;
    double r_upper = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        const double d = distance_sq(K, k_beta, center_norm_sq, i);
        if (alpha[i] > 0.0 && alpha[i] < C) {
            free_sum += d;
            ++free_count;
            continue;
        }
        const bool at_zero = alpha[i] == 0.0;
        if (labels[i] > 0) {
            // inside (a = 0) or outside with slack (a = C)
            if (at_zero) r_lower = std::max(r_lower, d);
            else r_upper = std::min(r_upper, d);
        } else {
            if (at_zero) r_upper = std::min(r_upper, d);
            else r_lower = std::max(r_lower, d);
        }
    }
    if (free_count > 0) return free_sum / static_cast<double>(free_count);
    if (!std::isfinite(r_upper)) return r_lower;
    return 0.5 * (r_lower + r_upper);
}

}  // namespace

double svdd_dual_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& beta) {
    return beta.dot(gram.diagonal()) - beta.dot(gram * beta);
}

ScalableModel train_svdd(const Dataset& data, const TrainConfig& config) {
    validate(config);
    const auto prepared = detail::prepare(data);
    if (prepared.positives == 0) throw TrainingError("train_svdd needs at least one +1 sample");
    if (config.C * static_cast<double>(prepared.positives) < 1.0) {
        throw TrainingError("train_svdd: C * (number of +1 samples) must be >= 1 for a feasible dual");
    }

    const auto n = static_cast<Eigen::Index>(data.size());
    const Eigen::VectorXd& y = prepared.labels;
    const Eigen::MatrixXd K = gram_matrix(config.kernel, prepared.points);
    // In a = |b| the dual is min a^T Q a - sum a_i y_i K_ii with Q_ij = y_i y_j K_ij
    // and y^T a = 1, the SMO form with kernel 2K.
    Eigen::VectorXd p(n);
    Eigen::VectorXd start(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        p[i] = -y[i] * K(i, i);
        start[i] = y[i] > 0 ? 1.0 / static_cast<double>(prepared.positives) : 0.0;
    }
    const detail::SmoResult s =
        detail::solve_smo(2.0 * K, y, p, start, config.C, config.tolerance, config.max_iterations);
    const Eigen::VectorXd beta = y.cwiseProduct(s.alpha);
    const Eigen::VectorXd k_beta = K * beta;
    const double center_norm_sq = beta.dot(k_beta);
    const double radius_sq = std::max(0.0, radius_from_kkt(K, s.alpha, k_beta, y, config.C, center_norm_sq));

    std::vector<FeatureVector> support;
    std::vector<double> weights;
    TrainingMetadata meta;
    meta.config = config;
    meta.iterations = s.iterations;
    meta.residual = s.gap;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (s.alpha[i] > 0.0) {
            support.push_back(prepared.points[static_cast<std::size_t>(i)]);
            weights.push_back(beta[i]);
            meta.support_indices.push_back(static_cast<std::size_t>(i));
        }
    }
    ScalableModel model =
        ScalableModel::svdd(config.kernel, std::move(support), std::move(weights), radius_sq, center_norm_sq)
            .with_metadata(meta);
    if (!s.converged) {
        std::ostringstream msg;
        msg << "SVDD solver did not converge in " << config.max_iterations << " iterations (KKT violation " << s.gap
            << ")";
        throw TrainingDidNotConverge(msg.str(), s.gap, std::move(model));
    }
    return model;
}

}  // namespace csrkit
