#include "csrkit/trainers.hpp"

#include "smo.hpp"
#include "training_common.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace csrkit {
namespace {

// Offset of the standard-orientation decision sum_j a_j y_j K(x_j, x) - b.
double svm_offset(const Eigen::VectorXd& y, const Eigen::VectorXd& alpha, const Eigen::VectorXd& grad, double C) {
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double yg = y[i] * grad[i];
        if (alpha[i] >= C) {
            if (y[i] < 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else if (alpha[i] <= 0.0) {
            if (y[i] > 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    if (free_count > 0) return free_sum / static_cast<double>(free_count);
    return 0.5 * (upper + lower);
}

ScalableModel build_model(const detail::PreparedData& prepared, const detail::SmoResult& s, const TrainConfig& config) {
    std::vector<FeatureVector> support;
    std::vector<double> weights;
    TrainingMetadata meta;
    meta.config = config;
    meta.iterations = s.iterations;
    meta.residual = s.gap;
    for (Eigen::Index i = 0; i < s.alpha.size(); ++i) {
        if (s.alpha[i] > 0.0) {
            support.push_back(prepared.points[static_cast<std::size_t>(i)]);
            weights.push_back(-(s.alpha[i] * prepared.labels[i]));
            meta.support_indices.push_back(static_cast<std::size_t>(i));
        }
    }
    const double offset = svm_offset(prepared.labels, s.alpha, s.grad, config.C);
    if (support.empty()) {
        // All multipliers zero only happens before the first update; keep one
        // zero-weight point so the model stays well formed.
        support.push_back(prepared.points.front());
        weights.push_back(0.0);
        meta.support_indices.push_back(0);
    }
    return ScalableModel::svm(config.kernel, std::move(support), std::move(weights), -offset).with_metadata(meta);
}

}  // namespace

double svm_dual_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const Eigen::VectorXd& alpha) {
    const Eigen::VectorXd ya = labels.cwiseProduct(alpha);
    return alpha.sum() - 0.5 * ya.dot(gram * ya);
}

ScalableModel train_svm(const Dataset& data, const TrainConfig& config) {
    validate(config);
    const auto prepared = detail::prepare(data);
    if (data.size() < 2) throw InputError("train_svm needs at least two samples");
    if (prepared.positives == 0 || prepared.negatives == 0) {
        throw TrainingError("train_svm needs samples of both classes");
    }
    const Eigen::MatrixXd K = gram_matrix(config.kernel, prepared.points);
    const auto n = static_cast<Eigen::Index>(data.size());
    const detail::SmoResult state =
        detail::solve_smo(K, prepared.labels, Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Zero(n), config.C,
                          config.tolerance, config.max_iterations);
    ScalableModel model = build_model(prepared, state, config);
    if (!state.converged) {
        std::ostringstream msg;
        msg << "SVM solver did not converge in " << config.max_iterations << " iterations (KKT violation "
            << state.gap << ")";
        throw TrainingDidNotConverge(msg.str(), state.gap, std::move(model));
    }
    return model;
}

double kkt_violation(const ScalableModel& model, const Dataset& data, const TrainConfig& config) {
    if (model.kind() != ClassifierKind::Svm) throw InputError("kkt_violation expects an SVM model");
    if (!model.metadata()) throw InputError("kkt_violation needs a model produced by train_svm");
    const auto& indices = model.metadata()->support_indices;
    const auto prepared = detail::prepare(data);
    const auto n = static_cast<Eigen::Index>(data.size());

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd signed_alpha = Eigen::VectorXd::Zero(n);  // a_j y_j
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const auto idx = static_cast<Eigen::Index>(indices[k]);
        if (idx >= n) throw InputError("kkt_violation: support index outside the data set");
        signed_alpha[idx] = -model.dual_weights()[k];
        alpha[idx] = signed_alpha[idx] * prepared.labels[idx];
    }
    Eigen::VectorXd grad(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const auto j = static_cast<Eigen::Index>(indices[k]);
            if (alpha[j] > 0.0) acc += signed_alpha[j] * kernel_eval(model.kernel(), data[indices[k]].x, data[i].x);
        }
        grad[i] = prepared.labels[i] * acc - 1.0;
    }
    return detail::smo_violation(prepared.labels, alpha, grad, config.C);
}

ScalableModel train(const Dataset& data, const TrainConfig& config) {
    switch (config.kind) {
        case ClassifierKind::Svm: return train_svm(data, config);
        case ClassifierKind::Svdd: return train_svdd(data, config);
        case ClassifierKind::Lr: return train_lr(data, config);
    }
    throw InputError("unknown classifier kind");
}

}  // namespace csrkit
