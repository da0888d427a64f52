#pragma once

#include "csrkit/kernels.hpp"
#include "csrkit/train_config.hpp"
#include "csrkit/types.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace csrkit {

/// Provenance attached by the trainers. Hand-built models carry none.
struct TrainingMetadata {
    TrainConfig config;
    std::size_t iterations = 0;
    double residual = 0.0;                   // final KKT gap, duality gap or gradient norm
    std::vector<std::size_t> support_indices;  // rows of the training set kept as support points

    bool operator==(const TrainingMetadata&) const = default;
};

/**
 * A trained scalable classifier f(x, rho).
 *
 * The weight vector w lives in the kernel's feature space and is stored in
 * dual form: w^T phi(x) = sum_i dual_weights[i] * k(support_points[i], x).
 *
 *   SVM   f(x, rho) = w^T phi(x) - b + rho
 *   SVDD  f(x, rho) = |phi(x) - w|^2 - R^2 + rho
 *   LR    f(x, rho) = 1/2 - 1 / (1 + exp(w^T phi(x) - b + rho))
 *
 * Class +1 is predicted iff f(x, rho) < 0. Instances are immutable.
 */
class ScalableModel {
public:
    static ScalableModel svm(KernelSpec kernel, std::vector<FeatureVector> support_points,
                             std::vector<double> dual_weights, double bias);

    /// `center_norm_sq` defaults to sum_ij w_i w_j k(x_i, x_j).
    static ScalableModel svdd(KernelSpec kernel, std::vector<FeatureVector> support_points,
                              std::vector<double> dual_weights, double radius_sq,
                              std::optional<double> center_norm_sq = std::nullopt);

    static ScalableModel lr(KernelSpec kernel, std::vector<FeatureVector> support_points,
                            std::vector<double> dual_weights, double bias);

    ClassifierKind kind() const noexcept { return kind_; }
    const KernelSpec& kernel() const noexcept { return kernel_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t support_size() const noexcept { return dual_weights_.size(); }
    std::span<const double> support_point(std::size_t i) const;
    std::vector<FeatureVector> support_points() const;
    const std::vector<double>& dual_weights() const noexcept { return dual_weights_; }

    /// SVM/LR offset b; zero for SVDD.
    double bias() const noexcept { return bias_; }
    /// SVDD only; zero otherwise.
    double radius_sq() const noexcept { return radius_sq_; }
    double center_norm_sq() const noexcept { return center_norm_sq_; }

    const std::optional<TrainingMetadata>& metadata() const noexcept { return metadata_; }
    ScalableModel with_metadata(TrainingMetadata metadata) const;

    /// w^T phi(x) for SVM/LR, |phi(x) - w|^2 for SVDD.
    double feature_term(std::span<const double> x) const;

private:
    ScalableModel() = default;
    void set_support(std::vector<FeatureVector> points, std::vector<double> weights);

    ClassifierKind kind_ = ClassifierKind::Svm;
    KernelSpec kernel_;
    std::size_t dimension_ = 0;
    std::vector<double> support_flat_;  // row-major, support_size x dimension
    std::vector<double> dual_weights_;
    double bias_ = 0.0;
    double radius_sq_ = 0.0;
    double center_norm_sq_ = 0.0;
    std::optional<TrainingMetadata> metadata_;
};

/// Classifier predictor f(x, rho). Continuous and strictly increasing in rho.
double predictor(const ScalableModel& model, std::span<const double> x, double rho);

/// +1 iff predictor < 0; a zero predictor value goes to -1.
Label classify(const ScalableModel& model, std::span<const double> x, double rho);

/// Unique root of f(x, .) = 0, in closed form for the three model kinds.
double rho_bar(const ScalableModel& model, std::span<const double> x);

/// x in S(rho) = { x : f(x, rho) < 0 }.
bool in_level_set(const ScalableModel& model, std::span<const double> x, double rho);

/// rho_bar for many points at once.
std::vector<double> rho_bar_batch(const ScalableModel& model, const std::vector<FeatureVector>& points);

/// Root of a continuous, strictly increasing function of rho with opposite
/// signs at -inf and +inf: bracket expansion from [-1, 1], then bisection
/// until the bracket is narrower than `width`. Used for predictors without a
/// closed-form root.
double find_scale_root(const std::function<double(double)>& f, double width = 1e-12);

}  // namespace csrkit
