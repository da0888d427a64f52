#include "csrkit/model.hpp"

#include "csrkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace csrkit {
namespace {

constexpr double kSigmoidExponentLimit = 500.0;
constexpr double kSvddWeightSumTolerance = 1e-8;

}  // namespace

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Svm: return "svm";
        case ClassifierKind::Svdd: return "svdd";
        case ClassifierKind::Lr: return "lr";
    }
    return "unknown";
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
    if (name == "svm") return ClassifierKind::Svm;
    if (name == "svdd") return ClassifierKind::Svdd;
    if (name == "lr") return ClassifierKind::Lr;
    throw InputError("unknown classifier kind '" + name + "' (expected svm, svdd or lr)");
}

std::string to_string(LrSolver solver) {
    return solver == LrSolver::Newton ? "newton" : "gradient";
}

LrSolver lr_solver_from_string(const std::string& name) {
    if (name == "newton") return LrSolver::Newton;
    if (name == "gradient") return LrSolver::Gradient;
    throw InputError("unknown LR solver '" + name + "' (expected newton or gradient)");
}

void validate(const TrainConfig& config) {
    validate(config.kernel);
    if (!(config.C > 0.0) || !std::isfinite(config.C)) throw InputError("C must be > 0");
    if (!(config.tolerance > 0.0)) throw InputError("tolerance must be > 0");
    if (config.max_iterations == 0) throw InputError("max_iterations must be >= 1");
    if (!(config.learning_rate > 0.0)) throw InputError("learning_rate must be > 0");
}

void ScalableModel::set_support(std::vector<FeatureVector> points, std::vector<double> weights) {
    if (points.empty()) throw InputError("model needs at least one support point");
    if (points.size() != weights.size()) {
        throw InputError("support_points and dual_weights differ in length (" + std::to_string(points.size()) +
                         " vs " + std::to_string(weights.size()) + ")");
    }
    dimension_ = points.front().size();
    support_flat_.clear();
    support_flat_.reserve(points.size() * dimension_);
    for (const auto& p : points) {
        require_dimension(p, dimension_);
        validate_features(p, "support point");
        support_flat_.insert(support_flat_.end(), p.begin(), p.end());
    }
    for (double w : weights) {
        if (!std::isfinite(w)) throw InputError("dual weight is not finite");
    }
    dual_weights_ = std::move(weights);
}

ScalableModel ScalableModel::svm(KernelSpec kernel, std::vector<FeatureVector> support_points,
                                 std::vector<double> dual_weights, double bias) {
    validate(kernel);
    if (!std::isfinite(bias)) throw InputError("bias is not finite");
    ScalableModel m;
    m.kind_ = ClassifierKind::Svm;
    m.kernel_ = kernel;
    m.set_support(std::move(support_points), std::move(dual_weights));
    m.bias_ = bias;
    return m;
}

ScalableModel ScalableModel::lr(KernelSpec kernel, std::vector<FeatureVector> support_points,
                                std::vector<double> dual_weights, double bias) {
    ScalableModel m = svm(std::move(kernel), std::move(support_points), std::move(dual_weights), bias);
    m.kind_ = ClassifierKind::Lr;
    return m;
}

ScalableModel ScalableModel::svdd(KernelSpec kernel, std::vector<FeatureVector> support_points,
                                  std::vector<double> dual_weights, double radius_sq,
                                  std::optional<double> center_norm_sq) {
    validate(kernel);
    if (!(radius_sq >= 0.0) || !std::isfinite(radius_sq)) throw InputError("SVDD radius_sq must be >= 0");
    ScalableModel m;
    m.kind_ = ClassifierKind::Svdd;
    m.kernel_ = kernel;
    m.set_support(std::move(support_points), std::move(dual_weights));

    double weight_sum = 0.0;
    for (double w : m.dual_weights_) weight_sum += w;
    if (std::abs(weight_sum - 1.0) > kSvddWeightSumTolerance) {
        throw InputError("SVDD dual weights must sum to 1, got " + std::to_string(weight_sum));
    }
    m.radius_sq_ = radius_sq;

    if (center_norm_sq) {
        if (!std::isfinite(*center_norm_sq)) throw InputError("SVDD center_norm_sq is not finite");
        m.center_norm_sq_ = *center_norm_sq;
    } else {
        double acc = 0.0;
        for (std::size_t i = 0; i < m.support_size(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < m.support_size(); ++j) {
                row += m.dual_weights_[j] * kernel_eval(m.kernel_, m.support_point(i), m.support_point(j));
            }
            acc += m.dual_weights_[i] * row;
        }
        m.center_norm_sq_ = acc;
    }
    return m;
}

std::span<const double> ScalableModel::support_point(std::size_t i) const {
    return std::span<const double>(support_flat_).subspan(i * dimension_, dimension_);
}

std::vector<FeatureVector> ScalableModel::support_points() const {
    std::vector<FeatureVector> out;
    out.reserve(support_size());
    for (std::size_t i = 0; i < support_size(); ++i) {
        auto p = support_point(i);
        out.emplace_back(p.begin(), p.end());
    }
    return out;
}

ScalableModel ScalableModel::with_metadata(TrainingMetadata metadata) const {
    ScalableModel copy = *this;
    copy.metadata_ = std::move(metadata);
    return copy;
}

double ScalableModel::feature_term(std::span<const double> x) const {
    require_dimension(x, dimension_);
    double expansion = 0.0;
    for (std::size_t i = 0; i < support_size(); ++i) {
        expansion += dual_weights_[i] * kernel_eval(kernel_, support_point(i), x);
    }
    if (kind_ == ClassifierKind::Svdd) {
        return kernel_eval(kernel_, x, x) - 2.0 * expansion + center_norm_sq_;
    }
    return expansion;
}

double predictor(const ScalableModel& model, std::span<const double> x, double rho) {
    const double term = model.feature_term(x);
    switch (model.kind()) {
        case ClassifierKind::Svm: return term - model.bias() + rho;
        case ClassifierKind::Svdd: return term - model.radius_sq() + rho;
        case ClassifierKind::Lr: {
            const double z = std::clamp(term - model.bias() + rho, -kSigmoidExponentLimit, kSigmoidExponentLimit);
            return 0.5 - 1.0 / (1.0 + std::exp(z));
        }
    }
    return 0.0;
}

Label classify(const ScalableModel& model, std::span<const double> x, double rho) {
    return predictor(model, x, rho) < 0.0 ? Label::Safe : Label::Unsafe;
}

double rho_bar(const ScalableModel& model, std::span<const double> x) {
    const double term = model.feature_term(x);
    switch (model.kind()) {
        case ClassifierKind::Svm:
        case ClassifierKind::Lr: return model.bias() - term;
        case ClassifierKind::Svdd: return model.radius_sq() - term;
    }
    return 0.0;
}

bool in_level_set(const ScalableModel& model, std::span<const double> x, double rho) {
    return predictor(model, x, rho) < 0.0;
}

std::vector<double> rho_bar_batch(const ScalableModel& model, const std::vector<FeatureVector>& points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(rho_bar(model, p));
    return out;
}

double find_scale_root(const std::function<double(double)>& f, double width) {
    double lo = -1.0;
    double hi = 1.0;
    int expansions = 0;
    while (f(lo) >= 0.0) {
        lo *= 2.0;
        if (++expansions > 1100) throw InputError("find_scale_root: no sign change towards -inf");
    }
    expansions = 0;
    while (f(hi) <= 0.0) {
        hi *= 2.0;
        if (++expansions > 1100) throw InputError("find_scale_root: no sign change towards +inf");
    }
    while (hi - lo > width) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;  // bracket at double resolution
        const double value = f(mid);
        if (value == 0.0) return mid;
        (value < 0.0 ? lo : hi) = mid;
    }
    return lo + 0.5 * (hi - lo);
}

}  // namespace csrkit
