#include "csrkit/conformal.hpp"

#include "csrkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace csrkit {

double score(const ScalableModel& model, std::span<const double> x, Label y_hat) {
    return score_from_rho_bar(rho_bar(model, x), y_hat);
}

CalibrationProfile::CalibrationProfile(std::vector<double> scores) : sorted_(std::move(scores)) {
    if (sorted_.empty()) throw InputError("calibration profile needs at least one score");
    for (double s : sorted_) {
        if (!std::isfinite(s)) throw InputError("calibration score is not finite");
    }
    std::sort(sorted_.begin(), sorted_.end());
}

CalibrationProfile calibrate(const ScalableModel& model, const Dataset& calibration) {
    if (calibration.empty()) throw InputError("calibration set is empty");
    std::vector<double> scores;
    scores.reserve(calibration.size());
    for (const auto& sample : calibration) scores.push_back(score(model, sample.x, sample.y));
    return CalibrationProfile(std::move(scores));
}

void validate_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InputError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
}

std::size_t quantile_rank(std::size_t n_calibration, double epsilon) {
    validate_epsilon(epsilon);
    const double k = std::ceil((static_cast<double>(n_calibration) + 1.0) * (1.0 - epsilon));
    return static_cast<std::size_t>(std::max(k, 1.0));
}

QuantileValue quantile(const CalibrationProfile& profile, double epsilon) {
    const std::size_t k = quantile_rank(profile.size(), epsilon);
    if (k > profile.size()) return QuantileValue{};
    return QuantileValue{profile.sorted_scores()[k - 1]};
}

namespace region {

ConformalSet conformal_set(double rho_bar_value, QuantileValue s_eps) noexcept {
    if (s_eps.is_infinite()) return ConformalSet{true, true};
    return ConformalSet{score_from_rho_bar(rho_bar_value, Label::Safe) <= s_eps.value,
                        score_from_rho_bar(rho_bar_value, Label::Unsafe) <= s_eps.value};
}

double rho_eps(QuantileValue s_eps) noexcept { return std::abs(s_eps.value); }

bool in_sigma(double rho_bar_value, QuantileValue s_eps) noexcept {
    if (s_eps.is_infinite()) return false;
    return score_from_rho_bar(rho_bar_value, Label::Safe) <= s_eps.value &&
           score_from_rho_bar(rho_bar_value, Label::Unsafe) > s_eps.value;
}

bool in_sigma_strict(double rho_bar_value, QuantileValue s_eps) noexcept {
    if (s_eps.is_infinite()) return false;
    return score_from_rho_bar(rho_bar_value, Label::Safe) < s_eps.value &&
           score_from_rho_bar(rho_bar_value, Label::Unsafe) > s_eps.value;
}

bool in_safe_region(double rho_bar_value, QuantileValue s_eps) noexcept {
    if (s_eps.is_infinite()) return false;
    return rho_bar_value > rho_eps(s_eps);
}

}  // namespace region

ConformalSet conformal_set(const ScalableModel& model, const CalibrationProfile& profile, double epsilon,
                           std::span<const double> x) {
    const QuantileValue s_eps = quantile(profile, epsilon);
    return region::conformal_set(rho_bar(model, x), s_eps);
}

double rho_eps(const CalibrationProfile& profile, double epsilon) {
    return region::rho_eps(quantile(profile, epsilon));
}

bool in_sigma(const ScalableModel& model, const CalibrationProfile& profile, double epsilon, std::span<const double> x) {
    const QuantileValue s_eps = quantile(profile, epsilon);
    return region::in_sigma(rho_bar(model, x), s_eps);
}

bool in_safe_region(const ScalableModel& model, const CalibrationProfile& profile, double epsilon,
                    std::span<const double> x) {
    const double scaling = rho_eps(profile, epsilon);
    if (std::isinf(scaling)) return false;
    return in_level_set(model, x, scaling);
}

}  // namespace csrkit
