#pragma once

#include "csrkit/model.hpp"
#include "csrkit/types.hpp"

#include <limits>
#include <span>
#include <vector>

namespace csrkit {

/// Nonconformity of candidate label `y_hat` at x: -y_hat * rho_bar(x).
double score(const ScalableModel& model, std::span<const double> x, Label y_hat);

/// Same score from an already computed rho_bar.
constexpr double score_from_rho_bar(double rho_bar_value, Label y_hat) noexcept {
    return -to_double(y_hat) * rho_bar_value;
}

/// Sorted calibration scores s_1 <= ... <= s_nc.
class CalibrationProfile {
public:
    /// Sorts `scores`; throws InputError when empty or non-finite.
    explicit CalibrationProfile(std::vector<double> scores);

    std::size_t size() const noexcept { return sorted_.size(); }
    const std::vector<double>& sorted_scores() const noexcept { return sorted_; }

    bool operator==(const CalibrationProfile&) const = default;

private:
    std::vector<double> sorted_;
};

/// Scores each calibration pair with its true label.
CalibrationProfile calibrate(const ScalableModel& model, const Dataset& calibration);

/// Quantile s_eps; +inf when ceil((n_c + 1)(1 - eps)) > n_c.
struct QuantileValue {
    double value = std::numeric_limits<double>::infinity();

    bool is_infinite() const noexcept { return value == std::numeric_limits<double>::infinity(); }
    bool operator==(const QuantileValue&) const = default;
};

/// Throws InputError unless 0 < eps < 1.
void validate_epsilon(double epsilon);

/// Rank k = ceil((n_c + 1)(1 - eps)) used by quantile().
std::size_t quantile_rank(std::size_t n_calibration, double epsilon);

QuantileValue quantile(const CalibrationProfile& profile, double epsilon);

/// Conformal prediction set; the four flag combinations are {+1}, {-1},
/// {-1, +1} and the empty set.
struct ConformalSet {
    bool contains_plus = false;
    bool contains_minus = false;

    bool empty() const noexcept { return !contains_plus && !contains_minus; }
    bool is_double() const noexcept { return contains_plus && contains_minus; }
    bool is_single() const noexcept { return contains_plus != contains_minus; }
    bool contains(Label y) const noexcept { return y == Label::Safe ? contains_plus : contains_minus; }
    bool operator==(const ConformalSet&) const = default;
};

/// Membership tests phrased on rho_bar(x) and s_eps. These carry the
/// definitions; the model-level functions below only evaluate rho_bar.
namespace region {

ConformalSet conformal_set(double rho_bar_value, QuantileValue s_eps) noexcept;
/// |s_eps|; +inf stays +inf.
double rho_eps(QuantileValue s_eps) noexcept;
/// s(x,+1) <= s_eps and s(x,-1) > s_eps.
bool in_sigma(double rho_bar_value, QuantileValue s_eps) noexcept;
/// s(x,+1) < s_eps and s(x,-1) > s_eps: the strict part of the split.
bool in_sigma_strict(double rho_bar_value, QuantileValue s_eps) noexcept;
/// rho_bar(x) > |s_eps|, i.e. f(x, rho_eps) < 0.
bool in_safe_region(double rho_bar_value, QuantileValue s_eps) noexcept;

}  // namespace region

ConformalSet conformal_set(const ScalableModel& model, const CalibrationProfile& profile, double epsilon,
                           std::span<const double> x);

double rho_eps(const CalibrationProfile& profile, double epsilon);

bool in_sigma(const ScalableModel& model, const CalibrationProfile& profile, double epsilon, std::span<const double> x);

/// Evaluated through the predictor: f(x, rho_eps) < 0, false when rho_eps is +inf.
bool in_safe_region(const ScalableModel& model, const CalibrationProfile& profile, double epsilon,
                    std::span<const double> x);

}  // namespace csrkit
