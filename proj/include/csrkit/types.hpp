#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace csrkit {

using FeatureVector = std::vector<double>;

/// Binary label. `Safe` (+1) is the class the safety regions target.
enum class Label : int { Unsafe = -1, Safe = 1 };

constexpr int to_int(Label y) noexcept { return static_cast<int>(y); }
constexpr double to_double(Label y) noexcept { return static_cast<double>(static_cast<int>(y)); }

/// Throws InputError unless `value` is exactly -1 or +1.
Label label_from_int(int value);

struct LabeledSample {
    FeatureVector x;
    Label y = Label::Safe;

    bool operator==(const LabeledSample&) const = default;
};

using Dataset = std::vector<LabeledSample>;

/// Throws InputError if `x` is empty or holds a NaN/infinite coordinate.
void validate_features(std::span<const double> x, std::string_view what = "feature vector");

/// Throws InputError if `x.size() != expected`.
void require_dimension(std::span<const double> x, std::size_t expected);

}  // namespace csrkit
