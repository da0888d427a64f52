#pragma once

#include "csrkit/types.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace csrkit {

/// k(u, v) = <u, v>
struct LinearKernel {
    bool operator==(const LinearKernel&) const = default;
};

/// k(u, v) = (scale * <u, v> + offset)^degree
struct PolynomialKernel {
    int degree = 3;
    double scale = 1.0;
    double offset = 1.0;

    bool operator==(const PolynomialKernel&) const = default;
};

/// k(u, v) = exp(-gamma * |u - v|^2)
struct GaussianKernel {
    double gamma = 1.0;

    bool operator==(const GaussianKernel&) const = default;
};

using KernelSpec = std::variant<LinearKernel, PolynomialKernel, GaussianKernel>;

/// Throws InputError on degree < 1, scale <= 0, offset < 0 or gamma <= 0.
void validate(const KernelSpec& kernel);

/// "linear", "polynomial" or "gaussian".
std::string kernel_name(const KernelSpec& kernel);

double kernel_eval(const KernelSpec& kernel, std::span<const double> u, std::span<const double> v);

/// Symmetric Gram matrix over `points`; all points must share one dimension.
Eigen::MatrixXd gram_matrix(const KernelSpec& kernel, const std::vector<FeatureVector>& points);

/// Gaussian width 1/d, the library default when no gamma is given.
double default_gamma(std::size_t dimension);

/// Median heuristic: 1 / median of pairwise squared distances. Uses at most
/// `max_points` points (the first ones, so the result is deterministic).
double median_heuristic_gamma(const std::vector<FeatureVector>& points, std::size_t max_points = 1000);

}  // namespace csrkit
