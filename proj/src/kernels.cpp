#include "csrkit/kernels.hpp"

#include "csrkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace csrkit {
namespace {

double dot(std::span<const double> u, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
    return acc;
}

double squared_distance(std::span<const double> u, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double diff = u[i] - v[i];
        acc += diff * diff;
    }
    return acc;
}

// Repeated multiplication keeps the kernel exactly symmetric and avoids pow()
// for the small integer degrees used in practice.
double integer_power(double base, int exponent) {
    double result = 1.0;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate(const KernelSpec& kernel) {
    std::visit(overloaded{
                   [](const LinearKernel&) {},
                   [](const PolynomialKernel& k) {
                       if (k.degree < 1) throw InputError("polynomial kernel degree must be >= 1");
                       if (!(k.scale > 0.0) || !std::isfinite(k.scale))
                           throw InputError("polynomial kernel scale must be > 0");
                       if (!(k.offset >= 0.0) || !std::isfinite(k.offset))
                           throw InputError("polynomial kernel offset must be >= 0");
                   },
                   [](const GaussianKernel& k) {
                       if (!(k.gamma > 0.0) || !std::isfinite(k.gamma))
                           throw InputError("gaussian kernel gamma must be > 0");
                   },
               },
               kernel);
}

std::string kernel_name(const KernelSpec& kernel) {
    return std::visit(overloaded{
                          [](const LinearKernel&) { return std::string("linear"); },
                          [](const PolynomialKernel&) { return std::string("polynomial"); },
                          [](const GaussianKernel&) { return std::string("gaussian"); },
                      },
                      kernel);
}

double kernel_eval(const KernelSpec& kernel, std::span<const double> u, std::span<const double> v) {
    require_dimension(v, u.size());
    return std::visit(overloaded{
                          [&](const LinearKernel&) { return dot(u, v); },
                          [&](const PolynomialKernel& k) {
                              return integer_power(k.scale * dot(u, v) + k.offset, k.degree);
                          },
                          [&](const GaussianKernel& k) { return std::exp(-k.gamma * squared_distance(u, v)); },
                      },
                      kernel);
}

Eigen::MatrixXd gram_matrix(const KernelSpec& kernel, const std::vector<FeatureVector>& points) {
    if (points.empty()) throw InputError("gram_matrix: empty point list");
    const std::size_t dim = points.front().size();
    for (const auto& p : points) require_dimension(p, dim);

    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double value = kernel_eval(kernel, points[i], points[j]);
            gram(i, j) = value;
            gram(j, i) = value;
        }
    }
    return gram;
}

double default_gamma(std::size_t dimension) {
    if (dimension == 0) throw InputError("default_gamma: dimension must be >= 1");
    return 1.0 / static_cast<double>(dimension);
}

double median_heuristic_gamma(const std::vector<FeatureVector>& points, std::size_t max_points) {
    const std::size_t n = std::min(points.size(), max_points);
    if (n < 2) throw InputError("median heuristic needs at least two points");
    std::vector<double> distances;
    distances.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) distances.push_back(squared_distance(points[i], points[j]));
    }
    auto mid = distances.begin() + static_cast<std::ptrdiff_t>(distances.size() / 2);
    std::nth_element(distances.begin(), mid, distances.end());
    if (!(*mid > 0.0)) throw InputError("median heuristic: median pairwise distance is zero");
    return 1.0 / *mid;
}

}  // namespace csrkit
