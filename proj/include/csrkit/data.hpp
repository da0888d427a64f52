#pragma once

#include "csrkit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <tuple>

namespace csrkit {

/**
 * Seeded random source used by every generator.
 *
 * Bits come from std::mt19937_64, whose output sequence is fixed by the C++
 * standard. The real-valued draws are computed here rather than through
 * <random> distributions (whose algorithms vary between standard libraries),
 * so datasets are identical on every platform:
 *   uniform     (bits >> 11) * 2^-53
 *   normal      Box-Muller on two uniforms, both outputs used
 *   exponential -log(1 - u) / rate
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_bits() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform();
    double normal(double mean = 0.0, double stddev = 1.0);
    double exponential(double rate);
    double lognormal(double log_mean, double log_stddev);
    /// Uniform integer in [0, bound), bound >= 1, without modulo bias.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Two isotropic Gaussian classes in the plane.
struct GaussianSpec {
    FeatureVector mean_safe{-1.0, -1.0};
    FeatureVector mean_unsafe{1.0, 1.0};
    double cov_scale_safe = 0.5;  // covariance = scale * I
    double cov_scale_unsafe = 0.5;
    double outlier_prob = 0.0;  // chance a sample is drawn from the other class's distribution
    std::uint64_t seed = 0;
};

void validate(const GaussianSpec& spec);

/// n/2 samples per class (the odd one goes to +1), interleaved +1, -1, +1, ...
/// An outlier keeps its label but takes its features from the other class.
Dataset gen_two_gaussians(std::size_t n, const GaussianSpec& spec);

/// Synthetic stand-in for windowed DNS traffic statistics.
struct DnsSurrogateSpec {
    std::size_t n_windows = 10000;
    double tunnel_fraction = 0.5;
    std::size_t packets_per_window = 100;
    double intensity = 1.0;  // anomalous share of a tunnel window = min(1, intensity * kAnomalyPerIntensity)
    std::uint64_t seed = 0;
};

inline constexpr double kAnomalyPerIntensity = 0.02;

void validate(const DnsSurrogateSpec& spec);

/**
 * One sample per window of `packets_per_window` query/answer pairs. Baseline
 * traffic: query and answer sizes log-normal, gaps exponential. A tunnel
 * window replaces a share of its packets with larger, tightly clustered sizes
 * and near-constant gaps. Features are the 12 moments from window_features();
 * label +1 marks a tunnel window.
 */
Dataset gen_dns_surrogate(const DnsSurrogateSpec& spec);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;  // raw (not excess)
};

/// Population moments; skewness and kurtosis are 0 for constant input.
Moments sample_moments(std::span<const double> values);

/// [m_A, m_Q, m_Dt, v_A, v_Q, v_Dt, s_A, s_Q, s_Dt, k_A, k_Q, k_Dt] for answer
/// sizes, query sizes and query/answer time gaps of one window.
FeatureVector window_features(std::span<const double> answer_sizes, std::span<const double> query_sizes,
                              std::span<const double> gaps);

struct SplitSpec {
    double train_fraction = 0.5;
    double calib_fraction = 0.3;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
};

void validate(const SplitSpec& spec);

struct SplitResult {
    Dataset train;
    Dataset calib;
    Dataset test;
};

/// Fisher-Yates shuffle, then contiguous cuts: floor(n * train),
/// floor(n * calib), remainder to test.
SplitResult split(const Dataset& data, const SplitSpec& spec);

/// Header `f1,...,fd,label`, one sample per row, label exactly -1 or 1.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(std::string_view text);
void save_csv(const Dataset& data, const std::filesystem::path& path);
std::string format_csv(const Dataset& data);

}  // namespace csrkit
