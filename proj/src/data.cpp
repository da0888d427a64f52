#include "csrkit/data.hpp"

#include "csrkit/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace csrkit {

// --- Rng --------------------------------------------------------------------

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal(double mean, double stddev) {
    if (has_spare_) {
        has_spare_ = false;
        return mean + stddev * spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + stddev * radius * std::cos(angle);
}

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

double Rng::lognormal(double log_mean, double log_stddev) { return std::exp(normal(log_mean, log_stddev)); }

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw InputError("Rng::below: bound must be >= 1");
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t bits = engine_();
    while (bits >= limit) bits = engine_();
    return bits % bound;
}

// --- two Gaussians ----------------------------------------------------------

void validate(const GaussianSpec& spec) {
    if (spec.mean_safe.size() != spec.mean_unsafe.size()) throw InputError("class means differ in dimension");
    validate_features(spec.mean_safe, "mean_safe");
    validate_features(spec.mean_unsafe, "mean_unsafe");
    if (!(spec.cov_scale_safe > 0.0) || !(spec.cov_scale_unsafe > 0.0)) {
        throw InputError("covariance scales must be > 0");
    }
    if (!(spec.outlier_prob >= 0.0 && spec.outlier_prob < 1.0)) throw InputError("outlier_prob must lie in [0, 1)");
}

Dataset gen_two_gaussians(std::size_t n, const GaussianSpec& spec) {
    if (n < 2) throw InputError("gen_two_gaussians needs n >= 2");
    validate(spec);
    Rng rng(spec.seed);
    const double sd_safe = std::sqrt(spec.cov_scale_safe);
    const double sd_unsafe = std::sqrt(spec.cov_scale_unsafe);

    Dataset out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Label y = i % 2 == 0 ? Label::Safe : Label::Unsafe;
        const bool outlier = rng.uniform() < spec.outlier_prob;
        const bool draw_safe = (y == Label::Safe) != outlier;
        const FeatureVector& mean = draw_safe ? spec.mean_safe : spec.mean_unsafe;
        const double sd = draw_safe ? sd_safe : sd_unsafe;
        FeatureVector x(mean.size());
        for (std::size_t k = 0; k < mean.size(); ++k) x[k] = rng.normal(mean[k], sd);
        out.push_back({std::move(x), y});
    }
    return out;
}

// --- DNS surrogate ----------------------------------------------------------

namespace {

// Sizes are in units of 100 bytes and gaps in units of 10 ms so that the raw
// moments stay within a few orders of magnitude of each other.
struct TrafficProfile {
    double query_log_mean, query_log_sd;
    double answer_log_mean, answer_log_sd;
};

constexpr TrafficProfile kBaseline{-0.51, 0.25, 0.18, 0.35};  // ~60 B queries, ~120 B answers
constexpr TrafficProfile kTunnel{0.47, 0.08, 0.79, 0.08};     // ~160 B queries, ~220 B answers
constexpr double kBaselineGapRate = 1.0;
constexpr double kTunnelGap = 0.3;
constexpr double kTunnelGapJitter = 0.02;

}  // namespace

void validate(const DnsSurrogateSpec& spec) {
    if (spec.n_windows == 0) throw InputError("n_windows must be >= 1");
    if (!(spec.tunnel_fraction > 0.0 && spec.tunnel_fraction < 1.0)) {
        throw InputError("tunnel_fraction must lie in (0, 1)");
    }
    if (spec.packets_per_window < 8) throw InputError("packets_per_window must be >= 8");
    if (!(spec.intensity >= 0.0) || !std::isfinite(spec.intensity)) throw InputError("intensity must be >= 0");
}

Dataset gen_dns_surrogate(const DnsSurrogateSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const std::size_t m = spec.packets_per_window;
    const double share = std::min(1.0, spec.intensity * kAnomalyPerIntensity);
    const auto anomalous = static_cast<std::size_t>(std::floor(share * static_cast<double>(m) + 0.5));

    std::vector<double> queries(m), answers(m), gaps(m);
    Dataset out;
    out.reserve(spec.n_windows);
    for (std::size_t w = 0; w < spec.n_windows; ++w) {
        const bool tunnel = rng.uniform() < spec.tunnel_fraction;
        const std::size_t k = tunnel ? anomalous : 0;
        for (std::size_t p = 0; p < m; ++p) {
            if (p < k) {
                queries[p] = rng.lognormal(kTunnel.query_log_mean, kTunnel.query_log_sd);
                answers[p] = rng.lognormal(kTunnel.answer_log_mean, kTunnel.answer_log_sd);
                gaps[p] = std::max(1e-6, rng.normal(kTunnelGap, kTunnelGap * kTunnelGapJitter));
            } else {
                queries[p] = rng.lognormal(kBaseline.query_log_mean, kBaseline.query_log_sd);
                answers[p] = rng.lognormal(kBaseline.answer_log_mean, kBaseline.answer_log_sd);
                gaps[p] = rng.exponential(kBaselineGapRate);
            }
        }
        out.push_back({window_features(answers, queries, gaps), tunnel ? Label::Safe : Label::Unsafe});
    }
    return out;
}

Moments sample_moments(std::span<const double> values) {
    if (values.size() < 2) throw InputError("sample_moments needs at least two values");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) return Moments{*lo, 0.0, 0.0, 0.0};

    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    return Moments{mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

FeatureVector window_features(std::span<const double> answer_sizes, std::span<const double> query_sizes,
                              std::span<const double> gaps) {
    const Moments a = sample_moments(answer_sizes);
    const Moments q = sample_moments(query_sizes);
    const Moments t = sample_moments(gaps);
    return {a.mean,     q.mean,     t.mean,     a.variance, q.variance, t.variance,
            a.skewness, q.skewness, t.skewness, a.kurtosis, q.kurtosis, t.kurtosis};
}

// --- split ------------------------------------------------------------------

void validate(const SplitSpec& spec) {
    for (double f : {spec.train_fraction, spec.calib_fraction, spec.test_fraction}) {
        if (!(f > 0.0 && f < 1.0)) throw InputError("split fractions must lie in (0, 1)");
    }
    const double total = spec.train_fraction + spec.calib_fraction + spec.test_fraction;
    if (std::abs(total - 1.0) > 1e-12) throw InputError("split fractions must sum to 1");
}

SplitResult split(const Dataset& data, const SplitSpec& spec) {
    validate(spec);
    if (data.empty()) throw InputError("cannot split an empty data set");
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(spec.seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    // The 1e-9 absorbs representation error in fractions such as 1/6, so
    // 18000 * (3000 / 18000) cuts at 3000 rather than 2999.
    const double n = static_cast<double>(data.size());
    const auto n_train = static_cast<std::size_t>(std::floor(n * spec.train_fraction + 1e-9));
    const auto n_calib = static_cast<std::size_t>(std::floor(n * spec.calib_fraction + 1e-9));
    if (n_train == 0 || n_calib == 0 || n_train + n_calib >= data.size()) {
        throw InputError("split leaves a part empty (" + std::to_string(data.size()) + " samples)");
    }
    SplitResult out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Dataset& part = i < n_train ? out.train : (i < n_train + n_calib ? out.calib : out.test);
        part.push_back(data[order[i]]);
    }
    return out;
}

// --- CSV --------------------------------------------------------------------

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& message) {
    throw InputError("CSV line " + std::to_string(line) + ": " + message);
}

}  // namespace

Dataset parse_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    if (lines.empty()) throw InputError("CSV is empty");

    const auto header = split_fields(lines.front());
    if (header.size() < 2 || header.back() != "label") fail_at(1, "header must be f1,...,fd,label");
    const std::size_t dim = header.size() - 1;
    for (std::size_t k = 0; k < dim; ++k) {
        if (header[k] != "f" + std::to_string(k + 1)) fail_at(1, "header column " + std::to_string(k + 1) + " must be f" + std::to_string(k + 1));
    }

    Dataset out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::size_t line_no = li + 1;
        const auto fields = split_fields(lines[li]);
        if (fields.size() != dim + 1) {
            fail_at(line_no, "expected " + std::to_string(dim + 1) + " fields, got " + std::to_string(fields.size()));
        }
        FeatureVector x(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const auto f = fields[k];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x[k], std::chars_format::general);
            if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(x[k])) {
                fail_at(line_no, "malformed number '" + std::string(f) + "' in column f" + std::to_string(k + 1));
            }
        }
        Label y;
        if (fields[dim] == "1") y = Label::Safe;
        else if (fields[dim] == "-1") y = Label::Unsafe;
        else fail_at(line_no, "label must be -1 or 1, got '" + std::string(fields[dim]) + "'");
        out.push_back({std::move(x), y});
    }
    if (out.empty()) throw InputError("CSV has a header but no samples");
    return out;
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

std::string format_csv(const Dataset& data) {
    if (data.empty()) throw InputError("cannot write an empty data set");
    const std::size_t dim = data.front().x.size();
    std::string out;
    for (std::size_t k = 0; k < dim; ++k) out += "f" + std::to_string(k + 1) + ",";
    out += "label\n";
    char buf[64];
    for (const auto& s : data) {
        require_dimension(s.x, dim);
        for (double v : s.x) {
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            out.append(buf, res.ptr);
            out += ',';
        }
        out += s.y == Label::Safe ? "1\n" : "-1\n";
    }
    return out;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    const std::string text = format_csv(data);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

}  // namespace csrkit
