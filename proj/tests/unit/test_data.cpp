#include "oracles.hpp"

#include "csrkit/data.hpp"
#include "csrkit/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <random>

using namespace csrkit;

TEST_CASE("rng is reproducible and in range") {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        differs |= u != c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const auto k = a.below(7);
        CHECK(k == b.below(7));
        CHECK(k < 7);
        CHECK(a.exponential(2.0) == b.exponential(2.0));
    }
    CHECK(differs);
    CHECK_THROWS_AS(a.below(0), InputError);
    // first output of the 64-bit Mersenne twister seeded with 5489
    Rng standard(5489);
    CHECK(standard.next_bits() == 14514284786278117030ULL);
}

TEST_CASE("normal draws have the right moments") {
    Rng rng(1);
    std::vector<double> v(200000);
    for (auto& x : v) x = rng.normal(2.0, 3.0);
    const auto m = sample_moments(v);
    CHECK(m.mean == doctest::Approx(2.0).epsilon(0.01));
    CHECK(m.variance == doctest::Approx(9.0).epsilon(0.02));
    CHECK(std::abs(m.skewness) < 0.03);
    CHECK(m.kurtosis == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("two gaussians: balance, means and determinism") {
    GaussianSpec spec;
    spec.seed = 5;
    const auto data = gen_two_gaussians(10000, spec);
    double sum_safe[2] = {0, 0}, sum_unsafe[2] = {0, 0};
    std::size_t n_safe = 0;
    for (const auto& s : data) {
        double* target = s.y == Label::Safe ? sum_safe : sum_unsafe;
        target[0] += s.x[0];
        target[1] += s.x[1];
        n_safe += s.y == Label::Safe;
    }
    CHECK(n_safe == 5000);
    for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(sum_safe[k] / 5000 + 1.0) < 0.05);
        CHECK(std::abs(sum_unsafe[k] / 5000 - 1.0) < 0.05);
    }
    CHECK(gen_two_gaussians(10000, spec) == data);
    spec.seed = 6;
    CHECK(gen_two_gaussians(10000, spec) != data);

    const auto odd = gen_two_gaussians(7, spec);
    CHECK(std::count_if(odd.begin(), odd.end(), [](const auto& s) { return s.y == Label::Safe; }) == 4);
    CHECK_THROWS_AS(gen_two_gaussians(1, spec), InputError);
    spec.outlier_prob = 1.0;
    CHECK_THROWS_AS(gen_two_gaussians(10, spec), InputError);
    spec.outlier_prob = 0.0;
    spec.cov_scale_safe = 0.0;
    CHECK_THROWS_AS(gen_two_gaussians(10, spec), InputError);
}

TEST_CASE("outlier fraction matches a Monte Carlo oracle") {
    const double p = 0.1;
    // oracle: independent sampler from the standard library
    std::mt19937 gen(123);
    std::normal_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution flip(p);
    const double sd = std::sqrt(0.5);
    std::size_t nearer_unsafe = 0;
    const std::size_t draws = 1000000;
    for (std::size_t i = 0; i < draws; ++i) {
        const double c = flip(gen) ? 1.0 : -1.0;
        const double x = c + sd * unit(gen), y = c + sd * unit(gen);
        nearer_unsafe += (x - 1) * (x - 1) + (y - 1) * (y - 1) < (x + 1) * (x + 1) + (y + 1) * (y + 1);
    }
    const double expected = static_cast<double>(nearer_unsafe) / draws;

    GaussianSpec spec;
    spec.outlier_prob = p;
    spec.seed = 9;
    const auto data = gen_two_gaussians(200000, spec);
    std::size_t count = 0, safe = 0;
    for (const auto& s : data) {
        if (s.y != Label::Safe) continue;
        ++safe;
        const double du = (s.x[0] - 1) * (s.x[0] - 1) + (s.x[1] - 1) * (s.x[1] - 1);
        const double ds = (s.x[0] + 1) * (s.x[0] + 1) + (s.x[1] + 1) * (s.x[1] + 1);
        count += du < ds;
    }
    const double observed = static_cast<double>(count) / safe;
    CHECK(std::abs(observed - expected) <= 0.01);
    CHECK(observed > p);
}

TEST_CASE("sample_moments examples and oracle") {
    const auto flat = sample_moments(std::vector<double>{1, 1, 1, 1});
    CHECK(flat.mean == 1.0);
    CHECK(flat.variance == 0.0);
    CHECK(flat.skewness == 0.0);
    CHECK(flat.kurtosis == 0.0);

    const auto pm = sample_moments(std::vector<double>{-1, 1});
    CHECK(pm.mean == 0.0);
    CHECK(pm.variance == 1.0);
    CHECK(pm.skewness == 0.0);
    CHECK(pm.kurtosis == 1.0);

    const auto sym = sample_moments(std::vector<double>{-3.5, -1.25, 0.5, 0.75, 1.0, 2.75, 5.0});
    CHECK(std::abs(sym.skewness) <= 1e-12);

    CHECK_THROWS_AS(sample_moments(std::vector<double>{1.0}), InputError);

    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> v(2 + rng.below(50));
        for (auto& x : v) x = rng.lognormal(0.0, 1.0);
        const auto got = sample_moments(v);
        const auto want = oracle::naive_moments(v);
        CHECK(got.mean == doctest::Approx(want.mean).epsilon(1e-12));
        CHECK(std::abs(got.variance - want.variance) <= 1e-12 * std::max(1.0, want.variance));
        CHECK(std::abs(got.skewness - want.skewness) <= 1e-12 * std::max(1.0, std::abs(want.skewness)));
        CHECK(std::abs(got.kurtosis - want.kurtosis) <= 1e-12 * std::max(1.0, want.kurtosis));
    }
}

TEST_CASE("window features order and constant windows") {
    const std::vector<double> a{2, 2, 2, 2}, q{1, 3, 1, 3}, g{0.5, 0.5, 0.5, 0.5};
    const auto f = window_features(a, q, g);
    REQUIRE(f.size() == 12);
    CHECK(f[0] == 2.0);
    CHECK(f[1] == 2.0);
    CHECK(f[2] == 0.5);
    CHECK(f[3] == 0.0);
    CHECK(f[4] == 1.0);
    CHECK(f[5] == 0.0);
    CHECK(f[10] == 1.0);
}

TEST_CASE("dns surrogate shape, labels and determinism") {
    DnsSurrogateSpec spec;
    spec.n_windows = 400;
    spec.intensity = 3.0;
    spec.seed = 1;
    const auto data = gen_dns_surrogate(spec);
    REQUIRE(data.size() == 400);
    std::size_t tunnels = 0;
    for (const auto& s : data) {
        CHECK(s.x.size() == 12);
        CHECK(s.x[3] >= 0.0);
        tunnels += s.y == Label::Safe;
    }
    CHECK(tunnels > 150);
    CHECK(tunnels < 250);
    CHECK(gen_dns_surrogate(spec) == data);

    spec.packets_per_window = 7;
    CHECK_THROWS_AS(gen_dns_surrogate(spec), InputError);
    spec.packets_per_window = 100;
    spec.tunnel_fraction = 1.0;
    CHECK_THROWS_AS(gen_dns_surrogate(spec), InputError);
    spec.tunnel_fraction = 0.5;
    spec.intensity = -1.0;
    CHECK_THROWS_AS(gen_dns_surrogate(spec), InputError);
}

TEST_CASE("split sizes, partition and determinism") {
    Dataset data;
    for (int i = 0; i < 10; ++i) data.push_back({{static_cast<double>(i)}, i % 2 ? Label::Safe : Label::Unsafe});
    const auto s = split(data, {0.5, 0.3, 0.2, 4});
    CHECK(s.train.size() == 5);
    CHECK(s.calib.size() == 3);
    CHECK(s.test.size() == 2);

    std::multiset<double> seen;
    for (const auto* part : {&s.train, &s.calib, &s.test})
        for (const auto& x : *part) seen.insert(x.x[0]);
    std::multiset<double> all;
    for (const auto& x : data) all.insert(x.x[0]);
    CHECK(seen == all);

    const auto again = split(data, {0.5, 0.3, 0.2, 4});
    CHECK(again.train == s.train);
    CHECK(again.test == s.test);

    Dataset big;
    for (int i = 0; i < 1000; ++i) big.push_back({{static_cast<double>(i)}, Label::Safe});
    CHECK(split(big, {0.5, 0.3, 0.2, 1}).train != split(big, {0.5, 0.3, 0.2, 2}).train);

    Dataset sixths;
    for (int i = 0; i < 18000; ++i) sixths.push_back({{0.0}, Label::Safe});
    const auto cut = split(sixths, {3000.0 / 18000, 5000.0 / 18000, 10000.0 / 18000, 0});
    CHECK(cut.train.size() == 3000);
    CHECK(cut.calib.size() == 5000);
    CHECK(cut.test.size() == 10000);

    CHECK_THROWS_AS(split(data, {0.5, 0.3, 0.3, 0}), InputError);
    CHECK_THROWS_AS(split(data, {0.9, 0.05, 0.05, 0}), InputError);
    CHECK_THROWS_AS(split({}, {0.5, 0.3, 0.2, 0}), InputError);
}

TEST_CASE("csv round trip and rejection") {
    Rng rng(12);
    Dataset data;
    for (int i = 0; i < 100; ++i) {
        data.push_back({{rng.normal(0, 1e3), rng.normal() * 1e-7, rng.uniform()}, rng.uniform() < 0.5 ? Label::Safe : Label::Unsafe});
    }
    const auto path = std::filesystem::temp_directory_path() / "csrkit_roundtrip.csv";
    save_csv(data, path);
    CHECK(load_csv(path) == data);
    std::filesystem::remove(path);

    CHECK(parse_csv("f1,f2,label\n1.5,-2,1\n0,3e2,-1\n") == Dataset{{{1.5, -2}, Label::Safe}, {{0, 300}, Label::Unsafe}});

    auto message = [](const std::string& text) {
        try {
            parse_csv(text);
        } catch (const InputError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("f1,label\n1,1\n2,0\n").find("line 3") != std::string::npos);
    CHECK(message("f1,label\n1,1\n2,1,1\n").find("line 3") != std::string::npos);
    CHECK(message("f1,label\n1,1\nabc,1\n").find("line 3") != std::string::npos);
    CHECK(message("f1,label\n1,1\n1,+1\n").find("line 3") != std::string::npos);
    CHECK(message("f1,label\n").find("no samples") != std::string::npos);
    CHECK(message("x,label\n1,1\n").find("line 1") != std::string::npos);
    CHECK(message("f1,label\nnan,1\n").find("line 2") != std::string::npos);
    CHECK_THROWS_AS(load_csv("/nonexistent/csrkit.csv"), InputError);
}
