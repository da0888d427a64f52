#include "oracles.hpp"

#include "csrkit/conformal.hpp"
#include "csrkit/data.hpp"
#include "csrkit/errors.hpp"

#include <doctest.h>

#include <limits>

using namespace csrkit;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScalableModel unit_svdd() { return ScalableModel::svdd(LinearKernel{}, {{0, 0}}, {1.0}, 1.0); }
ScalableModel unit_svm() { return ScalableModel::svm(LinearKernel{}, {{1, 0}}, {1.0}, 0.0); }

// SVM whose rho_bar at x = [t] is exactly t.
ScalableModel identity_rho() { return ScalableModel::svm(LinearKernel{}, {{1.0}}, {-1.0}, 0.0); }

}  // namespace

TEST_CASE("score examples") {
    const FeatureVector x{0.5, 0};
    CHECK(score(unit_svdd(), x, Label::Safe) == doctest::Approx(-0.75));
    CHECK(score(unit_svdd(), x, Label::Unsafe) == doctest::Approx(0.75));
    const FeatureVector y{2, 0};
    CHECK(score(unit_svm(), y, Label::Safe) == 2.0);
    CHECK(score(unit_svm(), y, Label::Unsafe) == -2.0);
    const FeatureVector origin{0, 0};
    CHECK(score(unit_svm(), origin, Label::Safe) == 0.0);
    CHECK(score(unit_svm(), origin, Label::Unsafe) == 0.0);
}

TEST_CASE("score antisymmetry") {
    Rng rng(1);
    const auto m = unit_svdd();
    for (int i = 0; i < 100; ++i) {
        const FeatureVector x{rng.normal(), rng.normal()};
        CHECK(score(m, x, Label::Safe) == -score(m, x, Label::Unsafe));
    }
}

TEST_CASE("calibrate uses the true label") {
    const auto m = identity_rho();
    CHECK(calibrate(m, {{{0.0}, Label::Safe}}).sorted_scores() == std::vector<double>{0.0});
    const Dataset calib{{{1.0}, Label::Safe}, {{-2.0}, Label::Unsafe}, {{0.5}, Label::Safe}};
    const auto p = calibrate(m, calib);
    CHECK(p.sorted_scores() == std::vector<double>{-2.0, -1.0, -0.5});
    CHECK(p.size() == 3);
    const Dataset permuted{calib[2], calib[0], calib[1]};
    CHECK(calibrate(m, permuted) == p);
    CHECK_THROWS_AS(calibrate(m, {}), InputError);
    CHECK_THROWS_AS(CalibrationProfile({1.0, kInf}), InputError);
}

TEST_CASE("quantile examples") {
    const CalibrationProfile nine({0.9, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
    CHECK(quantile_rank(9, 0.5) == 5);
    CHECK(quantile(nine, 0.5).value == 0.5);
    CHECK(quantile(CalibrationProfile({1, 2, 3, 4}), 0.1).is_infinite());

    std::vector<double> s(99);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(99 - i);
    CHECK(quantile_rank(99, 0.05) == 95);
    CHECK(quantile(CalibrationProfile(s), 0.05).value == 95.0);

    CHECK_THROWS_AS(quantile(nine, 0.0), InputError);
    CHECK_THROWS_AS(quantile(nine, 1.0), InputError);
    CHECK_THROWS_AS(quantile(nine, std::nan("")), InputError);
}

TEST_CASE("quantile matches the sort-and-index oracle") {
    Rng rng(2024);
    int infinite = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + rng.below(60);
        std::vector<double> scores(n);
        for (auto& v : scores) v = rng.uniform() < 0.2 ? std::round(rng.normal(0.0, 3.0)) : rng.normal(0.0, 3.0);
        const double eps = 0.001 + 0.998 * rng.uniform();
        const double expected = oracle::naive_quantile(scores, eps);
        const QuantileValue got = quantile(CalibrationProfile(scores), eps);
        CHECK(got.value == expected);
        infinite += got.is_infinite();
    }
    CHECK(infinite > 0);
}

TEST_CASE("conformal sets from rho_bar and s_eps") {
    CHECK(region::conformal_set(3.0, QuantileValue{}) == ConformalSet{true, true});
    CHECK(region::conformal_set(0.7, QuantileValue{0.5}) == ConformalSet{true, false});
    CHECK(region::conformal_set(0.7, QuantileValue{-0.8}).empty());
    CHECK(region::conformal_set(0.2, QuantileValue{0.5}).is_double());
    CHECK(region::conformal_set(-0.4, QuantileValue{-0.1}) == ConformalSet{false, true});
}

TEST_CASE("rho_eps examples") {
    CHECK(region::rho_eps(QuantileValue{2.8113}) == 2.8113);
    CHECK(region::rho_eps(QuantileValue{-0.3}) == 0.3);
    CHECK(region::rho_eps(QuantileValue{}) == kInf);
}

TEST_CASE("sigma and safe region examples") {
    CHECK(region::in_sigma(0.7, QuantileValue{0.5}));
    CHECK_FALSE(region::in_sigma(0.0, QuantileValue{0.0}));
    CHECK_FALSE(region::in_sigma(100.0, QuantileValue{}));
    CHECK(region::in_safe_region(0.7, QuantileValue{0.3}));
    CHECK(region::in_safe_region(0.7, QuantileValue{-0.3}));
    CHECK_FALSE(region::in_safe_region(0.3, QuantileValue{0.3}));
    CHECK_FALSE(region::in_safe_region(0.3, QuantileValue{-0.3}));
    CHECK_FALSE(region::in_safe_region(1e300, QuantileValue{}));
    // weak vs strict split at s(x,+1) = s_eps
    CHECK(region::in_sigma(0.5, QuantileValue{-0.5}));
    CHECK_FALSE(region::in_sigma_strict(0.5, QuantileValue{-0.5}));
}

TEST_CASE("safe region inclusion and equality properties") {
    Rng rng(77);
    for (int t = 0; t < 100000; ++t) {
        const double r = rng.normal(0.0, 2.0);
        const QuantileValue s{rng.normal(0.0, 2.0)};
        const bool safe = region::in_safe_region(r, s);
        const bool sigma = region::in_sigma(r, s);
        if (safe) CHECK(sigma);
        if (s.value <= 0.0 && r != -s.value) CHECK(safe == sigma);
        CHECK(safe == region::in_sigma_strict(r, s));
    }
}

TEST_CASE("model-level membership agrees with the region definitions") {
    Rng rng(8);
    const auto m = unit_svdd();
    std::vector<double> scores(50);
    for (auto& v : scores) v = rng.normal(0.0, 0.5);
    const CalibrationProfile p(scores);
    for (double eps : {0.05, 0.2, 0.5, 0.9}) {
        const QuantileValue s = quantile(p, eps);
        for (int t = 0; t < 200; ++t) {
            const FeatureVector x{rng.normal(), rng.normal()};
            const double r = rho_bar(m, x);
            CHECK(conformal_set(m, p, eps, x) == region::conformal_set(r, s));
            CHECK(in_sigma(m, p, eps, x) == region::in_sigma(r, s));
            CHECK(in_safe_region(m, p, eps, x) == region::in_safe_region(r, s));
        }
        CHECK(rho_eps(p, eps) == region::rho_eps(s));
    }
}
