#include "csrkit/data.hpp"
#include "csrkit/errors.hpp"
#include "csrkit/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace csrkit;

namespace {

ScalableModel unit_svm() { return ScalableModel::svm(LinearKernel{}, {{1, 0}}, {1.0}, 0.0); }
ScalableModel unit_lr() { return ScalableModel::lr(LinearKernel{}, {{1, 0}}, {1.0}, 0.0); }
ScalableModel unit_svdd() { return ScalableModel::svdd(LinearKernel{}, {{0, 0}}, {1.0}, 1.0); }

ScalableModel random_gaussian_model(ClassifierKind kind, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<FeatureVector> pts(12, FeatureVector(2));
    std::vector<double> w(12);
    for (auto& p : pts)
        for (auto& v : p) v = rng.normal(0.0, 2.0);
    double sum = 0.0;
    for (auto& x : w) sum += (x = rng.uniform() - 0.3);
    if (kind == ClassifierKind::Svdd) {
        for (auto& x : w) x /= sum;
        return ScalableModel::svdd(GaussianKernel{0.5}, pts, w, 0.6);
    }
    if (kind == ClassifierKind::Lr) return ScalableModel::lr(PolynomialKernel{3, 0.5, 1.0}, pts, w, 0.4);
    return ScalableModel::svm(GaussianKernel{0.5}, pts, w, -0.2);
}

}  // namespace

TEST_CASE("predictor examples") {
    const FeatureVector x{2, 0};
    CHECK(predictor(unit_svm(), x, 0.0) == 2.0);
    const FeatureVector half{0.5, 0};
    CHECK(predictor(unit_svdd(), half, 0.0) == doctest::Approx(-0.75));
    const FeatureVector origin{0, 0};
    CHECK(predictor(unit_lr(), origin, 0.0) == 0.0);
    CHECK_THROWS_AS(predictor(unit_svm(), FeatureVector{1, 2, 3}, 0.0), InputError);
}

TEST_CASE("classify boundary goes to -1") {
    const FeatureVector half{0.5, 0};
    CHECK(classify(unit_svdd(), half, 0.0) == Label::Safe);
    const FeatureVector origin{0, 0};
    CHECK(predictor(unit_svm(), origin, 0.0) == 0.0);
    CHECK(classify(unit_svm(), origin, 0.0) == Label::Unsafe);
    CHECK(classify(unit_svm(), FeatureVector{2, 0}, 0.0) == Label::Unsafe);
}

TEST_CASE("rho_bar closed forms") {
    const FeatureVector x{2, 0};
    CHECK(rho_bar(unit_svm(), x) == -2.0);
    CHECK(rho_bar(unit_lr(), x) == -2.0);
    CHECK(rho_bar(unit_svdd(), FeatureVector{0.5, 0}) == doctest::Approx(0.75));
}

TEST_CASE("in_level_set uses a strict inequality") {
    const FeatureVector half{0.5, 0};
    CHECK(in_level_set(unit_svdd(), half, 0.0));
    CHECK_FALSE(in_level_set(unit_svdd(), half, 0.75));
    CHECK(in_level_set(unit_svdd(), half, 0.75 - 1e-6));
}

TEST_CASE("model construction is validated") {
    CHECK_THROWS_AS(ScalableModel::svm(LinearKernel{}, {}, {}, 0.0), InputError);
    CHECK_THROWS_AS(ScalableModel::svm(LinearKernel{}, {{1, 0}}, {1.0, 2.0}, 0.0), InputError);
    CHECK_THROWS_AS(ScalableModel::svm(LinearKernel{}, {{1, 0}, {1}}, {1.0, 2.0}, 0.0), InputError);
    CHECK_THROWS_AS(ScalableModel::svdd(LinearKernel{}, {{0, 0}}, {0.9}, 1.0), InputError);
    CHECK_THROWS_AS(ScalableModel::svdd(LinearKernel{}, {{0, 0}}, {1.0}, -0.1), InputError);
    CHECK_THROWS_AS(ScalableModel::svm(LinearKernel{}, {{NAN, 0}}, {1.0}, 0.0), InputError);
}

TEST_CASE("svdd center norm defaults to w^T K w") {
    const auto m = ScalableModel::svdd(LinearKernel{}, {{1, 0}, {0, 1}}, {0.5, 0.5}, 0.5);
    CHECK(m.center_norm_sq() == doctest::Approx(0.5));
    CHECK(m.feature_term(FeatureVector{0.5, 0.5}) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("scalable classifier axioms on random models") {
    for (auto kind : {ClassifierKind::Svm, ClassifierKind::Svdd, ClassifierKind::Lr}) {
        const auto m = random_gaussian_model(kind, 3);
        Rng rng(17);
        for (int t = 0; t < 300; ++t) {
            const FeatureVector x{rng.normal(0.0, 3.0), rng.normal(0.0, 3.0)};
            const double r = rho_bar(m, x);
            CHECK(std::abs(predictor(m, x, r)) <= 1e-9);
            const double rho = r + 20.0 * (rng.uniform() - 0.5);
            CHECK(predictor(m, x, rho + 0.1) > predictor(m, x, rho));
            CHECK((classify(m, x, rho) == Label::Safe) == (rho < r));
            CHECK(in_level_set(m, x, rho) == (rho < r));
        }
    }
}

TEST_CASE("level sets are nested") {
    const auto m = random_gaussian_model(ClassifierKind::Svm, 9);
    const double grid[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    Rng rng(4);
    for (int t = 0; t < 500; ++t) {
        const FeatureVector x{rng.normal(0.0, 3.0), rng.normal(0.0, 3.0)};
        for (int k = 0; k + 1 < 5; ++k) {
            if (in_level_set(m, x, grid[k + 1])) CHECK(in_level_set(m, x, grid[k]));
        }
    }
}

TEST_CASE("lr predictor stays finite for huge exponents") {
    const auto m = unit_lr();
    CHECK(predictor(m, FeatureVector{1e6, 0}, 0.0) == doctest::Approx(0.5));
    CHECK(predictor(m, FeatureVector{-1e6, 0}, 0.0) == doctest::Approx(-0.5));
}

TEST_CASE("find_scale_root agrees with closed forms") {
    for (auto kind : {ClassifierKind::Svm, ClassifierKind::Svdd, ClassifierKind::Lr}) {
        const auto m = random_gaussian_model(kind, 21);
        const FeatureVector x{0.3, -1.1};
        const double root = find_scale_root([&](double rho) { return predictor(m, x, rho); });
        CHECK(root == doctest::Approx(rho_bar(m, x)).epsilon(1e-9));
    }
    CHECK(find_scale_root([](double r) { return r - 1234.5; }) == doctest::Approx(1234.5));
}

TEST_CASE("rho_bar_batch matches pointwise evaluation") {
    const auto m = random_gaussian_model(ClassifierKind::Svdd, 5);
    const std::vector<FeatureVector> pts{{0, 0}, {1, 2}, {-3, 0.5}};
    const auto batch = rho_bar_batch(m, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(batch[i] == rho_bar(m, pts[i]));
}
