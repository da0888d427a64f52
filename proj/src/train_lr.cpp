#include "csrkit/trainers.hpp"

#include "training_common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace csrkit {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr double kRoundoff = 1e-13;
// Pivoted Cholesky stops once every residual diagonal entry is below this
// fraction of the largest kernel diagonal.
constexpr double kRankTolerance = 1e-13;

double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct PivotedCholesky {
    Eigen::MatrixXd factor;             // n x r, K[:, pivots] = factor * factor.row(pivots)^T
    std::vector<Eigen::Index> pivots;  // r training indices
};

PivotedCholesky pivoted_cholesky(const Eigen::MatrixXd& K) {
    const Eigen::Index n = K.rows();
    Eigen::VectorXd residual = K.diagonal();
    const double scale = residual.maxCoeff();
    PivotedCholesky out;
    out.factor.resize(n, 0);
    std::vector<Eigen::VectorXd> columns;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    while (static_cast<Eigen::Index>(columns.size()) < n) {
        Eigen::Index p = -1;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!used[static_cast<std::size_t>(i)] && residual[i] > best) {
                best = residual[i];
                p = i;
            }
        }
        if (p < 0 || best <= kRankTolerance * scale) break;
        Eigen::VectorXd col = K.col(p);
        for (std::size_t k = 0; k < columns.size(); ++k) col -= columns[k] * columns[k][p];
        col /= std::sqrt(best);
        for (Eigen::Index i = 0; i < n; ++i) residual[i] -= col[i] * col[i];
        residual[p] = 0.0;
        used[static_cast<std::size_t>(p)] = true;
        columns.push_back(std::move(col));
        out.pivots.push_back(p);
    }
    out.factor.resize(n, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) out.factor.col(static_cast<Eigen::Index>(k)) = columns[k];
    return out;
}

struct Iterate {
    Eigen::VectorXd coefficients;  // dual coefficients a over all training points
    double bias = 0.0;
    double gradient_norm = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

double full_gradient_norm(const LrObjective& obj) {
    return std::sqrt(obj.grad_coefficients.squaredNorm() + obj.grad_bias * obj.grad_bias);
}

// Newton on J(w, b) = sum softplus(-y (L w - b)) + |w|^2 / (2C), which equals
// the dual objective restricted to coefficients supported on the pivots:
// a_P = L_P^{-T} w gives K a = L w and a^T K a = |w|^2.
Iterate solve_newton(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const TrainConfig& config, LrTrace* trace) {
    const PivotedCholesky chol = pivoted_cholesky(K);
    const Eigen::MatrixXd& L = chol.factor;
    const Eigen::Index n = K.rows();
    const Eigen::Index r = L.cols();
    const double inv_c = 1.0 / config.C;

    Eigen::MatrixXd L_pivot(r, r);
    for (Eigen::Index k = 0; k < r; ++k) L_pivot.row(k) = L.row(chol.pivots[static_cast<std::size_t>(k)]);
    const auto to_coefficients = [&](const Eigen::VectorXd& w) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        const Eigen::VectorXd a_pivot = L_pivot.transpose().triangularView<Eigen::Upper>().solve(w);
        for (Eigen::Index k = 0; k < r; ++k) a[chol.pivots[static_cast<std::size_t>(k)]] = a_pivot[k];
        return a;
    };
    const auto reduced_objective = [&](const Eigen::VectorXd& w, double b) {
        const Eigen::VectorXd f = L * w - Eigen::VectorXd::Constant(n, b);
        double value = 0.5 * inv_c * w.squaredNorm();
        for (Eigen::Index i = 0; i < n; ++i) value += softplus(-y[i] * f[i]);
        return value;
    };

    const auto reduced_gradient = [&](const Eigen::VectorXd& w, double b) {
        const Eigen::VectorXd f = L * w - Eigen::VectorXd::Constant(n, b);
        Eigen::VectorXd u(n);
        for (Eigen::Index i = 0; i < n; ++i) u[i] = -y[i] * sigmoid(-y[i] * f[i]);
        Eigen::VectorXd g(r + 1);
        g.head(r) = L.transpose() * u + inv_c * w;
        g[r] = -u.sum();
        return g;
    };

    Iterate it;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(r);
    double b = 0.0;
    double value = reduced_objective(w, b);
    if (trace) trace->objective.push_back(value);

    for (;;) {
        const Eigen::VectorXd f = L * w - Eigen::VectorXd::Constant(n, b);
        Eigen::VectorXd u(n);
        Eigen::VectorXd d(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            u[i] = -y[i] * sigmoid(-y[i] * f[i]);
            const double p = sigmoid(f[i]);
            d[i] = p * (1.0 - p);
        }

        it.coefficients = to_coefficients(w);
        it.bias = b;
        it.gradient_norm = full_gradient_norm(lr_objective(K, y, it.coefficients, b, config.C));
        if (it.gradient_norm <= config.tolerance) {
            it.converged = true;
            return it;
        }
        if (it.iterations >= config.max_iterations) return it;
        ++it.iterations;
        Eigen::VectorXd grad(r + 1);
        grad.head(r) = L.transpose() * u + inv_c * w;
        grad[r] = -u.sum();

        Eigen::MatrixXd hess(r + 1, r + 1);
        hess.topLeftCorner(r, r) = L.transpose() * d.asDiagonal() * L;
        hess.topLeftCorner(r, r).diagonal().array() += inv_c;
        const Eigen::VectorXd cross = -(L.transpose() * d);
        hess.topRightCorner(r, 1) = cross;
        hess.bottomLeftCorner(1, r) = cross.transpose();
        hess(r, r) = d.sum() + 1e-12;
        Eigen::VectorXd step = hess.ldlt().solve(-grad);
        double slope = grad.dot(step);
        if (!(slope < 0.0) || !step.allFinite()) {
            step = -grad;
            slope = -grad.squaredNorm();
        }

        // Below this predicted decrease the objective cannot resolve Armijo; fall back to gradient decrease.
        const double noise = kRoundoff * (1.0 + std::abs(value));
        const bool at_roundoff = -slope <= noise;
        const double grad_norm = grad.norm();
        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k < kMaxBacktracks; ++k, t *= 0.5) {
            const Eigen::VectorXd w_try = w + t * step.head(r);
            const double b_try = b + t * step[r];
            const double v_try = reduced_objective(w_try, b_try);
            const bool armijo = v_try <= value + kArmijo * t * slope;
            if (armijo || (at_roundoff && v_try <= value + noise && reduced_gradient(w_try, b_try).norm() < grad_norm)) {
                w = w_try;
                b = b_try;
                value = std::min(value, v_try);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No further decrease representable; report the current point.
            it.coefficients = to_coefficients(w);
            it.bias = b;
            it.gradient_norm = full_gradient_norm(lr_objective(K, y, it.coefficients, b, config.C));
            it.converged = it.gradient_norm <= config.tolerance;
            return it;
        }
        if (trace) trace->objective.push_back(value);
    }
}

Iterate solve_gradient(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const TrainConfig& config, LrTrace* trace) {
    const Eigen::Index n = K.rows();
    Iterate it;
    it.coefficients = Eigen::VectorXd::Zero(n);
    it.bias = 0.0;
    LrObjective obj = lr_objective(K, y, it.coefficients, it.bias, config.C);
    if (trace) trace->objective.push_back(obj.value);
    double t0 = config.learning_rate;

    for (;;) {
        it.gradient_norm = full_gradient_norm(obj);
        if (it.gradient_norm <= config.tolerance) {
            it.converged = true;
            return it;
        }
        if (it.iterations >= config.max_iterations) return it;
        ++it.iterations;

        const double slope = -(obj.grad_coefficients.squaredNorm() + obj.grad_bias * obj.grad_bias);
        double t = t0;
        bool accepted = false;
        for (int k = 0; k < kMaxBacktracks; ++k, t *= 0.5) {
            const Eigen::VectorXd a_try = it.coefficients - t * obj.grad_coefficients;
            const double b_try = it.bias - t * obj.grad_bias;
            LrObjective trial = lr_objective(K, y, a_try, b_try, config.C);
            if (trial.value <= obj.value + kArmijo * t * slope) {
                it.coefficients = a_try;
                it.bias = b_try;
                obj = std::move(trial);
                accepted = true;
                break;
            }
        }
        if (!accepted) return it;
        if (trace) trace->objective.push_back(obj.value);
        // Let the next step grow again after a successful one.
        t0 = std::max(config.learning_rate, 2.0 * t);
    }
}

}  // namespace

LrObjective lr_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const Eigen::VectorXd& coefficients,
                         double bias, double C) {
    const Eigen::Index n = gram.rows();
    if (gram.cols() != n || labels.size() != n || coefficients.size() != n) {
        throw InputError("lr_objective: size mismatch");
    }
    const Eigen::VectorXd k_a = gram * coefficients;
    LrObjective out;
    Eigen::VectorXd u(n);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double margin = labels[i] * (k_a[i] - bias);
        loss += softplus(-margin);
        u[i] = -labels[i] * sigmoid(-margin);
    }
    out.value = loss + 0.5 / C * coefficients.dot(k_a);
    out.grad_coefficients = gram * u + k_a / C;
    out.grad_bias = -u.sum();
    return out;
}

ScalableModel train_lr(const Dataset& data, const TrainConfig& config, LrTrace* trace) {
    validate(config);
    const auto prepared = detail::prepare(data);
    if (prepared.positives == 0 || prepared.negatives == 0) {
        throw TrainingError("train_lr needs samples of both classes");
    }
    const Eigen::MatrixXd K = gram_matrix(config.kernel, prepared.points);
    const Iterate it = config.lr_solver == LrSolver::Newton ? solve_newton(K, prepared.labels, config, trace)
                                                            : solve_gradient(K, prepared.labels, config, trace);

    std::vector<FeatureVector> support;
    std::vector<double> weights;
    TrainingMetadata meta;
    meta.config = config;
    meta.iterations = it.iterations;
    meta.residual = it.gradient_norm;
    for (Eigen::Index i = 0; i < it.coefficients.size(); ++i) {
        if (it.coefficients[i] != 0.0) {
            support.push_back(prepared.points[static_cast<std::size_t>(i)]);
            weights.push_back(-it.coefficients[i]);
            meta.support_indices.push_back(static_cast<std::size_t>(i));
        }
    }
    if (support.empty()) {
        support.push_back(prepared.points.front());
        weights.push_back(0.0);
        meta.support_indices.push_back(0);
    }
    ScalableModel model =
        ScalableModel::lr(config.kernel, std::move(support), std::move(weights), -it.bias).with_metadata(meta);
    if (!it.converged) {
        std::ostringstream msg;
        msg << "LR solver stopped after " << it.iterations << " iterations with gradient norm " << it.gradient_norm;
        throw TrainingDidNotConverge(msg.str(), it.gradient_norm, std::move(model));
    }
    return model;
}

}  // namespace csrkit
