#include "smo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csrkit::detail {
namespace {

constexpr double kTau = 1e-12;

bool in_up(double y, double a, double C) { return (y > 0 && a < C) || (y < 0 && a > 0); }
bool in_low(double y, double a, double C) { return (y > 0 && a > 0) || (y < 0 && a < C); }

}  // namespace

Eigen::VectorXd smo_gradient(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& alpha) {
    const Eigen::Index n = K.rows();
    Eigen::VectorXd grad(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (alpha[j] > 0.0) acc += (alpha[j] * y[j]) * K(j, i);
        }
        grad[i] = y[i] * acc + p[i];
    }
    return grad;
}

double smo_violation(const Eigen::VectorXd& y, const Eigen::VectorXd& alpha, const Eigen::VectorXd& grad, double C) {
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < y.size(); ++t) {
        const double v = -y[t] * grad[t];
        if (in_up(y[t], alpha[t], C)) m_up = std::max(m_up, v);
        if (in_low(y[t], alpha[t], C)) m_low = std::min(m_low, v);
    }
    if (!std::isfinite(m_up) || !std::isfinite(m_low)) return 0.0;
    return std::max(0.0, m_up - m_low);
}

SmoResult solve_smo(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                    const Eigen::VectorXd& alpha0, double C, double tolerance, std::size_t max_iterations) {
    const Eigen::Index n = K.rows();
    SmoResult s;
    s.alpha = alpha0;
    s.grad = smo_gradient(K, y, p, s.alpha);

    for (;;) {
        double g_max = -std::numeric_limits<double>::infinity();
        Eigen::Index i = -1;
        for (Eigen::Index t = 0; t < n; ++t) {
            if (in_up(y[t], s.alpha[t], C)) {
                const double v = -y[t] * s.grad[t];
                if (v > g_max) {
                    g_max = v;
                    i = t;
                }
            }
        }
        double g_max2 = -std::numeric_limits<double>::infinity();
        double best_gain = std::numeric_limits<double>::infinity();
        Eigen::Index j = -1;
        for (Eigen::Index t = 0; t < n; ++t) {
            if (!in_low(y[t], s.alpha[t], C)) continue;
            const double yg = y[t] * s.grad[t];
            g_max2 = std::max(g_max2, yg);
            const double grad_diff = g_max + yg;
            if (i >= 0 && grad_diff > 0.0) {
                double quad = K(i, i) + K(t, t) - 2.0 * K(i, t);
                if (quad <= 0.0) quad = kTau;
                const double gain = -(grad_diff * grad_diff) / quad;
                if (gain < best_gain) {
                    best_gain = gain;
                    j = t;
                }
            }
        }

        s.gap = (i < 0 || !std::isfinite(g_max2)) ? 0.0 : std::max(0.0, g_max + g_max2);
        if (s.gap <= tolerance || j < 0) {
            // Confirm on a freshly summed gradient to shed accumulated drift.
            s.grad = smo_gradient(K, y, p, s.alpha);
            s.gap = smo_violation(y, s.alpha, s.grad, C);
            if (s.gap <= tolerance || j < 0) {
                s.converged = s.gap <= tolerance;
                break;
            }
            continue;
        }
        if (s.iterations >= max_iterations) break;
        ++s.iterations;

        const double old_i = s.alpha[i];
        const double old_j = s.alpha[j];
        double& ai = s.alpha[i];
        double& aj = s.alpha[j];
        const double Qij = y[i] * y[j] * K(i, j);

        if (y[i] != y[j]) {
            double quad = K(i, i) + K(j, j) + 2.0 * Qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-s.grad[i] - s.grad[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > C) {
                    ai = C;
                    aj = C - diff;
                }
            } else if (aj > C) {
                aj = C;
                ai = C + diff;
            }
        } else {
            double quad = K(i, i) + K(j, j) - 2.0 * Qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (s.grad[i] - s.grad[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C) {
                if (ai > C) {
                    ai = C;
                    aj = sum - C;
                }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > C) {
                if (aj > C) {
                    aj = C;
                    ai = sum - C;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }

        const double yi_di = y[i] * (ai - old_i);
        const double yj_dj = y[j] * (aj - old_j);
        const auto Ki = K.col(i);
        const auto Kj = K.col(j);
        for (Eigen::Index t = 0; t < n; ++t) s.grad[t] += y[t] * (Ki[t] * yi_di + Kj[t] * yj_dj);
    }
    return s;
}

}  // namespace csrkit::detail
