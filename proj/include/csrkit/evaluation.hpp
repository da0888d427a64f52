#pragma once

#include "csrkit/conformal.hpp"
#include "csrkit/model.hpp"
#include "csrkit/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace csrkit {

/// Accuracy and efficiency of the conformal sets at one epsilon, plus the
/// error coverage and mass of the safe set S_eps.
struct CoverageReport {
    double epsilon = 0.0;
    QuantileValue s_eps;
    std::size_t n_test = 0;

    double err = 0.0;        // y not in C(x), over all points
    double err_minus = 0.0;  // same, over y = -1 points only
    double err_plus = 0.0;   // same, over y = +1 points only

    double empty_rate = 0.0;
    double double_rate = 0.0;
    double single_rate = 0.0;
    double single_minus_rate = 0.0;  // C(x) = {-1}
    double single_plus_rate = 0.0;   // C(x) = {+1}

    double csr_error_coverage = 0.0;  // y = -1 and x in S_eps, over all points
    double csr_mass = 0.0;            // x in S_eps, over all points

    bool operator==(const CoverageReport&) const = default;
};

CoverageReport evaluate(const ScalableModel& model, const CalibrationProfile& profile, double epsilon,
                        const Dataset& test);

/// One report per epsilon; rho_bar is computed once per test point.
std::vector<CoverageReport> sweep(const ScalableModel& model, const CalibrationProfile& profile,
                                  const std::vector<double>& epsilon_grid, const Dataset& test);

/// Same aggregation from precomputed rho_bar values (`rho_bars[i]` belongs to
/// `labels[i]`).
CoverageReport evaluate_from_rho_bar(const std::vector<double>& rho_bars, const std::vector<Label>& labels,
                                     QuantileValue s_eps, double epsilon);

/// Binomial slack used by the coverage checks: 3 * sqrt(eps (1 - eps) / n).
double coverage_slack(double epsilon, std::size_t n);

enum class CellCategory { Plus, Minus, Double, Empty };

std::string to_string(CellCategory category);

struct GridCell {
    double x1 = 0.0;
    double x2 = 0.0;
    CellCategory category = CellCategory::Double;
    bool in_sigma = false;
    bool in_safe_region = false;
};

/// Axis-aligned box [x1_min, x1_max] x [x2_min, x2_max].
struct Bounds2D {
    double x1_min = -1.0;
    double x1_max = 1.0;
    double x2_min = -1.0;
    double x2_max = 1.0;
};

/// Classifies the centers of a resolution x resolution grid over `bounds`.
/// Cells are ordered row by row (x2 outer, x1 inner). Requires a 2-D model.
std::vector<GridCell> region_grid(const ScalableModel& model, const CalibrationProfile& profile, double epsilon,
                                  const Bounds2D& bounds, std::size_t resolution);

}  // namespace csrkit
