#include "csrkit/evaluation.hpp"

#include "csrkit/errors.hpp"

#include <cmath>
#include <string>

namespace csrkit {
namespace {

double rate(std::size_t count, std::size_t total) {
    return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

std::vector<FeatureVector> features_of(const Dataset& data) {
    std::vector<FeatureVector> out;
    out.reserve(data.size());
    for (const auto& s : data) out.push_back(s.x);
    return out;
}

std::vector<Label> labels_of(const Dataset& data) {
    std::vector<Label> out;
    out.reserve(data.size());
    for (const auto& s : data) out.push_back(s.y);
    return out;
}

}  // namespace

double coverage_slack(double epsilon, std::size_t n) {
    return 3.0 * std::sqrt(epsilon * (1.0 - epsilon) / static_cast<double>(n));
}

CoverageReport evaluate_from_rho_bar(const std::vector<double>& rho_bars, const std::vector<Label>& labels,
                                     QuantileValue s_eps, double epsilon) {
    validate_epsilon(epsilon);
    if (rho_bars.empty()) throw InputError("test set is empty");
    if (rho_bars.size() != labels.size()) throw InputError("rho_bar and label counts differ");

    std::size_t errors = 0, errors_minus = 0, errors_plus = 0;
    std::size_t n_minus = 0, n_plus = 0;
    std::size_t empty = 0, doubles = 0, single_minus = 0, single_plus = 0;
    std::size_t safe_and_unsafe_label = 0, safe = 0;

    for (std::size_t i = 0; i < rho_bars.size(); ++i) {
        const ConformalSet set = region::conformal_set(rho_bars[i], s_eps);
        const bool covered = set.contains(labels[i]);
        const bool is_minus = labels[i] == Label::Unsafe;
        (is_minus ? n_minus : n_plus) += 1;
        if (!covered) {
            ++errors;
            (is_minus ? errors_minus : errors_plus) += 1;
        }
        if (set.empty()) ++empty;
        else if (set.is_double()) ++doubles;
        else if (set.contains_plus) ++single_plus;
        else ++single_minus;

        if (region::in_safe_region(rho_bars[i], s_eps)) {
            ++safe;
            if (is_minus) ++safe_and_unsafe_label;
        }
    }

    const std::size_t n = rho_bars.size();
    CoverageReport r;
    r.epsilon = epsilon;
    r.s_eps = s_eps;
    r.n_test = n;
    r.err = rate(errors, n);
    r.err_minus = rate(errors_minus, n_minus);
    r.err_plus = rate(errors_plus, n_plus);
    r.empty_rate = rate(empty, n);
    r.double_rate = rate(doubles, n);
    r.single_rate = rate(single_minus + single_plus, n);
    r.single_minus_rate = rate(single_minus, n);
    r.single_plus_rate = rate(single_plus, n);
    r.csr_error_coverage = rate(safe_and_unsafe_label, n);
    r.csr_mass = rate(safe, n);
    return r;
}

CoverageReport evaluate(const ScalableModel& model, const CalibrationProfile& profile, double epsilon,
                        const Dataset& test) {
    validate_epsilon(epsilon);
    if (test.empty()) throw InputError("test set is empty");
    return evaluate_from_rho_bar(rho_bar_batch(model, features_of(test)), labels_of(test), quantile(profile, epsilon),
                                 epsilon);
}

std::vector<CoverageReport> sweep(const ScalableModel& model, const CalibrationProfile& profile,
                                  const std::vector<double>& epsilon_grid, const Dataset& test) {
    if (epsilon_grid.empty()) throw InputError("epsilon grid is empty");
    for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
        validate_epsilon(epsilon_grid[i]);
        if (i > 0 && !(epsilon_grid[i] > epsilon_grid[i - 1])) throw InputError("epsilon grid must be ascending");
    }
    if (test.empty()) throw InputError("test set is empty");
    const std::vector<double> rho_bars = rho_bar_batch(model, features_of(test));
    const std::vector<Label> labels = labels_of(test);
    std::vector<CoverageReport> out;
    out.reserve(epsilon_grid.size());
    for (double eps : epsilon_grid) out.push_back(evaluate_from_rho_bar(rho_bars, labels, quantile(profile, eps), eps));
    return out;
}

std::string to_string(CellCategory category) {
    switch (category) {
        case CellCategory::Plus: return "plus";
        case CellCategory::Minus: return "minus";
        case CellCategory::Double: return "double";
        case CellCategory::Empty: return "empty";
    }
    return "unknown";
}

std::vector<GridCell> region_grid(const ScalableModel& model, const CalibrationProfile& profile, double epsilon,
                                  const Bounds2D& bounds, std::size_t resolution) {
    if (model.dimension() != 2) {
        throw InputError("region_grid needs a 2-D model, got dimension " + std::to_string(model.dimension()));
    }
    if (resolution == 0) throw InputError("region_grid resolution must be >= 1");
    if (!(bounds.x1_max > bounds.x1_min) || !(bounds.x2_max > bounds.x2_min)) {
        throw InputError("region_grid bounds must satisfy min < max on both axes");
    }
    const QuantileValue s_eps = quantile(profile, epsilon);
    const double h1 = (bounds.x1_max - bounds.x1_min) / static_cast<double>(resolution);
    const double h2 = (bounds.x2_max - bounds.x2_min) / static_cast<double>(resolution);

    std::vector<GridCell> cells;
    cells.reserve(resolution * resolution);
    for (std::size_t r = 0; r < resolution; ++r) {
        for (std::size_t c = 0; c < resolution; ++c) {
            GridCell cell;
            cell.x1 = bounds.x1_min + (static_cast<double>(c) + 0.5) * h1;
            cell.x2 = bounds.x2_min + (static_cast<double>(r) + 0.5) * h2;
            const double point[2] = {cell.x1, cell.x2};
            const double rb = rho_bar(model, point);
            const ConformalSet set = region::conformal_set(rb, s_eps);
            if (set.empty()) cell.category = CellCategory::Empty;
            else if (set.is_double()) cell.category = CellCategory::Double;
            else cell.category = set.contains_plus ? CellCategory::Plus : CellCategory::Minus;
            cell.in_sigma = region::in_sigma(rb, s_eps);
            cell.in_safe_region = region::in_safe_region(rb, s_eps);
            cells.push_back(cell);
        }
    }
    return cells;
}

}  // namespace csrkit
