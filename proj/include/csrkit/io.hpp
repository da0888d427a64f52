#pragma once

#include "csrkit/conformal.hpp"
#include "csrkit/evaluation.hpp"
#include "csrkit/model.hpp"
#include "csrkit/train_config.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace csrkit {

nlohmann::json kernel_to_json(const KernelSpec& kernel);
KernelSpec kernel_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const TrainConfig& config);
TrainConfig config_from_json(const nlohmann::json& j);

/// {format, version, variant, dimension, kernel, support_points, dual_weights,
///  bias | radius_sq + center_norm_sq, metadata}. Doubles keep full precision.
nlohmann::json model_to_json(const ScalableModel& model);
ScalableModel model_from_json(const nlohmann::json& j);

/// {format, version, n_c, sorted_scores}
nlohmann::json profile_to_json(const CalibrationProfile& profile);
CalibrationProfile profile_from_json(const nlohmann::json& j);

/// Fixed report header, one row per epsilon. s_eps prints as "inf" when infinite.
inline constexpr const char* kReportCsvHeader =
    "epsilon,s_eps,n_test,err,err_minus,err_plus,empty_rate,double_rate,single_rate,"
    "single_minus_rate,single_plus_rate,csr_error_coverage,csr_mass";

std::string reports_to_csv(const std::vector<CoverageReport>& reports);
nlohmann::json reports_to_json(const std::vector<CoverageReport>& reports);

inline constexpr const char* kGridCsvHeader = "x1,x2,category,in_sigma,in_safe_region";
std::string grid_to_csv(const std::vector<GridCell>& cells);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary sibling file and renames it into place.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace csrkit
