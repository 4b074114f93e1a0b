#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "svflow/analysis.hpp"
#include "svflow/interpolation.hpp"
#include "svflow/oracles.hpp"
#include "svflow/point_cloud.hpp"

namespace svflow {

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);
double parse_double(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
// Writes to a sibling temp file and renames into place.
void write_text_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::uint64_t fnv1a64(std::string_view bytes);
// FNV-1a of the file's bytes as 16 hex digits.
std::string file_hash_hex(const std::filesystem::path& path);

// Comma-separated values, one row per line; lines starting with '#' are
// comments on input. Full round-trip precision.
std::string matrix_to_csv(const Eigen::MatrixXd& m, std::string_view comment = {});
Eigen::MatrixXd matrix_from_csv(std::string_view text);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      std::string_view comment = {});
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& pc);
PointCloud read_point_cloud_csv(const std::filesystem::path& path);

nlohmann::ordered_json diagram_to_json(const SvfdDiagram& diagram,
                                       bool include_vectors = true);
SvfdDiagram diagram_from_json(const nlohmann::json& j);

nlohmann::ordered_json report_to_json(const CommonalityReport& report);
std::string report_summary_csv(const CommonalityReport& report);

nlohmann::ordered_json outcomes_to_json(const std::vector<OracleOutcome>& outcomes,
                                        std::uint64_t seed);

}  // namespace svflow
