#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pflab/config.hpp"
#include "pflab/experiments.hpp"
#include "pflab/observables.hpp"

namespace pflab {

/// 16 hex digits of FNV-1a over the resolved configuration, ignoring output location,
/// thread count and log level (they do not change the numbers).
std::string config_hash(const RunConfig& cfg);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string table_csv(const ResultTable& table);
/// Density as a CSV matrix (rows along the first axis) preceded by '#' metadata lines.
std::string density_csv(const DensityMap& map);
std::string sidecar_json(const ScenarioResult& result, const RunConfig& cfg,
                         const std::vector<std::filesystem::path>& files);
std::string report_json(const ObservableReport& report);

/// Writes every table, density map and the JSON sidecar into cfg.output_dir:
///   <scenario>__<label>__<hash>.csv, <scenario>__<label>__<map>__<hash>.csv, <scenario>__<hash>.json.
/// Throws ConfigError when a target exists and overwriting is disabled. Returns the paths written.
std::vector<std::filesystem::path> write_result(const ScenarioResult& result, const RunConfig& cfg);

}  // namespace pflab
