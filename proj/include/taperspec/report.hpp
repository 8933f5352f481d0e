#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "taperspec/montecarlo.hpp"

namespace taperspec {

inline constexpr const char* kToolVersion = "0.1.0";

struct CriterionStatus {
  std::string experiment;
  std::string name;
  bool passed = false;
};

struct RunManifest {
  nlohmann::json config_echo;  ///< array of the experiment configs
  std::string tool_version = kToolVersion;
  std::vector<std::uint64_t> base_seeds;
  std::string started;   ///< ISO 8601 UTC
  std::string finished;  ///< ISO 8601 UTC
  std::vector<std::string> outputs;  ///< file names relative to the output directory
  std::vector<CriterionStatus> criteria;
  bool all_passed = false;

  nlohmann::json to_json() const;
};

/// Writes convergence.csv (one row per T and component), covariance.csv (one
/// row per T and component pair), summary.json and manifest.json into out_dir.
/// Output bytes depend only on the reports; timestamps come from
/// SOURCE_DATE_EPOCH when it is set and from the wall clock otherwise.
RunManifest report(std::span<const ExperimentReport> reports, const std::filesystem::path& out_dir);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

/// Reads the "experiments" array of a summary.json written by report().
std::vector<ExperimentReport> read_summary(const std::filesystem::path& path);

/// Fixed 17-significant-digit rendering used for every CSV number.
std::string format_double(double x);

}  // namespace taperspec
