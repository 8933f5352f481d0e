#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "taperspec/montecarlo.hpp"

namespace taperspec {

/// Reads one experiment config. Unknown keys, missing required fields and
/// out-of-range values raise ConfigError naming the field.
///
/// {
///   "name": "ar1-normality", "kind": "normality",
///   "model": {"family": "ar1", "sigma2": 1.0, "rho": 0.5},
///   "taper": "rectangular",
///   "functionals": [{"k": 1, "phi": "one"}, {"k": 2, "phi": "one"}],
///   "T_sweep": [64, 128], "R": 1000, "base_seed": 7
/// }
///
/// Required: model, T_sweep. Everything else has a default.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Accepts either a single config object or {"experiments": [config, ...]}.
std::vector<ExperimentConfig> parse_suite(const std::filesystem::path& path);

std::string serialize(const ExperimentConfig& config);

}  // namespace taperspec
