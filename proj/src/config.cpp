#include "taperspec/config.hpp"

#include <fmt/format.h>

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "taperspec/errors.hpp"

namespace taperspec {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(fmt::format("{}: expected a JSON object", where));
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      const std::string field = where.empty() ? key : fmt::format("{}.{}", where, key);
      throw ConfigError(fmt::format("unknown key '{}'", field));
    }
  }
}

template <class V>
V read(const json& obj, const std::string& key, std::string_view where) {
  const std::string field = where.empty() ? key : fmt::format("{}.{}", where, key);
  const json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<V, double>) {
      if (!v.is_number()) throw ConfigError(fmt::format("{}: expected a number", field));
    } else if constexpr (std::is_integral_v<V>) {
      if (!v.is_number_integer()) throw ConfigError(fmt::format("{}: expected an integer", field));
      if constexpr (std::is_unsigned_v<V>) {
        if (!v.is_number_unsigned()) throw ConfigError(fmt::format("{}: expected a nonnegative integer", field));
      }
    } else if constexpr (std::is_same_v<V, std::string>) {
      if (!v.is_string()) throw ConfigError(fmt::format("{}: expected a string", field));
    }
    return v.get<V>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", field, e.what()));
  }
}

template <class V>
void read_opt(const json& obj, const char* key, std::string_view where, V& out) {
  if (obj.contains(key)) out = read<V>(obj, key, where);
}

std::vector<double> read_doubles(const json& obj, const char* key, std::string_view where) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(fmt::format("{}.{}: expected an array of numbers", where, key));
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(fmt::format("{}.{}: expected an array of numbers", where, key));
    out.push_back(x.get<double>());
  }
  return out;
}

ModelSpec model_from_json(const json& j) {
  reject_unknown(j, "model", {"family", "sigma2", "rho", "theta", "ar", "ma", "innovations"});
  if (!j.contains("family")) throw ConfigError("model.family: missing required field");
  ModelSpec m;
  m.family = read<std::string>(j, "family", "model");
  read_opt(j, "sigma2", "model", m.sigma2);
  read_opt(j, "rho", "model", m.rho);
  read_opt(j, "theta", "model", m.theta);
  if (j.contains("ar")) m.ar = read_doubles(j, "ar", "model");
  if (j.contains("ma")) m.ma = read_doubles(j, "ma", "model");
  read_opt(j, "innovations", "model", m.innovations);
  if (!(m.sigma2 > 0.0)) throw ConfigError(fmt::format("model.sigma2: must be > 0, got {}", m.sigma2));
  if (m.family == "ar1" && !(std::abs(m.rho) < 1.0))
    throw ConfigError(fmt::format("model.rho: need |rho| < 1, got {}", m.rho));
  if (m.family != "white" && m.family != "ar1" && m.family != "ma1" && m.family != "linear")
    throw ConfigError(fmt::format("model.family: unknown family '{}' (white, ar1, ma1, linear)", m.family));
  if (m.innovations != "gaussian" && m.innovations != "exponential" && m.innovations != "twopoint")
    throw ConfigError(
        fmt::format("model.innovations: unknown law '{}' (gaussian, exponential, twopoint)", m.innovations));
  if (m.family != "linear" && m.innovations != "gaussian")
    throw ConfigError("model.innovations: non-Gaussian innovations need family 'linear'");
  return m;
}

ExperimentKind kind_from(const std::string& s) {
  if (s == "convergence") return ExperimentKind::convergence;
  if (s == "normality") return ExperimentKind::normality;
  if (s == "f4_discrimination") return ExperimentKind::f4_discrimination;
  throw ConfigError(fmt::format("kind: unknown kind '{}' (convergence, normality, f4_discrimination)", s));
}

Centering centering_from(const std::string& s) {
  if (s == "oracle") return Centering::oracle;
  if (s == "sample") return Centering::sample;
  throw ConfigError(fmt::format("centering: unknown centering '{}' (oracle, sample)", s));
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j, "", {"name", "kind", "model", "taper", "functionals", "T_sweep", "R", "base_seed", "grid_N",
                         "skew_max", "exkurt_max", "corr_tol", "cov_rel_tol", "decay_slope_max", "centering"});
  for (const char* required : {"model", "T_sweep"})
    if (!j.contains(required)) throw ConfigError(fmt::format("{}: missing required field", required));

  ExperimentConfig c;
  read_opt(j, "name", "", c.name);
  if (j.contains("kind")) c.kind = kind_from(read<std::string>(j, "kind", ""));
  c.model = model_from_json(j.at("model"));
  read_opt(j, "taper", "", c.taper);
  if (j.contains("functionals")) {
    const json& fs = j.at("functionals");
    if (!fs.is_array()) throw ConfigError("functionals: expected an array");
    c.functionals.clear();
    for (const auto& f : fs) {
      reject_unknown(f, "functionals[]", {"k", "phi"});
      FunctionalSpec spec;
      read_opt(f, "k", "functionals[]", spec.k);
      read_opt(f, "phi", "functionals[]", spec.phi);
      c.functionals.push_back(spec);
    }
  }
  const json& sweep = j.at("T_sweep");
  if (!sweep.is_array()) throw ConfigError("T_sweep: expected an array of integers");
  for (const auto& t : sweep) {
    if (!t.is_number_integer()) throw ConfigError("T_sweep: expected an array of integers");
    c.T_sweep.push_back(t.get<int>());
  }
  read_opt(j, "R", "", c.R);
  read_opt(j, "base_seed", "", c.base_seed);
  if (j.contains("grid_N") && !j.at("grid_N").is_null()) c.grid_N = read<int>(j, "grid_N", "");
  read_opt(j, "skew_max", "", c.skew_max);
  read_opt(j, "exkurt_max", "", c.exkurt_max);
  read_opt(j, "corr_tol", "", c.corr_tol);
  read_opt(j, "cov_rel_tol", "", c.cov_rel_tol);
  read_opt(j, "decay_slope_max", "", c.decay_slope_max);
  if (j.contains("centering")) c.centering = centering_from(read<std::string>(j, "centering", ""));
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json model = {{"family", c.model.family}, {"sigma2", c.model.sigma2}, {"rho", c.model.rho},
                {"theta", c.model.theta},   {"ar", c.model.ar},         {"ma", c.model.ma},
                {"innovations", c.model.innovations}};
  json functionals = json::array();
  for (const auto& f : c.functionals) functionals.push_back({{"k", f.k}, {"phi", f.phi}});
  json j = {{"name", c.name},
            {"kind", to_string(c.kind)},
            {"model", model},
            {"taper", c.taper},
            {"functionals", functionals},
            {"T_sweep", c.T_sweep},
            {"R", c.R},
            {"base_seed", c.base_seed},
            {"skew_max", c.skew_max},
            {"exkurt_max", c.exkurt_max},
            {"corr_tol", c.corr_tol},
            {"cov_rel_tol", c.cov_rel_tol},
            {"decay_slope_max", c.decay_slope_max},
            {"centering", to_string(c.centering)}};
  j["grid_N"] = c.grid_N ? json(*c.grid_N) : json(nullptr);
  return j;
}

std::string serialize(const ExperimentConfig& config) { return config_to_json(config).dump(2); }

namespace {

json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
}

}  // namespace

ExperimentConfig parse_config(const std::filesystem::path& path) { return config_from_json(load(path)); }

std::vector<ExperimentConfig> parse_suite(const std::filesystem::path& path) {
  const json j = load(path);
  std::vector<ExperimentConfig> out;
  if (j.is_object() && j.contains("experiments")) {
    reject_unknown(j, "", {"experiments"});
    const json& list = j.at("experiments");
    if (!list.is_array() || list.empty()) throw ConfigError("experiments: expected a nonempty array");
    for (const auto& e : list) out.push_back(config_from_json(e));
  } else {
    out.push_back(config_from_json(j));
  }
  return out;
}

}  // namespace taperspec
