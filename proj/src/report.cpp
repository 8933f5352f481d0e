#include "taperspec/report.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "taperspec/config.hpp"
#include "taperspec/errors.hpp"

namespace taperspec {
namespace {

using nlohmann::json;

std::string timestamp() {
  std::time_t t;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  else
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&t, &utc);
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", utc);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  out.close();
  if (!out) throw Error(fmt::format("write failed for '{}'", path.string()));
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double num(const json& j, const char* key) {
  const json& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

}  // namespace

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

json report_to_json(const ExperimentReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"T", row.T},
                    {"index", row.index},
                    {"k", row.k},
                    {"phi_id", row.phi_id},
                    {"sample_mean", row.sample_mean},
                    {"sample_mean_se", row.sample_mean_se},
                    {"oracle_mean", opt(row.oracle_mean)},
                    {"limit_mean", row.limit_mean},
                    {"T_scaled_var", row.t_scaled_var},
                    {"T_scaled_var_se", row.t_scaled_var_se},
                    {"limit_var", row.limit_var},
                    {"standardized_mean", row.standardized_mean},
                    {"skewness", row.skewness},
                    {"excess_kurtosis", row.excess_kurtosis},
                    {"c3", row.c3},
                    {"c4", row.c4},
                    {"c3_se", row.c3_se},
                    {"c4_se", row.c4_se},
                    {"pass", row.pass}});
  json cells = json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"T", c.T},
                     {"i", c.i},
                     {"j", c.j},
                     {"T_scaled_cov", c.t_scaled_cov},
                     {"T_scaled_cov_se", c.t_scaled_cov_se},
                     {"limit_gaussian", c.limit_gaussian},
                     {"limit_trispectrum", c.limit_trispectrum},
                     {"limit_total", c.limit_total},
                     {"sample_corr", c.sample_corr},
                     {"limit_corr", c.limit_corr}});
  json criteria = json::array();
  for (const auto& c : r.criteria)
    criteria.push_back(
        {{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold}, {"detail", c.detail}});
  return {{"config", config_to_json(r.config)}, {"rows", rows},         {"cells", cells},
          {"criteria", criteria},               {"warnings", r.warnings}, {"all_passed", r.all_passed()}};
}

ExperimentReport report_from_json(const json& j) {
  ExperimentReport r;
  try {
    r.config = config_from_json(j.at("config"));
    for (const auto& row : j.at("rows")) {
      ComponentRow x;
      x.T = row.at("T").get<int>();
      x.index = row.at("index").get<int>();
      x.k = row.at("k").get<int>();
      x.phi_id = row.at("phi_id").get<std::string>();
      x.sample_mean = num(row, "sample_mean");
      x.sample_mean_se = num(row, "sample_mean_se");
      if (!row.at("oracle_mean").is_null()) x.oracle_mean = row.at("oracle_mean").get<double>();
      x.limit_mean = num(row, "limit_mean");
      x.t_scaled_var = num(row, "T_scaled_var");
      x.t_scaled_var_se = num(row, "T_scaled_var_se");
      x.limit_var = num(row, "limit_var");
      x.standardized_mean = num(row, "standardized_mean");
      x.skewness = num(row, "skewness");
      x.excess_kurtosis = num(row, "excess_kurtosis");
      x.c3 = num(row, "c3");
      x.c4 = num(row, "c4");
      x.c3_se = num(row, "c3_se");
      x.c4_se = num(row, "c4_se");
      x.pass = row.at("pass").get<bool>();
      r.rows.push_back(std::move(x));
    }
    for (const auto& c : j.at("cells")) {
      CovarianceCell x;
      x.T = c.at("T").get<int>();
      x.i = c.at("i").get<int>();
      x.j = c.at("j").get<int>();
      x.t_scaled_cov = num(c, "T_scaled_cov");
      x.t_scaled_cov_se = num(c, "T_scaled_cov_se");
      x.limit_gaussian = num(c, "limit_gaussian");
      x.limit_trispectrum = num(c, "limit_trispectrum");
      x.limit_total = num(c, "limit_total");
      x.sample_corr = num(c, "sample_corr");
      x.limit_corr = num(c, "limit_corr");
      r.cells.push_back(x);
    }
    for (const auto& c : j.at("criteria"))
      r.criteria.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), num(c, "value"),
                            num(c, "threshold"), c.at("detail").get<std::string>()});
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed report: {}", e.what()));
  }
  return r;
}

std::vector<ExperimentReport> read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open summary '{}'", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  if (!j.contains("experiments")) throw ConfigError(fmt::format("{}: missing 'experiments'", path.string()));
  std::vector<ExperimentReport> out;
  for (const auto& e : j.at("experiments")) out.push_back(report_from_json(e));
  return out;
}

json RunManifest::to_json() const {
  json crit = json::array();
  for (const auto& c : criteria) crit.push_back({{"experiment", c.experiment}, {"name", c.name}, {"passed", c.passed}});
  return {{"tool", "taperspec"},
          {"tool_version", tool_version},
          {"config", config_echo},
          {"base_seeds", base_seeds},
          {"timestamps", {{"started", started}, {"finished", finished}}},
          {"outputs", outputs},
          {"criteria", crit},
          {"all_passed", all_passed}};
}

RunManifest report(std::span<const ExperimentReport> reports, const std::filesystem::path& out_dir) {
  if (reports.empty()) throw std::invalid_argument("report: need at least one experiment report");
  RunManifest manifest;
  manifest.started = timestamp();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(fmt::format("cannot create output directory '{}': {}", out_dir.string(), ec.message()));

  std::string conv =
      "experiment,T,k,phi_id,sample_mean,oracle_mean,limit_mean,T_scaled_cov,limit_cov,skew,exkurt,c3,c4,pass\n";
  std::string cov = "experiment,T,i,j,T_scaled_cov,T_scaled_cov_se,limit_gaussian,limit_trispectrum,limit_total,"
                    "sample_corr,limit_corr\n";
  json summary = {{"tool_version", kToolVersion}, {"experiments", json::array()}};
  manifest.config_echo = json::array();
  manifest.all_passed = true;
  for (const auto& r : reports) {
    const std::string name = csv_field(r.config.name);
    for (const auto& row : r.rows)
      conv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", name, row.T, row.k, csv_field(row.phi_id),
                          format_double(row.sample_mean), row.oracle_mean ? format_double(*row.oracle_mean) : "",
                          format_double(row.limit_mean), format_double(row.t_scaled_var),
                          format_double(row.limit_var), format_double(row.skewness),
                          format_double(row.excess_kurtosis), format_double(row.c3), format_double(row.c4),
                          row.pass ? "true" : "false");
    for (const auto& c : r.cells)
      cov += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", name, c.T, c.i, c.j, format_double(c.t_scaled_cov),
                         format_double(c.t_scaled_cov_se), format_double(c.limit_gaussian),
                         format_double(c.limit_trispectrum), format_double(c.limit_total),
                         format_double(c.sample_corr), format_double(c.limit_corr));
    summary["experiments"].push_back(report_to_json(r));
    manifest.config_echo.push_back(config_to_json(r.config));
    manifest.base_seeds.push_back(r.config.base_seed);
    for (const auto& c : r.criteria) manifest.criteria.push_back({r.config.name, c.name, c.passed});
    manifest.all_passed = manifest.all_passed && r.all_passed();
  }
  summary["all_passed"] = manifest.all_passed;

  write_file(out_dir / "convergence.csv", conv);
  write_file(out_dir / "covariance.csv", cov);
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  manifest.outputs = {"convergence.csv", "covariance.csv", "summary.json", "manifest.json"};
  manifest.finished = timestamp();
  write_file(out_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

}  // namespace taperspec
