#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "taperspec/asymptotics.hpp"
#include "taperspec/config.hpp"
#include "taperspec/errors.hpp"
#include "taperspec/functionals.hpp"
#include "taperspec/montecarlo.hpp"
#include "taperspec/oracle.hpp"
#include "taperspec/periodogram.hpp"
#include "taperspec/random.hpp"
#include "taperspec/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace taperspec;

namespace {

struct Globals {
  std::string out_dir;
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

struct ModelFlags {
  ModelSpec spec;
  std::string taper = "rectangular";
  int T = 64;

  void attach(CLI::App* app) {
    app->add_option("--model", spec.family, "white | ar1 | ma1 | linear")->capture_default_str();
    app->add_option("--sigma2", spec.sigma2, "innovation variance")->capture_default_str();
    app->add_option("--rho", spec.rho, "ar1 coefficient")->capture_default_str();
    app->add_option("--theta", spec.theta, "ma1 coefficient")->capture_default_str();
    app->add_option("--ar", spec.ar, "linear model AR coefficients");
    app->add_option("--ma", spec.ma, "linear model MA coefficients");
    app->add_option("--innovations", spec.innovations, "gaussian | exponential | twopoint")->capture_default_str();
    app->add_option("--taper", taper, "rectangular | cosine | bartlett")->capture_default_str();
    app->add_option("--T", T, "half-window; the sample is Y(-T..T)")->capture_default_str()->check(CLI::PositiveNumber);
  }
};

// Writes to <out-dir>/<name> when --out-dir is given, otherwise to stdout.
void emit(const Globals& g, const std::string& name, const std::string& content) {
  if (g.out_dir.empty()) {
    std::cout << content;
    return;
  }
  fs::create_directories(g.out_dir);
  const fs::path path = fs::path(g.out_dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
}

SamplePath read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open input '{}'", path));
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream cell(line.substr(0, line.find(',')));
    double v;
    if (!(cell >> v)) {
      if (values.empty()) continue;  // header
      throw Error(fmt::format("{}: not a number: '{}'", path, line));
    }
    values.push_back(v);
  }
  if (values.size() < 3 || values.size() % 2 == 0)
    throw Error(fmt::format("{}: need an odd number (>= 3) of observations, got {}", path, values.size()));
  SamplePath p;
  p.T = static_cast<int>(values.size() / 2);
  p.values = std::move(values);
  return p;
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

int run_periodogram(const Globals& g, const ModelFlags& mf, const std::string& input, int grid_n,
                    const std::string& method) {
  const Taper taper = Taper::from_name(mf.taper);
  SamplePath path = input.empty() ? simulate(mf.spec.build(), mf.T, g.seed) : read_series(input);
  const FrequencyGrid grid(grid_n > 0 ? grid_n : 2 * (2 * path.T + 1));
  const auto m = method == "direct" ? TransformMethod::direct
                 : method == "fft"  ? TransformMethod::fft
                                    : TransformMethod::automatic;
  const auto pg = periodogram_grid(path, taper, grid, m);
  std::string out = "lambda,re_d,im_d,I\n";
  for (int j = 0; j < grid.size(); ++j)
    out += fmt::format("{},{},{},{}\n", format_double(grid[j]), format_double(pg.d[j].real()),
                       format_double(pg.d[j].imag()), format_double(pg.I[j]));
  emit(g, "periodogram.csv", out);
  return 0;
}

int run_estimate(const Globals& g, const ModelFlags& mf, std::vector<int> ks, std::vector<std::string> phis,
                 int grid_n, int replicates) {
  if (ks.empty()) ks = {1};
  if (phis.empty()) phis = {"one"};
  if (phis.size() == 1 && ks.size() > 1) phis.resize(ks.size(), phis[0]);
  if (ks.size() == 1 && phis.size() > 1) ks.resize(phis.size(), ks[0]);
  if (ks.size() != phis.size()) throw std::invalid_argument("--k and --phi lists must have matching lengths");
  std::vector<WeightFunction> weights;
  for (const auto& p : phis) weights.push_back(WeightFunction::parse(p));
  const Taper taper = Taper::from_name(mf.taper);
  const PathSampler sampler(mf.spec.build(), mf.T);
  const FrequencyGrid grid(grid_n > 0 ? grid_n : 2 * (2 * mf.T + 1));
  std::string out = "replicate,k,phi,value\n";
  for (int r = 0; r < replicates; ++r) {
    const auto path = sampler.draw(derive_seed(g.seed, static_cast<std::uint64_t>(mf.T), static_cast<std::uint64_t>(r)));
    const auto est = estimate_batch(periodogram_grid(path, taper, grid), weights, ks);
    for (std::size_t i = 0; i < est.size(); ++i)
      out += fmt::format("{},{},{},{}\n", r, ks[i], phis[i], format_double(est[i].value.real()));
  }
  emit(g, "estimate.csv", out);
  return 0;
}

int run_asymptotics(const Globals& g, const ModelFlags& mf, std::vector<int> ks, std::vector<std::string> phis,
                    double p, double q) {
  if (ks.empty()) ks = {1};
  if (phis.empty()) phis = {"one"};
  if (phis.size() == 1 && ks.size() > 1) phis.resize(ks.size(), phis[0]);
  if (ks.size() == 1 && phis.size() > 1) ks.resize(phis.size(), ks[0]);
  if (ks.size() != phis.size()) throw std::invalid_argument("--k and --phi lists must have matching lengths");
  const SpectralModel model = mf.spec.build();
  const Taper taper = Taper::from_name(mf.taper);
  std::vector<WeightFunction> weights;
  for (const auto& s : phis) weights.push_back(WeightFunction::parse(s));

  json means = json::array();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    json m = complex_json(limit_mean(model, weights[i], ks[i]).value);
    m["k"] = ks[i];
    m["phi"] = phis[i];
    means.push_back(m);
  }
  const auto clt = clt_covariance_matrix(model, weights, ks, taper);
  auto matrix = [](const Eigen::MatrixXcd& a, bool imag) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(imag ? a(i, j).imag() : a(i, j).real());
      rows.push_back(row);
    }
    return rows;
  };
  json checks = json::array();
  const int kmin = *std::min_element(ks.begin(), ks.end());
  const int kmax = *std::max_element(ks.begin(), ks.end());
  for (auto which : {ExponentRelation::thm2_mean, ExponentRelation::thm2_cov, ExponentRelation::thm2_cum_equal,
                     ExponentRelation::thm2_cum_mixed, ExponentRelation::thm4_clt, ExponentRelation::thm6_clt}) {
    ExponentCondition cond{p, q, kmax, kmin, ks, which};
    const auto r = check_exponents(cond);
    checks.push_back({{"relation", to_string(which)},
                      {"satisfied", r.satisfied},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"diagnostic", r.diagnostic}});
  }
  json out = {{"model", model.describe()},
              {"taper", taper.name()},
              {"mean_limit", means},
              {"cov_matrix", {{"re", matrix(clt.full, false)}, {"im", matrix(clt.full, true)}}},
              {"cov_matrix_gaussian", {{"re", matrix(clt.gaussian, false)}, {"im", matrix(clt.gaussian, true)}}},
              {"e_h", e_of_h(taper)},
              {"exponent_checks", checks}};
  emit(g, "asymptotics.json", out.dump(2) + "\n");
  return 0;
}

long double_factorial(int n) {
  long r = 1;
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

int run_oracle(const Globals& g, const ModelFlags& mf, int k, int l, const std::string& phi, int grid_n) {
  const SpectralModel model = mf.spec.build();
  const Taper taper = Taper::from_name(mf.taper);
  const WeightFunction w = WeightFunction::parse(phi);
  const FrequencyGrid grid(grid_n > 0 ? grid_n : 2 * (2 * mf.T + 1));
  json out = {{"model", model.describe()}, {"taper", taper.name()}, {"T", mf.T}, {"k", k}, {"l", l}, {"phi", phi}};
  out["exact_mean"] = complex_json(exact_mean_J(model, taper, mf.T, w, k, grid));
  if (k + l <= 4) {
    const auto c = exact_cov_J(model, taper, mf.T, w, k, w, l, grid);
    out["exact_cov_re"] = c.real();
    out["exact_cov_im"] = c.imag();
  } else {
    out["exact_cov_re"] = nullptr;
    out["exact_cov_im"] = nullptr;
  }
  out["pairing_counts"] = {
      {"pair_partitions_2k", enumerate_pair_partitions(k).size()},
      {"double_factorial_2k_minus_1", double_factorial(2 * k - 1)},
      {"indecomposable_k_l", k + l <= 6 ? json(indecomposable_pairings(k, l).size()) : json(nullptr)}};
  emit(g, "oracle.json", out.dump(2) + "\n");
  return 0;
}

int finish_reports(const Globals& g, const std::vector<ExperimentReport>& reports) {
  const fs::path dir = g.out_dir.empty() ? fs::path("taperspec-out") : fs::path(g.out_dir);
  const auto manifest = report(reports, dir);
  for (const auto& r : reports) {
    for (const auto& c : r.criteria)
      fmt::print("{} {} :: {} (value {:.4g}, threshold {:.4g})\n", c.passed ? "PASS" : "FAIL", r.config.name, c.name,
                 c.value, c.threshold);
    for (const auto& w : r.warnings) fmt::print("WARN {} :: {}\n", r.config.name, w);
  }
  fmt::print("wrote {} files to {}\n", manifest.outputs.size(), dir.string());
  return manifest.all_passed ? 0 : 1;
}

int run_mc(const Globals& g) {
  if (g.config.empty()) throw ConfigError("mc: --config is required");
  auto configs = parse_suite(g.config);
  std::vector<ExperimentReport> reports;
  for (auto& c : configs) {
    if (g.seed_given) c.base_seed = g.seed;
    reports.push_back(run_experiment(c));
  }
  return finish_reports(g, reports);
}

int run_report(const Globals& g, const std::vector<std::string>& inputs) {
  std::vector<ExperimentReport> reports;
  for (const auto& in : inputs)
    for (auto& r : read_summary(in)) reports.push_back(std::move(r));
  return finish_reports(g, reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tapered periodogram functionals: estimation, limits, exact oracles and Monte Carlo checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out-dir", g.out_dir, "output directory (default: stdout for single tables)");
  app.add_option("--config", g.config, "JSON experiment config or suite");
  auto* seed_opt = app.add_option("--seed", g.seed, "base seed");

  ModelFlags mf;
  auto* pg = app.add_subcommand("periodogram", "tapered DFT and periodogram on a frequency grid");
  mf.attach(pg);
  std::string input;
  std::string method = "auto";
  int grid_n = 0;
  pg->add_option("--input", input, "one-column CSV of 2T+1 observations (default: simulate from the model)");
  pg->add_option("--grid-n", grid_n, "grid size (default 2(2T+1))");
  pg->add_option("--method", method, "auto | fft | direct")->check(CLI::IsMember({"auto", "fft", "direct"}));

  auto* est = app.add_subcommand("estimate", "J_{k,T}(phi) on simulated replicates");
  mf.attach(est);
  std::vector<int> ks;
  std::vector<std::string> phis;
  int replicates = 1;
  est->add_option("--k", ks, "periodogram powers");
  est->add_option("--phi", phis, "weights: one | const:c | cos:j | band:a,b");
  est->add_option("--grid-n", grid_n, "grid size (default 2(2T+1))");
  est->add_option("--replicates", replicates, "number of replicates")->check(CLI::PositiveNumber);

  auto* asy = app.add_subcommand("asymptotics", "limit means, CLT covariance matrix and exponent checks");
  mf.attach(asy);
  double p = std::numeric_limits<double>::infinity();
  double q = 1.0;
  asy->add_option("--k", ks, "periodogram powers");
  asy->add_option("--phi", phis, "weights");
  asy->add_option("--p", p, "integrability exponent of f (inf allowed)");
  asy->add_option("--q", q, "integrability exponent of phi (inf allowed)");

  auto* orc = app.add_subcommand("oracle", "exact finite-T moments for Gaussian models");
  mf.attach(orc);
  int k = 1;
  int l = 1;
  std::string phi = "one";
  orc->add_option("--k", k, "power of the first functional")->check(CLI::Range(1, 4));
  orc->add_option("--l", l, "power of the second functional")->check(CLI::Range(1, 4));
  orc->add_option("--phi", phi, "weight");
  orc->add_option("--grid-n", grid_n, "grid size (default 2(2T+1))");

  auto* mc = app.add_subcommand("mc", "run Monte Carlo experiments from --config");
  auto* rep = app.add_subcommand("report", "merge summary.json files into one report");
  std::vector<std::string> inputs;
  rep->add_option("inputs", inputs, "summary.json files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (*pg) return run_periodogram(g, mf, input, grid_n, method);
    if (*est) return run_estimate(g, mf, ks, phis, grid_n, replicates);
    if (*asy) return run_asymptotics(g, mf, ks, phis, p, q);
    if (*orc) return run_oracle(g, mf, k, l, phi, grid_n);
    if (*mc) return run_mc(g);
    if (*rep) return run_report(g, inputs);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 2;
}
