#include <doctest.h>

#include <cmath>

#include "taperspec/errors.hpp"
#include "taperspec/montecarlo.hpp"
#include "taperspec/functionals.hpp"
#include "taperspec/periodogram.hpp"
#include "taperspec/tapers.hpp"
#include "taperspec/random.hpp"
#include "taperspec/report.hpp"

using namespace taperspec;

namespace {

ExperimentConfig white_config() {
  ExperimentConfig c;
  c.name = "white";
  c.model.family = "white";
  c.T_sweep = {256};
  c.R = 5000;
  c.base_seed = 101;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  auto c = white_config();
  c.R = 50;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("R ≥ 100") != std::string::npos);
  }
  c = white_config();
  c.T_sweep = {64, 32};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.T_sweep = {};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = white_config();
  c.functionals = {{0, "one"}};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.functionals = {{1, "bogus"}};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = white_config();
  c.taper = "hann";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = white_config();
  CHECK(c.grid_size(10) == 42);
  c.grid_N = 64;
  CHECK(c.grid_size(10) == 64);
  ModelSpec m;
  m.family = "garch";
  CHECK_THROWS_AS(m.build(), ConfigError);
}

TEST_CASE("replicates use replicate-indexed seeds") {
  auto c = white_config();
  c.T_sweep = {16};
  c.R = 100;
  c.functionals = {{1, "one"}, {2, "cos:1"}};
  const auto s = simulate_functionals(c, 16);
  CHECK(s.m == 2);
  CHECK(s.values.size() == 200u);
  const PathSampler sampler(c.model.build(), 16);
  for (int r : {0, 37, 99}) {
    const auto p = sampler.draw(derive_seed(c.base_seed, 16, r));
    const auto pg = periodogram_grid(p, Taper::rectangular(), FrequencyGrid::oversampled(16));
    CHECK(s.component(0)[r] == doctest::Approx(estimate(pg, WeightFunction::one(), 1).value.real()).epsilon(1e-12));
    CHECK(s.component(1)[r] == doctest::Approx(estimate(pg, WeightFunction::cosine(1), 2).value.real()).epsilon(1e-12));
  }
}

TEST_CASE("identical output for any worker count") {
  auto c = white_config();
  c.model = ModelSpec{"ar1", 1.0, 0.5};
  c.T_sweep = {16, 32};
  c.R = 300;
  c.kind = ExperimentKind::normality;
  c.functionals = {{1, "one"}, {2, "one"}};
  const auto a = run_experiment(c, RunOptions{1});
  const auto b = run_experiment(c, RunOptions{3});
  const auto d = run_experiment(c, RunOptions{7});
  CHECK(report_to_json(a).dump() == report_to_json(b).dump());
  CHECK(report_to_json(a).dump() == report_to_json(d).dump());
  CHECK(simulate_functionals(c, 16, RunOptions{1}).values == simulate_functionals(c, 16, RunOptions{4}).values);
}

TEST_CASE("convergence: white noise T var within 10% of the limit") {
  const auto r = run_convergence(white_config());
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].limit_var == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(r.rows[0].t_scaled_var - 1.0) < 0.1);
  const auto* c = r.find("T=256 J0(k=1,one) T-var");
  REQUIRE(c != nullptr);
  CHECK(c->passed);
  CHECK(r.all_passed());
  CHECK(r.rows[0].oracle_mean.has_value());
}

TEST_CASE("convergence: ar1 k=2 sample means within 3 SE of the exact mean") {
  ExperimentConfig c;
  c.name = "ar1-k2";
  c.model = ModelSpec{"ar1", 1.0, 0.5};
  c.taper = "cosine";
  c.functionals = {{2, "one"}};
  c.T_sweep = {16, 32, 64};
  c.R = 2000;
  c.base_seed = 5;
  const auto r = run_convergence(c);
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) {
    REQUIRE(row.oracle_mean.has_value());
    CHECK(std::abs(row.sample_mean - *row.oracle_mean) < 3.0 * row.sample_mean_se);
  }
  CHECK(r.cells.size() == 3);
  for (const auto& cell : r.cells) CHECK(cell.sample_corr == doctest::Approx(1.0));
}

TEST_CASE("convergence: insufficient R is flagged") {
  ExperimentConfig c;
  c.model = ModelSpec{"ar1", 1.0, 0.5};
  c.functionals = {{2, "one"}};
  c.T_sweep = {16};
  c.R = 100;
  const auto r = run_convergence(c);
  REQUIRE_FALSE(r.warnings.empty());
  CHECK(r.warnings[0].find("too small") != std::string::npos);
}

TEST_CASE("normality: white noise k=1 matches the scaled chi-square shape") {
  // rectangular taper: J = (1/n) sum Y_t^2 with n = 2T + 1, so skew = sqrt(8/n), exkurt = 12/n
  auto c = white_config();
  c.kind = ExperimentKind::normality;
  c.T_sweep = {512};
  const auto r = run_normality(c);
  const auto& row = r.rows[0];
  const double n = 2 * 512 + 1;
  CHECK(std::abs(row.c3 - std::sqrt(8.0 / n)) < 4.0 * row.c3_se);
  CHECK(std::abs(row.c4 - 12.0 / n) < 4.0 * row.c4_se);
  CHECK(r.find("T=512 J0(k=1,one) skewness") != nullptr);
  CHECK(r.find("T=512 J0(k=1,one) excess_kurtosis")->passed);
}

TEST_CASE("normality: mixed powers report correlations and decay fits") {
  ExperimentConfig c;
  c.kind = ExperimentKind::normality;
  c.model = ModelSpec{"white"};
  c.functionals = {{1, "one"}, {2, "one"}};
  c.T_sweep = {32, 64, 128};
  c.R = 2000;
  c.base_seed = 9;
  const auto r = run_normality(c);
  CHECK(r.rows.size() == 6);
  CHECK(r.cells.size() == 9);
  const auto* corr = r.find("T=128 corr(0,1)");
  REQUIRE(corr != nullptr);
  CHECK(corr->passed);
  CHECK(r.find("J0(k=1,one) c3 decay") != nullptr);
  CHECK(r.find("J1(k=2,one) c4 decay") != nullptr);
  // with constant f both limits are multiples of one Gaussian variable
  for (const auto& cell : r.cells) CHECK(cell.limit_corr == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("f4 discrimination") {
  ExperimentConfig c;
  c.kind = ExperimentKind::f4_discrimination;
  c.T_sweep = {256};
  c.R = 10000;
  c.model = ModelSpec{"linear", 1.0, 0.0, 0.0, {}, {}, "exponential"};
  c.base_seed = 3;
  const auto e = run_f4_discrimination(c);
  const auto* crit = e.find("T=256 cov(0,0) f4 discrimination");
  REQUIRE(crit != nullptr);
  CHECK(crit->passed);
  CHECK(e.cells[0].limit_trispectrum == doctest::Approx(3.0).epsilon(1e-8));

  c.model.innovations = "twopoint";
  const auto t = run_f4_discrimination(c);
  CHECK(t.find("T=256 cov(0,0) f4 discrimination")->passed);
  CHECK(t.cells[0].limit_trispectrum == doctest::Approx(-1.0).epsilon(1e-8));

  c.model = ModelSpec{"white"};
  const auto g = run_f4_discrimination(c);
  const auto* same = g.find("T=256 cov(0,0) consistency");
  REQUIRE(same != nullptr);
  CHECK(same->passed);
  CHECK(g.cells[0].limit_trispectrum == 0.0);
}

TEST_CASE("linear models through the convergence pipeline have no oracle mean") {
  ExperimentConfig c;
  c.model = ModelSpec{"linear", 1.0, 0.0, 0.0, {0.5}, {}, "exponential"};
  c.T_sweep = {32};
  c.R = 200;
  const auto r = run_convergence(c);
  CHECK_FALSE(r.rows[0].oracle_mean.has_value());
  CHECK(r.find("T=32 J0(k=1,one) mean") == nullptr);
}
