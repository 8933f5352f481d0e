#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "taperspec/config.hpp"
#include "taperspec/errors.hpp"
#include "taperspec/montecarlo.hpp"
#include "taperspec/report.hpp"

using namespace taperspec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("taperspec-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int status;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string("\"") + TAPERSPEC_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int raw = ::pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string message_of(const fs::path& path) {
  try {
    parse_config(path);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

ExperimentReport small_report() {
  ExperimentConfig c;
  c.name = "small";
  c.T_sweep = {16, 32};
  c.R = 200;
  c.base_seed = 77;
  return run_experiment(c);
}

}  // namespace

TEST_CASE("parse_config fills defaults") {
  const auto dir = scratch("defaults");
  const auto c = parse_config(write(dir / "c.json", R"({"model": {"family": "white"}, "T_sweep": [16]})"));
  CHECK(c.R == 1000);
  CHECK(c.taper == "rectangular");
  CHECK(c.kind == ExperimentKind::convergence);
  CHECK(c.functionals.size() == 1);
  CHECK(c.functionals[0].k == 1);
  CHECK(c.functionals[0].phi == "one");
  CHECK_FALSE(c.grid_N.has_value());
  CHECK(c.centering == Centering::oracle);
}

TEST_CASE("parse_config rejects bad input with a field name") {
  const auto dir = scratch("bad");
  CHECK(message_of(write(dir / "r.json", R"({"model": {"family": "white"}, "T_sweep": [16], "R": 50})"))
            .find("R ≥ 100") != std::string::npos);
  CHECK(message_of(write(dir / "k.json", R"({"model": {"family": "white"}, "T_sweep": [16], "taperr": "cosine"})"))
            .find("taperr") != std::string::npos);
  CHECK(message_of(write(dir / "m.json", R"({"model": {"family": "white", "rh": 0.5}, "T_sweep": [16]})"))
            .find("model.rh") != std::string::npos);
  CHECK(message_of(write(dir / "t.json", R"({"model": {"family": "white"}})")).find("T_sweep") != std::string::npos);
  CHECK(message_of(write(dir / "s.json", R"({"model": {"family": "white"}, "T_sweep": [16], "R": "many"})"))
            .find("R:") != std::string::npos);
  CHECK(message_of(write(dir / "j.json", "{not json")).find("invalid JSON") != std::string::npos);
  CHECK(message_of(dir / "missing.json").find("cannot open") != std::string::npos);
  CHECK(message_of(write(dir / "i.json",
                         R"({"model": {"family": "ar1", "rho": 0.5, "innovations": "exponential"}, "T_sweep": [16]})"))
            .find("linear") != std::string::npos);
}

TEST_CASE("serialize round trip") {
  const auto dir = scratch("roundtrip");
  ExperimentConfig c;
  c.name = "rt";
  c.kind = ExperimentKind::f4_discrimination;
  c.model = ModelSpec{"linear", 2.0, 0.0, 0.0, {0.5, -0.2}, {0.3}, "twopoint"};
  c.taper = "bartlett";
  c.functionals = {{1, "cos:2"}, {3, "band:0.5,1.5"}};
  c.T_sweep = {8, 16, 33};
  c.R = 123;
  c.base_seed = 0xfedcba9876543210ULL;
  c.grid_N = 101;
  c.skew_max = 0.1 / 3.0;
  c.centering = Centering::sample;
  const auto back = parse_config(write(dir / "c.json", serialize(c)));
  CHECK(back == c);
  CHECK(serialize(back) == serialize(c));

  write(dir / "suite.json", nlohmann::json{{"experiments", {config_to_json(c), config_to_json(c)}}}.dump());
  const auto suite = parse_suite(dir / "suite.json");
  REQUIRE(suite.size() == 2);
  CHECK(suite[1] == c);
}

TEST_CASE("report writes tables and a manifest") {
  CHECK_THROWS_AS(report({}, scratch("empty")), std::invalid_argument);

  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const auto reports = std::vector<ExperimentReport>{small_report()};
  const auto a = scratch("a");
  const auto manifest = report(reports, a);
  for (const auto& f : manifest.outputs) CHECK(fs::exists(a / f));
  CHECK(manifest.started == "2023-11-14T22:13:20Z");

  const auto conv = slurp(a / "convergence.csv");
  CHECK(conv.rfind("experiment,T,k,phi_id,sample_mean,oracle_mean,limit_mean,T_scaled_cov,limit_cov,skew,exkurt,c3,"
                   "c4,pass\n",
                   0) == 0);
  CHECK(std::count(conv.begin(), conv.end(), '\n') == 3);

  const auto mj = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(mj.at("tool_version") == kToolVersion);
  CHECK(mj.at("base_seeds")[0] == 77);
  CHECK(mj.at("config")[0].at("name") == "small");

  const auto b = scratch("b");
  report(reports, b);
  for (const auto& f : manifest.outputs) CHECK(slurp(a / f) == slurp(b / f));

  const auto back = read_summary(a / "summary.json");
  REQUIRE(back.size() == 1);
  const auto c = scratch("c");
  report(back, c);
  for (const auto& f : manifest.outputs) CHECK(slurp(a / f) == slurp(c / f));
  ::unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("cli: table subcommands") {
  auto r = cli("--seed 3 periodogram --T 8");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("lambda,re_d,im_d,I\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 35);

  const auto dir = scratch("series");
  write(dir / "y.csv", "1\n0\n0\n");
  r = cli("periodogram --taper rectangular --method direct --grid-n 4 --input \"" + (dir / "y.csv").string() + "\"");
  REQUIRE(r.status == 0);
  // single spike at t = -1: |d|^2 = 1 everywhere, I = 1 / (2 pi * 3)
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    const double I = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(I == doctest::Approx(1.0 / (6.0 * M_PI)));
  }

  r = cli("estimate --T 16 --k 1 --k 2 --phi one --replicates 3");
  CHECK(r.status == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);

  r = cli("asymptotics --model ar1 --rho 0.5 --taper cosine --k 1 --phi one");
  REQUIRE(r.status == 0);
  const auto a = nlohmann::json::parse(r.out);
  CHECK(a.at("e_h").get<double>() == doctest::Approx(0.75));
  CHECK(a.at("mean_limit")[0].at("re").get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-8));

  r = cli("oracle --T 8 --taper cosine --k 2 --l 1");
  REQUIRE(r.status == 0);
  const auto o = nlohmann::json::parse(r.out);
  CHECK(o.at("pairing_counts").at("pair_partitions_2k") == 3);
  CHECK(o.at("pairing_counts").at("indecomposable_k_l") == 12);
}

TEST_CASE("cli: errors exit with status 2") {
  CHECK(cli("periodogram --T 0").status == 2);
  CHECK(cli("estimate --phi nope").status == 2);
  CHECK(cli("periodogram --model garch").status == 2);
  CHECK(cli("mc").status == 2);
  CHECK(cli("").status == 2);
  const auto dir = scratch("cli-bad");
  const auto r = cli("--config \"" + write(dir / "c.json", R"({"model": {"family": "white"}, "T_sweep": [16], "R": 50})")
                                         .string() +
                     "\" mc");
  CHECK(r.status == 2);
  CHECK(r.out.find("R ≥ 100") != std::string::npos);
}

TEST_CASE("cli: mc and report") {
  const auto dir = scratch("cli-mc");
  write(dir / "c.json", R"({"name": "w", "model": {"family": "white"}, "T_sweep": [64], "R": 400})");
  auto r = cli("--config \"" + (dir / "c.json").string() + "\" --seed 11 --out-dir \"" + (dir / "out").string() +
               "\" mc");
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS w :: T=64 J0(k=1,one) T-var") != std::string::npos);
  for (const char* f : {"convergence.csv", "covariance.csv", "summary.json", "manifest.json"})
    CHECK(fs::exists(dir / "out" / f));
  CHECK(nlohmann::json::parse(slurp(dir / "out" / "manifest.json")).at("base_seeds")[0] == 11);

  r = cli("--out-dir \"" + (dir / "merged").string() + "\" report \"" + (dir / "out" / "summary.json").string() +
          "\" \"" + (dir / "out" / "summary.json").string() + "\"");
  CHECK(r.status == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "merged" / "summary.json"));
  CHECK(summary.at("experiments").size() == 2);

  // an impossible tolerance produces a failing criterion and exit status 1
  write(dir / "f.json",
        R"({"name": "f", "model": {"family": "white"}, "T_sweep": [64], "R": 400, "cov_rel_tol": 1e-9})");
  r = cli("--config \"" + (dir / "f.json").string() + "\" --out-dir \"" + (dir / "fout").string() + "\" mc");
  CHECK(r.status == 1);
  CHECK(r.out.find("FAIL f ::") != std::string::npos);
}
