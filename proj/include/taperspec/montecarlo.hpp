#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taperspec/functionals.hpp"
#include "taperspec/models.hpp"
#include "taperspec/tapers.hpp"

namespace taperspec {

enum class ExperimentKind { convergence, normality, f4_discrimination };
enum class Centering { oracle, sample };

/// Serializable model description; build() produces the SpectralModel.
/// family: white | ar1 | ma1 | linear. `rho` applies to ar1, `theta` to ma1,
/// `ar`/`ma`/`innovations` to linear.
struct ModelSpec {
  std::string family = "white";
  double sigma2 = 1.0;
  double rho = 0.0;
  double theta = 0.0;
  std::vector<double> ar;
  std::vector<double> ma;
  std::string innovations = "gaussian";  ///< gaussian | exponential | twopoint

  SpectralModel build() const;
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct FunctionalSpec {
  int k = 1;
  std::string phi = "one";

  friend bool operator==(const FunctionalSpec&, const FunctionalSpec&) = default;
};

/// One Monte Carlo experiment. Covariances are scaled by the half-window T
/// throughout, never by n = 2T + 1; the two differ by a factor close to 2.
struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::convergence;
  ModelSpec model;
  std::string taper = "rectangular";
  std::vector<FunctionalSpec> functionals{FunctionalSpec{}};
  std::vector<int> T_sweep;
  int R = 1000;
  std::uint64_t base_seed = 0;
  std::optional<int> grid_N;  ///< default 2 (2T + 1) per T
  double skew_max = 0.15;
  double exkurt_max = 0.3;
  double corr_tol = 0.1;
  double cov_rel_tol = 0.1;
  double decay_slope_max = -0.3;
  Centering centering = Centering::oracle;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  int grid_size(int T) const { return grid_N.value_or(2 * (2 * T + 1)); }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Execution knobs that affect speed only, never results.
struct RunOptions {
  int threads = 0;  ///< 0: TAPERSPEC_THREADS, else hardware concurrency
};

int resolve_threads(const RunOptions& options);

/// Replicated functionals at one T; values[i * R + r] is component i of
/// replicate r. Replicate r uses seed derive_seed(base_seed, T, r).
struct ReplicateSample {
  int T = 0;
  int R = 0;
  int m = 0;
  std::vector<double> values;

  std::span<const double> component(int i) const {
    return std::span<const double>(values).subspan(static_cast<std::size_t>(i) * R, R);
  }
};

ReplicateSample simulate_functionals(const ExperimentConfig& config, int T, const RunOptions& options = {});

struct ComponentRow {
  int T = 0;
  int index = 0;
  int k = 1;
  std::string phi_id;
  double sample_mean = 0.0;
  double sample_mean_se = 0.0;
  std::optional<double> oracle_mean;
  double limit_mean = 0.0;
  double t_scaled_var = 0.0;
  double t_scaled_var_se = 0.0;
  double limit_var = 0.0;
  double standardized_mean = 0.0;  ///< mean of sqrt(T)(J - center)/sqrt(limit_var)
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double c3_se = 0.0;
  double c4_se = 0.0;
  bool pass = true;
};

struct CovarianceCell {
  int T = 0;
  int i = 0;
  int j = 0;
  double t_scaled_cov = 0.0;
  double t_scaled_cov_se = 0.0;
  double limit_gaussian = 0.0;
  double limit_trispectrum = 0.0;
  double limit_total = 0.0;
  double sample_corr = 0.0;
  double limit_corr = 0.0;
};

struct Criterion {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ComponentRow> rows;
  std::vector<CovarianceCell> cells;
  std::vector<Criterion> criteria;
  std::vector<std::string> warnings;

  bool all_passed() const;
  const Criterion* find(std::string_view name) const;
};

/// Means, T-scaled covariances and their limits along the sweep. Criteria:
/// sample mean within 4 SE of the exact mean (Gaussian models) at every T,
/// and T var within cov_rel_tol of the limit at the largest T.
ExperimentReport run_convergence(const ExperimentConfig& config, const RunOptions& options = {});

/// Moment-based normality at the largest T (skewness, excess kurtosis,
/// pairwise correlations against the limit matrix) and decay of the
/// standardized third and fourth cumulants along the sweep.
ExperimentReport run_normality(const ExperimentConfig& config, const RunOptions& options = {});

/// Compares T cov with the Gaussian-only and full limit covariances.
ExperimentReport run_f4_discrimination(const ExperimentConfig& config, const RunOptions& options = {});

/// Dispatches on config.kind.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

std::string to_string(ExperimentKind kind);
std::string to_string(Centering centering);

}  // namespace taperspec
