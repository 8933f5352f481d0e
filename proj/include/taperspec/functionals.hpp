#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taperspec/periodogram.hpp"

namespace taperspec {

enum class WeightKind { constant, cosine_poly, indicator_band, custom };

/// Weight phi on (-pi, pi]. Built-ins are real and even:
///   constant:       phi = c                         (id "one" for c = 1)
///   cosine_poly:    phi = sum_j a_j cos(j lambda)   (id "cos:j" for a single term)
///   indicator_band: phi = 1{a <= |lambda| <= b}     (id "band:a,b")
/// Band indicators are discontinuous and so fall outside the bounded and
/// continuous weight class the limit theory assumes; estimates built from
/// them carry a warning flag.
class WeightFunction {
 public:
  using Fn = std::function<std::complex<double>(double)>;

  static WeightFunction constant(double c);
  static WeightFunction one() { return constant(1.0); }
  static WeightFunction cosine(int j);
  static WeightFunction cosine_poly(std::vector<double> coefficients);
  static WeightFunction band(double a, double b);
  static WeightFunction custom(Fn fn, std::string id, bool real_valued, bool continuous = true,
                               std::optional<double> declared_q = std::nullopt);

  /// Parses "one" | "const:c" | "cos:j" | "band:a,b".
  static WeightFunction parse(std::string_view spec);

  std::complex<double> operator()(double lambda) const { return fn_(lambda); }

  WeightKind kind() const noexcept { return kind_; }
  const std::string& id() const noexcept { return id_; }
  bool real_valued() const noexcept { return real_; }
  bool continuous() const noexcept { return continuous_; }
  /// Integrability exponent q with phi in L_q; built-ins are bounded (q = inf).
  std::optional<double> declared_q() const noexcept { return declared_q_; }

 private:
  WeightFunction(WeightKind kind, std::string id, Fn fn, bool real, bool continuous,
                 std::optional<double> q)
      : kind_(kind), id_(std::move(id)), fn_(std::move(fn)), real_(real), continuous_(continuous),
        declared_q_(q) {}

  WeightKind kind_;
  std::string id_;
  Fn fn_;
  bool real_;
  bool continuous_;
  std::optional<double> declared_q_;
};

enum class Provenance { empirical, oracle, asymptotic };

struct FunctionalEstimate {
  std::complex<double> value;
  int k = 0;
  int T = 0;
  int grid_N = 0;
  Provenance provenance = Provenance::empirical;
  /// Set when phi is discontinuous.
  bool weight_warning = false;
};

/// J_{k,T}(phi) = sum_j (2 pi / N) phi(lambda_j) I_T(lambda_j)^k.
FunctionalEstimate estimate(const PeriodogramGrid& pg, const WeightFunction& phi, int k);
FunctionalEstimate estimate(const SamplePath& path, const Taper& taper, const WeightFunction& phi, int k,
                            const FrequencyGrid& grid);

/// Component i is J_{ks[i],T}(phis[i]); one periodogram serves all components.
std::vector<FunctionalEstimate> estimate_batch(const PeriodogramGrid& pg, std::span<const WeightFunction> phis,
                                               std::span<const int> ks);
std::vector<FunctionalEstimate> estimate_batch(const SamplePath& path, const Taper& taper,
                                               std::span<const WeightFunction> phis, std::span<const int> ks,
                                               const FrequencyGrid& grid);

}  // namespace taperspec
