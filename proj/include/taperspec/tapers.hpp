#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace taperspec {

enum class TaperKind { rectangular, cosine, bartlett, custom };

/// Data taper h on [-1, 1]: even, nonnegative, bounded variation, zero
/// outside the unit interval. Samples are taken at h(t/T), t = -T..T.
class Taper {
 public:
  static Taper rectangular();
  /// h(t) = cos(pi t / 2).
  static Taper cosine();
  /// h(t) = 1 - |t|.
  static Taper bartlett();

  /// Wraps a user callable. Support is enforced by the wrapper; evenness,
  /// nonnegativity and a nonzero L2 norm are checked on a sampling grid.
  /// Throws std::invalid_argument when `declared_even` is false or a check
  /// fails.
  static Taper custom(std::function<double(double)> fn, std::string name,
                      bool declared_even = true);

  /// Looks up a built-in by CLI name.
  static Taper from_name(std::string_view name);

  double operator()(double t) const { return (t < -1.0 || t > 1.0) ? 0.0 : fn_(t); }

  TaperKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Taper(TaperKind kind, std::string name, std::function<double(double)> fn)
      : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

  TaperKind kind_;
  std::string name_;
  std::function<double(double)> fn_;
};

/// [h(-T/T), ..., h(0), ..., h(T/T)], exactly palindromic.
std::vector<double> taper_series(const Taper& taper, int T);

/// H_{k,T}(lambda) = sum_{t=-T}^{T} h(t/T)^k exp(-i lambda t).
std::complex<double> h_norm_discrete(const Taper& taper, int T, int k, double lambda);

/// H_k(0) = int_{-1}^{1} h(t)^k dt by composite Simpson (`points` odd, >= 65).
double h_norm_continuous(const Taper& taper, int k, int points = 1025);

/// e(h) = (int h^2)^{-2} int h^4. Throws DegenerateTaperError if int h^2 == 0.
double e_of_h(const Taper& taper, int points = 1025);

/// Discrete total variation of h over a uniform grid on [-1, 1].
double total_variation(const Taper& taper, int points);

struct TaperNorms {
  int T = 0;
  std::map<int, double> H_kT_zero;  ///< k -> H_{k,T}(0)
  std::map<int, double> H_k_zero;   ///< k -> H_k(0)
  double e_h = 0.0;
};

TaperNorms taper_norms(const Taper& taper, int T, std::span<const int> ks);

/// Composite Simpson rule on [a, b] with `points` nodes (odd, >= 3).
double simpson(const std::function<double(double)>& f, double a, double b, int points);

}  // namespace taperspec
