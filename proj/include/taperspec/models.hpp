#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace taperspec {

enum class ModelFamily { gaussian_white, gaussian_ar1, gaussian_ma1, linear_nongaussian };

enum class InnovationLaw { gaussian, exponential, twopoint, custom };

struct InnovationCumulants {
  double k2 = 0.0;
  std::optional<double> k3;
  std::optional<double> k4;
};

/// i.i.d. innovation law with variance sigma2.
///   gaussian:    N(0, sigma2), k3 = k4 = 0
///   exponential: s (E - 1), E ~ Exp(1), s = sqrt(sigma2); k3 = 2 s^3, k4 = 6 s^4
///   twopoint:    +-s with probability 1/2; k3 = 0, k4 = -2 s^4
class Innovations {
 public:
  using Sampler = std::function<double(std::mt19937_64&)>;

  static Innovations gaussian(double sigma2);
  static Innovations exponential(double sigma2);
  static Innovations twopoint(double sigma2);
  /// `sampler` must draw zero-mean values with variance `sigma2`. Cumulants
  /// that are not supplied stay unknown and block trispectrum evaluation.
  static Innovations custom(Sampler sampler, double sigma2, std::optional<double> k3 = std::nullopt,
                            std::optional<double> k4 = std::nullopt);

  InnovationLaw law() const noexcept { return law_; }
  const InnovationCumulants& cumulants() const noexcept { return cumulants_; }
  double draw(std::mt19937_64& rng) const;

 private:
  InnovationLaw law_ = InnovationLaw::gaussian;
  InnovationCumulants cumulants_;
  Sampler sampler_;
};

/// Stationary zero-mean process observed on K_T = {-T..T}.
///
/// Conventions: c(tau) = int_{-pi}^{pi} f(lambda) e^{i tau lambda} d lambda,
/// hence f = sigma2 / (2 pi) for white noise. Every family is represented as
/// a causal ARMA filter psi(lambda) = (1 + sum ma_j e^{-i j lambda}) /
/// (1 - sum ar_j e^{-i j lambda}) driven by innovations of variance k2, so
/// f(lambda) = k2 / (2 pi) |psi(lambda)|^2.
class SpectralModel {
 public:
  static SpectralModel white(double sigma2);
  static SpectralModel ar1(double sigma2, double rho);
  static SpectralModel ma1(double sigma2, double theta);
  /// Arbitrary finite-order causal ARMA filter. The AR part must be stationary.
  static SpectralModel linear(std::vector<double> ar, std::vector<double> ma, Innovations innovations);

  ModelFamily family() const noexcept { return family_; }
  /// True when f4 vanishes identically: Gaussian families, or a linear filter
  /// driven by Gaussian innovations.
  bool is_gaussian() const noexcept;
  std::string describe() const;

  double sigma2() const noexcept { return innovations_.cumulants().k2; }
  const std::vector<double>& ar() const noexcept { return ar_; }
  const std::vector<double>& ma() const noexcept { return ma_; }
  const Innovations& innovations() const noexcept { return innovations_; }
  /// Largest modulus of the AR characteristic roots (inverse form); 0 without AR part.
  double ar_radius() const noexcept { return ar_radius_; }

  double spectral_density(double lambda) const;
  double autocovariance(long tau) const;
  std::complex<double> transfer(double lambda) const;
  /// f4(l1, l2, l3) = k4 / (2 pi)^3 psi(l1) psi(l2) psi(l3) psi(-l1-l2-l3).
  /// Zero for Gaussian models; throws ModelError when k4 is unknown.
  std::complex<double> trispectrum(double l1, double l2, double l3) const;
  bool has_trispectrum() const noexcept;

  /// MA(infinity) weights psi_0 = 1, psi_1, ... truncated once negligible.
  const std::vector<double>& psi_weights() const noexcept { return *psi_; }

 private:
  SpectralModel() = default;
  void finish();

  ModelFamily family_ = ModelFamily::gaussian_white;
  std::vector<double> ar_;
  std::vector<double> ma_;
  Innovations innovations_;
  double ar_radius_ = 0.0;
  std::shared_ptr<const std::vector<double>> psi_;
};

/// Observations Y(-T), ..., Y(T).
struct SamplePath {
  int T = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;

  double at(int t) const { return values.at(static_cast<std::size_t>(t + T)); }
};

/// Draws sample paths of one model at one half-window. Construction does the
/// expensive setup (circulant spectrum or filter burn-in length); draw() is
/// const and safe to call concurrently.
///
/// Gaussian families use circulant embedding of c(0..2T), exact in law.
/// linear_nongaussian filters i.i.d. innovations after a burn-in of
/// 1024 + ceil(20 / (1 - r)) samples, r the AR root radius.
class PathSampler {
 public:
  PathSampler(SpectralModel model, int T);

  SamplePath draw(std::uint64_t seed) const;

  int T() const noexcept { return T_; }
  const SpectralModel& model() const noexcept { return model_; }
  /// Circulant size used (0 for the filtering path).
  int embedding_size() const noexcept { return static_cast<int>(sqrt_eigen_.size()); }
  int burn_in() const noexcept { return burn_in_; }

 private:
  SamplePath draw_circulant(std::uint64_t seed) const;
  SamplePath draw_filtered(std::uint64_t seed) const;

  SpectralModel model_;
  int T_;
  std::vector<double> sqrt_eigen_;  // sqrt(eigenvalue / m)
  int burn_in_ = 0;
};

SamplePath simulate(const SpectralModel& model, int T, std::uint64_t seed);

}  // namespace taperspec
