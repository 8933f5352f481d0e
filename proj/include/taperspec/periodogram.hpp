#pragma once

#include <complex>
#include <span>
#include <vector>

#include "taperspec/models.hpp"
#include "taperspec/tapers.hpp"

namespace taperspec {

/// Uniform grid on (-pi, pi]: lambda_j = -pi + 2 pi (j + 1) / N, j = 0..N-1,
/// each point carrying weight 2 pi / N. The grid is closed under negation
/// (modulo 2 pi), see mirror().
class FrequencyGrid {
 public:
  explicit FrequencyGrid(int N);

  /// N = 2T + 1: the Fourier frequencies of a length-(2T+1) record.
  static FrequencyGrid fourier(int T);
  /// N = 2 (2T + 1), the default for functional quadrature.
  static FrequencyGrid oversampled(int T);

  int size() const noexcept { return N_; }
  double operator[](int j) const noexcept;
  double weight() const noexcept;
  std::vector<double> points() const;
  /// Index of -lambda_j (lambda = pi maps to itself).
  int mirror(int j) const noexcept { return ((N_ - 2 - j) % N_ + N_) % N_; }

 private:
  int N_;
};

/// d_T(lambda) = sum_t exp(-i lambda t) h(t/T) Y(t), direct summation.
std::complex<double> fourier_transform(const SamplePath& path, const Taper& taper, double lambda);

enum class TransformMethod { automatic, fft, direct };

struct PeriodogramGrid {
  FrequencyGrid grid{1};
  std::vector<std::complex<double>> d;
  std::vector<double> I;
  int T = 0;
  double h2 = 0.0;  ///< H_{2,T}(0)
};

/// I_T(lambda_j) = |d_T(lambda_j)|^2 / (2 pi H_{2,T}(0)) on every grid point.
/// `automatic` uses the FFT path: any uniform grid of this form is a DFT of
/// the sign-modulated record folded modulo N. `direct` is O(N T) summation.
/// Throws DegenerateTaperError when H_{2,T}(0) == 0.
PeriodogramGrid periodogram_grid(const SamplePath& path, const Taper& taper, const FrequencyGrid& grid,
                                 TransformMethod method = TransformMethod::automatic);

/// Pointwise I^k by repeated multiplication. Rejects k < 1.
std::vector<double> power(std::span<const double> values, int k);
std::vector<double> power(const PeriodogramGrid& pg, int k);

}  // namespace taperspec
