#include "taperspec/periodogram.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "taperspec/errors.hpp"
#include "taperspec/fft.hpp"

namespace taperspec {

FrequencyGrid::FrequencyGrid(int N) : N_(N) {
  if (N < 1) throw std::invalid_argument("FrequencyGrid: N must be >= 1");
}

FrequencyGrid FrequencyGrid::fourier(int T) {
  if (T < 1) throw std::invalid_argument("FrequencyGrid: T must be >= 1");
  return FrequencyGrid(2 * T + 1);
}

FrequencyGrid FrequencyGrid::oversampled(int T) {
  if (T < 1) throw std::invalid_argument("FrequencyGrid: T must be >= 1");
  return FrequencyGrid(2 * (2 * T + 1));
}

double FrequencyGrid::operator[](int j) const noexcept {
  return -std::numbers::pi + 2.0 * std::numbers::pi * (j + 1) / N_;
}

double FrequencyGrid::weight() const noexcept { return 2.0 * std::numbers::pi / N_; }

std::vector<double> FrequencyGrid::points() const {
  std::vector<double> out(static_cast<std::size_t>(N_));
  for (int j = 0; j < N_; ++j) out[j] = (*this)[j];
  return out;
}

std::complex<double> fourier_transform(const SamplePath& path, const Taper& taper, double lambda) {
  const int T = path.T;
  const auto h = taper_series(taper, T);
  std::complex<double> sum{0.0, 0.0};
  for (int t = -T; t <= T; ++t) sum += std::polar(h[T + t] * path.at(t), -lambda * t);
  return sum;
}

PeriodogramGrid periodogram_grid(const SamplePath& path, const Taper& taper, const FrequencyGrid& grid,
                                 TransformMethod method) {
  const int T = path.T;
  if (path.values.size() != 2 * static_cast<std::size_t>(T) + 1)
    throw std::invalid_argument("periodogram_grid: path length does not equal 2T+1");
  const auto h = taper_series(taper, T);
  double h2 = 0.0;
  for (double v : h) h2 += v * v;
  if (h2 == 0.0) throw DegenerateTaperError("periodogram_grid: H_{2,T}(0) = 0 for taper " + taper.name());

  const int N = grid.size();
  PeriodogramGrid out;
  out.grid = grid;
  out.T = T;
  out.h2 = h2;
  out.d.resize(static_cast<std::size_t>(N));
  out.I.resize(static_cast<std::size_t>(N));

  if (method == TransformMethod::direct) {
    for (int j = 0; j < N; ++j) {
      const double lambda = grid[j];
      std::complex<double> sum{0.0, 0.0};
      for (int t = -T; t <= T; ++t) sum += std::polar(h[T + t] * path.at(t), -lambda * t);
      out.d[j] = sum;
    }
  } else {
    // exp(-i lambda_j t) = (-1)^t exp(-2 pi i (j+1) t / N): fold the
    // modulated record modulo N and take one length-N DFT.
    std::vector<std::complex<double>> folded(static_cast<std::size_t>(N));
    for (int t = -T; t <= T; ++t) {
      const double sign = (t % 2 == 0) ? 1.0 : -1.0;
      folded[((t % N) + N) % N] += sign * h[T + t] * path.at(t);
    }
    fft::forward(folded);
    for (int j = 0; j < N; ++j) out.d[j] = folded[(j + 1) % N];
  }

  const double scale = 1.0 / (2.0 * std::numbers::pi * h2);
  for (int j = 0; j < N; ++j) out.I[j] = std::norm(out.d[j]) * scale;
  return out;
}

std::vector<double> power(std::span<const double> values, int k) {
  if (k < 1) throw std::invalid_argument("power: k must be >= 1");
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    double r = values[j];
    for (int i = 1; i < k; ++i) r *= values[j];
    out[j] = r;
  }
  return out;
}

std::vector<double> power(const PeriodogramGrid& pg, int k) { return power(pg.I, k); }

}  // namespace taperspec
