#include "taperspec/tapers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "taperspec/errors.hpp"

namespace taperspec {
namespace {

void require_positive(int value, const char* what) {
  if (value < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

Taper Taper::rectangular() {
  return Taper(TaperKind::rectangular, "rectangular", [](double) { return 1.0; });
}

Taper Taper::cosine() {
  return Taper(TaperKind::cosine, "cosine",
               [](double t) { return std::cos(std::numbers::pi * t / 2.0); });
}

Taper Taper::bartlett() {
  return Taper(TaperKind::bartlett, "bartlett", [](double t) { return 1.0 - std::abs(t); });
}

Taper Taper::custom(std::function<double(double)> fn, std::string name, bool declared_even) {
  if (!fn) throw std::invalid_argument("custom taper: empty callable");
  if (!declared_even) throw std::invalid_argument("custom taper '" + name + "': h must be even");
  constexpr int kProbe = 2001;
  double scale = 0.0;
  for (int i = 0; i < kProbe; ++i) {
    const double t = -1.0 + 2.0 * i / (kProbe - 1);
    const double v = fn(t);
    if (!std::isfinite(v)) throw std::invalid_argument("custom taper '" + name + "': non-finite value");
    if (v < 0.0) throw std::invalid_argument("custom taper '" + name + "': negative value");
    scale = std::max(scale, v);
  }
  if (scale == 0.0) throw std::invalid_argument("custom taper '" + name + "': identically zero");
  for (int i = 0; i < kProbe; ++i) {
    const double t = 2.0 * i / (kProbe - 1) - 1.0;
    if (std::abs(fn(t) - fn(-t)) > 1e-12 * scale)
      throw std::invalid_argument("custom taper '" + name + "': not even at t = " + std::to_string(t));
  }
  return Taper(TaperKind::custom, std::move(name), std::move(fn));
}

Taper Taper::from_name(std::string_view name) {
  if (name == "rectangular") return rectangular();
  if (name == "cosine") return cosine();
  if (name == "bartlett") return bartlett();
  throw std::invalid_argument("unknown taper '" + std::string(name) +
                              "' (expected rectangular|cosine|bartlett)");
}

std::vector<double> taper_series(const Taper& taper, int T) {
  require_positive(T, "T");
  std::vector<double> out(2 * static_cast<std::size_t>(T) + 1);
  // Evaluate the nonnegative half and mirror it so the output is exactly
  // palindromic even for callables that are only even to rounding.
  for (int t = 0; t <= T; ++t) {
    const double v = taper(static_cast<double>(t) / T);
    out[T + t] = v;
    out[T - t] = v;
  }
  return out;
}

std::complex<double> h_norm_discrete(const Taper& taper, int T, int k, double lambda) {
  require_positive(T, "T");
  require_positive(k, "k");
  const auto h = taper_series(taper, T);
  // Pair +t with -t: the imaginary parts cancel exactly for an even taper.
  double re = ipow(h[T], k);
  for (int t = 1; t <= T; ++t) re += 2.0 * ipow(h[T + t], k) * std::cos(lambda * t);
  return {re, 0.0};
}

double simpson(const std::function<double(double)>& f, double a, double b, int points) {
  if (points < 3 || points % 2 == 0)
    throw std::invalid_argument("simpson: points must be odd and >= 3");
  const int intervals = points - 1;
  const double step = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * step);
  return sum * step / 3.0;
}

double h_norm_continuous(const Taper& taper, int k, int points) {
  require_positive(k, "k");
  if (points < 65) throw std::invalid_argument("quadrature_points must be >= 65");
  if (points % 2 == 0) ++points;
  return simpson([&](double t) { return ipow(taper(t), k); }, -1.0, 1.0, points);
}

double e_of_h(const Taper& taper, int points) {
  const double h2 = h_norm_continuous(taper, 2, points);
  if (h2 <= 0.0) throw DegenerateTaperError("e(h): integral of h^2 vanishes for taper " + taper.name());
  return h_norm_continuous(taper, 4, points) / (h2 * h2);
}

double total_variation(const Taper& taper, int points) {
  if (points < 2) throw std::invalid_argument("total_variation: points must be >= 2");
  double tv = 0.0;
  double prev = taper(-1.0);
  for (int i = 1; i < points; ++i) {
    const double cur = taper(-1.0 + 2.0 * i / (points - 1));
    tv += std::abs(cur - prev);
    prev = cur;
  }
  return tv;
}

TaperNorms taper_norms(const Taper& taper, int T, std::span<const int> ks) {
  TaperNorms norms;
  norms.T = T;
  for (int k : ks) {
    norms.H_kT_zero[k] = h_norm_discrete(taper, T, k, 0.0).real();
    norms.H_k_zero[k] = h_norm_continuous(taper, k);
  }
  norms.e_h = e_of_h(taper);
  return norms;
}

}  // namespace taperspec
