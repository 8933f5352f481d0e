#include "taperspec/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace taperspec::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("covariance: need equal sizes >= 2");
  const double mx = mean(x);
  const double my = mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double covariance_se(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("covariance_se: need equal sizes >= 2");
  const double mx = mean(x);
  const double my = mean(y);
  const auto R = static_cast<double>(x.size());
  double s = 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = (x[i] - mx) * (y[i] - my);
    s += z;
    ss += z * z;
  }
  const double zbar = s / R;
  const double var = (ss - R * zbar * zbar) / (R - 1.0);
  return std::sqrt(std::max(var, 0.0) / R);
}

Shape shape(std::span<const double> x) {
  if (x.size() < 4) throw std::invalid_argument("shape: need at least 4 observations");
  const double n = static_cast<double>(x.size());
  const double m = mean(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  Shape s;
  if (m2 == 0.0) return s;
  s.skewness = m3 / std::pow(m2, 1.5);
  s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  s.k2 = n / (n - 1.0) * m2;
  s.k3 = n * n / ((n - 1.0) * (n - 2.0)) * m3;
  s.k4 = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) / ((n - 1.0) * (n - 2.0) * (n - 3.0));
  s.c3 = s.k3 / std::pow(s.k2, 1.5);
  s.c4 = s.k4 / (s.k2 * s.k2);
  return s;
}

ShapeErrors shape_errors(std::span<const double> x, int batches) {
  if (batches < 2) throw std::invalid_argument("shape_errors: need >= 2 batches");
  const std::size_t per = x.size() / static_cast<std::size_t>(batches);
  if (per < 4) throw std::invalid_argument("shape_errors: batches too small");
  std::vector<double> c3, c4, g1, g2;
  for (int b = 0; b < batches; ++b) {
    const auto s = shape(x.subspan(b * per, per));
    c3.push_back(s.c3);
    c4.push_back(s.c4);
    g1.push_back(s.skewness);
    g2.push_back(s.excess_kurtosis);
  }
  auto se = [&](const std::vector<double>& v) {
    return std::sqrt(covariance(v, v) / static_cast<double>(batches));
  };
  return {se(c3), se(c4), se(g1), se(g2)};
}

double slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope: need equal sizes >= 2");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope: x values are all equal");
  return sxy / sxx;
}

}  // namespace taperspec::stats
