#pragma once

#include <span>
#include <vector>

namespace taperspec::stats {

double mean(std::span<const double> x);
/// Unbiased sample covariance (divisor R - 1).
double covariance(std::span<const double> x, std::span<const double> y);
/// Standard error of covariance(x, y): sd of centered products / sqrt(R).
double covariance_se(std::span<const double> x, std::span<const double> y);

struct Shape {
  double skewness = 0.0;         ///< g1 = m3 / m2^{3/2}
  double excess_kurtosis = 0.0;  ///< g2 = m4 / m2^2 - 3
  double k2 = 0.0;               ///< unbiased k-statistics
  double k3 = 0.0;
  double k4 = 0.0;
  double c3 = 0.0;  ///< k3 / k2^{3/2}
  double c4 = 0.0;  ///< k4 / k2^2
};

/// Requires at least 4 observations.
Shape shape(std::span<const double> x);

/// Batch-means standard errors of c3 and c4: contiguous batches in index
/// order, sd across batches / sqrt(batches).
struct ShapeErrors {
  double c3 = 0.0;
  double c4 = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};
ShapeErrors shape_errors(std::span<const double> x, int batches = 20);

/// Least-squares slope of y on x.
double slope(std::span<const double> x, std::span<const double> y);

}  // namespace taperspec::stats
