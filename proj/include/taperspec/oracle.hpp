#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "taperspec/functionals.hpp"
#include "taperspec/models.hpp"
#include "taperspec/periodogram.hpp"
#include "taperspec/tapers.hpp"

namespace taperspec {

/// A perfect matching of {0, ..., 2k-1}. Canonical form: every pair is
/// (smaller, larger) and pairs are sorted by their first element.
struct PairPartition {
  std::vector<std::pair<int, int>> pairs;

  friend bool operator==(const PairPartition&, const PairPartition&) = default;
};

/// All (2k-1)!! pairings of 2k elements in lexicographic order. k in 1..6.
std::vector<PairPartition> enumerate_pair_partitions(int k);

/// Two-row table with rows of lengths 2k and 2l: positions 0..2k-1 form the
/// first row, 2k..2k+2l-1 the second. Within a row, even offsets carry +freq
/// and odd offsets -freq.
struct TwoRowTable {
  int k = 1;
  int l = 1;

  int size() const noexcept { return 2 * (k + l); }
  int row_of(int position) const noexcept { return position < 2 * k ? 0 : 1; }
  /// +1 or -1: the sign applied to the row's frequency at this position.
  int sign_of(int position) const noexcept { return (position - (row_of(position) ? 2 * k : 0)) % 2 ? -1 : 1; }
  /// True when the blocks, read as hyperedges over rows, connect both rows.
  bool indecomposable(const PairPartition& partition) const;
};

/// Pairings of the (k, l) table that connect the rows. k, l >= 1, k + l <= 6.
std::vector<PairPartition> indecomposable_pairings(int k, int l);
/// The complement: pairings that stay within rows.
std::vector<PairPartition> decomposable_pairings(int k, int l);

/// cum(d_T(lambda), d_T(mu)) = sum_{s,t} h(s/T) h(t/T) e^{-i lambda s - i mu t} c(s - t)
/// for a model with known autocovariance.
class DftCovariance {
 public:
  DftCovariance(const SpectralModel& model, const Taper& taper, int T);

  /// Direct O(n^2) double sum.
  std::complex<double> operator()(double lambda, double mu) const;
  /// cov(lambda, -lambda) = sum_u c(u) g(u) e^{-i lambda u}, g the taper
  /// autocorrelation; O(n). Real and nonnegative.
  double opposite(double lambda) const;
  /// cov(lambda, lambda) = sum_v G(v) e^{-i lambda v} with
  /// G(v) = sum_{s+t=v} a_s a_t c(s-t); O(n).
  std::complex<double> same(double lambda) const;
  /// Full table P(i, j) = cov(lambda_i, lambda_j) over a grid.
  Eigen::MatrixXcd table(const FrequencyGrid& grid) const;

  int T() const noexcept { return T_; }
  double h2() const noexcept { return h2_; }

 private:
  int T_;
  std::vector<double> taper_;     // a_t, t = -T..T
  Eigen::MatrixXd kernel_;        // a_s a_t c(s - t)
  std::vector<double> lag_sum_;   // index u + 2T: c(u) g(u)
  std::vector<double> diag_sum_;  // index v + 2T: G(v)
  double h2_ = 0.0;
};

/// Exact E J_{k,T}(phi) on `grid` for a Gaussian model via the pair-partition
/// (Wick) expansion of E I_T(lambda)^k. k in 1..4.
/// Throws ModelError for non-Gaussian models, SizeGuardError for k > 4.
std::complex<double> exact_mean_J(const SpectralModel& model, const Taper& taper, int T,
                                  const WeightFunction& phi, int k, const FrequencyGrid& grid);

/// Exact cov(J_{k,T}(phi1), J_{l,T}(phi2)) = E[(J1 - EJ1) conj(J2 - EJ2)] on
/// `grid` via indecomposable pairings of the two-row table. k + l <= 4.
std::complex<double> exact_cov_J(const SpectralModel& model, const Taper& taper, int T,
                                 const WeightFunction& phi1, int k, const WeightFunction& phi2, int l,
                                 const FrequencyGrid& grid);

/// Phi^h_{k,T}(lambda_1..lambda_{k-1}) =
///   (2 pi)^{1-k} / H_{k,T}(0) * prod_j H_{1,T}(lambda_j) * H_{1,T}(-sum lambda_j).
std::complex<double> fejer_kernel(const Taper& taper, int T, int k, std::span<const double> lambdas);

struct FourthMomentCovariance {
  std::complex<double> gaussian_part;
  std::complex<double> trispectrum_part;
  std::complex<double> total;
};

/// cov(J_{1,T}(phi1), J_{1,T}(phi2)) for a linear model by direct enumeration
/// of E[Y_s Y_t Y_u Y_v] over all (2T+1)^4 index quadruples, with the fourth
/// cumulant k4 sum_m psi_{s-m} psi_{t-m} psi_{u-m} psi_{v-m}. Not scaled by T.
/// T <= 8.
FourthMomentCovariance fourth_moment_cov_J1(const SpectralModel& model, const Taper& taper, int T,
                                            const WeightFunction& phi1, const WeightFunction& phi2,
                                            const FrequencyGrid& grid);

}  // namespace taperspec
