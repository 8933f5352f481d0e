#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "taperspec/functionals.hpp"
#include "taperspec/models.hpp"
#include "taperspec/tapers.hpp"

namespace taperspec {

/// k! int phi(lambda) f(lambda)^k d lambda, the limit of E J_{k,T}(phi).
struct LimitMean {
  std::complex<double> value;
  int k = 0;
};

/// Limit of T cov(J_{k,T}(phi1), J_{l,T}(phi2)), i.e. the covariance scaled by
/// the half-window T (not by n = 2T + 1).
struct LimitCovariance {
  std::complex<double> gaussian_part;
  std::complex<double> trispectrum_part;
  std::complex<double> total;
};

struct QuadratureOptions {
  int line_points = 4096;       ///< midpoint rule for one-dimensional integrals
  int trispectrum_points = 257; ///< per axis, tensor-product midpoint rule
};

LimitMean limit_mean(const SpectralModel& model, const WeightFunction& phi, int k, int quadrature_points = 4096);

/// 2 pi e(h) k l k! l! [ int phi1 (conj phi2(l) + conj phi2(-l)) f^{k+l}
///                      + int int phi1(l1) conj phi2(l2) f^{k-1}(l1) f^{l-1}(l2) f4(l1, -l1, l2) ].
/// Throws ModelError when a non-Gaussian model has no fourth cumulant.
LimitCovariance limit_covariance(const SpectralModel& model, const WeightFunction& phi1, int k,
                                 const WeightFunction& phi2, int l, const Taper& taper,
                                 const QuadratureOptions& options = {});

/// Same with a precomputed e(h).
LimitCovariance limit_covariance(const SpectralModel& model, const WeightFunction& phi1, int k,
                                 const WeightFunction& phi2, int l, double e_h,
                                 const QuadratureOptions& options = {});

struct CltCovariance {
  Eigen::MatrixXcd full;      ///< w (equal powers) / w-tilde (mixed powers)
  Eigen::MatrixXcd gaussian;  ///< v / v-tilde: the f4 term dropped
};

/// Entry (i, j) is limit_covariance(phi_i, k_i, phi_j, k_j). Both matrices are
/// checked to be Hermitian and positive semidefinite to 1e-8 (relative to the
/// largest eigenvalue); throws Error otherwise.
CltCovariance clt_covariance_matrix(const SpectralModel& model, std::span<const WeightFunction> phis,
                                    std::span<const int> ks, const Taper& taper,
                                    const QuadratureOptions& options = {});

/// Reference decay T^{1-r} for joint cumulants of order r >= 3.
double cumulant_order_bound(int r, double T);

enum class ExponentRelation {
  thm2_mean,        ///< 1/q + k/p = 1
  thm2_cov,         ///< 1/q + (k+l)/2 * 1/p = 1/2
  thm2_cum_equal,   ///< 1/q + k/p = 1/2
  thm2_cum_mixed,   ///< 1/q + mean(k_i)/p = 1/2
  thm4_clt,         ///< 1/q + k/p = 1/2
  thm6_clt,         ///< 1/q + min(k_i)/p = 1/2
};

/// Exponents p (spectral density in L_p) and q (weights in L_q), each in
/// [1, inf]; infinity is a valid value with 1/inf = 0.
struct ExponentCondition {
  double p = 1.0;
  double q = 1.0;
  int k = 1;
  int l = 1;
  std::vector<int> k_list;
  ExponentRelation which = ExponentRelation::thm2_mean;
};

struct ExponentCheck {
  bool satisfied = false;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string diagnostic;
};

ExponentCheck check_exponents(const ExponentCondition& cond);
std::string to_string(ExponentRelation which);

/// sqrt(T) (oracle_mean - k! int phi f^k).
double bias_gap(const SpectralModel& model, const WeightFunction& phi, int k, int T, double oracle_mean,
                int quadrature_points = 4096);

}  // namespace taperspec
