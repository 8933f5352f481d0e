#include "taperspec/asymptotics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "taperspec/errors.hpp"

namespace taperspec {
namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void require_power(int k, const char* name) {
  if (k < 1) throw std::invalid_argument(std::string(name) + " must be >= 1");
}

double reciprocal(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

}  // namespace

LimitMean limit_mean(const SpectralModel& model, const WeightFunction& phi, int k, int quadrature_points) {
  require_power(k, "k");
  const FrequencyGrid grid(quadrature_points);
  std::complex<double> sum{0.0, 0.0};
  for (int j = 0; j < grid.size(); ++j) sum += phi(grid[j]) * ipow(model.spectral_density(grid[j]), k);
  return {factorial(k) * grid.weight() * sum, k};
}

LimitCovariance limit_covariance(const SpectralModel& model, const WeightFunction& phi1, int k,
                                 const WeightFunction& phi2, int l, const Taper& taper,
                                 const QuadratureOptions& options) {
  return limit_covariance(model, phi1, k, phi2, l, e_of_h(taper), options);
}

LimitCovariance limit_covariance(const SpectralModel& model, const WeightFunction& phi1, int k,
                                 const WeightFunction& phi2, int l, double e_h,
                                 const QuadratureOptions& options) {
  require_power(k, "k");
  require_power(l, "l");
  if (!model.has_trispectrum())
    throw ModelError("limit_covariance: fourth-order cumulant spectrum unavailable for " + model.describe());
  const double prefactor = 2.0 * std::numbers::pi * e_h * k * l * factorial(k) * factorial(l);

  LimitCovariance out;
  const FrequencyGrid line(options.line_points);
  std::complex<double> g{0.0, 0.0};
  for (int j = 0; j < line.size(); ++j) {
    const double x = line[j];
    g += phi1(x) * (std::conj(phi2(x)) + std::conj(phi2(-x))) * ipow(model.spectral_density(x), k + l);
  }
  out.gaussian_part = prefactor * line.weight() * g;

  if (!model.is_gaussian()) {
    const FrequencyGrid sq(options.trispectrum_points);
    const int n = sq.size();
    std::vector<std::complex<double>> a(n), b(n);
    for (int j = 0; j < n; ++j) {
      a[j] = phi1(sq[j]) * ipow(model.spectral_density(sq[j]), k - 1);
      b[j] = std::conj(phi2(sq[j])) * ipow(model.spectral_density(sq[j]), l - 1);
    }
    std::complex<double> t{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      std::complex<double> row{0.0, 0.0};
      for (int j = 0; j < n; ++j) row += b[j] * model.trispectrum(sq[i], -sq[i], sq[j]);
      t += a[i] * row;
    }
    out.trispectrum_part = prefactor * sq.weight() * sq.weight() * t;
  }
  out.total = out.gaussian_part + out.trispectrum_part;
  return out;
}

CltCovariance clt_covariance_matrix(const SpectralModel& model, std::span<const WeightFunction> phis,
                                    std::span<const int> ks, const Taper& taper, const QuadratureOptions& options) {
  if (phis.empty() || phis.size() != ks.size())
    throw std::invalid_argument("clt_covariance_matrix: need |phis| == |ks| >= 1");
  const auto m = static_cast<Eigen::Index>(phis.size());
  const double e_h = e_of_h(taper);
  CltCovariance out{Eigen::MatrixXcd::Zero(m, m), Eigen::MatrixXcd::Zero(m, m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const auto c = limit_covariance(model, phis[i], ks[i], phis[j], ks[j], e_h, options);
      out.full(i, j) = c.total;
      out.gaussian(i, j) = c.gaussian_part;
      if (i != j) {
        // Evaluate the mirrored entry too; Hermitian symmetry is validated below.
        const auto d = limit_covariance(model, phis[j], ks[j], phis[i], ks[i], e_h, options);
        out.full(j, i) = d.total;
        out.gaussian(j, i) = d.gaussian_part;
      }
    }
  }
  // The full matrix may vanish (two-point innovations), so tolerances are
  // relative to the Gaussian part, which is positive definite.
  const double scale = std::max({out.full.cwiseAbs().maxCoeff(), out.gaussian.cwiseAbs().maxCoeff(),
                                 std::numeric_limits<double>::min()});
  for (const auto* mat : {&out.full, &out.gaussian}) {
    if ((*mat - mat->adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
      throw Error("clt_covariance_matrix: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(*mat, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    if (ev.minCoeff() < -1e-8 * scale)
      throw Error(fmt::format("clt_covariance_matrix: not positive semidefinite (min eigenvalue {:.3e})",
                              ev.minCoeff()));
  }
  return out;
}

double cumulant_order_bound(int r, double T) {
  if (r < 3) throw std::invalid_argument("cumulant_order_bound: r must be >= 3");
  if (!(T > 0)) throw std::invalid_argument("cumulant_order_bound: T must be > 0");
  return std::pow(T, 1.0 - r);
}

std::string to_string(ExponentRelation which) {
  switch (which) {
    case ExponentRelation::thm2_mean: return "thm2_mean";
    case ExponentRelation::thm2_cov: return "thm2_cov";
    case ExponentRelation::thm2_cum_equal: return "thm2_cum_equal";
    case ExponentRelation::thm2_cum_mixed: return "thm2_cum_mixed";
    case ExponentRelation::thm4_clt: return "thm4_clt";
    case ExponentRelation::thm6_clt: return "thm6_clt";
  }
  return "unknown";
}

ExponentCheck check_exponents(const ExponentCondition& cond) {
  for (double e : {cond.p, cond.q})
    if (!(e >= 1.0)) throw std::invalid_argument("check_exponents: p and q must lie in [1, inf]");
  const double ip = reciprocal(cond.p);
  const double iq = reciprocal(cond.q);

  auto need_list = [&] {
    if (cond.k_list.empty()) throw std::invalid_argument("check_exponents: k_list required");
  };
  ExponentCheck out;
  std::string relation;
  switch (cond.which) {
    case ExponentRelation::thm2_mean:
      out.lhs = iq + cond.k * ip;
      out.rhs = 1.0;
      relation = fmt::format("1/q + k/p = 1 with k={}", cond.k);
      break;
    case ExponentRelation::thm2_cov:
      out.lhs = iq + 0.5 * (cond.k + cond.l) * ip;
      out.rhs = 0.5;
      relation = fmt::format("1/q + (k+l)/2 * 1/p = 1/2 with k={}, l={}", cond.k, cond.l);
      break;
    case ExponentRelation::thm2_cum_equal:
    case ExponentRelation::thm4_clt:
      out.lhs = iq + cond.k * ip;
      out.rhs = 0.5;
      relation = fmt::format("1/q + k/p = 1/2 with k={}", cond.k);
      break;
    case ExponentRelation::thm2_cum_mixed: {
      need_list();
      const double mean = std::accumulate(cond.k_list.begin(), cond.k_list.end(), 0.0) / cond.k_list.size();
      out.lhs = iq + mean * ip;
      out.rhs = 0.5;
      relation = fmt::format("1/q + mean(k_i)/p = 1/2 with mean(k_i)={}", mean);
      break;
    }
    case ExponentRelation::thm6_clt: {
      need_list();
      const int kmin = *std::min_element(cond.k_list.begin(), cond.k_list.end());
      out.lhs = iq + kmin * ip;
      out.rhs = 0.5;
      relation = fmt::format("1/q + min(k_i)/p = 1/2 with min(k_i)={}", kmin);
      break;
    }
  }
  out.satisfied = std::abs(out.lhs - out.rhs) <= 1e-12;
  out.diagnostic = fmt::format("{}: {} ({} {} {}; p={}, q={})", to_string(cond.which), relation, out.lhs,
                               out.satisfied ? "==" : "!=", out.rhs, cond.p, cond.q);
  return out;
}

double bias_gap(const SpectralModel& model, const WeightFunction& phi, int k, int T, double oracle_mean,
                int quadrature_points) {
  if (T < 1) throw std::invalid_argument("bias_gap: T must be >= 1");
  const double limit = limit_mean(model, phi, k, quadrature_points).value.real();
  return std::sqrt(static_cast<double>(T)) * (oracle_mean - limit);
}

}  // namespace taperspec
