#include "taperspec/oracle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "taperspec/errors.hpp"

namespace taperspec {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void pair_up(std::vector<int>& remaining, PairPartition& current, std::vector<PairPartition>& out) {
  if (remaining.empty()) {
    out.push_back(current);
    return;
  }
  const int first = remaining.front();
  for (std::size_t i = 1; i < remaining.size(); ++i) {
    const int partner = remaining[i];
    std::vector<int> rest;
    rest.reserve(remaining.size() - 2);
    for (std::size_t j = 1; j < remaining.size(); ++j)
      if (j != i) rest.push_back(remaining[j]);
    current.pairs.emplace_back(first, partner);
    pair_up(rest, current, out);
    current.pairs.pop_back();
  }
}

std::vector<PairPartition> pairings_of(int elements) {
  std::vector<int> all(static_cast<std::size_t>(elements));
  for (int i = 0; i < elements; ++i) all[i] = i;
  std::vector<PairPartition> out;
  PairPartition current;
  pair_up(all, current, out);
  return out;
}

void check_table_size(int k, int l) {
  if (k < 1 || l < 1) throw std::invalid_argument("two-row table: k and l must be >= 1");
  if (k + l > 6) throw SizeGuardError(fmt::format("two-row table ({}, {}) exceeds k + l <= 6", k, l));
}

void require_gaussian(const SpectralModel& model, const char* op) {
  if (!model.is_gaussian())
    throw ModelError(std::string(op) + ": pair-partition oracle needs a Gaussian model, got " + model.describe());
}

template <typename V>
std::complex<double> monomial(const V& values, const std::array<int, 10>& exponents, std::size_t count) {
  std::complex<double> r{1.0, 0.0};
  for (std::size_t v = 0; v < count; ++v)
    for (int e = 0; e < exponents[v]; ++e) r *= values[v];
  return r;
}

}  // namespace

std::vector<PairPartition> enumerate_pair_partitions(int k) {
  if (k < 1) throw std::invalid_argument("enumerate_pair_partitions: k must be >= 1");
  if (k > 6) throw SizeGuardError(fmt::format("enumerate_pair_partitions: k = {} exceeds 6", k));
  return pairings_of(2 * k);
}

bool TwoRowTable::indecomposable(const PairPartition& partition) const {
  // Union-find over the two rows; each block joins the rows it touches.
  std::array<int, 2> parent{0, 1};
  auto find = [&](int r) {
    while (parent[r] != r) r = parent[r];
    return r;
  };
  for (const auto& [a, b] : partition.pairs) {
    const int ra = find(row_of(a));
    const int rb = find(row_of(b));
    if (ra != rb) parent[rb] = ra;
  }
  return find(0) == find(1);
}

std::vector<PairPartition> indecomposable_pairings(int k, int l) {
  check_table_size(k, l);
  const TwoRowTable table{k, l};
  std::vector<PairPartition> out;
  for (auto& p : pairings_of(table.size()))
    if (table.indecomposable(p)) out.push_back(std::move(p));
  return out;
}

std::vector<PairPartition> decomposable_pairings(int k, int l) {
  check_table_size(k, l);
  const TwoRowTable table{k, l};
  std::vector<PairPartition> out;
  for (auto& p : pairings_of(table.size()))
    if (!table.indecomposable(p)) out.push_back(std::move(p));
  return out;
}

// ---------------------------------------------------------------------------

DftCovariance::DftCovariance(const SpectralModel& model, const Taper& taper, int T)
    : T_(T), taper_(taper_series(taper, T)) {
  const int n = 2 * T + 1;
  std::vector<double> c(static_cast<std::size_t>(2 * n - 1));
  for (int u = -(n - 1); u <= n - 1; ++u) c[u + n - 1] = model.autocovariance(u);

  kernel_.resize(n, n);
  lag_sum_.assign(static_cast<std::size_t>(2 * n - 1), 0.0);
  diag_sum_.assign(static_cast<std::size_t>(2 * n - 1), 0.0);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      const double v = taper_[s] * taper_[t] * c[s - t + n - 1];
      kernel_(s, t) = v;
      lag_sum_[s - t + n - 1] += v;
      diag_sum_[s + t] += v;  // (s - T) + (t - T) + 2T
    }
  }
  for (double a : taper_) h2_ += a * a;
}

std::complex<double> DftCovariance::operator()(double lambda, double mu) const {
  const int n = 2 * T_ + 1;
  std::vector<std::complex<double>> es(n), et(n);
  for (int s = 0; s < n; ++s) {
    es[s] = std::polar(1.0, -lambda * (s - T_));
    et[s] = std::polar(1.0, -mu * (s - T_));
  }
  std::complex<double> sum{0.0, 0.0};
  for (int s = 0; s < n; ++s) {
    std::complex<double> row{0.0, 0.0};
    for (int t = 0; t < n; ++t) row += kernel_(s, t) * et[t];
    sum += es[s] * row;
  }
  return sum;
}

double DftCovariance::opposite(double lambda) const {
  const int span = 2 * T_;
  double sum = lag_sum_[span];
  for (int u = 1; u <= span; ++u) sum += (lag_sum_[span + u] + lag_sum_[span - u]) * std::cos(lambda * u);
  return sum;
}

std::complex<double> DftCovariance::same(double lambda) const {
  const int span = 2 * T_;
  std::complex<double> sum{diag_sum_[span], 0.0};
  for (int v = 1; v <= span; ++v) {
    sum += diag_sum_[span + v] * std::polar(1.0, -lambda * v);
    sum += diag_sum_[span - v] * std::polar(1.0, lambda * v);
  }
  return sum;
}

Eigen::MatrixXcd DftCovariance::table(const FrequencyGrid& grid) const {
  const int n = 2 * T_ + 1;
  const int N = grid.size();
  Eigen::MatrixXcd E(n, N);
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < N; ++j) E(s, j) = std::polar(1.0, -grid[j] * (s - T_));
  const Eigen::MatrixXcd KE = kernel_.cast<std::complex<double>>() * E;
  return E.transpose() * KE;
}

// ---------------------------------------------------------------------------

std::complex<double> exact_mean_J(const SpectralModel& model, const Taper& taper, int T,
                                  const WeightFunction& phi, int k, const FrequencyGrid& grid) {
  require_gaussian(model, "exact_mean_J");
  if (k < 1) throw std::invalid_argument("exact_mean_J: k must be >= 1");
  if (k > 4) throw SizeGuardError(fmt::format("exact_mean_J: k = {} exceeds 4", k));
  const DftCovariance cov(model, taper, T);
  if (cov.h2() == 0.0) throw DegenerateTaperError("exact_mean_J: H_{2,T}(0) = 0");

  // Signature of a pairing: how many pairs are (+,+), (-,-), (+,-).
  std::map<std::array<int, 10>, int> signatures;
  for (const auto& p : enumerate_pair_partitions(k)) {
    std::array<int, 10> sig{};
    for (const auto& [a, b] : p.pairs) {
      const bool pa = a % 2 == 0;
      const bool pb = b % 2 == 0;
      ++sig[pa && pb ? 0 : (!pa && !pb ? 1 : 2)];
    }
    ++signatures[sig];
  }

  const double norm = std::pow(kTwoPi * cov.h2(), -k);
  std::complex<double> total{0.0, 0.0};
  for (int j = 0; j < grid.size(); ++j) {
    const double lambda = grid[j];
    const std::complex<double> b = cov.same(lambda);
    const std::array<std::complex<double>, 3> values{b, std::conj(b), cov.opposite(lambda)};
    std::complex<double> moment{0.0, 0.0};
    for (const auto& [sig, count] : signatures) moment += static_cast<double>(count) * monomial(values, sig, 3);
    total += phi(lambda) * moment.real();
  }
  return grid.weight() * norm * total;
}

std::complex<double> exact_cov_J(const SpectralModel& model, const Taper& taper, int T,
                                 const WeightFunction& phi1, int k, const WeightFunction& phi2, int l,
                                 const FrequencyGrid& grid) {
  require_gaussian(model, "exact_cov_J");
  if (k < 1 || l < 1) throw std::invalid_argument("exact_cov_J: k and l must be >= 1");
  if (k + l > 4) throw SizeGuardError(fmt::format("exact_cov_J: k + l = {} exceeds 4", k + l));
  const DftCovariance cov(model, taper, T);
  if (cov.h2() == 0.0) throw DegenerateTaperError("exact_cov_J: H_{2,T}(0) = 0");

  // Variables: 0..2 row-one (++, --, +-), 3..5 row-two, 6..9 cross
  // (+a+b, +a-b, -a+b, -a-b).
  const TwoRowTable table{k, l};
  std::map<std::array<int, 10>, int> signatures;
  for (const auto& p : indecomposable_pairings(k, l)) {
    std::array<int, 10> sig{};
    for (auto [a, b] : p.pairs) {
      if (table.row_of(a) > table.row_of(b)) std::swap(a, b);
      const int sa = table.sign_of(a);
      const int sb = table.sign_of(b);
      if (table.row_of(a) == table.row_of(b)) {
        const int base = table.row_of(a) == 0 ? 0 : 3;
        ++sig[base + (sa > 0 && sb > 0 ? 0 : (sa < 0 && sb < 0 ? 1 : 2))];
      } else {
        ++sig[6 + (sa > 0 ? 0 : 2) + (sb > 0 ? 0 : 1)];
      }
    }
    ++signatures[sig];
  }

  const int N = grid.size();
  const Eigen::MatrixXcd P = cov.table(grid);
  std::vector<std::complex<double>> w1(N), w2(N);
  for (int j = 0; j < N; ++j) {
    w1[j] = phi1(grid[j]);
    w2[j] = std::conj(phi2(grid[j]));
  }
  std::complex<double> total{0.0, 0.0};
  for (int i = 0; i < N; ++i) {
    const int mi = grid.mirror(i);
    std::complex<double> row{0.0, 0.0};
    for (int j = 0; j < N; ++j) {
      const int mj = grid.mirror(j);
      const std::array<std::complex<double>, 10> values{
          P(i, i), std::conj(P(i, i)), P(i, mi),
          P(j, j), std::conj(P(j, j)), P(j, mj),
          P(i, j), P(i, mj), std::conj(P(i, mj)), std::conj(P(i, j))};
      std::complex<double> cum{0.0, 0.0};
      for (const auto& [sig, count] : signatures) cum += static_cast<double>(count) * monomial(values, sig, 10);
      row += w2[j] * cum;
    }
    total += w1[i] * row;
  }
  const double norm = std::pow(kTwoPi * cov.h2(), -(k + l));
  return grid.weight() * grid.weight() * norm * total;
}

std::complex<double> fejer_kernel(const Taper& taper, int T, int k, std::span<const double> lambdas) {
  if (k < 2) throw std::invalid_argument("fejer_kernel: k must be >= 2");
  if (lambdas.size() != static_cast<std::size_t>(k - 1))
    throw std::invalid_argument("fejer_kernel: expected k - 1 frequencies");
  const double hk = h_norm_discrete(taper, T, k, 0.0).real();
  if (hk == 0.0) throw DegenerateTaperError("fejer_kernel: H_{k,T}(0) = 0");
  std::complex<double> prod{1.0, 0.0};
  double sum = 0.0;
  for (double x : lambdas) {
    prod *= h_norm_discrete(taper, T, 1, x);
    sum += x;
  }
  prod *= h_norm_discrete(taper, T, 1, -sum);
  return prod / (std::pow(kTwoPi, k - 1) * hk);
}

FourthMomentCovariance fourth_moment_cov_J1(const SpectralModel& model, const Taper& taper, int T,
                                            const WeightFunction& phi1, const WeightFunction& phi2,
                                            const FrequencyGrid& grid) {
  if (T < 1) throw std::invalid_argument("fourth_moment_cov_J1: T must be >= 1");
  if (T > 8) throw SizeGuardError(fmt::format("fourth_moment_cov_J1: T = {} exceeds 8", T));
  double k4 = 0.0;
  if (!model.is_gaussian()) {
    const auto& known = model.innovations().cumulants().k4;
    if (!known) throw ModelError("fourth_moment_cov_J1: fourth innovation cumulant unknown");
    k4 = *known;
  }
  const int n = 2 * T + 1;
  const auto a = taper_series(taper, T);
  double h2 = 0.0;
  for (double v : a) h2 += v * v;
  if (h2 == 0.0) throw DegenerateTaperError("fourth_moment_cov_J1: H_{2,T}(0) = 0");

  // J_1(phi) = sum_{s,t} Q_{st} Y_s Y_t with
  // Q_{st} = a_s a_t / (2 pi H2) sum_j w phi(lambda_j) e^{-i lambda_j (s - t)}.
  auto quadratic_form = [&](const WeightFunction& phi) {
    std::vector<std::complex<double>> K(static_cast<std::size_t>(2 * n - 1));
    for (int u = -(n - 1); u <= n - 1; ++u) {
      std::complex<double> sum{0.0, 0.0};
      for (int j = 0; j < grid.size(); ++j) sum += phi(grid[j]) * std::polar(1.0, -grid[j] * u);
      K[u + n - 1] = grid.weight() * sum;
    }
    Eigen::MatrixXcd Q(n, n);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) Q(s, t) = a[s] * a[t] * K[s - t + n - 1] / (kTwoPi * h2);
    return Q;
  };
  const Eigen::MatrixXcd Q1 = quadratic_form(phi1);
  const Eigen::MatrixXcd Q2 = quadratic_form(phi2).conjugate();

  std::vector<double> c(static_cast<std::size_t>(2 * n - 1));
  for (int u = -(n - 1); u <= n - 1; ++u) c[u + n - 1] = model.autocovariance(u);
  auto cov = [&](int s, int t) { return c[s - t + n - 1]; };

  const auto& psi = model.psi_weights();
  const int L = static_cast<int>(psi.size());
  auto cum4 = [&](int s, int t, int u, int v) {
    if (k4 == 0.0) return 0.0;
    const int lo = std::min({s, t, u, v});
    const int hi = std::max({s, t, u, v});
    double sum = 0.0;
    for (int m = hi - L + 1; m <= lo; ++m) sum += psi[s - m] * psi[t - m] * psi[u - m] * psi[v - m];
    return k4 * sum;
  };

  FourthMomentCovariance out;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
          const std::complex<double> weight = Q1(s, t) * Q2(u, v);
          // E[Y_s Y_t Y_u Y_v] - E[Y_s Y_t] E[Y_u Y_v]
          out.gaussian_part += weight * (cov(s, u) * cov(t, v) + cov(s, v) * cov(t, u));
          out.trispectrum_part += weight * cum4(s, t, u, v);
        }
  out.total = out.gaussian_part + out.trispectrum_part;
  return out;
}

}  // namespace taperspec
