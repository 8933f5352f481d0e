#include "taperspec/models.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "taperspec/errors.hpp"
#include "taperspec/fft.hpp"

namespace taperspec {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_variance(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("innovation variance sigma2 must be finite and > 0");
}

double ar_root_radius(const std::vector<double>& ar) {
  if (ar.empty()) return 0.0;
  const auto p = static_cast<Eigen::Index>(ar.size());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) companion(0, i) = ar[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> compute_psi(const std::vector<double>& ar, const std::vector<double>& ma) {
  constexpr std::size_t kMaxLength = 1'000'000;
  const std::size_t p = ar.size();
  const std::size_t q = ma.size();
  const std::size_t window = std::max<std::size_t>(p, 1);
  std::vector<double> psi{1.0};
  double peak = 1.0;
  for (std::size_t j = 1; j < kMaxLength; ++j) {
    double v = j <= q ? ma[j - 1] : 0.0;
    for (std::size_t i = 1; i <= std::min(j, p); ++i) v += ar[i - 1] * psi[j - i];
    psi.push_back(v);
    peak = std::max(peak, std::abs(v));
    if (j >= std::max(p, q)) {
      bool negligible = true;
      for (std::size_t back = 0; back < window && negligible; ++back)
        negligible = std::abs(psi[j - back]) <= 1e-17 * peak;
      if (negligible) {
        while (psi.size() > 1 && psi.back() == 0.0) psi.pop_back();
        return psi;
      }
    }
  }
  throw ModelError("psi weights did not decay within 1e6 terms");
}

}  // namespace

// ---------------------------------------------------------------------------
// Innovations

Innovations Innovations::gaussian(double sigma2) {
  require_variance(sigma2);
  Innovations out;
  out.law_ = InnovationLaw::gaussian;
  out.cumulants_ = {sigma2, 0.0, 0.0};
  const double s = std::sqrt(sigma2);
  out.sampler_ = [s](std::mt19937_64& rng) { return s * std::normal_distribution<double>{}(rng); };
  return out;
}

Innovations Innovations::exponential(double sigma2) {
  require_variance(sigma2);
  Innovations out;
  out.law_ = InnovationLaw::exponential;
  const double s = std::sqrt(sigma2);
  out.cumulants_ = {sigma2, 2.0 * s * s * s, 6.0 * sigma2 * sigma2};
  out.sampler_ = [s](std::mt19937_64& rng) {
    return s * (std::exponential_distribution<double>{1.0}(rng) - 1.0);
  };
  return out;
}

Innovations Innovations::twopoint(double sigma2) {
  require_variance(sigma2);
  Innovations out;
  out.law_ = InnovationLaw::twopoint;
  const double s = std::sqrt(sigma2);
  out.cumulants_ = {sigma2, 0.0, -2.0 * sigma2 * sigma2};
  out.sampler_ = [s](std::mt19937_64& rng) { return (rng() >> 63) ? s : -s; };
  return out;
}

Innovations Innovations::custom(Sampler sampler, double sigma2, std::optional<double> k3,
                                std::optional<double> k4) {
  require_variance(sigma2);
  if (!sampler) throw std::invalid_argument("custom innovations: empty sampler");
  Innovations out;
  out.law_ = InnovationLaw::custom;
  out.cumulants_ = {sigma2, k3, k4};
  out.sampler_ = std::move(sampler);
  return out;
}

double Innovations::draw(std::mt19937_64& rng) const { return sampler_(rng); }

// ---------------------------------------------------------------------------
// SpectralModel

SpectralModel SpectralModel::white(double sigma2) {
  SpectralModel m;
  m.family_ = ModelFamily::gaussian_white;
  m.innovations_ = Innovations::gaussian(sigma2);
  m.finish();
  return m;
}

SpectralModel SpectralModel::ar1(double sigma2, double rho) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("ar1: |rho| must be < 1");
  SpectralModel m;
  m.family_ = ModelFamily::gaussian_ar1;
  m.ar_ = {rho};
  m.innovations_ = Innovations::gaussian(sigma2);
  m.finish();
  return m;
}

SpectralModel SpectralModel::ma1(double sigma2, double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("ma1: theta must be finite");
  SpectralModel m;
  m.family_ = ModelFamily::gaussian_ma1;
  m.ma_ = {theta};
  m.innovations_ = Innovations::gaussian(sigma2);
  m.finish();
  return m;
}

SpectralModel SpectralModel::linear(std::vector<double> ar, std::vector<double> ma, Innovations innovations) {
  SpectralModel m;
  m.family_ = ModelFamily::linear_nongaussian;
  m.ar_ = std::move(ar);
  m.ma_ = std::move(ma);
  m.innovations_ = std::move(innovations);
  m.finish();
  return m;
}

void SpectralModel::finish() {
  ar_radius_ = ar_root_radius(ar_);
  if (!(ar_radius_ < 1.0))
    throw ModelError(fmt::format("AR part is not stationary (root radius {:.6g})", ar_radius_));
  psi_ = std::make_shared<const std::vector<double>>(compute_psi(ar_, ma_));
}

bool SpectralModel::is_gaussian() const noexcept {
  return family_ != ModelFamily::linear_nongaussian || innovations_.law() == InnovationLaw::gaussian;
}

bool SpectralModel::has_trispectrum() const noexcept {
  return is_gaussian() || innovations_.cumulants().k4.has_value();
}

std::string SpectralModel::describe() const {
  const double s2 = sigma2();
  switch (family_) {
    case ModelFamily::gaussian_white:
      return fmt::format("white(sigma2={})", s2);
    case ModelFamily::gaussian_ar1:
      return fmt::format("ar1(sigma2={}, rho={})", s2, ar_[0]);
    case ModelFamily::gaussian_ma1:
      return fmt::format("ma1(sigma2={}, theta={})", s2, ma_[0]);
    case ModelFamily::linear_nongaussian:
      break;
  }
  const char* law = "custom";
  switch (innovations_.law()) {
    case InnovationLaw::gaussian: law = "gaussian"; break;
    case InnovationLaw::exponential: law = "exponential"; break;
    case InnovationLaw::twopoint: law = "twopoint"; break;
    case InnovationLaw::custom: break;
  }
  return fmt::format("linear(ar=[{}], ma=[{}], innovations={}, sigma2={})", fmt::join(ar_, ","),
                     fmt::join(ma_, ","), law, s2);
}

std::complex<double> SpectralModel::transfer(double lambda) const {
  std::complex<double> num{1.0, 0.0};
  for (std::size_t j = 0; j < ma_.size(); ++j)
    num += ma_[j] * std::polar(1.0, -lambda * static_cast<double>(j + 1));
  std::complex<double> den{1.0, 0.0};
  for (std::size_t j = 0; j < ar_.size(); ++j)
    den -= ar_[j] * std::polar(1.0, -lambda * static_cast<double>(j + 1));
  return num / den;
}

double SpectralModel::spectral_density(double lambda) const {
  const double s2 = sigma2();
  switch (family_) {
    case ModelFamily::gaussian_white:
      return s2 / kTwoPi;
    case ModelFamily::gaussian_ar1: {
      const double rho = ar_[0];
      return s2 / (kTwoPi * (1.0 - 2.0 * rho * std::cos(lambda) + rho * rho));
    }
    case ModelFamily::gaussian_ma1: {
      const double theta = ma_[0];
      return s2 / kTwoPi * (1.0 + 2.0 * theta * std::cos(lambda) + theta * theta);
    }
    case ModelFamily::linear_nongaussian:
      break;
  }
  return s2 / kTwoPi * std::norm(transfer(lambda));
}

double SpectralModel::autocovariance(long tau) const {
  const double s2 = sigma2();
  const long lag = tau < 0 ? -tau : tau;
  switch (family_) {
    case ModelFamily::gaussian_white:
      return lag == 0 ? s2 : 0.0;
    case ModelFamily::gaussian_ar1: {
      const double rho = ar_[0];
      return s2 * std::pow(rho, static_cast<double>(lag)) / (1.0 - rho * rho);
    }
    case ModelFamily::gaussian_ma1: {
      const double theta = ma_[0];
      if (lag == 0) return s2 * (1.0 + theta * theta);
      return lag == 1 ? s2 * theta : 0.0;
    }
    case ModelFamily::linear_nongaussian:
      break;
  }
  const auto& psi = *psi_;
  if (static_cast<std::size_t>(lag) >= psi.size()) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j + static_cast<std::size_t>(lag) < psi.size(); ++j) sum += psi[j] * psi[j + lag];
  return s2 * sum;
}

std::complex<double> SpectralModel::trispectrum(double l1, double l2, double l3) const {
  if (is_gaussian()) return {0.0, 0.0};
  const auto& k4 = innovations_.cumulants().k4;
  if (!k4) throw ModelError("trispectrum: fourth innovation cumulant unknown for " + describe());
  const double scale = *k4 / (kTwoPi * kTwoPi * kTwoPi);
  return scale * transfer(l1) * transfer(l2) * transfer(l3) * transfer(-l1 - l2 - l3);
}

// ---------------------------------------------------------------------------
// Simulation

PathSampler::PathSampler(SpectralModel model, int T) : model_(std::move(model)), T_(T) {
  if (T < 1) throw std::invalid_argument("simulate: T must be >= 1");
  if (model_.family() == ModelFamily::linear_nongaussian) {
    burn_in_ = 1024 + static_cast<int>(std::ceil(20.0 / (1.0 - model_.ar_radius())));
    return;
  }
  const int n = 2 * T + 1;
  // Minimal embedding first, doubled while negative eigenvalues exceed the
  // tolerance. Tiny negatives within tolerance are set to zero.
  std::string last_failure;
  for (int m = 2 * (n - 1); m <= 64 * n; m *= 2) {
    std::vector<std::complex<double>> row(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) row[j] = model_.autocovariance(std::min(j, m - j));
    fft::forward(row);
    double max_ev = 0.0;
    double min_ev = 0.0;
    for (const auto& v : row) {
      max_ev = std::max(max_ev, v.real());
      min_ev = std::min(min_ev, v.real());
    }
    if (min_ev < -1e-10 * max_ev) {
      last_failure = fmt::format("m={} min eigenvalue {:.3e} (max {:.3e})", m, min_ev, max_ev);
      continue;
    }
    sqrt_eigen_.resize(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
      sqrt_eigen_[j] = std::sqrt(std::max(row[j].real(), 0.0) / m);
    return;
  }
  throw EmbeddingError("circulant embedding failed for " + model_.describe() + ": " + last_failure);
}

SamplePath PathSampler::draw(std::uint64_t seed) const {
  return sqrt_eigen_.empty() ? draw_filtered(seed) : draw_circulant(seed);
}

SamplePath PathSampler::draw_circulant(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> z(sqrt_eigen_.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double a = normal(rng);
    const double b = normal(rng);
    z[j] = sqrt_eigen_[j] * std::complex<double>(a, b);
  }
  fft::forward(z);
  SamplePath path{T_, std::vector<double>(2 * static_cast<std::size_t>(T_) + 1), seed};
  for (std::size_t t = 0; t < path.values.size(); ++t) path.values[t] = z[t].real();
  return path;
}

SamplePath PathSampler::draw_filtered(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  const auto& ar = model_.ar();
  const auto& ma = model_.ma();
  const auto& innov = model_.innovations();
  const std::size_t n = 2 * static_cast<std::size_t>(T_) + 1;
  const std::size_t total = static_cast<std::size_t>(burn_in_) + n;
  const std::size_t q = ma.size();
  std::vector<double> eps(total + q);
  for (auto& e : eps) e = innov.draw(rng);
  std::vector<double> y(total, 0.0);
  for (std::size_t t = 0; t < total; ++t) {
    double v = eps[t + q];
    for (std::size_t j = 1; j <= q; ++j) v += ma[j - 1] * eps[t + q - j];
    for (std::size_t i = 1; i <= ar.size() && i <= t; ++i) v += ar[i - 1] * y[t - i];
    y[t] = v;
  }
  SamplePath path{T_, std::vector<double>(y.end() - static_cast<std::ptrdiff_t>(n), y.end()), seed};
  return path;
}

SamplePath simulate(const SpectralModel& model, int T, std::uint64_t seed) {
  return PathSampler(model, T).draw(seed);
}

}  // namespace taperspec
