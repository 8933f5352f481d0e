#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "taperspec/errors.hpp"
#include "taperspec/models.hpp"

using namespace taperspec;

namespace {

constexpr double kPi = std::numbers::pi;

// Midpoint rule on (-pi, pi]; periodic smooth integrands converge geometrically.
double fourier_coefficient(const SpectralModel& m, int tau, int points = 4096) {
  double s = 0.0;
  const double step = 2 * kPi / points;
  for (int j = 0; j < points; ++j) {
    const double l = -kPi + (j + 0.5) * step;
    s += m.spectral_density(l) * std::cos(tau * l);
  }
  return s * step;
}

std::vector<SpectralModel> builtins() {
  return {SpectralModel::white(1.0),
          SpectralModel::white(2.5),
          SpectralModel::ar1(1.0, 0.5),
          SpectralModel::ar1(0.7, -0.8),
          SpectralModel::ma1(1.0, 0.5),
          SpectralModel::ma1(2.0, -1.3),
          SpectralModel::linear({}, {}, Innovations::exponential(1.0)),
          SpectralModel::linear({0.5}, {}, Innovations::twopoint(1.0)),
          SpectralModel::linear({0.3, -0.2}, {0.4}, Innovations::exponential(1.5))};
}

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments mean_se(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  s /= static_cast<double>(x.size() - 1);
  return {m, std::sqrt(s / static_cast<double>(x.size()))};
}

double lag_cov(const SamplePath& p, int lag) {
  double s = 0.0;
  const int n = static_cast<int>(p.values.size());
  for (int t = 0; t + lag < n; ++t) s += p.values[t] * p.values[t + lag];
  return s / (n - lag);
}

}  // namespace

TEST_CASE("spectral density examples") {
  CHECK(SpectralModel::white(1.0).spectral_density(0.7) == doctest::Approx(1.0 / (2 * kPi)));
  CHECK(SpectralModel::ar1(1.0, 0.5).spectral_density(0.0) == doctest::Approx(2.0 / kPi));
  const auto ma = SpectralModel::ma1(1.0, 0.5);
  for (double l : {-2.0, 0.0, 1.1, kPi}) {
    const double closed = std::norm(1.0 + 0.5 * std::exp(std::complex<double>(0.0, -l))) / (2 * kPi);
    CHECK(ma.spectral_density(l) == doctest::Approx(closed).epsilon(1e-14));
  }
}

TEST_CASE("autocovariance closed forms") {
  const auto w = SpectralModel::white(1.7);
  CHECK(w.autocovariance(0) == 1.7);
  CHECK(w.autocovariance(3) == 0.0);
  const auto a = SpectralModel::ar1(2.0, 0.5);
  for (int tau = -5; tau <= 5; ++tau)
    CHECK(a.autocovariance(tau) == doctest::Approx(2.0 * std::pow(0.5, std::abs(tau)) / 0.75));
  const auto m = SpectralModel::ma1(3.0, -0.4);
  CHECK(m.autocovariance(0) == doctest::Approx(3.0 * 1.16));
  CHECK(m.autocovariance(1) == doctest::Approx(-1.2));
  CHECK(m.autocovariance(-1) == doctest::Approx(-1.2));
  CHECK(m.autocovariance(2) == 0.0);

  // linear family with the same coefficients reproduces the Gaussian closed forms
  const auto la = SpectralModel::linear({0.5}, {}, Innovations::exponential(2.0));
  const auto lm = SpectralModel::linear({}, {-0.4}, Innovations::twopoint(3.0));
  for (int tau = 0; tau <= 6; ++tau) {
    CHECK(la.autocovariance(tau) == doctest::Approx(a.autocovariance(tau)).epsilon(1e-12));
    CHECK(lm.autocovariance(tau) == doctest::Approx(m.autocovariance(tau)).epsilon(1e-12));
  }
}

TEST_CASE("quadrature identity c(tau) = int f e^{i tau l}") {
  for (const auto& m : builtins())
    for (int tau = 0; tau <= 5; ++tau)
      CHECK(std::abs(fourier_coefficient(m, tau) - m.autocovariance(tau)) < 1e-6);
}

TEST_CASE("evenness, nonnegativity, and covariance bounds") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (const auto& m : builtins()) {
    for (int i = 0; i < 100; ++i) {
      const double l = u(rng);
      CHECK(m.spectral_density(l) == doctest::Approx(m.spectral_density(-l)).epsilon(1e-13));
      CHECK(m.spectral_density(l) >= 0.0);
    }
    for (int tau = 1; tau < 10; ++tau) {
      CHECK(m.autocovariance(tau) == m.autocovariance(-tau));
      CHECK(std::abs(m.autocovariance(tau)) <= m.autocovariance(0));
    }
  }
}

TEST_CASE("linear density equals kappa2 |psi|^2 / 2pi") {
  const auto m = SpectralModel::linear({0.3, -0.2}, {0.4}, Innovations::exponential(1.5));
  for (double l : {-3.0, -0.5, 0.0, 0.25, 2.0}) {
    std::complex<double> psi = 0.0;
    const auto& w = m.psi_weights();
    for (std::size_t j = 0; j < w.size(); ++j) psi += w[j] * std::exp(std::complex<double>(0.0, -l * j));
    CHECK(m.spectral_density(l) == doctest::Approx(1.5 * std::norm(psi) / (2 * kPi)).epsilon(1e-12));
  }
}

TEST_CASE("innovation cumulants") {
  const auto e = Innovations::exponential(4.0);
  CHECK(e.cumulants().k2 == 4.0);
  CHECK(*e.cumulants().k3 == doctest::Approx(16.0));
  CHECK(*e.cumulants().k4 == doctest::Approx(96.0));
  const auto t = Innovations::twopoint(1.0);
  CHECK(*t.cumulants().k3 == 0.0);
  CHECK(*t.cumulants().k4 == doctest::Approx(-2.0));

  // sample cumulants of the samplers
  std::mt19937_64 rng(5);
  const auto unit = Innovations::exponential(1.0);
  const int n = 400000;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = unit.draw(rng);
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
  }
  s1 /= n;
  s2 /= n;
  s3 /= n;
  s4 /= n;
  CHECK(std::abs(s1) < 0.01);
  CHECK(std::abs(s2 - 1.0) < 0.02);
  CHECK(std::abs(s3 - 2.0) < 0.15);
  CHECK(std::abs(s4 - 3.0 * s2 * s2 - 6.0) < 1.5);

  std::mt19937_64 rng2(6);
  for (int i = 0; i < 100; ++i) CHECK(std::abs(std::abs(t.draw(rng2)) - 1.0) < 1e-15);
}

TEST_CASE("trispectrum values") {
  CHECK(SpectralModel::ar1(1.0, 0.5).trispectrum(0.1, 0.2, 0.3) == std::complex<double>(0.0, 0.0));
  const auto iid = SpectralModel::linear({}, {}, Innovations::exponential(1.0));
  const double expected = 6.0 / std::pow(2 * kPi, 3);
  for (double a : {-1.0, 0.0, 2.5})
    CHECK(std::abs(iid.trispectrum(a, 0.3, -a) - expected) < 1e-15);

  const auto m = SpectralModel::linear({0.5}, {0.3}, Innovations::exponential(1.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    const double l1 = u(rng), l2 = u(rng), l3 = u(rng);
    const auto v = m.trispectrum(l1, l2, l3);
    CHECK(std::abs(v - std::conj(m.trispectrum(-l1, -l2, -l3))) < 1e-12 * std::abs(v));
    CHECK(std::abs(m.trispectrum(l1, -l1, l2).imag()) < 1e-14);
  }

  const auto unknown = SpectralModel::linear(
      {}, {}, Innovations::custom([](std::mt19937_64& r) { return std::normal_distribution<double>{}(r); }, 1.0));
  CHECK_FALSE(unknown.has_trispectrum());
  CHECK_THROWS_AS(unknown.trispectrum(0, 0, 0), ModelError);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(SpectralModel::ar1(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SpectralModel::white(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SpectralModel::linear({1.2}, {}, Innovations::exponential(1.0)), ModelError);
  CHECK_THROWS_AS(SpectralModel::linear({0.5, 0.6}, {}, Innovations::exponential(1.0)), ModelError);
  CHECK(SpectralModel::linear({0.5, -0.3}, {}, Innovations::gaussian(1.0)).is_gaussian());
  CHECK_FALSE(SpectralModel::linear({}, {}, Innovations::twopoint(1.0)).is_gaussian());
  CHECK(SpectralModel::linear({0.9}, {}, Innovations::gaussian(1.0)).ar_radius() == doctest::Approx(0.9));
}

TEST_CASE("simulation is deterministic and has the right length") {
  for (const auto& m : builtins()) {
    const auto a = simulate(m, 17, 1234);
    const auto b = simulate(m, 17, 1234);
    const auto c = simulate(m, 17, 1235);
    CHECK(a.values.size() == 35u);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
  }
  const PathSampler filtered(SpectralModel::linear({0.5}, {}, Innovations::exponential(1.0)), 8);
  CHECK(filtered.burn_in() == 1024 + 40);
  const PathSampler embedded(SpectralModel::ar1(1.0, 0.5), 8);
  CHECK(embedded.embedding_size() >= 32);
}

TEST_CASE("white noise second moment, T=512, 200 replicates") {
  const auto m = SpectralModel::white(2.0);
  const PathSampler sampler(m, 512);
  std::vector<double> x;
  for (int r = 0; r < 200; ++r) {
    const auto p = sampler.draw(1000 + r);
    double s = 0.0;
    for (double v : p.values) s += v * v;
    x.push_back(s / static_cast<double>(p.values.size()));
  }
  const auto ms = mean_se(x);
  CHECK(std::abs(ms.mean - 2.0) < 3.0 * ms.se);
}

TEST_CASE("ar1 lag-1 autocovariance, 200 replicates") {
  const auto m = SpectralModel::ar1(1.0, 0.5);
  const PathSampler sampler(m, 256);
  std::vector<double> x;
  for (int r = 0; r < 200; ++r) x.push_back(lag_cov(sampler.draw(50 + r), 1));
  const auto ms = mean_se(x);
  CHECK(std::abs(ms.mean - 0.5 / 0.75) < 3.0 * ms.se);
}

TEST_CASE("simulated lag covariances match c(tau), T=256, R=500") {
  for (const auto& m : {SpectralModel::ma1(1.0, 0.5), SpectralModel::ar1(1.0, -0.6),
                        SpectralModel::linear({0.5}, {}, Innovations::exponential(1.0)),
                        SpectralModel::linear({}, {0.7}, Innovations::twopoint(1.0))}) {
    const PathSampler sampler(m, 256);
    std::vector<std::vector<double>> lags(4);
    for (int r = 0; r < 500; ++r) {
      const auto p = sampler.draw(7000 + r);
      for (int tau = 0; tau < 4; ++tau) lags[tau].push_back(lag_cov(p, tau));
    }
    for (int tau = 0; tau < 4; ++tau) {
      const auto ms = mean_se(lags[tau]);
      CHECK(std::abs(ms.mean - m.autocovariance(tau)) < 4.0 * ms.se + 1e-12);
    }
  }
}
