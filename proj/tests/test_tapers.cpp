#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "taperspec/errors.hpp"
#include "taperspec/tapers.hpp"

using namespace taperspec;

namespace {

// Direct complex sum, no pairing of +t and -t.
std::complex<double> naive_h_norm(const Taper& h, int T, int k, double lambda) {
  std::complex<double> s = 0.0;
  for (int t = -T; t <= T; ++t)
    s += std::pow(h(static_cast<double>(t) / T), k) * std::exp(std::complex<double>(0.0, -lambda * t));
  return s;
}

}  // namespace

TEST_CASE("h_norm_discrete by hand enumeration") {
  const auto rect = Taper::rectangular();
  CHECK(h_norm_discrete(rect, 3, 2, 0.0).real() == doctest::Approx(7.0).epsilon(1e-15));
  // (-1)^t over t = -3..3: three even indices and four odd ones
  CHECK(h_norm_discrete(rect, 3, 2, std::numbers::pi).real() == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(h_norm_discrete(rect, 4, 1, std::numbers::pi).real() == doctest::Approx(1.0).epsilon(1e-13));

  // bartlett T=2: weights 0, .5, 1, .5, 0; k = 2 gives 1 + 2*.25 = 1.5
  CHECK(h_norm_discrete(Taper::bartlett(), 2, 2, 0.0).real() == doctest::Approx(1.5));
  // lambda = pi/2: 1 + 2 * .25 * cos(pi/2) = 1
  CHECK(h_norm_discrete(Taper::bartlett(), 2, 2, std::numbers::pi / 2).real() == doctest::Approx(1.0));
}

TEST_CASE("h_norm_discrete agrees with the unpaired complex sum and is real") {
  for (const auto& h : {Taper::rectangular(), Taper::cosine(), Taper::bartlett()}) {
    for (int T : {1, 5, 17}) {
      for (int k : {1, 2, 4}) {
        for (double lambda : {0.0, 0.3, -1.7, std::numbers::pi}) {
          const auto a = h_norm_discrete(h, T, k, lambda);
          const auto b = naive_h_norm(h, T, k, lambda);
          CHECK(std::abs(a - b) < 1e-12 * (2 * T + 1));
          CHECK(a.imag() == 0.0);
        }
      }
    }
  }
}

TEST_CASE("e(h) against closed forms") {
  CHECK(std::abs(e_of_h(Taper::rectangular()) - 0.5) < 1e-12);
  // int cos^4(pi t/2) over [-1,1] = 3/4, int cos^2 = 1
  CHECK(std::abs(e_of_h(Taper::cosine()) - 0.75) < 1e-8);
  // int (1-|t|)^2 = 2/3, int (1-|t|)^4 = 2/5
  CHECK(std::abs(e_of_h(Taper::bartlett()) - 0.9) < 1e-8);

  CHECK(std::abs(h_norm_continuous(Taper::cosine(), 2) - 1.0) < 1e-10);
  CHECK(std::abs(h_norm_continuous(Taper::bartlett(), 2) - 2.0 / 3.0) < 1e-10);
  CHECK(std::abs(h_norm_continuous(Taper::bartlett(), 4) - 0.4) < 1e-10);
  // int cos(pi t/2) = 4/pi
  CHECK(std::abs(h_norm_continuous(Taper::cosine(), 1) - 4.0 / std::numbers::pi) < 1e-10);
}

TEST_CASE("taper_series examples and palindrome") {
  CHECK(taper_series(Taper::rectangular(), 1) == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(taper_series(Taper::bartlett(), 2) == std::vector<double>{0.0, 0.5, 1.0, 0.5, 0.0});
  const auto c = taper_series(Taper::cosine(), 2);
  REQUIRE(c.size() == 5);
  CHECK(c[2] == 1.0);
  for (int T : {1, 2, 7, 64, 333}) {
    for (const auto& h : {Taper::rectangular(), Taper::cosine(), Taper::bartlett()}) {
      const auto s = taper_series(h, T);
      REQUIRE(s.size() == static_cast<std::size_t>(2 * T + 1));
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == s[s.size() - 1 - i]);
    }
  }
}

TEST_CASE("taper support and shape properties") {
  for (const auto& h : {Taper::rectangular(), Taper::cosine(), Taper::bartlett()}) {
    CHECK(h(1.0001) == 0.0);
    CHECK(h(-3.0) == 0.0);
    for (int i = 0; i <= 200; ++i) {
      const double t = -1.0 + i / 100.0;
      CHECK(h(t) >= 0.0);
      CHECK(h(t) == doctest::Approx(h(-t)).epsilon(1e-14));
    }
    // H_1 >= H_2 >= H_4 > 0 since 0 < h <= 1
    for (int T : {4, 32}) {
      const double h1 = h_norm_discrete(h, T, 1, 0.0).real();
      const double h2 = h_norm_discrete(h, T, 2, 0.0).real();
      const double h4 = h_norm_discrete(h, T, 4, 0.0).real();
      CHECK(h1 >= h2);
      CHECK(h2 >= h4);
      CHECK(h4 > 0.0);
    }
    // discrete total variation settles as the grid refines
    const double tv1 = total_variation(h, 1001);
    const double tv2 = total_variation(h, 4001);
    CHECK(std::abs(tv1 - tv2) < 1e-3);
  }
  CHECK(total_variation(Taper::bartlett(), 2001) == doctest::Approx(2.0));
  CHECK(total_variation(Taper::cosine(), 2001) == doctest::Approx(2.0));
}

TEST_CASE("Riemann sums H_{k,T}(0)/T converge to H_k(0)") {
  for (const auto& h : {Taper::rectangular(), Taper::cosine(), Taper::bartlett()}) {
    for (int k : {1, 2, 4}) {
      double prev = INFINITY;
      const double limit = h_norm_continuous(h, k);
      for (int T : {8, 16, 32, 64, 128}) {
        const double err = std::abs(h_norm_discrete(h, T, k, 0.0).real() / T - limit);
        CHECK((err < prev || err < 1e-12));
        prev = err;
      }
    }
  }
}

TEST_CASE("T H_4T / H_2T^2 tends to e(h)") {
  for (const auto& h : {Taper::rectangular(), Taper::cosine(), Taper::bartlett()}) {
    const double e = e_of_h(h);
    double prev = INFINITY;
    for (int T : {8, 32, 128, 512}) {
      const double h2 = h_norm_discrete(h, T, 2, 0.0).real();
      const double h4 = h_norm_discrete(h, T, 4, 0.0).real();
      const double err = std::abs(T * h4 / (h2 * h2) - e);
      CHECK((err < prev || err < 1e-12));
      prev = err;
    }
    CHECK(prev < 1e-2);
  }
  CHECK(e_of_h(Taper::rectangular()) == doctest::Approx(h_norm_continuous(Taper::rectangular(), 4) /
                                                        std::pow(h_norm_continuous(Taper::rectangular(), 2), 2)));
}

TEST_CASE("custom tapers are validated") {
  const auto hann = Taper::custom([](double t) { return std::pow(std::cos(std::numbers::pi * t / 2), 2); }, "hann2");
  CHECK(hann.kind() == TaperKind::custom);
  // int cos^4 = 3/4, int cos^8 = 35/64
  CHECK(e_of_h(hann) == doctest::Approx((35.0 / 64.0) / (0.75 * 0.75)).epsilon(1e-8));

  CHECK_THROWS_AS(Taper::custom([](double t) { return 1.0 + t; }, "odd"), std::invalid_argument);
  CHECK_THROWS_AS(Taper::custom([](double t) { return t * t - 0.5; }, "negative"), std::invalid_argument);
  CHECK_THROWS_AS(Taper::custom([](double) { return 0.0; }, "zero"), std::invalid_argument);
  CHECK_THROWS_AS(Taper::custom([](double) { return 1.0; }, "undeclared", false), std::invalid_argument);
  CHECK_THROWS_AS(Taper::from_name("hamming"), std::invalid_argument);
  CHECK(Taper::from_name("cosine").kind() == TaperKind::cosine);

  // vanishes on the sample grid except at the ends, which the taper zeroes
  const auto spike = Taper::custom([](double t) { return std::abs(t) < 0.01 ? 1.0 : 0.0; }, "spike");
  CHECK(h_norm_discrete(spike, 3, 2, 0.0).real() == 1.0);
}

TEST_CASE("precondition violations") {
  CHECK_THROWS_AS(h_norm_discrete(Taper::rectangular(), 0, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(h_norm_discrete(Taper::rectangular(), 3, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(taper_series(Taper::rectangular(), 0), std::invalid_argument);
  CHECK_THROWS_AS(e_of_h(Taper::rectangular(), 10), std::invalid_argument);
  CHECK_THROWS_AS(simpson([](double x) { return x; }, 0.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("taper_norms bundles the norms") {
  const std::vector<int> ks{1, 2, 4};
  const auto n = taper_norms(Taper::rectangular(), 10, ks);
  CHECK(n.H_kT_zero.at(2) == doctest::Approx(21.0));
  CHECK(n.H_k_zero.at(4) == doctest::Approx(2.0));
  CHECK(n.e_h == doctest::Approx(0.5));
}
