#include <doctest.h>

#include <cmath>
#include <numbers>

#include "accordion/bessel.hpp"
#include "accordion/error.hpp"
#include "accordion/propagator.hpp"
#include "accordion/spectral.hpp"

using namespace accordion;
using std::numbers::pi;

namespace {

// Ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!), fine for small x.
double series_j(int n, double x) {
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= x / 2 / i;
  double sum = 0.0;
  for (int k = 0; k < 80; ++k) {
    sum += term;
    term *= -(x * x / 4) / ((k + 1.0) * (k + 1.0 + n));
  }
  return sum;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("Bessel values at the origin and against the ascending series") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(7, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(0, 1.0) - series_j(0, 1.0)) < 1e-10);
  for (int n : {0, 1, 2, 5, 12})
    for (double x : {0.1, 0.9, 2.5, 6.0})
      CHECK(bessel_j(n, x) == doctest::Approx(series_j(n, x)).epsilon(1e-10));
  // first zero of J_0
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-12);
}

TEST_CASE("Bessel symmetry rules and argument limits") {
  for (int n : {1, 2, 3, 8})
    for (double x : {0.7, 4.2, 31.0}) {
      CHECK(bessel_j(-n, x) == doctest::Approx((n % 2 ? -1 : 1) * bessel_j(n, x)));
      CHECK(bessel_j(n, -x) == doctest::Approx((n % 2 ? -1 : 1) * bessel_j(n, x)));
    }
  CHECK_THROWS_AS(bessel_j(513, 1.0), ValidationError);
  CHECK_THROWS_AS(bessel_j(0, 1e4 + 1), ValidationError);
  CHECK_NOTHROW(bessel_j(512, 1e4));
}

TEST_CASE("three-term recurrence") {
  for (int n = 1; n < 60; n += 3)
    for (double x : {0.5, 3.3, 17.0, 104.2, 977.0}) {
      const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
      CHECK(std::abs(lhs - 2.0 * n / x * bessel_j(n, x)) < 1e-8);
    }
}

TEST_CASE("sum of squares is one") {
  for (double x : {0.3, 5.0, 42.0, 300.0}) {
    const int cut = static_cast<int>(3 * std::abs(x)) + 40;
    const auto j = bessel_j_sequence(cut, x);
    double s = j[0] * j[0];
    for (int n = 1; n <= cut; ++n) s += 2 * j[n] * j[n];
    CHECK(std::abs(s - 1.0) < 1e-10);
  }
}

TEST_CASE("sequence matches single evaluations, including the large-argument branch") {
  for (double x : {0.0, 1.5, 80.0, 1500.0, 6283.0}) {
    const auto seq = bessel_j_sequence(128, x);
    REQUIRE(seq.size() == 129);
    for (int n = 0; n <= 128; n += 9) CHECK(std::abs(seq[n] - bessel_j(n, x)) < 1e-12);
  }
  // beyond the single-value limit: two-term Hankel form as the check
  const double x = 3e5;
  const auto far = bessel_j_sequence(4, x);
  for (int n : {0, 1, 4}) {
    const double mu = 4.0 * n * n, chi = x - (2 * n + 1) * pi / 4;
    const double approx = std::sqrt(2 / (pi * x)) * (std::cos(chi) - (mu - 1) / (8 * x) * std::sin(chi));
    CHECK(std::abs(far[n] - approx) < 1e-11);
  }
}

TEST_CASE("band transform closed form") {
  const auto b0 = band_transform(0, 0.0);
  REQUIRE(b0.has_value());
  CHECK(std::abs(*b0 - Complex(1 / pi, 0)) < 1e-15);
  for (int n : {-3, 1, 4, 11}) CHECK(std::abs(*band_transform(n, 0.0) - Complex(1 / pi, 0)) < 1e-15);
  CHECK_FALSE(band_transform(2, pi).has_value());
  CHECK_FALSE(band_transform(2, -pi).has_value());
  CHECK_THROWS_AS(band_transform(0, 3.2), ValidationError);
  double prev = 0;
  for (double eps : {1e-1, 1e-3, 1e-6, 1e-9}) {
    const double m = std::abs(*band_transform(1, pi - eps));
    CHECK(m > prev);
    prev = m;
  }
  CHECK(prev > 1e3);
}

TEST_CASE("band transform: magnitude independent of n, B(n) B(-n) real and positive") {
  for (double q = -3.0; q <= 3.0; q += 0.25) {
    const double m = std::abs(*band_transform(0, q));
    for (int n : {-5, -1, 2, 6}) {
      CHECK(std::abs(*band_transform(n, q)) == doctest::Approx(m).epsilon(1e-13));
      const Complex z = *band_transform(n, q) * *band_transform(-n, q);
      CHECK(std::abs(z.imag()) < 1e-13 * std::abs(z));
      CHECK(z.real() > 0);
    }
    const double r = q / pi;
    CHECK(m == doctest::Approx(1 / (pi * std::sqrt(1 - r * r))).epsilon(1e-13));
  }
}

TEST_CASE("direct Fourier sum approaches the band transform") {
  double prev = INFINITY, prev_out = INFINITY;
  for (int L : {4096, 8192, 16384, 32768}) {
    const auto r = dft_check(0, L);
    CHECK(r.max_relative_deviation < prev);
    CHECK(r.out_of_band_ratio < prev_out);
    if (L == 16384) CHECK(r.max_relative_deviation < 0.05);
    CHECK(r.out_of_band_ratio < 0.1);
    prev = r.max_relative_deviation;
    prev_out = r.out_of_band_ratio;
  }
  CHECK(dft_check(3, 16384).max_relative_deviation < 0.05);
  CHECK_THROWS_AS(dft_check(0, 7), ValidationError);
}

TEST_CASE("effective static Hamiltonian") {
  DriveParams p;
  p.sites = 30;
  p.amplitude = 4.0;
  const auto H = effective_h0(p);
  CHECK(H.diagonal[0] == 4.0);
  for (int i = 0; i < p.sites; ++i) CHECK(H.diagonal[i] == doctest::Approx(4.0 * bessel_j(0, pi * i)));
  CHECK(H.hopping == p.hopping);
  const auto D = H.dense();
  CHECK((D - D.transpose()).norm() == 0.0);
}

TEST_CASE("high-frequency limit: full drive tracks the effective Hamiltonian") {
  DriveParams p;
  p.sites = 64;
  p.amplitude = 4.0;
  p.omega = 100.0;
  const auto psi = plane_wave(64, 16);
  TimeGrid g{1e-3, 5.0, 250};
  const auto full = evolve(psi, p, g);
  const auto eff = evolve_static(psi, effective_h0(p), g);
  REQUIRE(full.size() == eff.size());
  double worst = 0;
  for (std::size_t i = 0; i < full.size(); ++i)
    worst = std::max(worst, std::abs(full.translation[i] - eff.translation[i]));
  CHECK(worst < 0.05);
}

TEST_CASE("Magnus terms") {
  DriveParams p;
  p.sites = 120;
  p.omega = 3.0;
  const auto m = magnus_terms(p, 32);
  CHECK(m.order1_witness == 0.0);
  CHECK(m.photon_cutoff == 32);
  REQUIRE(m.bond_coefficients.size() == 120);
  double run = 0;
  for (int i = 0; i < 120; ++i) {
    CHECK(m.bond_coefficients[i] >= 0.0);
    run += m.bond_coefficients[i];
    CHECK(m.partial_sums[i] == doctest::Approx(run).epsilon(1e-13));
  }
  for (int i = 0; i < 120; ++i) CHECK(m.order0.diagonal[i] == effective_h0(p).diagonal[i]);
  CHECK_THROWS_AS(magnus_terms(p, 0), ValidationError);
}

TEST_CASE("Magnus bond coefficients: signed-m oracle and 1/omega^2 scaling") {
  const int M = 16;
  const auto f = magnus_bond_coefficients(pi, 2.0, M, 40);
  const auto g = magnus_bond_coefficients(pi, 4.0, M, 40);
  for (int i = 0; i < 40; ++i) {
    double s = 0;
    for (int mm = -M; mm <= M; ++mm) {
      if (mm == 0) continue;
      const double d = bessel_j(2 * mm, pi * (i + 1)) - bessel_j(2 * mm, pi * i);
      s += d * d / (8.0 * mm * mm * 4.0);
    }
    CHECK(f[i] == doctest::Approx(s).epsilon(1e-12));
    CHECK(g[i] == doctest::Approx(f[i] / 4).epsilon(1e-12));
  }
}

TEST_CASE("Magnus divergence diagnostic") {
  DriveParams p;
  p.omega = 10.0;
  const auto r = magnus_divergence_diagnostic(p, 64, {10, 100, 1000, 10000});
  CHECK(r.strictly_increasing);
  for (std::size_t i = 1; i < r.partial_sums.size(); ++i) CHECK(r.partial_sums[i] > r.partial_sums[i - 1]);
  CHECK(r.slope > 0);
  CHECK(r.r_squared > 0.9);
  CHECK(r.r_squared <= 1.0);
  CHECK_THROWS_AS(magnus_divergence_diagnostic(p, 64, {100, 10}), ValidationError);
  CHECK_THROWS_AS(magnus_divergence_diagnostic(p, 64, {0, 10}), ValidationError);
}

}  // TEST_SUITE
