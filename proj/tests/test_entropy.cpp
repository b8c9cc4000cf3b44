#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "accordion/entropy.hpp"
#include "accordion/error.hpp"

using namespace accordion;

namespace {

const double kLn2 = std::numbers::ln2;

// Independent oracle: bisection on the characteristic polynomial, each root
// bracketed on either side of the vertex.
double root_solve_entropy(double pa, double c2) {
  const double pb = 1 - pa;
  const double b = 2 * c2 + pa * pa + pb * pb;
  const double c = c2 * c2 + c2 * (pa * pa + pb * pb) + pa * pa * pb * pb - c2;
  auto f = [&](double x) { return x * x - b * x + c; };
  auto bisect = [&](double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((f(lo) <= 0) == (f(mid) <= 0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double v = b / 2;
  const double r1 = f(v) >= 0 ? v : bisect(v, b + 1);
  const double r2 = f(v) >= 0 ? v : bisect(-1, v);
  double s = 0;
  for (double r : {r1, r2})
    if (r > 0) s -= r * std::log(r);
  return s;
}

LatticeState random_state(int L, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(static_cast<std::size_t>(L));
  for (auto& z : a) z = {g(rng), g(rng)};
  return LatticeState::from_amplitudes(std::move(a));
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("eigenvalue entropy with 0 ln 0 and clipping") {
  CHECK(entropy_of_eigenvalues(1, 0) == 0.0);
  CHECK(entropy_of_eigenvalues(0.25, 0.25) == doctest::Approx(0.5 * std::log(4.0)));
  CHECK(entropy_of_eigenvalues(1, -1e-15) == 0.0);
}

TEST_CASE("invariant-form examples") {
  auto e = entropy_from_invariants(0.5, 0);
  CHECK(e.lambda1 == doctest::Approx(0.25));
  CHECK(e.lambda2 == doctest::Approx(0.25));
  CHECK(e.entropy == doctest::Approx(kLn2).epsilon(1e-14));
  e = entropy_from_invariants(0.5, 0.25);
  CHECK(e.lambda1 == doctest::Approx(1.0));
  CHECK(std::abs(e.lambda2) < 1e-12);
  CHECK(std::abs(e.entropy) < 1e-10);
  e = entropy_from_invariants(1.0, 0);
  CHECK(e.lambda1 == 1.0);
  CHECK(e.lambda2 == 0.0);
  CHECK(e.entropy == 0.0);
  const double expect = -2 * (0.36 * std::log(0.6) + 0.16 * std::log(0.4));
  CHECK(entropy_from_invariants(0.6, 0).entropy == doctest::Approx(expect).epsilon(1e-14));
  CHECK(expect == doctest::Approx(0.6610).epsilon(1e-4));
}

TEST_CASE("invariant-form domain checks") {
  CHECK_THROWS_AS(entropy_from_invariants(-0.1, 0), ValidationError);
  CHECK_THROWS_AS(entropy_from_invariants(1.1, 0), ValidationError);
  CHECK_THROWS_AS(entropy_from_invariants(0.5, 0.26), ValidationError);
  CHECK_THROWS_AS(entropy_from_invariants(0.5, -0.01), ValidationError);
}

TEST_CASE("closed form agrees with a root-solve oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const double pa = u(rng);
    const double c2 = u(rng) * pa * (1 - pa);
    CHECK(entropy_from_invariants(pa, c2).entropy == doctest::Approx(root_solve_entropy(pa, c2)).epsilon(1e-9));
  }
}

TEST_CASE("state examples: orthogonal, parallel and one-sided halves") {
  const int L = 8;
  std::vector<Complex> half(L / 2);
  for (int i = 0; i < L / 2; ++i) half[i] = Complex(0.3 * i + 0.1, -0.2 * i);

  // parallel: psi_B = m psi_A
  std::vector<Complex> par(L);
  const Complex m(0.4, -1.3);
  for (int i = 0; i < L / 2; ++i) par[i] = half[i], par[i + L / 2] = m * half[i];
  CHECK(std::abs(bipartite_entropy(LatticeState::from_amplitudes(par)).entropy) < 1e-7);

  // orthogonal halves of equal weight: (1,1,0,0 | 1,-1,0,0)
  std::vector<Complex> orth = {1, 1, 0, 0, 1, -1, 0, 0};
  auto r = bipartite_entropy(LatticeState::from_amplitudes(orth));
  CHECK(r.weight_a == doctest::Approx(0.5));
  CHECK(std::abs(r.overlap) < 1e-15);
  CHECK(r.entropy == doctest::Approx(kLn2));

  std::vector<Complex> one(L, 0);
  for (int i = 0; i < L / 2; ++i) one[i] = half[i];
  r = bipartite_entropy(LatticeState::from_amplitudes(one));
  CHECK(r.weight_a == doctest::Approx(1.0));
  CHECK(r.lambda1 == doctest::Approx(1.0));
  CHECK(r.entropy == 0.0);

  CHECK_THROWS_AS(bipartite_entropy(std::vector<Complex>{1, 0, 0}), ValidationError);
}

TEST_CASE("random states: bounds, Cauchy-Schwarz, consistency, phase invariance") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> len(2, 40);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto psi = random_state(2 * len(rng), rng);
    const auto r = bipartite_entropy(psi);
    CHECK(r.entropy >= 0.0);
    CHECK(r.entropy <= kLn2 + 1e-9);
    CHECK(r.weight_a + r.weight_b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.overlap_abs * r.overlap_abs <= r.weight_a * r.weight_b + 1e-12);
    CHECK(r.lambda1 * r.lambda2 >= -1e-12);
    const auto e = entropy_from_invariants(r.weight_a, r.overlap_abs * r.overlap_abs);
    CHECK(std::abs(e.entropy - r.entropy) < 1e-12);
    std::vector<Complex> rot(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto& z : rot) z *= std::polar(1.0, 2.1);
    CHECK(std::abs(bipartite_entropy(rot).entropy - r.entropy) < 1e-12);
  }
}

TEST_CASE("maximum over p_A") {
  CHECK(max_entropy_over_weight(0) == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(max_entropy_over_weight(1.0 / 16) < kLn2);
  double prev = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const double s = max_entropy_over_weight(i / 19.0 / 16.0);
    CHECK(s <= prev + 1e-15);
    prev = s;
  }
  CHECK_THROWS_AS(max_entropy_over_weight(0.1), ValidationError);
}

TEST_CASE("Shannon baseline") {
  CHECK(shannon_entropy(plane_wave(10, 3)) == doctest::Approx(kLn2).epsilon(1e-14));
  CHECK(shannon_entropy(site_state(10, 2)) == 0.0);
  CHECK(shannon_entropy(LatticeState::from_amplitudes({1, 0, 1, 0})) == doctest::Approx(kLn2));
}

}  // TEST_SUITE
