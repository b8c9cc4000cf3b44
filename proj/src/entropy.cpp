#include "accordion/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "accordion/error.hpp"

namespace accordion {

namespace {

constexpr double kClip = 1e-14;
constexpr double kSchwarzSlack = 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double entropy_of_eigenvalues(double lambda1, double lambda2) {
  if (lambda1 < -kClip || lambda2 < -kClip)
    throw NumericalError("entropy eigenvalue below clipping threshold");
  return -xlogx(std::max(lambda1, 0.0)) - xlogx(std::max(lambda2, 0.0));
}

EntropyEigenvalues entropy_from_invariants(double weight_a, double overlap_abs2) {
  if (!(weight_a >= -kSchwarzSlack && weight_a <= 1.0 + kSchwarzSlack))
    throw ValidationError("p_A must lie in [0, 1]");
  weight_a = std::clamp(weight_a, 0.0, 1.0);
  const double weight_b = 1.0 - weight_a;
  if (!(overlap_abs2 >= -kSchwarzSlack) ||
      overlap_abs2 > weight_a * weight_b + kSchwarzSlack)
    throw ValidationError("|c|^2 outside the Cauchy-Schwarz range [0, p_A p_B]");
  const double c2 = std::max(overlap_abs2, 0.0);

  const double squares = weight_a * weight_a + weight_b * weight_b;
  const double trace = 2.0 * c2 + squares;
  const double det = c2 * c2 + c2 * squares + weight_a * weight_a * weight_b * weight_b - c2;
  // Discriminant written as a sum of squares to avoid cancellation.
  const double diff = weight_a * weight_a - weight_b * weight_b;
  const double disc = diff * diff + 4.0 * c2;

  EntropyEigenvalues out;
  out.lambda1 = 0.5 * (trace + std::sqrt(disc));
  out.lambda2 = out.lambda1 > 0.0 ? det / out.lambda1 : 0.0;
  out.entropy = entropy_of_eigenvalues(out.lambda1, out.lambda2);
  return out;
}

EntropyReport bipartite_entropy(std::span<const Complex> amplitudes) {
  const std::size_t n = amplitudes.size();
  if (n == 0 || n % 2 != 0) throw ValidationError("bipartite entropy needs an even lattice");
  const std::size_t half = n / 2;

  double pa = 0.0;
  double pb = 0.0;
  Complex c = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    const Complex a = amplitudes[i];
    const Complex b = amplitudes[i + half];
    pa += std::norm(a);
    pb += std::norm(b);
    c += std::conj(b) * a;
  }
  const double total = pa + pb;
  EntropyReport r;
  r.weight_a = pa / total;
  r.weight_b = 1.0 - r.weight_a;
  r.overlap = c / total;
  r.overlap_abs = std::abs(r.overlap);
  // Roundoff can push |c|^2 a hair past p_A p_B for nearly parallel halves.
  const double c2 = std::min(r.overlap_abs * r.overlap_abs, r.weight_a * r.weight_b);
  const auto eig = entropy_from_invariants(r.weight_a, c2);
  r.lambda1 = eig.lambda1;
  r.lambda2 = eig.lambda2;
  r.entropy = eig.entropy;
  return r;
}

EntropyReport bipartite_entropy(const LatticeState& state) {
  return bipartite_entropy(state.amplitudes());
}

double max_entropy_over_weight(double overlap_abs2, double grid_step) {
  if (!(overlap_abs2 >= 0.0 && overlap_abs2 <= 1.0 / 16.0 + kSchwarzSlack))
    throw ValidationError("|c|^2 must lie in [0, 1/16]");
  if (!(grid_step > 0.0 && grid_step <= 1e-3))
    throw ValidationError("grid step must lie in (0, 1e-3]");
  const int points = static_cast<int>(std::ceil(1.0 / grid_step));
  double best = 0.0;
  for (int j = 0; j <= points; ++j) {
    const double pa = static_cast<double>(j) / points;
    if (overlap_abs2 > pa * (1.0 - pa)) continue;
    best = std::max(best, entropy_from_invariants(pa, overlap_abs2).entropy);
  }
  return best;
}

double shannon_entropy(const LatticeState& state) {
  const int n = state.sites();
  if (n % 2 != 0) throw ValidationError("Shannon entropy needs an even lattice");
  double pa = 0.0;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = std::norm(state[i]);
    total += w;
    if (i < n / 2) pa += w;
  }
  pa /= total;
  return -xlogx(pa) - xlogx(1.0 - pa);
}

}  // namespace accordion
