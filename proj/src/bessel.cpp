#include "accordion/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "accordion/error.hpp"

namespace accordion {

namespace {

constexpr double kHuge = 1e250;
constexpr double kAsymptoticStart = 1000.0;

// J_0..J_nmax at x > 0 by Miller's algorithm.
std::vector<double> miller(int nmax, double x) {
  const double reach = std::max(static_cast<double>(nmax), x) + 40.0 + 12.0 * std::cbrt(x);
  int start = static_cast<int>(std::ceil(reach));
  if (start % 2) ++start;

  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  double above = 0.0;     // j_{k+1}
  double current = 1e-300; // j_k, k = start
  double norm = 0.0;
  const double inv_x = 1.0 / x;
  for (int k = start; k >= 0; --k) {
    if (k <= nmax) out[static_cast<std::size_t>(k)] = current;
    if (k % 2 == 0) norm += (k == 0 ? 1.0 : 2.0) * current;
    if (k == 0) break;
    const double below = 2.0 * k * inv_x * current - above;
    above = current;
    current = below;
    if (std::abs(current) > kHuge) {
      current /= kHuge;
      above /= kHuge;
      norm /= kHuge;
      for (int j = k - 1; j <= nmax; ++j)
        if (j >= 0) out[static_cast<std::size_t>(j)] /= kHuge;
    }
  }
  for (auto& v : out) v /= norm;
  return out;
}

// Hankel expansion for J_n(x), n small against sqrt(x).
double hankel(int n, double x) {
  const double mu = 4.0 * n * n;
  const double eight_x = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * eight_x);
    if (std::abs(term) > last && k > 2) break;  // asymptotic series turned
    last = std::abs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (last < 1e-18) break;
  }
  // cos(x - phi) expanded so that libm reduces x itself.
  const double phi = (0.5 * n + 0.25) * std::numbers::pi;
  const double cx = std::cos(x), sx = std::sin(x);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double cos_chi = cx * cp + sx * sp;
  const double sin_chi = sx * cp - cx * sp;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

std::vector<double> bessel_j_sequence(int nmax, double x) {
  if (nmax < 0) throw ValidationError("Bessel order must be non-negative");
  if (!std::isfinite(x)) throw ValidationError("Bessel argument must be finite");
  std::vector<double> out;
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  if (ax >= kAsymptoticStart && nmax <= ax / 2) {
    out.resize(static_cast<std::size_t>(nmax) + 1);
    out[0] = hankel(0, ax);
    if (nmax >= 1) out[1] = hankel(1, ax);
    for (int k = 1; k < nmax; ++k)
      out[static_cast<std::size_t>(k) + 1] = 2.0 * k / ax * out[static_cast<std::size_t>(k)] -
                                             out[static_cast<std::size_t>(k) - 1];
  } else {
    out = miller(nmax, ax);
  }
  if (x < 0)
    for (int k = 1; k <= nmax; k += 2) out[static_cast<std::size_t>(k)] = -out[static_cast<std::size_t>(k)];
  return out;
}

double bessel_j(int n, double x) {
  if (n < -512 || n > 512) throw ValidationError("Bessel order outside [-512, 512]");
  if (!(std::abs(x) <= 1e4)) throw ValidationError("Bessel argument outside [-1e4, 1e4]");
  const int order = std::abs(n);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  const double value = miller(order, std::abs(x))[static_cast<std::size_t>(order)];
  const bool flip = ((x < 0) != (n < 0)) && (order % 2 == 1);
  return flip ? -value : value;
}

}  // namespace accordion
