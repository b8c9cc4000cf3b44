#include "accordion/spectral.hpp"

#include <cmath>
#include <numbers>

#include "accordion/bessel.hpp"
#include "accordion/error.hpp"

namespace accordion {

namespace {

constexpr double kPi = std::numbers::pi;

// J_n(x) for any integer n and unrestricted x.
double bessel_any(int n, double x) {
  const int order = std::abs(n);
  double v = bessel_j_sequence(order, x)[static_cast<std::size_t>(order)];
  if (n < 0 && order % 2) v = -v;
  return v;
}

// sum_j samples[j] exp(-i q (j0 + j) scale)
Complex fourier_sum(const std::vector<double>& samples, long long j0, double q, double scale) {
  constexpr std::size_t kAnchor = 64;
  const Complex step = std::polar(1.0, -q * scale);
  Complex phase;
  Complex acc = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (j % kAnchor == 0)
      phase = std::polar(1.0, -q * scale * static_cast<double>(j0 + static_cast<long long>(j)));
    acc += samples[j] * phase;
    phase *= step;
  }
  return acc;
}

}  // namespace

std::optional<Complex> band_transform(int n, double q) {
  if (!std::isfinite(q) || std::abs(q) > kPi)
    throw ValidationError("band transform momentum must satisfy |q| <= pi");
  const double s = q / kPi;
  const double radical = 1.0 - s * s;
  if (std::abs(q) == kPi || radical <= 0.0) return std::nullopt;
  return std::polar(1.0 / (kPi * std::sqrt(radical)), -n * std::asin(s));
}

DftReport dft_check(int order, int sites, int q_points, double q_fraction) {
  if (sites < 4 || sites % 2) throw ValidationError("DFT length must be even and >= 4");
  if (q_points < 2) throw ValidationError("need at least two momenta");
  if (!(q_fraction > 0.0 && q_fraction < 1.0))
    throw ValidationError("momentum window fraction must lie in (0, 1)");

  const long long half = sites / 2;
  std::vector<double> samples(static_cast<std::size_t>(sites));
  for (long long j = -half; j < half; ++j)
    samples[static_cast<std::size_t>(j + half)] = bessel_any(order, kPi * static_cast<double>(j));

  DftReport report;
  report.order = order;
  report.sites = sites;
  report.q_fraction = q_fraction;
  const double sign = (order % 2) ? -1.0 : 1.0;
  for (int k = 0; k < q_points; ++k) {
    const double q = q_fraction * kPi * (-1.0 + 2.0 * k / (q_points - 1));
    const Complex direct = fourier_sum(samples, -half, q, 1.0);
    const Complex plus = *band_transform(order, q);
    const Complex minus = *band_transform(-order, q);
    const Complex predicted = plus + sign * minus;
    const double dev = std::abs(direct - predicted) / (2.0 * std::abs(plus));
    if (dev > report.max_relative_deviation) {
      report.max_relative_deviation = dev;
      report.worst_momentum = q;
    }
  }

  // Half-spacing samples resolve |q| < 2 pi; the band edge is at pi.
  std::vector<double> fine(static_cast<std::size_t>(sites));
  for (long long j = -half; j < half; ++j)
    fine[static_cast<std::size_t>(j + half)] = bessel_any(order, 0.5 * kPi * static_cast<double>(j));
  const double reference = 2.0 / kPi;
  double outside = 0.0;
  constexpr int kOut = 181;
  for (int k = 0; k < kOut; ++k) {
    const double q = kPi * (1.1 + 0.8 * k / (kOut - 1));
    outside = std::max(outside, std::abs(0.5 * fourier_sum(fine, -half, q, 0.5)));
    outside = std::max(outside, std::abs(0.5 * fourier_sum(fine, -half, -q, 0.5)));
  }
  report.out_of_band_ratio = outside / reference;
  return report;
}

HamiltonianMatrix effective_h0(const DriveParams& params) {
  params.validate();
  HamiltonianMatrix h;
  h.hopping = params.hopping;
  h.diagonal.resize(static_cast<std::size_t>(params.sites));
  for (int i = 0; i < params.sites; ++i) {
    const double z = params.pitch * i;
    double average = 0.0;
    switch (params.profile) {
      case DriveProfile::sine: average = bessel_any(0, z); break;
      case DriveProfile::square: average = std::cos(z); break;
      case DriveProfile::triangle: average = i == 0 ? 1.0 : std::sin(z) / z; break;
    }
    h.diagonal[static_cast<std::size_t>(i)] = params.amplitude * average;
  }
  return h;
}

std::vector<double> magnus_bond_coefficients(double pitch, double omega, int photon_cutoff,
                                             long long count) {
  if (photon_cutoff < 1) throw ValidationError("photon cutoff must be >= 1");
  if (!(omega > 0.0)) throw ValidationError("omega must be positive");
  if (count < 0) throw ValidationError("bond count must be non-negative");
  const int top = 2 * photon_cutoff;
  std::vector<double> out(static_cast<std::size_t>(count));
  std::vector<double> left = bessel_j_sequence(top, 0.0);
  for (long long i = 0; i < count; ++i) {
    const std::vector<double> right = bessel_j_sequence(top, pitch * static_cast<double>(i + 1));
    double sum = 0.0;
    for (int m = -photon_cutoff; m <= photon_cutoff; ++m) {
      if (m == 0) continue;
      // J_{2m} is even in m.
      const std::size_t idx = static_cast<std::size_t>(2 * std::abs(m));
      const double d = right[idx] - left[idx];
      sum += d * d / (8.0 * m * m * omega * omega);
    }
    out[static_cast<std::size_t>(i)] = sum;
    left = right;
  }
  return out;
}

MagnusTerms magnus_terms(const DriveParams& params, int photon_cutoff) {
  params.validate();
  if (photon_cutoff < 1) throw ValidationError("photon cutoff must be >= 1");
  if (params.profile != DriveProfile::sine)
    throw ValidationError("Magnus coefficients are implemented for the sine profile only");
  MagnusTerms terms;
  terms.order0 = effective_h0(params);
  terms.photon_cutoff = photon_cutoff;

  // Harmonic l of V cos(p i sin wt) is diagonal: V J_l(p i) for even l, zero
  // for odd l, identical for l and -l.
  const int top = 2 * photon_cutoff;
  double witness = 0.0;
  for (int i = 0; i < params.sites; ++i) {
    const auto j = bessel_j_sequence(top, params.pitch * i);
    for (int l = 1; l <= top; ++l) {
      const double plus = (l % 2) ? 0.0 : params.amplitude * j[static_cast<std::size_t>(l)];
      const double minus = plus;
      witness = std::max(witness, std::abs(plus * minus - minus * plus));
    }
  }
  terms.order1_witness = witness;

  terms.bond_coefficients =
      magnus_bond_coefficients(params.pitch, params.omega, photon_cutoff, params.sites);
  terms.partial_sums.resize(terms.bond_coefficients.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < terms.bond_coefficients.size(); ++i) {
    acc += terms.bond_coefficients[i];
    terms.partial_sums[i] = acc;
  }
  return terms;
}

DivergenceReport magnus_divergence_diagnostic(const DriveParams& params, int photon_cutoff,
                                              const std::vector<long long>& sizes) {
  if (sizes.empty()) throw ValidationError("size list is empty");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 1) throw ValidationError("sizes must be positive");
    if (k && sizes[k] <= sizes[k - 1]) throw ValidationError("sizes must be strictly increasing");
  }
  const auto f = magnus_bond_coefficients(params.pitch, params.omega, photon_cutoff, sizes.back());

  DivergenceReport report;
  report.sizes = sizes;
  double acc = 0.0;
  std::size_t next = 0;
  for (long long i = 0; i < sizes.back(); ++i) {
    acc += f[static_cast<std::size_t>(i)];
    if (i + 1 == sizes[next]) {
      report.partial_sums.push_back(acc);
      ++next;
    }
  }
  report.strictly_increasing = true;
  for (std::size_t k = 1; k < report.partial_sums.size(); ++k)
    if (!(report.partial_sums[k] > report.partial_sums[k - 1])) report.strictly_increasing = false;

  const std::size_t n = sizes.size();
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = std::log(static_cast<double>(sizes[k]));
      const double y = report.partial_sums[k];
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    report.slope = (n * sxy - sx * sy) / denom;
    report.intercept = (sy - report.slope * sx) / n;
    const double mean = sy / n;
    double ss_tot = 0, ss_res = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = std::log(static_cast<double>(sizes[k]));
      const double y = report.partial_sums[k];
      ss_tot += (y - mean) * (y - mean);
      const double r = y - (report.slope * x + report.intercept);
      ss_res += r * r;
    }
    report.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return report;
}

}  // namespace accordion
