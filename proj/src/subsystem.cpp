#include "accordion/subsystem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "accordion/error.hpp"

namespace accordion {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double fold(double x, double zone) {
  // (-zone/2, zone/2]
  double r = std::remainder(x, zone);
  if (r <= -0.5 * zone) r += zone;
  return r;
}

bool near_integer(double x, double tolerance) {
  return std::abs(x - std::round(x)) <= tolerance * std::max(1.0, std::abs(x));
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

Eigen::Matrix2cd free_evolution(double hopping, double tau) {
  Eigen::Matrix2cd f = Eigen::Matrix2cd::Zero();
  f(0, 0) = std::polar(1.0, -2.0 * hopping * tau);
  f(1, 1) = std::polar(1.0, 2.0 * hopping * tau);
  return f;
}

}  // namespace

std::string to_string(KickNormalization k) {
  return k == KickNormalization::derived ? "derived" : "comb_2pi";
}

KickNormalization parse_kick_normalization(const std::string& name) {
  if (name == "derived" || name == "pi_over_omega") return KickNormalization::derived;
  if (name == "comb_2pi" || name == "2pi") return KickNormalization::comb_2pi;
  throw ValidationError("unknown kick normalization '" + name + "'");
}

void KickedParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be positive");
  if (!std::isfinite(hopping) || !std::isfinite(v_tilde))
    throw ValidationError("h and V~ must be finite");
}

double KickedParams::kick_angle() const {
  return kick == KickNormalization::derived ? kPi * v_tilde / omega : 2.0 * kPi * v_tilde;
}

bool KickedParams::perturbative() const { return kPi * std::abs(v_tilde) / (2.0 * omega) < 0.1; }

TwoLevelState TwoLevelState::normalized() const {
  const double n = std::sqrt(norm2());
  if (!(n > 0.0)) throw ValidationError("two-level state has zero norm");
  return {zero / n, pi / n};
}

Eigen::Matrix2cd ExtendedFloquetMatrix::block(int n, int n_prime) const {
  if (std::abs(n) > cutoff || std::abs(n_prime) > cutoff)
    throw ValidationError("photon sector outside the retained range");
  return matrix.block<2, 2>(sector_offset(n), sector_offset(n_prime));
}

ExtendedFloquetMatrix extended_floquet_matrix(const KickedParams& params, int cutoff) {
  params.validate();
  if (cutoff < 1) throw ValidationError("photon cutoff must be >= 1");
  ExtendedFloquetMatrix m;
  m.cutoff = cutoff;
  const int dim = 2 * (2 * cutoff + 1);
  m.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  const double h2 = 2.0 * params.hopping;
  const double v = params.v_tilde;
  for (int n = -cutoff; n <= cutoff; ++n) {
    for (int np = -cutoff; np <= cutoff; ++np) {
      const int r = m.sector_offset(n), c = m.sector_offset(np);
      if (n == np) {
        m.matrix(r, c) = h2 + 2.0 * n * params.omega;
        m.matrix(r + 1, c + 1) = -h2 + 2.0 * n * params.omega;
        m.matrix(r, c + 1) = v;
        m.matrix(r + 1, c) = v;
      } else {
        // exp(-i (2d) pi / 2) = (-1)^d
        const double s = ((n - np) % 2 == 0) ? 1.0 : -1.0;
        m.matrix(r, c + 1) = s * v;
        m.matrix(r + 1, c) = s * v;
      }
    }
  }
  return m;
}

Eigen::Matrix2cd kicked_period_propagator(const KickedParams& params) {
  params.validate();
  const double theta = params.kick_angle();
  Eigen::Matrix2cd kick;
  kick << std::cos(theta), -kI * std::sin(theta), -kI * std::sin(theta), std::cos(theta);
  const double quarter = kPi / (2.0 * params.omega);
  const Eigen::Matrix2cd edge = free_evolution(params.hopping, quarter);
  const Eigen::Matrix2cd middle = free_evolution(params.hopping, 2.0 * quarter);
  return edge * kick * middle * kick * edge;
}

std::array<double, 2> kicked_quasienergies(const KickedParams& params) {
  const Eigen::Matrix2cd u = kicked_period_propagator(params);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(u);
  if (solver.info() != Eigen::Success) throw NumericalError("2x2 eigensolver failed");
  const double period = 2.0 * kPi / params.omega;
  std::array<double, 2> out{};
  for (int k = 0; k < 2; ++k)
    out[static_cast<std::size_t>(k)] =
        fold(-std::arg(solver.eigenvalues()(k)) / period, params.omega);
  std::sort(out.begin(), out.end());
  return out;
}

double zone_distance(double a, double b, double zone) {
  return std::abs(std::remainder(a - b, zone));
}

ExtendedSpectrum extended_floquet_spectrum(const KickedParams& params, int cutoff) {
  const ExtendedFloquetMatrix m = extended_floquet_matrix(params, cutoff);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.matrix);
  if (solver.info() != Eigen::Success) throw NumericalError("extended Floquet eigensolver failed");
  const int dim = m.dimension();
  const int off = m.sector_offset(0);

  std::vector<std::pair<double, int>> weights;
  for (int j = 0; j < dim; ++j) {
    const auto v = solver.eigenvectors().col(j);
    weights.emplace_back(std::norm(v(off)) + std::norm(v(off + 1)), j);
  }
  std::sort(weights.begin(), weights.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  ExtendedSpectrum out;
  bool seen[2] = {false, false};
  for (int k = 0; k < 2; ++k) {
    const auto [w, j] = weights[static_cast<std::size_t>(k)];
    if (!(w > 0.5))
      throw NumericalError("ambiguous mode labelling: no dominant n = 0 vector");
    const auto v = solver.eigenvectors().col(j);
    const int label = std::norm(v(off)) >= std::norm(v(off + 1)) ? 0 : 1;
    if (seen[label]) throw NumericalError("ambiguous mode labelling: both modes on one state");
    seen[label] = true;
    out.quasienergies[static_cast<std::size_t>(label)] =
        fold(solver.eigenvalues()(j), 2.0 * params.omega);
    out.sector0_weight[static_cast<std::size_t>(label)] = w;
    out.vectors[static_cast<std::size_t>(label)] = v;
  }
  return out;
}

bool is_resonant(double hopping, double omega, double tolerance) {
  return near_integer(2.0 * hopping / omega, tolerance);
}

int square_wave_order(double hopping, double omega, double tolerance) {
  // w (2m + 1) = -4h
  const double x = -4.0 * hopping / omega;
  if (!near_integer(x, tolerance)) return -1;
  const long long odd = std::llround(x);
  if (odd < 1 || odd % 2 == 0) return -1;
  return static_cast<int>((odd - 1) / 2);
}

Complex perturbative_coefficient(const KickedParams& params, double t, int terms) {
  params.validate();
  if (terms < 0) throw ValidationError("number of terms must be non-negative");
  if (is_resonant(params.hopping, params.omega))
    throw ResonanceError("resonance 2h = m omega: perturbative series is singular");
  const double w = params.omega;
  const double h4 = 4.0 * params.hopping;
  // Pair n and -n so partial sums stay symmetric.
  Complex sum = 1.0 / (-h4);
  for (int n = 1; n <= terms; ++n) {
    const double s = (n % 2) ? -1.0 : 1.0;
    const double phase = 2.0 * n * w * t;
    sum += s * std::polar(1.0, -phase) / (2.0 * n * w - h4);
    sum += s * std::polar(1.0, phase) / (-2.0 * n * w - h4);
  }
  return -params.v_tilde * sum;
}

TwoLevelState perturbative_mode(const KickedParams& params, double t, int terms) {
  return {1.0, perturbative_coefficient(params, t, terms)};
}

TwoLevelState perturbative_partner(const KickedParams& params, double t, int terms) {
  return {-std::conj(perturbative_coefficient(params, t, terms)), 1.0};
}

Complex square_wave_envelope(const KickedParams& params, double t, int terms) {
  return perturbative_coefficient(params, t, terms) * std::polar(1.0, 4.0 * params.hopping * t);
}

double square_wave_series(double theta, int terms) {
  if (terms < 1) throw ValidationError("square-wave series needs at least one term");
  // Sum smallest terms first.
  double sum = 0.0;
  for (int k = terms - 1; k >= 0; --k) {
    const double odd = 2.0 * k + 1.0;
    sum += ((k % 2) ? -1.0 : 1.0) * std::cos(odd * theta) / odd;
  }
  return sum;
}

double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

double predict_translation(Complex a1, Complex a2, const KickedParams& params, double t) {
  params.validate();
  if (std::abs(std::norm(a1) + std::norm(a2) - 1.0) > 1e-9)
    throw ValidationError("mode amplitudes must satisfy |a1|^2 + |a2|^2 = 1");
  if (square_wave_order(params.hopping, params.omega) < 0)
    throw ValidationError("square-wave condition omega = -4h/(2m+1) not met");
  const double cross = 2.0 * std::real(a1 * std::conj(a2));
  return -std::norm(a2) -
         cross * (kPi * params.v_tilde / params.omega) * sign_of(std::cos(params.omega * t));
}

double synthetic_translation(double v_tilde, double omega, double t) {
  const double ratio = 2.0 * v_tilde / omega;
  const double a2 = 1.0 / std::sqrt(1.0 + ratio * ratio);
  const double a1 = ratio * a2;
  return -a2 * a2 - 2.0 * a1 * a2 * (kPi * v_tilde / omega) * sign_of(std::cos(omega * t));
}

SquareWaveAnalysis analyze_square_wave(const std::vector<double>& times,
                                       const std::vector<double>& values, double omega,
                                       double transient) {
  if (times.size() != values.size()) throw ValidationError("times and values differ in length");
  if (!(omega > 0.0)) throw ValidationError("omega must be positive");
  SquareWaveAnalysis a;
  a.transient = transient;

  std::vector<double> t, v;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= transient) {
      t.push_back(times[i]);
      v.push_back(values[i]);
    }
  const std::size_t n = t.size();
  a.samples = n;
  if (n < 8) return a;

  // Template fit alpha + beta sgn(cos wt).
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = sign_of(std::cos(omega * t[i]));
  const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
  const double ms = std::accumulate(s.begin(), s.end(), 0.0) / n;
  double cvs = 0, cvv = 0, css = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cvs += (v[i] - mv) * (s[i] - ms);
    cvv += (v[i] - mv) * (v[i] - mv);
    css += (s[i] - ms) * (s[i] - ms);
  }
  if (css > 0) {
    a.amplitude = cvs / css;
    a.offset = mv - a.amplitude * ms;
  } else {
    a.offset = mv;
  }
  if (css > 0 && cvv > 0) a.correlation = std::abs(cvs) / std::sqrt(cvv * css);

  // Running midpoint over one square-wave period.
  const double period = 2.0 * kPi / omega;
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + v[i];
  std::vector<double> r(n);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (t[lo] < t[i] - 0.5 * period) ++lo;
    while (hi < n && t[hi] <= t[i] + 0.5 * period) ++hi;
    r[i] = v[i] - (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }

  std::vector<double> pos, neg;
  for (double x : r) (x > 0 ? pos : neg).push_back(x);
  const double guess = (pos.empty() || neg.empty()) ? 0.0 : median(pos) - median(neg);
  const double band = 0.125 * guess;   // +-12.5%: a 25% hysteresis band

  std::vector<int> state(n, 0);
  int current = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int next = current;
    if (guess > 0) {
      if (r[i] > band) next = 1;
      else if (r[i] < -band) next = -1;
    }
    if (current != 0 && next != current) {
      // Interpolated zero crossing of the residual just before i.
      std::size_t j = i;
      while (j > 0 && sign_of(r[j - 1]) == next) --j;
      double tf = t[i];
      if (j > 0) {
        const double r0 = r[j - 1], r1 = r[j];
        tf = (r1 != r0) ? t[j - 1] + (t[j] - t[j - 1]) * (-r0) / (r1 - r0) : t[j];
      }
      a.flips.push_back({tf, next});
    }
    current = next;
    state[i] = current;
  }

  std::vector<double> up_v, down_v, up_r, down_r;
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] > 0) { up_v.push_back(v[i]); up_r.push_back(r[i]); }
    if (state[i] < 0) { down_v.push_back(v[i]); down_r.push_back(r[i]); }
  }
  a.upper_plateau = median(up_v);
  a.lower_plateau = median(down_v);
  if (!up_r.empty() && !down_r.empty()) {
    const double mu = median(up_r), md = median(down_r);
    // Raw medians: both states sample the same slow drift, which cancels.
    a.separation = a.upper_plateau - a.lower_plateau;
    std::vector<double> dev;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] > 0) dev.push_back(std::abs(r[i] - mu));
      if (state[i] < 0) dev.push_back(std::abs(r[i] - md));
    }
    a.plateau_spread = median(dev);
  }

  const double zero_spacing = kPi / omega;
  for (const auto& f : a.flips) {
    const double k = std::round((omega * f.time - 0.5 * kPi) / kPi);
    const double zero = (0.5 * kPi + k * kPi) / omega;
    a.max_flip_offset = std::max(a.max_flip_offset, std::abs(f.time - zero));
  }
  if (a.flips.size() >= 3) {
    std::vector<double> gaps;
    for (std::size_t k = 1; k < a.flips.size(); ++k)
      gaps.push_back(a.flips[k].time - a.flips[k - 1].time);
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
    double var = 0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    a.segment_cv = std::sqrt(var / gaps.size()) / mean;
    // Regular flips every half period.
    a.plateaus_detected = a.flips.size() >= 4 && a.segment_cv < 0.25 &&
                          std::abs(mean - zero_spacing) < 0.25 * zero_spacing &&
                          a.separation > 4.0 * a.plateau_spread;
  }

  // Overshoot at each expected flip whose surrounding windows are in the tail.
  double total = 0;
  const double first = std::ceil((omega * t.front() - 0.5 * kPi) / kPi);
  for (double k = first;; k += 1.0) {
    const double tf = (0.5 * kPi + k * kPi) / omega;
    if (tf - 0.5 * period < t.front()) continue;
    if (tf + 0.5 * period > t.back()) break;
    std::vector<double> before, after;
    double wmax = -1e300, wmin = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = t[i] - tf;
      if (d > -0.5 * period && d < -0.25 * period) before.push_back(v[i]);
      else if (d > 0.25 * period && d < 0.5 * period) after.push_back(v[i]);
      else if (std::abs(d) < 0.25 * period) {
        wmax = std::max(wmax, v[i]);
        wmin = std::min(wmin, v[i]);
      }
    }
    if (before.empty() || after.empty() || wmax < wmin) continue;
    const double b = median(before), c = median(after);
    const double over = std::max(0.0, std::max(wmax - std::max(b, c), std::min(b, c) - wmin));
    total += over;
    a.gibbs_max = std::max(a.gibbs_max, over);
    ++a.gibbs_events;
  }
  if (a.gibbs_events) a.gibbs_mean = total / a.gibbs_events;
  return a;
}

double v_tilde_leading_order(double separation, double omega) {
  return 0.5 * omega * std::sqrt(std::max(separation, 0.0) / (2.0 * kPi));
}

VTildeEstimate estimate_v_tilde(const std::vector<double>& times, const std::vector<double>& values,
                                double omega, double transient) {
  VTildeEstimate e;
  e.analysis = analyze_square_wave(times, values, omega, transient);
  const auto& a = e.analysis;
  if (a.flips.size() < 4) throw NumericalError("no plateaus detected: fewer than four flips");
  if (!a.plateaus_detected) throw NumericalError("no plateaus detected: flips are irregular");
  e.separation = a.separation;
  const double big_a = std::abs(a.separation);
  if (!(big_a < 2.0 * kPi)) throw NumericalError("plateau separation outside the model range");
  const double u = big_a / (8.0 * kPi - 4.0 * big_a);
  e.v_tilde = omega * std::sqrt(u);

  // rms misfit of the residual against +-A/2 plateaus, using the data itself.
  std::vector<double> t, v;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= transient) {
      t.push_back(times[i]);
      v.push_back(values[i]);
    }
  double ss = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double model = a.offset + a.amplitude * sign_of(std::cos(omega * t[i]));
    ss += (v[i] - model) * (v[i] - model);
  }
  e.residual = t.empty() ? 0.0 : std::sqrt(ss / t.size()) / big_a;
  return e;
}

ExtendedFloquetMatrix rotated_frame(const KickedParams& params, int cutoff) {
  if (!(params.v_tilde > 0.0)) throw ValidationError("rotated frame requires V~ > 0");
  ExtendedFloquetMatrix m = extended_floquet_matrix(params, cutoff);
  Eigen::Matrix2d j0;
  j0 << 2.0 * params.hopping, params.v_tilde, params.v_tilde, -2.0 * params.hopping;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(j0);
  const Eigen::Matrix2cd rot = solver.eigenvectors().cast<Complex>();
  const int sectors = 2 * cutoff + 1;
  for (int a = 0; a < sectors; ++a)
    for (int b = 0; b < sectors; ++b) {
      const Eigen::Matrix2cd blk = m.matrix.block<2, 2>(2 * a, 2 * b);
      m.matrix.block<2, 2>(2 * a, 2 * b) = rot.adjoint() * blk * rot;
    }
  m.lambda = solver.eigenvalues();
  m.rotation = rot;
  return m;
}

}  // namespace accordion
