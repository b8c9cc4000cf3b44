#pragma once

// Two-level description of the {|k=0>, |k=pi>} pair: kicked Hamiltonian
// H_s + (sum over kicks) V~ sigma_x with H_s = diag(2h, -2h), its extended
// (Sambe-space) Floquet matrix, first-order Floquet modes and the square-wave
// signature they leave in <T>.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "accordion/lattice.hpp"

namespace accordion {

// Strength of each kick exp(-i theta sigma_x). `derived` takes the comb
// identity sum_n (-1)^n exp(-2 i n w t) = (pi/w) sum_k delta(t - t_k), so
// theta = pi V~ / w. `comb_2pi` uses a literal 2 pi prefactor, theta = 2 pi V~.
enum class KickNormalization { derived, comb_2pi };

std::string to_string(KickNormalization k);
KickNormalization parse_kick_normalization(const std::string& name);

struct KickedParams {
  double hopping = -1.0;   // h
  double omega = 4.0;
  double v_tilde = 0.1;    // V~
  KickNormalization kick = KickNormalization::derived;

  void validate() const;
  double kick_angle() const;
  // pi V~ / (2 w) < 0.1
  bool perturbative() const;
};

struct TwoLevelState {
  Complex zero;   // amplitude on |k=0>
  Complex pi;     // amplitude on |k=pi>

  double norm2() const { return std::norm(zero) + std::norm(pi); }
  TwoLevelState normalized() const;
};

// Block matrix over photon sectors n = -N..N. Diagonal block n is
// J0 + 2 n w I with J0 = [[2h, V~], [V~, -2h]]; block (n, n') for n != n' is
// J_{2(n-n')} = (-1)^(n-n') V~ sigma_x. Basis order: (sector, {k=0, k=pi}).
struct ExtendedFloquetMatrix {
  int cutoff = 0;
  Eigen::MatrixXcd matrix;
  // Only set by rotated_frame: the diagonalised static block and the 2x2
  // basis change applied to every sector.
  Eigen::Vector2d lambda = Eigen::Vector2d::Zero();
  Eigen::Matrix2cd rotation = Eigen::Matrix2cd::Identity();

  int dimension() const { return static_cast<int>(matrix.rows()); }
  // 2x2 block at sectors (n, n').
  Eigen::Matrix2cd block(int n, int n_prime) const;
  int sector_offset(int n) const { return 2 * (n + cutoff); }
};

ExtendedFloquetMatrix extended_floquet_matrix(const KickedParams& params, int cutoff);

// Propagator from t = 0 to 2 pi / w: kicks at pi/(2w) and 3pi/(2w) with free
// evolution under H_s in between.
Eigen::Matrix2cd kicked_period_propagator(const KickedParams& params);

// Eigenphases of the kicked propagator as quasienergies in (-w/2, w/2].
std::array<double, 2> kicked_quasienergies(const KickedParams& params);

struct ExtendedSpectrum {
  // Index 0 is the mode labelled |k=0>, index 1 the |k=pi> mode.
  std::array<double, 2> quasienergies{};
  std::array<double, 2> sector0_weight{};
  std::array<Eigen::VectorXcd, 2> vectors;
};

// Diagonalises the extended matrix and keeps the two eigenvectors with the
// largest weight in the n = 0 sector. Throws NumericalError when either has
// <= 50% there or both point at the same basis state.
ExtendedSpectrum extended_floquet_spectrum(const KickedParams& params, int cutoff = 32);

// Smallest distance between a and b modulo `zone`.
double zone_distance(double a, double b, double zone);

// c(t) = -V~ sum_{|n|<=N} (-1)^n exp(-2 i n w t) / (2 n w - 4h).
// ResonanceError when 2 h = m w for an integer m (a vanishing denominator,
// or the degenerate case the series cannot describe).
Complex perturbative_coefficient(const KickedParams& params, double t, int terms);

// First-order modes, unnormalised: psi1 = |0> + c(t)|pi>, and the partner
// psi2 = |pi> - conj(c(t))|0>, orthogonal to psi1 at first order.
TwoLevelState perturbative_mode(const KickedParams& params, double t, int terms);
TwoLevelState perturbative_partner(const KickedParams& params, double t, int terms);

// c(t) exp(4 i h t). Under the square-wave condition this is real and equals
// -(-1)^m (pi V~ / (2 w)) sgn(cos wt) in the limit of many terms.
Complex square_wave_envelope(const KickedParams& params, double t, int terms);

// Integer m >= 0 with w = -4h / (2m + 1), or -1 when the condition fails.
int square_wave_order(double hopping, double omega, double tolerance = 1e-9);
// True when 2h = m w for some integer m.
bool is_resonant(double hopping, double omega, double tolerance = 1e-9);

// sum_{k=0}^{N-1} (-1)^k cos((2k+1) theta) / (2k+1) -> (pi/4) sgn(cos theta).
double square_wave_series(double theta, int terms);

// -|a2|^2 - 2 Re(a1 conj(a2)) (pi V~ / w) sgn(cos wt). Requires a unit-norm
// pair and the square-wave condition.
double predict_translation(Complex a1, Complex a2, const KickedParams& params, double t);

// sgn with sgn(0) = 0.
double sign_of(double x);

struct Flip {
  double time = 0.0;
  int direction = 0;   // +1 upward, -1 downward
};

struct SquareWaveAnalysis {
  double transient = 0.0;
  std::size_t samples = 0;          // in the tail
  double offset = 0.0;              // alpha in alpha + beta sgn(cos wt)
  double amplitude = 0.0;           // beta
  double correlation = 0.0;         // Pearson r of data vs fitted template
  double upper_plateau = 0.0;       // medians of the two hysteresis states
  double lower_plateau = 0.0;
  double separation = 0.0;          // upper_plateau - lower_plateau
  double plateau_spread = 0.0;      // median absolute deviation within plateaus
  std::vector<Flip> flips;
  double max_flip_offset = 0.0;     // max |t_flip - nearest zero of cos wt|
  double segment_cv = 0.0;          // spread of intervals between flips
  bool plateaus_detected = false;
  double gibbs_mean = 0.0;          // overshoot beyond local plateaus at flips
  double gibbs_max = 0.0;
  int gibbs_events = 0;
};

// Square-wave diagnostics of a real series sampled at `times`, ignoring
// t < transient. Flips are sign changes of (value - running midpoint), where
// the midpoint is the mean over one square-wave period 2 pi / w, with a
// hysteresis band of 25% of the plateau separation.
SquareWaveAnalysis analyze_square_wave(const std::vector<double>& times,
                                       const std::vector<double>& values, double omega,
                                       double transient);

struct VTildeEstimate {
  double v_tilde = 0.0;
  double separation = 0.0;     // A
  double residual = 0.0;       // rms misfit of the two-plateau model, relative to A
  SquareWaveAnalysis analysis;
};

// Inverts A = 4 Re(a1 conj(a2)) pi V~ / w with a1/a2 = 2 V~ / w and
// |a1|^2 + |a2|^2 = 1, i.e. A = 8 pi u / (1 + 4u), u = (V~ / w)^2. To leading
// order this is V~ = (w/2) sqrt(A / (2 pi)). NumericalError when fewer than
// four flips or no regular plateaus are found.
VTildeEstimate estimate_v_tilde(const std::vector<double>& times, const std::vector<double>& values,
                                double omega, double transient);

// Leading-order inversion, for comparison.
double v_tilde_leading_order(double separation, double omega);

// Synthetic <T>(t) of the two-plateau model.
double synthetic_translation(double v_tilde, double omega, double t);

// Conjugates every block by the eigenvector matrix of J0, so diagonal blocks
// become Lambda + 2 n w I with Lambda = diag(-sqrt(4h^2 + V~^2), +sqrt(...)).
// Requires V~ > 0.
ExtendedFloquetMatrix rotated_frame(const KickedParams& params, int cutoff = 32);

}  // namespace accordion
