#pragma once

// Momentum-space scattering amplitude of the Bessel-modulated potential,
// the high-frequency Hamiltonian and Floquet-Magnus coefficients.

#include <optional>
#include <vector>

#include "accordion/lattice.hpp"

namespace accordion {

// exp(-i n asin(q/pi)) / (pi sqrt(1 - (q/pi)^2)) for |q| < pi. Returns nullopt
// at |q| = pi where the amplitude diverges; |q| > pi is a ValidationError.
std::optional<Complex> band_transform(int n, double q);

struct DftReport {
  int order = 0;
  int sites = 0;
  double max_relative_deviation = 0.0;   // over |q| <= q_fraction * pi
  double worst_momentum = 0.0;
  double q_fraction = 0.9;
  // Oversampled spectrum (spacing 1/2) on pi < |q| < 2 pi, relative to the
  // in-band magnitude at q = 0. Zero for a band-limited sequence.
  double out_of_band_ratio = 0.0;
};

// Direct Fourier sum D(q) = sum_j J_n(pi j) exp(-i q j) over the centred
// window j = -L/2 .. L/2-1, compared with the continuum amplitude. The lattice
// samples both signs of j, so the continuum prediction is the sum of the
// n and -n branches: B(n, q) + (-1)^n B(-n, q). Deviations are normalised by
// 2 |B(n, q)|, the size of either branch pair.
DftReport dft_check(int order, int sites, int q_points = 721, double q_fraction = 0.9);

// Static Hamiltonian with diagonal V J_0(p i) and hopping h.
HamiltonianMatrix effective_h0(const DriveParams& params);

struct MagnusTerms {
  HamiltonianMatrix order0;
  // max_l max_i |[H_l, H_-l]_ii| for l <= 2M. The harmonics are diagonal so
  // this is identically zero; it is computed, not assumed.
  double order1_witness = 0.0;
  int photon_cutoff = 0;
  // F(i) = sum_{0 < |m| <= M} (J_2m(p (i+1)) - J_2m(p i))^2 / (8 m^2 omega^2),
  // i = 0..L-1, the bond coefficients of the second-order term.
  std::vector<double> bond_coefficients;
  std::vector<double> partial_sums;       // sum_{i' <= i} F(i')
};

// Requires M >= 1. The sites count of `params` sets L.
MagnusTerms magnus_terms(const DriveParams& params, int photon_cutoff = 64);

// F(i) alone for bonds 0..count-1, without building the order-0 matrix.
std::vector<double> magnus_bond_coefficients(double pitch, double omega, int photon_cutoff,
                                             long long count);

struct DivergenceReport {
  std::vector<long long> sizes;
  std::vector<double> partial_sums;
  bool strictly_increasing = false;
  // partial_sum ~ slope * ln L + intercept, least squares.
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// `sizes` must be strictly increasing and positive.
DivergenceReport magnus_divergence_diagnostic(const DriveParams& params, int photon_cutoff,
                                              const std::vector<long long>& sizes);

}  // namespace accordion
