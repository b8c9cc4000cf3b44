#pragma once

// Modified bipartite single-particle entropy of a lattice wavefunction.
//
// With psi_A / psi_B the unnormalised first / second half of the chain,
// p_A = <psi_A|psi_A>, p_B = <psi_B|psi_B> and c = <psi_B|psi_A>, the entropy
// is -sum lambda ln lambda over the two roots of
//
//   lambda^2 - (2|c|^2 + p_A^2 + p_B^2) lambda
//           + |c|^4 + |c|^2 (p_A^2 + p_B^2) + p_A^2 p_B^2 - |c|^2 = 0,
//
// i.e. the eigenvalues of [[p_A^2 + |c|^2, c*], [c, p_B^2 + |c|^2]].
// S = ln 2 for orthogonal halves of equal weight and S = 0 for parallel halves.

#include <span>

#include "accordion/lattice.hpp"

namespace accordion {

struct EntropyEigenvalues {
  double lambda1 = 0.0;  // larger root
  double lambda2 = 0.0;
  double entropy = 0.0;  // nats
};

struct EntropyReport {
  double weight_a = 0.0;   // p_A
  double weight_b = 0.0;   // p_B = 1 - p_A
  Complex overlap;         // c = <psi_B|psi_A>
  double overlap_abs = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double entropy = 0.0;
};

// -l1 ln l1 - l2 ln l2 with 0 ln 0 := 0; roots above -1e-14 are clipped to 0.
double entropy_of_eigenvalues(double lambda1, double lambda2);

// Requires 0 <= p_A <= 1 and 0 <= |c|^2 <= p_A (1 - p_A) (up to 1e-12).
EntropyEigenvalues entropy_from_invariants(double weight_a, double overlap_abs2);

EntropyReport bipartite_entropy(std::span<const Complex> amplitudes);
EntropyReport bipartite_entropy(const LatticeState& state);

// Grid search of S over the feasible p_A range at fixed |c|^2 <= 1/16.
double max_entropy_over_weight(double overlap_abs2, double grid_step = 1e-3);

// -p_A ln p_A - p_B ln p_B.
double shannon_entropy(const LatticeState& state);

}  // namespace accordion
