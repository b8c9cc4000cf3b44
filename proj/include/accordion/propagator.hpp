#pragma once

// Unitary time evolution on the driven ring, the one-period (monodromy)
// propagator and its Floquet spectrum.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "accordion/entropy.hpp"
#include "accordion/lattice.hpp"

namespace accordion {

// Per-step schemes. Both evaluate H at the midpoint t + dt/2 and solve cyclic
// tridiagonal systems, so a step costs O(L) and is unitary to solver precision.
//  - crank_nicolson: (1 + i dt H/2) psi' = (1 - i dt H/2) psi
//  - cayley4: the (2,2) diagonal Pade approximant of exp(-i dt H) factored
//    into two Cayley factors with complex coefficients. Global order is still
//    two (midpoint rule), but the per-step exponential error drops to
//    O((dt |H|)^5), which matters for oracle agreement at dt = 1e-3.
enum class Integrator { cayley4, crank_nicolson };

std::string to_string(Integrator integrator);
Integrator parse_integrator(const std::string& name);

struct TimeGrid {
  double dt = 1e-3;
  double t_max = 200.0;
  int output_stride = 100;
  double t_start = 0.0;

  void validate() const;
  // Number of integration steps from t_start to t_max.
  long long steps() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Complex> translation;     // <T>
  std::vector<EntropyReport> entropy;
  std::vector<double> norm_error;       // | ||psi|| - 1 |
  std::vector<LatticeState> states;     // only filled when requested
  LatticeState final_state;

  std::size_t size() const { return times.size(); }
};

struct EvolveOptions {
  Integrator integrator = Integrator::cayley4;
  bool keep_states = false;
  double norm_tolerance = 1e-6;         // NumericalError beyond this drift
};

// Advances a wavefunction by one step of fixed size (negative dt runs the
// schedule backwards). Holds the solver workspace.
class Stepper {
 public:
  Stepper(const DriveParams& params, double dt, Integrator integrator = Integrator::cayley4);

  // psi(t) -> psi(t + dt)
  void advance(std::span<Complex> psi, double t);

  double dt() const { return dt_; }

 private:
  void apply_factor(std::span<Complex> psi, Complex lhs, Complex rhs);

  DriveParams params_;
  double dt_;
  std::vector<std::pair<Complex, Complex>> factors_;  // (lhs, rhs) coefficient per factor
  std::vector<double> potential_;
  std::vector<Complex> rhs_, diag_, upper_, aux_;
};

// Solves the periodic tridiagonal system with diagonal `diag`, uniform
// off-diagonal `off` (both neighbours and both corners). `rhs` is overwritten
// with the solution. Sherman-Morrison over a Thomas sweep; L >= 3.
void solve_cyclic_tridiagonal(std::span<const Complex> diag, Complex off,
                              std::span<Complex> rhs, std::span<Complex> scratch_upper,
                              std::span<Complex> scratch_aux);

Trajectory evolve(const LatticeState& initial, const DriveParams& params, const TimeGrid& grid,
                  const EvolveOptions& options = {});

// Dense oracle: exact exponential of the midpoint Hamiltonian every step.
// O(L^3) per step.
Trajectory evolve_reference(const LatticeState& initial, const DriveParams& params,
                            const TimeGrid& grid, const EvolveOptions& options = {});

// Exact evolution under a time-independent banded Hamiltonian.
Trajectory evolve_static(const LatticeState& initial, const HamiltonianMatrix& hamiltonian,
                         const TimeGrid& grid, bool keep_states = false);

// U(t0 + T, t0), T = pi/omega, column by column. `dt` must divide T.
Eigen::MatrixXcd monodromy(const DriveParams& params, double dt, double t0 = 0.0,
                           int workers = 1, Integrator integrator = Integrator::cayley4);
Eigen::MatrixXcd monodromy_steps(const DriveParams& params, long long steps_per_period,
                                 double t0 = 0.0, int workers = 1,
                                 Integrator integrator = Integrator::cayley4);

struct FloquetMode {
  double quasienergy = 0.0;     // in (-pi/T, pi/T]
  Complex eigenvalue;
  Eigen::VectorXcd vector;      // unit eigenvector of U(T, 0)
};

// Quasienergies -arg(lambda)/T sorted ascending; eigenvectors from the complex
// Schur form, which is diagonal for a unitary input, so they are orthonormal
// even inside degenerate subspaces.
std::vector<FloquetMode> floquet_spectrum(const Eigen::MatrixXcd& monodromy, double period);

}  // namespace accordion
