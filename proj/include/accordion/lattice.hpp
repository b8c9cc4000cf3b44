#pragma once

// Instantaneous Hamiltonian of the accordion-driven ring, plane-wave states,
// the one-site translation operator and a few single-particle observables.

#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace accordion {

using Complex = std::complex<double>;

// Shape of the periodic modulation f(t) entering V cos(p f(t) i).
enum class DriveProfile { sine, square, triangle };

std::string to_string(DriveProfile profile);
DriveProfile parse_drive_profile(const std::string& name);

struct DriveParams {
  int sites = 200;                      // L, even and >= 4
  double amplitude = 4.0;               // V
  double hopping = -1.0;                // h
  double pitch = std::numbers::pi;      // p
  double omega = 10.0;                  // drive angular frequency
  DriveProfile profile = DriveProfile::sine;

  // Throws ValidationError when an invariant is violated.
  void validate() const;

  // f(t), normalised to [-1, 1].
  double modulation(double t) const;

  // Fundamental period of H(t). All shipped profiles satisfy
  // f(t + pi/omega) = -f(t), and the potential is even in f.
  double period() const { return std::numbers::pi / omega; }
};

class LatticeState {
 public:
  LatticeState() = default;

  // Normalises the given amplitudes; rejects an empty or zero vector.
  static LatticeState from_amplitudes(std::vector<Complex> amplitudes);

  int sites() const { return static_cast<int>(amps_.size()); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> mutable_amplitudes() { return amps_; }
  Complex operator[](int i) const { return amps_[static_cast<std::size_t>(i)]; }

  double norm() const;

 private:
  explicit LatticeState(std::vector<Complex> amps) : amps_(std::move(amps)) {}
  std::vector<Complex> amps_;
};

// Banded Hermitian matrix: real diagonal, uniform real hopping on the nearest
// neighbour bonds of a periodic ring (including the L-1 <-> 0 corner bond).
struct HamiltonianMatrix {
  std::vector<double> diagonal;
  double hopping = -1.0;

  int size() const { return static_cast<int>(diagonal.size()); }

  // out = H * in. `in` and `out` must not alias.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;

  Eigen::MatrixXd dense() const;
};

// Fills `out` (size L) with V cos(p f(t) i), i = 0..L-1.
void onsite_potential(const DriveParams& params, double t, std::span<double> out);

HamiltonianMatrix build_hamiltonian(const DriveParams& params, double t);

// psi_j = exp(i k j) / sqrt(L), k = 2 pi n / L.
LatticeState plane_wave(int sites, int momentum_index);

// Unit amplitude on a single site.
LatticeState site_state(int sites, int site);

double momentum(int sites, int momentum_index);

// (T psi)_j = psi_{(j-1) mod L}, so T|k> = exp(-ik)|k>: +1 at k = 0, -1 at k = pi.
LatticeState translate(const LatticeState& state);

// <psi|T|psi>
Complex translation_expectation(const LatticeState& state);
Complex translation_expectation(std::span<const Complex> amplitudes);

// Free band energy 2h cos k.
double dispersion(double k, double hopping);

// M_i = conj(psi_i) psi_{i + L/2} for i = 0..L/2-1. Their sum is the complex
// conjugate of the half-chain overlap c = <psi_B|psi_A> used by the entropy.
std::vector<Complex> randomness_scatter(const LatticeState& state);

}  // namespace accordion
