#include "accordion/lattice.hpp"

#include <cmath>
#include <numeric>

#include "accordion/error.hpp"

namespace accordion {

std::string to_string(DriveProfile profile) {
  switch (profile) {
    case DriveProfile::sine: return "sin";
    case DriveProfile::square: return "square";
    case DriveProfile::triangle: return "triangle";
  }
  return "sin";
}

DriveProfile parse_drive_profile(const std::string& name) {
  if (name == "sin" || name == "sine") return DriveProfile::sine;
  if (name == "square") return DriveProfile::square;
  if (name == "triangle") return DriveProfile::triangle;
  throw ValidationError("unknown drive profile '" + name + "'");
}

void DriveParams::validate() const {
  if (sites < 4 || sites % 2 != 0)
    throw ValidationError("lattice length must be an even integer >= 4, got " +
                          std::to_string(sites));
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw ValidationError("omega must be positive and finite");
  if (!(pitch > 0.0) || !std::isfinite(pitch))
    throw ValidationError("pitch must be positive and finite");
  if (!std::isfinite(amplitude) || !std::isfinite(hopping))
    throw ValidationError("amplitude and hopping must be finite");
}

double DriveParams::modulation(double t) const {
  const double s = std::sin(omega * t);
  switch (profile) {
    case DriveProfile::sine: return s;
    case DriveProfile::square: return (s > 0.0) - (s < 0.0);
    case DriveProfile::triangle: return (2.0 / std::numbers::pi) * std::asin(s);
  }
  return s;
}

LatticeState LatticeState::from_amplitudes(std::vector<Complex> amplitudes) {
  if (amplitudes.empty()) throw ValidationError("state has no sites");
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw ValidationError("state amplitudes have zero or non-finite norm");
  const double scale = 1.0 / std::sqrt(sum);
  for (auto& a : amplitudes) a *= scale;
  return LatticeState(std::move(amplitudes));
}

double LatticeState::norm() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

void HamiltonianMatrix::apply(std::span<const Complex> in, std::span<Complex> out) const {
  const std::size_t n = diagonal.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t left = (i + n - 1) % n;
    const std::size_t right = (i + 1) % n;
    out[i] = diagonal[i] * in[i] + hopping * (in[left] + in[right]);
  }
}

Eigen::MatrixXd HamiltonianMatrix::dense() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = diagonal[static_cast<std::size_t>(i)];
    const int j = (i + 1) % n;
    m(i, j) += hopping;
    m(j, i) += hopping;
  }
  return m;
}

void onsite_potential(const DriveParams& params, double t, std::span<double> out) {
  const double wavevector = params.pitch * params.modulation(t);
  // Rotate exp(i q j) incrementally, re-anchoring on an exact value every
  // 32 sites so the accumulated rounding stays near machine precision.
  constexpr std::size_t kAnchor = 32;
  const Complex step = std::polar(1.0, wavevector);
  Complex phase = 1.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i % kAnchor == 0) phase = std::polar(1.0, wavevector * static_cast<double>(i));
    out[i] = params.amplitude * phase.real();
    phase *= step;
  }
}

HamiltonianMatrix build_hamiltonian(const DriveParams& params, double t) {
  params.validate();
  HamiltonianMatrix h;
  h.diagonal.resize(static_cast<std::size_t>(params.sites));
  h.hopping = params.hopping;
  onsite_potential(params, t, h.diagonal);
  return h;
}

double momentum(int sites, int momentum_index) {
  return 2.0 * std::numbers::pi * momentum_index / sites;
}

LatticeState plane_wave(int sites, int momentum_index) {
  if (sites < 1) throw ValidationError("plane wave needs at least one site");
  if (momentum_index < 0 || momentum_index >= sites)
    throw ValidationError("momentum index " + std::to_string(momentum_index) +
                          " outside [0, " + std::to_string(sites) + ")");
  std::vector<Complex> amps(static_cast<std::size_t>(sites));
  const double scale = 1.0 / std::sqrt(static_cast<double>(sites));
  for (int j = 0; j < sites; ++j) {
    // Reduce the product mod L before multiplying so large j keep full accuracy.
    const long long phase = (static_cast<long long>(momentum_index) * j) % sites;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / sites;
    amps[static_cast<std::size_t>(j)] = std::polar(scale, angle);
  }
  return LatticeState::from_amplitudes(std::move(amps));
}

LatticeState site_state(int sites, int site) {
  if (sites < 1) throw ValidationError("site state needs at least one site");
  if (site < 0 || site >= sites)
    throw ValidationError("site index " + std::to_string(site) + " out of range");
  std::vector<Complex> amps(static_cast<std::size_t>(sites));
  amps[static_cast<std::size_t>(site)] = 1.0;
  return LatticeState::from_amplitudes(std::move(amps));
}

LatticeState translate(const LatticeState& state) {
  const auto in = state.amplitudes();
  const std::size_t n = in.size();
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = in[(j + n - 1) % n];
  return LatticeState::from_amplitudes(std::move(out));
}

Complex translation_expectation(std::span<const Complex> amplitudes) {
  const std::size_t n = amplitudes.size();
  Complex sum = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    sum += std::conj(amplitudes[j]) * amplitudes[(j + n - 1) % n];
  return sum;
}

Complex translation_expectation(const LatticeState& state) {
  return translation_expectation(state.amplitudes());
}

double dispersion(double k, double hopping) { return 2.0 * hopping * std::cos(k); }

std::vector<Complex> randomness_scatter(const LatticeState& state) {
  const int n = state.sites();
  if (n % 2 != 0) throw ValidationError("randomness scatter needs an even lattice");
  const int half = n / 2;
  std::vector<Complex> m(static_cast<std::size_t>(half));
  for (int i = 0; i < half; ++i)
    m[static_cast<std::size_t>(i)] = std::conj(state[i]) * state[i + half];
  return m;
}

}  // namespace accordion
