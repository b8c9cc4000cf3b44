#include "accordion/propagator.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "accordion/error.hpp"
#include "accordion/parallel.hpp"

namespace accordion {

std::string to_string(Integrator integrator) {
  return integrator == Integrator::cayley4 ? "cayley4" : "crank_nicolson";
}

Integrator parse_integrator(const std::string& name) {
  if (name == "cayley4") return Integrator::cayley4;
  if (name == "crank_nicolson" || name == "cn") return Integrator::crank_nicolson;
  throw ValidationError("unknown integrator '" + name + "'");
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(t_max - t_start >= dt * (1.0 - 1e-12)))
    throw ValidationError("t_max must exceed the start time by at least one step");
  if (output_stride < 1) throw ValidationError("output stride must be >= 1");
}

long long TimeGrid::steps() const {
  return static_cast<long long>(std::floor((t_max - t_start) / dt + 1e-9));
}

namespace {

// Plain complex arithmetic without the C99 Annex G NaN/Inf recovery paths,
// which dominate the cost of the sweep otherwise. All operands here are finite.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline Complex reciprocal(Complex a) {
  const double s = 1.0 / (a.real() * a.real() + a.imag() * a.imag());
  return {a.real() * s, -a.imag() * s};
}

}  // namespace

void solve_cyclic_tridiagonal(std::span<const Complex> diag, Complex off, std::span<Complex> rhs,
                              std::span<Complex> upper, std::span<Complex> aux) {
  const std::size_t n = diag.size();
  // Rank-one correction u v^T with u = (gamma, 0, ..., 0, off), v = (1, 0, ..., 0, off/gamma).
  const Complex gamma = -diag[0];
  const Complex inv_gamma = reciprocal(gamma);
  const Complex first = diag[0] - gamma;
  const Complex last = diag[n - 1] - mul(mul(off, off), inv_gamma);

  // Forward sweep applied to both right-hand sides at once; aux starts as u.
  Complex inv = reciprocal(first);
  upper[0] = mul(off, inv);
  rhs[0] = mul(rhs[0], inv);
  aux[0] = mul(gamma, inv);
  for (std::size_t i = 1; i < n; ++i) {
    inv = reciprocal((i + 1 == n ? last : diag[i]) - mul(off, upper[i - 1]));
    upper[i] = mul(off, inv);
    rhs[i] = mul(rhs[i] - mul(off, rhs[i - 1]), inv);
    const Complex source = i + 1 == n ? off : Complex{};
    aux[i] = mul(source - mul(off, aux[i - 1]), inv);
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] -= mul(upper[i], rhs[i + 1]);
    aux[i] -= mul(upper[i], aux[i + 1]);
  }
  const Complex num = rhs[0] + mul(mul(off, rhs[n - 1]), inv_gamma);
  const Complex den = 1.0 + aux[0] + mul(mul(off, aux[n - 1]), inv_gamma);
  const Complex factor = mul(num, reciprocal(den));
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= mul(factor, aux[i]);
}

Stepper::Stepper(const DriveParams& params, double dt, Integrator integrator)
    : params_(params), dt_(dt) {
  params_.validate();
  if (!(std::abs(dt) > 0.0) || !std::isfinite(dt)) throw ValidationError("step size must be nonzero");
  const Complex i_dt(0.0, dt);
  if (integrator == Integrator::crank_nicolson) {
    factors_.emplace_back(i_dt / 2.0, -i_dt / 2.0);
  } else {
    // Numerator roots z_k = -3 +- i sqrt3 and denominator roots w_k = -conj(z_k)
    // of the (2,2) Pade approximant; each factor (1 - z/z_k)/(1 - z/w_k) with
    // z = -i dt E is unimodular for real E.
    const double s3 = std::sqrt(3.0);
    for (double sign : {1.0, -1.0}) {
      const Complex z(-3.0, sign * s3);
      const Complex w(3.0, sign * s3);
      factors_.emplace_back(i_dt / w, i_dt / z);
    }
  }
  const auto n = static_cast<std::size_t>(params_.sites);
  potential_.resize(n);
  rhs_.resize(n);
  diag_.resize(n);
  upper_.resize(n);
  aux_.resize(n);
}

void Stepper::apply_factor(std::span<Complex> psi, Complex lhs, Complex rhs) {
  const std::size_t n = psi.size();
  const double h = params_.hopping;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex neighbours = psi[i == 0 ? n - 1 : i - 1] + psi[i + 1 == n ? 0 : i + 1];
    rhs_[i] = psi[i] + mul(rhs, potential_[i] * psi[i] + h * neighbours);
    diag_[i] = {1.0 + lhs.real() * potential_[i], lhs.imag() * potential_[i]};
  }
  solve_cyclic_tridiagonal(diag_, lhs * h, rhs_, upper_, aux_);
  std::copy(rhs_.begin(), rhs_.end(), psi.begin());
}

void Stepper::advance(std::span<Complex> psi, double t) {
  if (psi.size() != potential_.size()) throw ValidationError("state size does not match lattice");
  onsite_potential(params_, t + 0.5 * dt_, potential_);
  for (const auto& [lhs, rhs] : factors_) apply_factor(psi, lhs, rhs);
}

namespace {

double squared_norm(std::span<const Complex> psi) {
  double s = 0.0;
  for (const auto& a : psi) s += std::norm(a);
  return s;
}

class Recorder {
 public:
  Recorder(Trajectory& out, bool keep_states) : out_(out), keep_(keep_states) {}

  void record(double t, std::span<const Complex> psi) {
    out_.times.push_back(t);
    out_.translation.push_back(translation_expectation(psi));
    out_.entropy.push_back(bipartite_entropy(psi));
    out_.norm_error.push_back(std::abs(std::sqrt(squared_norm(psi)) - 1.0));
    if (keep_) out_.states.push_back(LatticeState::from_amplitudes({psi.begin(), psi.end()}));
  }

 private:
  Trajectory& out_;
  bool keep_;
};

void check_initial(const LatticeState& initial, const DriveParams& params) {
  params.validate();
  if (initial.sites() != params.sites)
    throw ValidationError("initial state has " + std::to_string(initial.sites()) +
                          " sites, lattice has " + std::to_string(params.sites));
  if (std::abs(initial.norm() - 1.0) > 1e-10) throw ValidationError("initial state is not normalised");
}

template <class StepFn>
Trajectory run_grid(const LatticeState& initial, const TimeGrid& grid, const EvolveOptions& options,
                    StepFn&& step) {
  grid.validate();
  Trajectory traj;
  Recorder recorder(traj, options.keep_states);
  std::vector<Complex> psi(initial.amplitudes().begin(), initial.amplitudes().end());
  const long long steps = grid.steps();
  recorder.record(grid.t_start, psi);
  for (long long s = 0; s < steps; ++s) {
    const double t = grid.t_start + static_cast<double>(s) * grid.dt;
    step(std::span<Complex>(psi), t);
    const double drift = std::abs(std::sqrt(squared_norm(psi)) - 1.0);
    if (!(drift <= options.norm_tolerance))
      throw NumericalError("norm drift " + std::to_string(drift) + " at t = " +
                           std::to_string(t + grid.dt));
    if ((s + 1) % grid.output_stride == 0 || s + 1 == steps)
      recorder.record(grid.t_start + static_cast<double>(s + 1) * grid.dt, psi);
  }
  traj.final_state = LatticeState::from_amplitudes(std::move(psi));
  return traj;
}

}  // namespace

Trajectory evolve(const LatticeState& initial, const DriveParams& params, const TimeGrid& grid,
                  const EvolveOptions& options) {
  check_initial(initial, params);
  Stepper stepper(params, grid.dt, options.integrator);
  return run_grid(initial, grid, options,
                  [&](std::span<Complex> psi, double t) { stepper.advance(psi, t); });
}

Trajectory evolve_reference(const LatticeState& initial, const DriveParams& params,
                            const TimeGrid& grid, const EvolveOptions& options) {
  check_initial(initial, params);
  const int n = params.sites;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(n);
  Eigen::VectorXcd work(n);
  return run_grid(initial, grid, options, [&](std::span<Complex> psi, double t) {
    solver.compute(build_hamiltonian(params, t + 0.5 * grid.dt).dense());
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed in reference step");
    Eigen::Map<Eigen::VectorXcd> v(psi.data(), n);
    const auto& basis = solver.eigenvectors();
    work = basis.transpose() * v;
    for (int i = 0; i < n; ++i) work[i] *= std::polar(1.0, -solver.eigenvalues()[i] * grid.dt);
    v = basis * work;
  });
}

Trajectory evolve_static(const LatticeState& initial, const HamiltonianMatrix& hamiltonian,
                         const TimeGrid& grid, bool keep_states) {
  const int n = hamiltonian.size();
  if (initial.sites() != n) throw ValidationError("state size does not match Hamiltonian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian.dense());
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const auto& basis = solver.eigenvectors();
  Eigen::Map<const Eigen::VectorXcd> psi0(initial.amplitudes().data(), n);
  const Eigen::VectorXcd coefficients = basis.transpose() * psi0;
  Eigen::VectorXcd work(n);

  EvolveOptions options;
  options.keep_states = keep_states;
  // Each step re-evaluates from t_start so no error accumulates.
  return run_grid(initial, grid, options, [&](std::span<Complex> psi, double t) {
    const double elapsed = t + grid.dt - grid.t_start;
    for (int i = 0; i < n; ++i)
      work[i] = coefficients[i] * std::polar(1.0, -solver.eigenvalues()[i] * elapsed);
    Eigen::Map<Eigen::VectorXcd>(psi.data(), n) = basis * work;
  });
}

Eigen::MatrixXcd monodromy_steps(const DriveParams& params, long long steps_per_period, double t0,
                                 int workers, Integrator integrator) {
  params.validate();
  if (steps_per_period < 1) throw ValidationError("steps per period must be >= 1");
  const int n = params.sites;
  const double dt = params.period() / static_cast<double>(steps_per_period);
  auto columns = parallel_map(static_cast<std::size_t>(n), workers, [&](std::size_t j) {
    Stepper stepper(params, dt, integrator);
    std::vector<Complex> psi(static_cast<std::size_t>(n));
    psi[j] = 1.0;
    for (long long s = 0; s < steps_per_period; ++s)
      stepper.advance(psi, t0 + static_cast<double>(s) * dt);
    return psi;
  });
  Eigen::MatrixXcd u(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) u(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return u;
}

Eigen::MatrixXcd monodromy(const DriveParams& params, double dt, double t0, int workers,
                           Integrator integrator) {
  params.validate();
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  const double period = params.period();
  const double ratio = period / dt;
  const long long steps = std::llround(ratio);
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
    throw ValidationError("dt does not divide the drive period pi/omega");
  return monodromy_steps(params, steps, t0, workers, integrator);
}

std::vector<FloquetMode> floquet_spectrum(const Eigen::MatrixXcd& u, double period) {
  if (u.rows() != u.cols() || u.rows() == 0) throw ValidationError("monodromy must be square");
  if (!(period > 0.0)) throw ValidationError("period must be positive");
  const auto n = u.rows();
  const double defect = (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > 1e-6) throw ValidationError("monodromy is not unitary (defect " + std::to_string(defect) + ")");

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
  if (schur.info() != Eigen::Success) throw NumericalError("Schur decomposition failed");
  const auto& tri = schur.matrixT();
  const auto& q = schur.matrixU();

  const double zone = std::numbers::pi / period;
  std::vector<FloquetMode> modes(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& m = modes[static_cast<std::size_t>(i)];
    m.eigenvalue = tri(i, i);
    m.quasienergy = -std::arg(m.eigenvalue) / period;
    if (m.quasienergy <= -zone) m.quasienergy += 2.0 * zone;
    m.vector = q.col(i);
  }
  std::stable_sort(modes.begin(), modes.end(),
                   [](const FloquetMode& a, const FloquetMode& b) { return a.quasienergy < b.quasienergy; });
  return modes;
}

}  // namespace accordion
