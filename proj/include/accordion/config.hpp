#pragma once

// Experiment configuration: a flat `key = value` text format, one entry per
// line, '#' starts a comment. Unknown keys are errors. Every experiment has
// its own defaults, applied before the file and any overrides.
//
// Keys:
//   experiment        evolve | sweep-k0 | sweep-omega | square-wave | resonance |
//                     snapshot | floquet-spectrum | magnus | entropy-scan
//   sites, amplitude, hopping, pitch, omega, profile (sine|square|triangle)
//   dt, t_max, output_stride, integrator (cayley4|crank_nicolson)
//   initial           plane_wave | site | file
//   k_index           plane-wave index n, k = 2 pi n / L (default L/2, k = pi)
//   site_index        for initial = site
//   amplitude_file    for initial = file: one "re im" pair per line
//   tail_fraction     fraction of the run used for tail statistics
//   workers, seed (accepted, unused), output_dir
//   k_points          sweep-k0 grid size
//   omega_list        sweep-omega frequencies, comma separated
//   sweep_k_indices   sweep-omega initial plane waves (default L/2, 3L/8)
//   transient_periods square-wave / resonance loading time, in periods pi/omega
//   compare_sites     square-wave: second lattice size for the Gibbs comparison
//                     (0 disables)
//   reference_hopping resonance: h of the comparison run
//   t_snapshot        snapshot time (default t_max)
//   photon_cutoff     magnus: M
//   magnus_sizes      magnus: L list for the divergence diagnostic
//   entropy_points    entropy-scan grid size over |c|^2 in [0, 1/16]

#include <string>
#include <utility>
#include <vector>

#include "accordion/lattice.hpp"
#include "accordion/propagator.hpp"

namespace accordion {

enum class InitialKind { plane_wave, site, file };

struct InitialStateSpec {
  InitialKind kind = InitialKind::plane_wave;
  int k_index = -1;          // -1: L/2
  int site_index = 0;
  std::string amplitude_file;
};

struct ExperimentConfig {
  std::string experiment = "evolve";
  DriveParams drive;
  TimeGrid grid;
  Integrator integrator = Integrator::cayley4;
  InitialStateSpec initial;
  double tail_fraction = 0.2;
  int workers = 1;
  long long seed = 0;
  std::string output_dir = ".";

  int k_points = 32;
  std::vector<double> omega_list;
  std::vector<int> sweep_k_indices;    // empty: L/2 and 3L/8
  double transient_periods = 10.0;
  int compare_sites = 200;
  double reference_hopping = -1.0;
  double t_snapshot = -1.0;             // < 0: t_max
  int photon_cutoff = 64;
  std::vector<long long> magnus_sizes;
  int entropy_points = 20;

  // Throws ValidationError.
  void validate() const;
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  // Every key in a fixed order, values printed losslessly.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

const std::vector<std::string>& experiment_names();
const std::vector<std::string>& config_keys();

ExperimentConfig default_config(const std::string& experiment);

// Applies `key = value` lines on top of `base`. Lines of a result table
// ("# config.key = value") are accepted as well, so an output file can be fed
// back as a configuration. An `experiment` entry must match base.experiment.
void apply_config_text(ExperimentConfig& base, const std::string& text);
void apply_config_file(ExperimentConfig& base, const std::string& path);

std::string format_config(const ExperimentConfig& config);

// Resolves the initial state against the drive parameters.
LatticeState make_initial_state(const ExperimentConfig& config);

}  // namespace accordion
