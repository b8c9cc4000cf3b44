#pragma once

// Experiment drivers. Each returns one or more tables; the first is the
// primary one. Every table carries the full configuration echo
// ("config.<key>"), the code version and the wall time.

#include <string>
#include <vector>

#include "accordion/config.hpp"
#include "accordion/propagator.hpp"
#include "accordion/table.hpp"

namespace accordion {

struct TailStats {
  double mean = 0.0;
  double stddev = 0.0;     // population standard deviation
  std::size_t samples = 0;
};

// Statistics over samples with t >= t_end - fraction * (t_end - t_start).
TailStats tail_stats(const std::vector<double>& times, const std::vector<double>& values,
                     double fraction);

// Entropy series of a trajectory.
std::vector<double> entropy_series(const Trajectory& trajectory);
std::vector<double> translation_series(const Trajectory& trajectory);

// sweep-k0 momentum indices: n_j = round(j L / K) for j <= K/2 and L - n_{K-j}
// above, so the grid is symmetric under k -> 2 pi - k.
std::vector<int> k0_grid(int sites, int points);

// |sum_i M_i| / sum_i |M_i|: 1 when all scatter points share one phase.
double scatter_coherence(const std::vector<Complex>& scatter);

std::vector<ResultTable> run_experiment(const ExperimentConfig& config);

// Individual drivers (no metadata decoration).
std::vector<ResultTable> run_evolve(const ExperimentConfig& config);
std::vector<ResultTable> sweep_k0(const ExperimentConfig& config);
std::vector<ResultTable> sweep_omega(const ExperimentConfig& config);
std::vector<ResultTable> square_wave_experiment(const ExperimentConfig& config);
std::vector<ResultTable> resonance_experiment(const ExperimentConfig& config);
std::vector<ResultTable> snapshot_experiment(const ExperimentConfig& config);
std::vector<ResultTable> floquet_spectrum_experiment(const ExperimentConfig& config);
std::vector<ResultTable> magnus_experiment(const ExperimentConfig& config);
std::vector<ResultTable> entropy_scan(const ExperimentConfig& config);

// Writes each table to <dir>/<name>.tsv and returns the paths.
std::vector<std::string> write_tables(const std::vector<ResultTable>& tables,
                                      const std::string& directory);

}  // namespace accordion
