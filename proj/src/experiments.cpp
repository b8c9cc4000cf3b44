#include "accordion/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <numeric>

#include "accordion/entropy.hpp"
#include "accordion/error.hpp"
#include "accordion/parallel.hpp"
#include "accordion/spectral.hpp"
#include "accordion/subsystem.hpp"

#ifndef ACCORDION_VERSION
#define ACCORDION_VERSION "unknown"
#endif

namespace accordion {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

EvolveOptions options_of(const ExperimentConfig& c) {
  EvolveOptions o;
  o.integrator = c.integrator;
  return o;
}

// Observables of one run, enough for every sweep.
struct RunSummary {
  std::vector<double> times, translation_re, translation_im, entropy;
  TailStats entropy_tail, translation_tail;
  double max_norm_error = 0.0;
};

RunSummary summarize(const Trajectory& tr, double tail_fraction) {
  RunSummary s;
  s.times = tr.times;
  for (const auto& t : tr.translation) {
    s.translation_re.push_back(t.real());
    s.translation_im.push_back(t.imag());
  }
  s.entropy = entropy_series(tr);
  s.entropy_tail = tail_stats(s.times, s.entropy, tail_fraction);
  s.translation_tail = tail_stats(s.times, s.translation_re, tail_fraction);
  for (double e : tr.norm_error) s.max_norm_error = std::max(s.max_norm_error, e);
  return s;
}

RunSummary run_plane_wave(const DriveParams& drive, const TimeGrid& grid, int k_index,
                          const ExperimentConfig& c) {
  const Trajectory tr = evolve(plane_wave(drive.sites, k_index), drive, grid, options_of(c));
  return summarize(tr, c.tail_fraction);
}

ResultTable series_table(const std::string& name, const RunSummary& s) {
  ResultTable t;
  t.name = name;
  t.columns = {"t", "re_T", "im_T", "S"};
  for (std::size_t i = 0; i < s.times.size(); ++i)
    t.add_row({s.times[i], s.translation_re[i], s.translation_im[i], s.entropy[i]});
  return t;
}

double transient_time(const ExperimentConfig& c) {
  return c.grid.t_start + c.transient_periods * c.drive.period();
}

}  // namespace

TailStats tail_stats(const std::vector<double>& times, const std::vector<double>& values,
                     double fraction) {
  if (times.size() != values.size()) throw ValidationError("times and values differ in length");
  TailStats s;
  if (times.empty()) return s;
  const double start = times.back() - fraction * (times.back() - times.front());
  double sum = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= start) {
      sum += values[i];
      ++s.samples;
    }
  s.mean = sum / static_cast<double>(s.samples);
  double var = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= start) var += (values[i] - s.mean) * (values[i] - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(s.samples));
  return s;
}

std::vector<double> entropy_series(const Trajectory& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.entropy.size());
  for (const auto& e : trajectory.entropy) out.push_back(e.entropy);
  return out;
}

std::vector<double> translation_series(const Trajectory& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.translation.size());
  for (const auto& t : trajectory.translation) out.push_back(t.real());
  return out;
}

std::vector<int> k0_grid(int sites, int points) {
  if (points < 1) throw ValidationError("k-point count must be >= 1");
  std::vector<int> out(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    const int mirror = points - j;
    if (2 * j <= points) {
      out[static_cast<std::size_t>(j)] =
          static_cast<int>(std::llround(static_cast<double>(j) * sites / points));
    } else {
      out[static_cast<std::size_t>(j)] =
          sites - static_cast<int>(std::llround(static_cast<double>(mirror) * sites / points));
    }
  }
  for (std::size_t j = 1; j < out.size(); ++j)
    if (out[j] <= out[j - 1]) throw ValidationError("k-point grid finer than the lattice");
  return out;
}

double scatter_coherence(const std::vector<Complex>& scatter) {
  Complex sum = 0.0;
  double total = 0.0;
  for (const auto& m : scatter) {
    sum += m;
    total += std::abs(m);
  }
  return total > 0.0 ? std::abs(sum) / total : 0.0;
}

std::vector<ResultTable> run_evolve(const ExperimentConfig& c) {
  const Trajectory tr = evolve(make_initial_state(c), c.drive, c.grid, options_of(c));
  const RunSummary s = summarize(tr, c.tail_fraction);
  ResultTable t;
  t.name = "evolve";
  t.columns = {"t", "re_T", "im_T", "S", "p_A", "c_abs", "norm_error"};
  for (std::size_t i = 0; i < tr.size(); ++i)
    t.add_row({tr.times[i], tr.translation[i].real(), tr.translation[i].imag(),
               tr.entropy[i].entropy, tr.entropy[i].weight_a, tr.entropy[i].overlap_abs,
               tr.norm_error[i]});
  t.set_meta("tail_S_mean", s.entropy_tail.mean);
  t.set_meta("tail_S_std", s.entropy_tail.stddev);
  t.set_meta("tail_T_mean", s.translation_tail.mean);
  t.set_meta("tail_T_std", s.translation_tail.stddev);
  t.set_meta("max_norm_error", s.max_norm_error);
  return {t};
}

std::vector<ResultTable> sweep_k0(const ExperimentConfig& c) {
  const std::vector<int> grid = k0_grid(c.drive.sites, c.k_points);
  const auto results = parallel_map(grid.size(), c.workers, [&](std::size_t j) {
    return run_plane_wave(c.drive, c.grid, grid[j], c).entropy_tail;
  });
  ResultTable t;
  t.name = "sweep-k0";
  t.columns = {"k0", "k_index", "S_mean", "S_std"};
  double best = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    t.add_row({momentum(c.drive.sites, grid[j]), static_cast<double>(grid[j]), results[j].mean,
               results[j].stddev});
    best = std::max(best, results[j].mean);
  }
  t.set_meta("max_S_mean", best);
  return {t};
}

std::vector<ResultTable> sweep_omega(const ExperimentConfig& c) {
  std::vector<double> omegas = c.omega_list;
  std::sort(omegas.begin(), omegas.end());
  std::vector<int> ks = c.sweep_k_indices;
  if (ks.empty()) ks = {c.drive.sites / 2, 3 * c.drive.sites / 8};
  std::sort(ks.begin(), ks.end());
  struct Point { double omega; int k; };
  std::vector<Point> points;
  for (double w : omegas)
    for (int k : ks) points.push_back({w, k});
  const auto results = parallel_map(points.size(), c.workers, [&](std::size_t j) {
    DriveParams d = c.drive;
    d.omega = points[j].omega;
    return run_plane_wave(d, c.grid, points[j].k, c).entropy_tail;
  });
  ResultTable t;
  t.name = "sweep-omega";
  t.columns = {"omega", "k0", "k_index", "S_mean", "S_std"};
  for (std::size_t j = 0; j < points.size(); ++j)
    t.add_row({points[j].omega, momentum(c.drive.sites, points[j].k),
               static_cast<double>(points[j].k), results[j].mean, results[j].stddev});
  return {t};
}

std::vector<ResultTable> square_wave_experiment(const ExperimentConfig& c) {
  const int order = square_wave_order(c.drive.hopping, c.drive.omega);
  if (order < 0) throw ValidationError("square-wave condition omega = -4h/(2m+1) not met");

  std::vector<int> sizes = {c.drive.sites};
  if (c.compare_sites > 0 && c.compare_sites != c.drive.sites) sizes.push_back(c.compare_sites);
  const auto runs = parallel_map(sizes.size(), c.workers, [&](std::size_t j) {
    DriveParams d = c.drive;
    d.sites = sizes[j];
    return run_plane_wave(d, c.grid, d.sites / 2, c);
  });
  const double transient = transient_time(c);
  std::vector<SquareWaveAnalysis> analyses;
  for (const auto& r : runs)
    analyses.push_back(analyze_square_wave(r.times, r.translation_re, c.drive.omega, transient));

  const RunSummary& main = runs[0];
  const SquareWaveAnalysis& a = analyses[0];
  ResultTable t = series_table("square-wave", main);
  t.columns.push_back("template");
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    t.rows[i].push_back(a.offset + a.amplitude * sign_of(std::cos(c.drive.omega * main.times[i])));

  t.set_meta("square_wave_order", static_cast<double>(order));
  t.set_meta("transient", transient);
  t.set_meta("sample_spacing", c.grid.dt * c.grid.output_stride);
  t.set_meta("correlation", a.correlation);
  t.set_meta("template_offset", a.offset);
  t.set_meta("template_amplitude", a.amplitude);
  t.set_meta("upper_plateau", a.upper_plateau);
  t.set_meta("lower_plateau", a.lower_plateau);
  t.set_meta("separation", a.separation);
  t.set_meta("plateau_spread", a.plateau_spread);
  t.set_meta("flip_count", static_cast<double>(a.flips.size()));
  t.set_meta("max_flip_offset", a.max_flip_offset);
  t.set_meta("plateaus_detected", a.plateaus_detected ? 1.0 : 0.0);
  t.set_meta("gibbs_mean", a.gibbs_mean);
  t.set_meta("gibbs_max", a.gibbs_max);
  try {
    const VTildeEstimate e = estimate_v_tilde(main.times, main.translation_re, c.drive.omega,
                                              transient);
    t.set_meta("v_tilde", e.v_tilde);
    t.set_meta("v_tilde_leading_order", v_tilde_leading_order(e.separation, c.drive.omega));
    t.set_meta("v_tilde_residual", e.residual);
    // Plateaus predicted from the estimate: -|a2|^2 -+ 2 a1 a2 pi V~ / w.
    const double ratio = 2.0 * e.v_tilde / c.drive.omega;
    const double a2 = 1.0 / std::sqrt(1.0 + ratio * ratio);
    const double a1 = ratio * a2;
    const double centre = -a2 * a2;
    const double half = 2.0 * a1 * a2 * kPi * e.v_tilde / c.drive.omega;
    const double up = centre + half, down = centre - half;
    t.set_meta("predicted_upper_plateau", up);
    t.set_meta("predicted_lower_plateau", down);
    const double rel = std::max(std::abs(up - a.upper_plateau) / std::abs(a.upper_plateau),
                                std::abs(down - a.lower_plateau) / std::abs(a.lower_plateau));
    t.set_meta("plateau_relative_error", rel);
  } catch (const NumericalError& err) {
    t.set_meta("v_tilde", kNaN);
    t.set_meta("v_tilde_error", std::string(err.what()));
  }

  ResultTable flips;
  flips.name = "square-wave_flips";
  flips.columns = {"index", "time", "direction", "nearest_zero", "offset"};
  for (std::size_t k = 0; k < a.flips.size(); ++k) {
    const double w = c.drive.omega;
    const double m = std::round((w * a.flips[k].time - 0.5 * kPi) / kPi);
    const double zero = (0.5 * kPi + m * kPi) / w;
    flips.add_row({static_cast<double>(k), a.flips[k].time,
                   static_cast<double>(a.flips[k].direction), zero, a.flips[k].time - zero});
  }

  ResultTable by_size;
  by_size.name = "square-wave_sizes";
  by_size.columns = {"sites", "correlation", "separation", "gibbs_mean", "gibbs_max",
                     "max_flip_offset", "flip_count"};
  std::vector<std::size_t> order_idx(sizes.size());
  std::iota(order_idx.begin(), order_idx.end(), 0);
  std::sort(order_idx.begin(), order_idx.end(),
            [&](std::size_t x, std::size_t y) { return sizes[x] < sizes[y]; });
  for (std::size_t j : order_idx) {
    const auto& s = analyses[j];
    by_size.add_row({static_cast<double>(sizes[j]), s.correlation, s.separation, s.gibbs_mean,
                     s.gibbs_max, s.max_flip_offset, static_cast<double>(s.flips.size())});
  }
  return {t, flips, by_size};
}

std::vector<ResultTable> resonance_experiment(const ExperimentConfig& c) {
  if (!is_resonant(c.drive.hopping, c.drive.omega))
    throw ValidationError("resonance condition 2h = m omega not met");
  const std::vector<double> hoppings = {c.drive.hopping, c.reference_hopping};
  const auto runs = parallel_map(hoppings.size(), c.workers, [&](std::size_t j) {
    DriveParams d = c.drive;
    d.hopping = hoppings[j];
    return run_plane_wave(d, c.grid, d.sites / 2, c);
  });
  const double transient = transient_time(c);
  std::vector<SquareWaveAnalysis> analyses;
  for (const auto& r : runs)
    analyses.push_back(analyze_square_wave(r.times, r.translation_re, c.drive.omega, transient));

  ResultTable t = series_table("resonance", runs[0]);
  const auto& res = runs[0];
  const auto& ref = runs[1];
  const double var = res.translation_tail.stddev * res.translation_tail.stddev;
  t.set_meta("tail_T_mean", res.translation_tail.mean);
  t.set_meta("tail_T_variance", var);
  t.set_meta("tail_S_mean", res.entropy_tail.mean);
  t.set_meta("correlation", analyses[0].correlation);
  t.set_meta("plateaus_detected", analyses[0].plateaus_detected ? 1.0 : 0.0);
  t.set_meta("flip_count", static_cast<double>(analyses[0].flips.size()));
  const double ref_plateau = std::abs(ref.translation_tail.mean);
  t.set_meta("reference_hopping", c.reference_hopping);
  t.set_meta("reference_plateau_magnitude", ref_plateau);
  t.set_meta("reference_tail_S_mean", ref.entropy_tail.mean);
  t.set_meta("reference_correlation", analyses[1].correlation);
  t.set_meta("closeness_ratio",
             ref_plateau > 0 ? std::abs(res.translation_tail.mean) / ref_plateau : kNaN);

  ResultTable cmp;
  cmp.name = "resonance_comparison";
  cmp.columns = {"hopping", "tail_T_mean", "tail_T_variance", "tail_S_mean", "correlation",
                 "plateaus_detected"};
  std::vector<std::size_t> idx = {0, 1};
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return hoppings[x] < hoppings[y];
  });
  for (std::size_t j : idx) {
    const auto& r = runs[j];
    cmp.add_row({hoppings[j], r.translation_tail.mean,
                 r.translation_tail.stddev * r.translation_tail.stddev, r.entropy_tail.mean,
                 analyses[j].correlation, analyses[j].plateaus_detected ? 1.0 : 0.0});
  }
  return {t, cmp};
}

std::vector<ResultTable> snapshot_experiment(const ExperimentConfig& c) {
  const double when = c.t_snapshot < 0 ? c.grid.t_max : c.t_snapshot;
  LatticeState state = make_initial_state(c);
  if (when - c.grid.t_start >= c.grid.dt) {
    TimeGrid g = c.grid;
    g.t_max = when;
    g.output_stride = static_cast<int>(std::min<long long>(g.steps(), 1 << 30));
    state = evolve(state, c.drive, g, options_of(c)).final_state;
  }
  const auto scatter = randomness_scatter(state);
  const EntropyReport e = bipartite_entropy(state);
  ResultTable t;
  t.name = "snapshot";
  t.columns = {"site", "prob", "re_psi", "im_psi", "re_M", "im_M"};
  const int L = state.sites();
  for (int i = 0; i < L; ++i) {
    const Complex a = state[i];
    const bool has_m = i < L / 2;
    t.add_row({static_cast<double>(i), std::norm(a), a.real(), a.imag(),
               has_m ? scatter[static_cast<std::size_t>(i)].real() : kNaN,
               has_m ? scatter[static_cast<std::size_t>(i)].imag() : kNaN});
  }
  t.set_meta("t", when);
  t.set_meta("coherence", scatter_coherence(scatter));
  t.set_meta("S", e.entropy);
  t.set_meta("p_A", e.weight_a);
  t.set_meta("c_abs", e.overlap_abs);
  return {t};
}

std::vector<ResultTable> floquet_spectrum_experiment(const ExperimentConfig& c) {
  const double period = c.drive.period();
  const long long steps = std::max(1LL, static_cast<long long>(std::ceil(period / c.grid.dt - 1e-9)));
  const Eigen::MatrixXcd u = monodromy_steps(c.drive, steps, c.grid.t_start, c.workers, c.integrator);
  const auto modes = floquet_spectrum(u, period);
  const int L = c.drive.sites;
  const Eigen::MatrixXcd gram = u.adjoint() * u - Eigen::MatrixXcd::Identity(L, L);

  ResultTable t;
  t.name = "floquet-spectrum";
  t.columns = {"index", "quasienergy", "weight_k0", "weight_kpi", "modulus_error"};
  std::vector<double> pair_weight;
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  for (std::size_t l = 0; l < modes.size(); ++l) {
    Complex a0 = 0.0, api = 0.0;
    for (int j = 0; j < L; ++j) {
      const Complex z = std::conj(modes[l].vector(j)) * scale;
      a0 += z;
      api += (j % 2 ? -1.0 : 1.0) * z;
    }
    t.add_row({static_cast<double>(l), modes[l].quasienergy, std::norm(a0), std::norm(api),
               std::abs(std::abs(modes[l].eigenvalue) - 1.0)});
    pair_weight.push_back(0.5 * (std::norm(a0) + std::norm(api)));
  }
  std::vector<double> sorted = pair_weight;
  std::sort(sorted.rbegin(), sorted.rend());
  t.set_meta("steps_per_period", static_cast<double>(steps));
  t.set_meta("effective_dt", period / static_cast<double>(steps));
  t.set_meta("unitarity_error", gram.cwiseAbs().maxCoeff());
  t.set_meta("top_two_subsystem_weight", sorted.size() >= 2 ? sorted[0] + sorted[1] : kNaN);
  return {t};
}

std::vector<ResultTable> magnus_experiment(const ExperimentConfig& c) {
  const MagnusTerms terms = magnus_terms(c.drive, c.photon_cutoff);
  const DivergenceReport d = magnus_divergence_diagnostic(c.drive, c.photon_cutoff, c.magnus_sizes);
  ResultTable bonds;
  bonds.name = "magnus";
  bonds.columns = {"bond", "h0_diagonal", "F", "partial_sum"};
  double min_f = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < terms.bond_coefficients.size(); ++i) {
    bonds.add_row({static_cast<double>(i), terms.order0.diagonal[i], terms.bond_coefficients[i],
                   terms.partial_sums[i]});
    min_f = std::min(min_f, terms.bond_coefficients[i]);
  }
  bonds.set_meta("photon_cutoff", static_cast<double>(c.photon_cutoff));
  bonds.set_meta("order1_witness", terms.order1_witness);
  bonds.set_meta("min_F", min_f);

  ResultTable div;
  div.name = "magnus_divergence";
  div.columns = {"L", "partial_sum"};
  for (std::size_t k = 0; k < d.sizes.size(); ++k)
    div.add_row({static_cast<double>(d.sizes[k]), d.partial_sums[k]});
  div.set_meta("strictly_increasing", d.strictly_increasing ? 1.0 : 0.0);
  div.set_meta("log_slope", d.slope);
  div.set_meta("log_intercept", d.intercept);
  div.set_meta("r_squared", d.r_squared);
  return {bonds, div};
}

std::vector<ResultTable> entropy_scan(const ExperimentConfig& c) {
  ResultTable t;
  t.name = "entropy-scan";
  t.columns = {"c2", "max_S", "S_half"};
  bool nonincreasing = true;
  double last = std::numeric_limits<double>::infinity();
  for (int j = 0; j < c.entropy_points; ++j) {
    const double c2 = (1.0 / 16.0) * j / (c.entropy_points - 1);
    const double best = max_entropy_over_weight(c2);
    if (best > last) nonincreasing = false;
    last = best;
    t.add_row({c2, best, entropy_from_invariants(0.5, c2).entropy});
  }
  t.set_meta("nonincreasing", nonincreasing ? 1.0 : 0.0);
  return {t};
}

std::vector<ResultTable> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<ResultTable> tables;
  const std::string& e = config.experiment;
  if (e == "evolve") tables = run_evolve(config);
  else if (e == "sweep-k0") tables = sweep_k0(config);
  else if (e == "sweep-omega") tables = sweep_omega(config);
  else if (e == "square-wave") tables = square_wave_experiment(config);
  else if (e == "resonance") tables = resonance_experiment(config);
  else if (e == "snapshot") tables = snapshot_experiment(config);
  else if (e == "floquet-spectrum") tables = floquet_spectrum_experiment(config);
  else if (e == "magnus") tables = magnus_experiment(config);
  else if (e == "entropy-scan") tables = entropy_scan(config);
  else throw ValidationError("unknown experiment '" + e + "'");
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (auto& t : tables) {
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("version", ACCORDION_VERSION);
    meta.emplace_back("experiment", e);
    for (const auto& [k, v] : config.entries()) meta.emplace_back("config." + k, v);
    for (auto& kv : t.metadata) meta.push_back(std::move(kv));
    meta.emplace_back("wall_time_s", format_number(wall));
    t.metadata = std::move(meta);
  }
  return tables;
}

std::vector<std::string> write_tables(const std::vector<ResultTable>& tables,
                                      const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create output directory '" + directory + "': " + ec.message());
  std::vector<std::string> paths;
  for (const auto& t : tables) {
    const std::string path = (std::filesystem::path(directory) / (t.name + ".tsv")).string();
    write_table(t, path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace accordion
