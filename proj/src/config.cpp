#include "accordion/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "accordion/error.hpp"

namespace accordion {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string s = trim(v);
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(x))
    throw ValidationError("key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  const std::string s = trim(v);
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw ValidationError("key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

int parse_small_int(const std::string& key, const std::string& v) {
  const long long x = parse_int(key, v);
  if (x < -2147483647LL || x > 2147483647LL)
    throw ValidationError("key '" + key + "': integer out of range");
  return static_cast<int>(x);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += f(xs[i]);
  }
  return out;
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::plane_wave: return "plane_wave";
    case InitialKind::site: return "site";
    case InitialKind::file: return "file";
  }
  return "plane_wave";
}

InitialKind parse_initial(const std::string& v) {
  if (v == "plane_wave") return InitialKind::plane_wave;
  if (v == "site") return InitialKind::site;
  if (v == "file") return InitialKind::file;
  throw ValidationError("initial must be plane_wave, site or file, got '" + v + "'");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "evolve", "sweep-k0", "sweep-omega", "square-wave", "resonance",
      "snapshot", "floquet-spectrum", "magnus", "entropy-scan"};
  return names;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "sites", "amplitude", "hopping", "pitch", "omega", "profile",
      "dt", "t_max", "output_stride", "integrator",
      "initial", "k_index", "site_index", "amplitude_file",
      "tail_fraction", "workers", "seed", "output_dir",
      "k_points", "omega_list", "sweep_k_indices", "transient_periods",
      "compare_sites", "reference_hopping", "t_snapshot", "photon_cutoff",
      "magnus_sizes", "entropy_points"};
  return keys;
}

ExperimentConfig default_config(const std::string& experiment) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw ValidationError("unknown experiment '" + experiment + "'");
  ExperimentConfig c;
  c.experiment = experiment;
  c.omega_list = {1, 2, 3, 4, 6, 8, 10};
  c.magnus_sizes = {10, 100, 1000, 10000, 100000};
  // Entropy experiments: V = 4, h = -1, omega = 10, L = 200, t = 200.
  if (experiment == "square-wave") {
    c.drive.sites = 800;
    c.drive.amplitude = 5.0;
    c.drive.omega = 4.0;
    c.grid.t_max = 100.0;
    c.grid.output_stride = 20;
  } else if (experiment == "resonance") {
    c.drive.amplitude = 5.0;
    c.drive.hopping = -2.0;
    c.drive.omega = 4.0;
    c.grid.t_max = 100.0;
    c.grid.output_stride = 20;
  } else if (experiment == "snapshot") {
    c.drive.amplitude = 5.0;
    c.drive.omega = 4.0;
    c.grid.t_max = 50.0;
  }
  return c;
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "experiment") {
    if (value != experiment)
      throw ValidationError("configuration is for experiment '" + value + "', not '" +
                            experiment + "'");
  } else if (key == "sites") drive.sites = parse_small_int(key, value);
  else if (key == "amplitude") drive.amplitude = parse_double(key, value);
  else if (key == "hopping") drive.hopping = parse_double(key, value);
  else if (key == "pitch") drive.pitch = parse_double(key, value);
  else if (key == "omega") drive.omega = parse_double(key, value);
  else if (key == "profile") drive.profile = parse_drive_profile(value);
  else if (key == "dt") grid.dt = parse_double(key, value);
  else if (key == "t_max") grid.t_max = parse_double(key, value);
  else if (key == "output_stride") grid.output_stride = parse_small_int(key, value);
  else if (key == "integrator") integrator = parse_integrator(value);
  else if (key == "initial") initial.kind = parse_initial(value);
  else if (key == "k_index") initial.k_index = parse_small_int(key, value);
  else if (key == "site_index") initial.site_index = parse_small_int(key, value);
  else if (key == "amplitude_file") initial.amplitude_file = value;
  else if (key == "tail_fraction") tail_fraction = parse_double(key, value);
  else if (key == "workers") workers = parse_small_int(key, value);
  else if (key == "seed") seed = parse_int(key, value);
  else if (key == "output_dir") output_dir = value;
  else if (key == "k_points") k_points = parse_small_int(key, value);
  else if (key == "omega_list") {
    omega_list.clear();
    for (const auto& s : split_list(value)) omega_list.push_back(parse_double(key, s));
  } else if (key == "sweep_k_indices") {
    sweep_k_indices.clear();
    for (const auto& s : split_list(value)) sweep_k_indices.push_back(parse_small_int(key, s));
  } else if (key == "transient_periods") transient_periods = parse_double(key, value);
  else if (key == "compare_sites") compare_sites = parse_small_int(key, value);
  else if (key == "reference_hopping") reference_hopping = parse_double(key, value);
  else if (key == "t_snapshot") t_snapshot = parse_double(key, value);
  else if (key == "photon_cutoff") photon_cutoff = parse_small_int(key, value);
  else if (key == "magnus_sizes") {
    magnus_sizes.clear();
    for (const auto& s : split_list(value)) magnus_sizes.push_back(parse_int(key, s));
  } else if (key == "entropy_points") entropy_points = parse_small_int(key, value);
  else throw ValidationError("unknown configuration key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("experiment", experiment);
  e.emplace_back("sites", std::to_string(drive.sites));
  e.emplace_back("amplitude", fmt(drive.amplitude));
  e.emplace_back("hopping", fmt(drive.hopping));
  e.emplace_back("pitch", fmt(drive.pitch));
  e.emplace_back("omega", fmt(drive.omega));
  e.emplace_back("profile", to_string(drive.profile));
  e.emplace_back("dt", fmt(grid.dt));
  e.emplace_back("t_max", fmt(grid.t_max));
  e.emplace_back("output_stride", std::to_string(grid.output_stride));
  e.emplace_back("integrator", to_string(integrator));
  e.emplace_back("initial", to_string(initial.kind));
  e.emplace_back("k_index", std::to_string(initial.k_index));
  e.emplace_back("site_index", std::to_string(initial.site_index));
  e.emplace_back("amplitude_file", initial.amplitude_file);
  e.emplace_back("tail_fraction", fmt(tail_fraction));
  e.emplace_back("workers", std::to_string(workers));
  e.emplace_back("seed", std::to_string(seed));
  e.emplace_back("output_dir", output_dir);
  e.emplace_back("k_points", std::to_string(k_points));
  e.emplace_back("omega_list", join(omega_list, fmt));
  e.emplace_back("sweep_k_indices", join(sweep_k_indices, [](int x) { return std::to_string(x); }));
  e.emplace_back("transient_periods", fmt(transient_periods));
  e.emplace_back("compare_sites", std::to_string(compare_sites));
  e.emplace_back("reference_hopping", fmt(reference_hopping));
  e.emplace_back("t_snapshot", fmt(t_snapshot));
  e.emplace_back("photon_cutoff", std::to_string(photon_cutoff));
  e.emplace_back("magnus_sizes",
                 join(magnus_sizes, [](long long x) { return std::to_string(x); }));
  e.emplace_back("entropy_points", std::to_string(entropy_points));
  return e;
}

std::string ExperimentConfig::get(const std::string& key) const {
  for (const auto& [k, v] : entries())
    if (k == key) return v;
  throw ValidationError("unknown configuration key '" + key + "'");
}

void ExperimentConfig::validate() const {
  drive.validate();
  grid.validate();
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw ValidationError("tail_fraction must lie in (0, 1]");
  if (workers < 1) throw ValidationError("workers must be >= 1");
  if (initial.kind == InitialKind::plane_wave && initial.k_index != -1 &&
      (initial.k_index < 0 || initial.k_index >= drive.sites))
    throw ValidationError("k_index outside [0, L)");
  if (initial.kind == InitialKind::site &&
      (initial.site_index < 0 || initial.site_index >= drive.sites))
    throw ValidationError("site_index outside [0, L)");
  if (initial.kind == InitialKind::file && initial.amplitude_file.empty())
    throw ValidationError("initial = file needs amplitude_file");
  if (k_points < 1) throw ValidationError("k_points must be >= 1");
  if (experiment == "sweep-omega") {
    if (omega_list.empty()) throw ValidationError("omega_list is empty");
    for (double w : omega_list)
      if (!(w > 0.0)) throw ValidationError("omega_list entries must be positive");
  }
  for (int k : sweep_k_indices)
    if (k < 0 || k >= drive.sites) throw ValidationError("sweep_k_indices outside [0, L)");
  if (!(transient_periods >= 0.0)) throw ValidationError("transient_periods must be >= 0");
  if (compare_sites != 0 && (compare_sites < 4 || compare_sites % 2))
    throw ValidationError("compare_sites must be 0 or an even integer >= 4");
  if (!std::isfinite(reference_hopping)) throw ValidationError("reference_hopping must be finite");
  if (t_snapshot > grid.t_max) throw ValidationError("t_snapshot exceeds t_max");
  if (photon_cutoff < 1) throw ValidationError("photon_cutoff must be >= 1");
  if (experiment == "magnus") {
    if (magnus_sizes.empty()) throw ValidationError("magnus_sizes is empty");
    for (std::size_t i = 0; i < magnus_sizes.size(); ++i) {
      if (magnus_sizes[i] < 1) throw ValidationError("magnus_sizes must be positive");
      if (i && magnus_sizes[i] <= magnus_sizes[i - 1])
        throw ValidationError("magnus_sizes must be strictly increasing");
    }
  }
  if (entropy_points < 2) throw ValidationError("entropy_points must be >= 2");
}

void apply_config_text(ExperimentConfig& base, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string s = trim(line);
    if (s.rfind("# config.", 0) == 0) {
      s = s.substr(9);
    } else {
      const auto hash = s.find('#');
      if (hash != std::string::npos) s = trim(s.substr(0, hash));
      if (s.empty()) continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      // Data rows of a result table carry no '='; anything else is malformed.
      if (text.rfind("# accordion result table", 0) == 0) continue;
      throw ValidationError("line " + std::to_string(number) + ": expected key = value");
    }
    base.set(s.substr(0, eq), s.substr(eq + 1));
  }
}

void apply_config_file(ExperimentConfig& base, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(base, ss.str());
}

std::string format_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [k, v] : config.entries()) out += k + " = " + v + "\n";
  return out;
}

LatticeState make_initial_state(const ExperimentConfig& config) {
  const int L = config.drive.sites;
  switch (config.initial.kind) {
    case InitialKind::plane_wave:
      return plane_wave(L, config.initial.k_index < 0 ? L / 2 : config.initial.k_index);
    case InitialKind::site:
      return site_state(L, config.initial.site_index);
    case InitialKind::file: {
      std::ifstream in(config.initial.amplitude_file);
      if (!in) throw IoError("cannot open amplitude file '" + config.initial.amplitude_file + "'");
      std::vector<Complex> amps;
      std::string line;
      while (std::getline(in, line)) {
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::istringstream ls(s);
        double re = 0, im = 0;
        if (!(ls >> re)) throw ValidationError("malformed amplitude line '" + s + "'");
        ls >> im;
        amps.emplace_back(re, im);
      }
      if (static_cast<int>(amps.size()) != L)
        throw ValidationError("amplitude file has " + std::to_string(amps.size()) +
                              " entries, expected " + std::to_string(L));
      return LatticeState::from_amplitudes(std::move(amps));
    }
  }
  throw ValidationError("unknown initial state kind");
}

}  // namespace accordion
