// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "accordion/accordion.h"

namespace {

struct ConfigDeleter {
  void operator()(acc_config* c) const { acc_config_destroy(c); }
};
struct ResultDeleter {
  void operator()(acc_result* r) const { acc_result_destroy(r); }
};

struct RunFlags {
  std::string config_file;
  std::string out_dir;
  std::optional<int> workers;
  std::optional<double> dt, t_max, omega, v, h;
  std::optional<int> length, k_index;
  std::optional<long long> seed;
  std::vector<std::string> set;
  bool print_config = false;
};

int report(acc_status s) {
  if (s != ACC_OK) std::fprintf(stderr, "error: %s\n", acc_last_error());
  return static_cast<int>(s);
}

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config_file, "key = value configuration file or result table");
  cmd->add_option("--out", f.out_dir, "output directory (default: output_dir key)");
  cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_option("--dt", f.dt, "integration step");
  cmd->add_option("--t-max", f.t_max, "final time");
  cmd->add_option("--omega", f.omega, "drive frequency");
  cmd->add_option("--v,--amplitude", f.v, "drive amplitude V");
  cmd->add_option("--h,--hopping", f.h, "hopping h");
  cmd->add_option("--length", f.length, "lattice size L");
  cmd->add_option("--k-index", f.k_index, "initial plane-wave index n");
  cmd->add_option("--seed", f.seed, "reserved; the experiments are deterministic");
  cmd->add_option("--set", f.set, "extra key=value override (repeatable)");
  cmd->add_flag("--print-config", f.print_config, "print the resolved configuration and exit");
}

int run(const std::string& experiment, const RunFlags& f) {
  acc_config* raw = nullptr;
  if (acc_status s = acc_config_create(experiment.c_str(), &raw); s != ACC_OK) return report(s);
  std::unique_ptr<acc_config, ConfigDeleter> cfg(raw);

  if (!f.config_file.empty())
    if (acc_status s = acc_config_load(cfg.get(), f.config_file.c_str()); s != ACC_OK)
      return report(s);

  std::vector<std::pair<std::string, std::string>> overrides;
  if (f.workers) overrides.emplace_back("workers", std::to_string(*f.workers));
  if (f.dt) overrides.emplace_back("dt", number(*f.dt));
  if (f.t_max) overrides.emplace_back("t_max", number(*f.t_max));
  if (f.omega) overrides.emplace_back("omega", number(*f.omega));
  if (f.v) overrides.emplace_back("amplitude", number(*f.v));
  if (f.h) overrides.emplace_back("hopping", number(*f.h));
  if (f.length) overrides.emplace_back("sites", std::to_string(*f.length));
  if (f.k_index) overrides.emplace_back("k_index", std::to_string(*f.k_index));
  if (f.seed) overrides.emplace_back("seed", std::to_string(*f.seed));
  if (!f.out_dir.empty()) overrides.emplace_back("output_dir", f.out_dir);
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      return ACC_ERR_VALIDATION;
    }
    overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [k, v] : overrides)
    if (acc_status s = acc_config_set(cfg.get(), k.c_str(), v.c_str()); s != ACC_OK)
      return report(s);

  if (acc_status s = acc_config_validate(cfg.get()); s != ACC_OK) return report(s);
  if (f.print_config) {
    const char* text = nullptr;
    if (acc_status s = acc_config_dump(cfg.get(), &text); s != ACC_OK) return report(s);
    std::fputs(text, stdout);
    return 0;
  }

  acc_result* res_raw = nullptr;
  if (acc_status s = acc_run(cfg.get(), &res_raw); s != ACC_OK) return report(s);
  std::unique_ptr<acc_result, ResultDeleter> result(res_raw);

  const char* dir = nullptr;
  if (acc_status s = acc_config_get(cfg.get(), "output_dir", &dir); s != ACC_OK) return report(s);
  const std::string out_dir = dir;
  if (acc_status s = acc_result_write(result.get(), out_dir.c_str()); s != ACC_OK)
    return report(s);

  // Summary: table paths, then the derived metadata (config echo skipped).
  const size_t n = acc_result_table_count(result.get());
  for (size_t t = 0; t < n; ++t) {
    const char* name = nullptr;
    size_t rows = 0, cols = 0;
    acc_result_table_shape(result.get(), t, &name, &rows, &cols);
    std::printf("%s/%s.tsv  (%zu rows x %zu columns)\n", out_dir.c_str(), name, rows, cols);
  }
  static const char* const kKeys[] = {
      "tail_S_mean", "tail_S_std", "tail_T_mean", "max_norm_error", "max_S_mean",
      "correlation", "separation", "flip_count", "max_flip_offset", "gibbs_mean", "v_tilde",
      "v_tilde_error", "closeness_ratio", "reference_plateau_magnitude", "coherence", "S",
      "top_two_subsystem_weight", "unitarity_error", "order1_witness", "log_slope", "r_squared",
      "nonincreasing", "wall_time_s"};
  for (size_t t = 0; t < n; ++t)
    for (const char* key : kKeys) {
      const char* value = nullptr;
      if (acc_result_metadata(result.get(), t, key, &value) == ACC_OK)
        std::printf("  %s = %s\n", key, value);
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accordion-driven lattice simulator"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(acc_version()));

  std::vector<std::string> experiments;
  for (size_t i = 0; i < acc_experiment_count(); ++i) experiments.emplace_back(acc_experiment_name(i));

  std::vector<RunFlags> flags(experiments.size());
  std::vector<CLI::App*> cmds;
  for (size_t i = 0; i < experiments.size(); ++i) {
    auto* cmd = app.add_subcommand(experiments[i], "run the " + experiments[i] + " experiment");
    add_run_flags(cmd, flags[i]);
    cmds.push_back(cmd);
  }

  std::string table_path, x_column, y_columns, title, svg_path;
  bool scatter = false;
  auto* plot = app.add_subcommand("plot", "SVG plot of a result table");
  plot->add_option("table", table_path, "result table (.tsv)")->required();
  plot->add_option("--x", x_column, "x column")->required();
  plot->add_option("--y", y_columns, "comma-separated y columns")->required();
  plot->add_option("-o,--output", svg_path, "SVG output path")->required();
  plot->add_option("--title", title, "plot title");
  plot->add_flag("--scatter", scatter, "draw points instead of lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ACC_ERR_VALIDATION;
  }

  if (plot->parsed())
    return report(acc_plot_table(table_path.c_str(), x_column.c_str(), y_columns.c_str(),
                                 scatter ? 1 : 0, title.empty() ? nullptr : title.c_str(),
                                 svg_path.c_str()));
  for (size_t i = 0; i < cmds.size(); ++i)
    if (cmds[i]->parsed()) return run(experiments[i], flags[i]);
  return ACC_ERR_VALIDATION;
}
