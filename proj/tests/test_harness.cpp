#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "accordion/config.hpp"
#include "accordion/error.hpp"
#include "accordion/experiments.hpp"
#include "accordion/parallel.hpp"
#include "accordion/plot.hpp"
#include "accordion/table.hpp"

using namespace accordion;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("accordion_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig quick(const std::string& experiment) {
  auto c = default_config(experiment);
  c.drive.sites = 24;
  c.grid.t_max = 1.0;
  c.grid.output_stride = 50;
  return c;
}

bool same_rows(const ResultTable& a, const ResultTable& b) {
  if (a.columns != b.columns || a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (std::size_t j = 0; j < a.columns.size(); ++j) {
      const double x = a.rows[i][j], y = b.rows[i][j];
      if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
  return true;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("every experiment has valid defaults") {
  REQUIRE(experiment_names().size() == 9);
  for (const auto& e : experiment_names()) {
    const auto c = default_config(e);
    CHECK(c.experiment == e);
    CHECK_NOTHROW(c.validate());
  }
  CHECK_THROWS_AS(default_config("heat"), ValidationError);
  const auto sq = default_config("square-wave");
  CHECK(sq.drive.sites == 800);
  CHECK(sq.drive.amplitude == 5.0);
  CHECK(sq.drive.omega == 4.0);
  const auto res = default_config("resonance");
  CHECK(res.drive.hopping == -2.0);
  const auto ev = default_config("evolve");
  CHECK(ev.drive.sites == 200);
  CHECK(ev.tail_fraction == 0.2);
}

TEST_CASE("config text: keys, comments, errors") {
  auto c = default_config("evolve");
  apply_config_text(c, "# a comment\nsites = 40\n  omega=2.5   # trailing\n\nintegrator = crank_nicolson\n");
  CHECK(c.drive.sites == 40);
  CHECK(c.drive.omega == 2.5);
  CHECK(c.integrator == Integrator::crank_nicolson);
  CHECK_THROWS_AS(apply_config_text(c, "bogus = 1\n"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(c, "sites 40\n"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(c, "sites = forty\n"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(c, "dt = 1e-3x\n"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(c, "experiment = magnus\n"), ValidationError);
  CHECK_NOTHROW(apply_config_text(c, "experiment = evolve\n"));
  CHECK_THROWS_AS(c.set("profile", "zigzag"), ValidationError);
  c.set("omega_list", "1, 2,3.5");
  CHECK(c.omega_list == std::vector<double>{1, 2, 3.5});
  c.set("sites", "7");
  CHECK_THROWS_AS(c.validate(), ValidationError);
  ExperimentConfig d = default_config("evolve");
  CHECK_THROWS_AS(apply_config_file(d, "/nonexistent/accordion.cfg"), IoError);
}

TEST_CASE("config dump round trips through the parser") {
  auto c = default_config("sweep-omega");
  c.drive.amplitude = 3.3;
  c.grid.dt = 1.0 / 3.0;
  c.sweep_k_indices = {4, 9};
  c.omega_list = {0.1, 7.25};
  auto d = default_config("sweep-omega");
  apply_config_text(d, format_config(c));
  CHECK(d.entries() == c.entries());
  for (const auto& key : config_keys()) CHECK(c.get(key) == d.get(key));
  CHECK_THROWS_AS(c.get("nope"), ValidationError);
}

TEST_CASE("initial states") {
  auto c = default_config("evolve");
  c.drive.sites = 12;
  auto s = make_initial_state(c);
  CHECK(std::abs(translation_expectation(s) + 1.0) < 1e-14);   // default L/2, k = pi
  c.initial.kind = InitialKind::site;
  c.initial.site_index = 3;
  CHECK(make_initial_state(c)[3] == Complex(1, 0));
  const auto dir = scratch_dir("amps");
  {
    std::ofstream f(dir / "a.txt");
    f << "# re im\n";
    for (int i = 0; i < 12; ++i) f << (i == 2 ? 3.0 : 0.0) << " " << (i == 2 ? 4.0 : 0.0) << "\n";
  }
  c.set("initial", "file");
  c.set("amplitude_file", (dir / "a.txt").string());
  s = make_initial_state(c);
  CHECK(std::abs(s[2] - Complex(0.6, 0.8)) < 1e-15);
  c.drive.sites = 14;
  CHECK_THROWS_AS(make_initial_state(c), ValidationError);
  c.set("amplitude_file", (dir / "missing.txt").string());
  CHECK_THROWS_AS(make_initial_state(c), IoError);
}

TEST_CASE("table serialisation is lossless") {
  ResultTable t;
  t.name = "demo";
  t.columns = {"x", "y"};
  t.add_row({0.1, 1.0 / 3.0});
  t.add_row({-2.5e-300, std::nextafter(1.0, 2.0)});
  t.add_row({NAN, INFINITY});
  t.set_meta("note", "plain text");
  t.set_meta("value", std::numbers::pi);
  const auto back = parse_table(serialize_table(t));
  CHECK(back.name == "demo");
  CHECK(back.columns == t.columns);
  CHECK(same_rows(back, t));
  CHECK(back.meta("note") == std::optional<std::string>("plain text"));
  CHECK(back.meta_number("value") == std::numbers::pi);
  CHECK_THROWS_AS(back.meta_number("absent"), ValidationError);
  CHECK_THROWS_AS(back.column_index("z"), ValidationError);
  CHECK_THROWS_AS(t.add_row({1.0}), ValidationError);
  CHECK_THROWS_AS(parse_table("x\ty\n1\n"), ValidationError);
  const auto dir = scratch_dir("table");
  write_table(t, (dir / "demo.tsv").string());
  CHECK(same_rows(read_table((dir / "demo.tsv").string()), t));
  CHECK_THROWS_AS(read_table((dir / "none.tsv").string()), IoError);
}

TEST_CASE("tail statistics and helpers") {
  std::vector<double> t, v;
  for (int i = 0; i <= 100; ++i) t.push_back(i), v.push_back(i < 80 ? 0.0 : 1.0 + (i % 2));
  const auto s = tail_stats(t, v, 0.2);
  CHECK(s.samples == 21);
  double mean = 0;
  for (int i = 80; i <= 100; ++i) mean += v[i];
  mean /= 21;
  CHECK(s.mean == doctest::Approx(mean));
  CHECK(s.stddev > 0.4);
  CHECK_THROWS_AS(tail_stats(t, {1.0}, 0.2), ValidationError);

  const auto g = k0_grid(200, 32);
  REQUIRE(g.size() == 32);
  CHECK(g.front() == 0);
  for (std::size_t j = 1; j < g.size(); ++j) CHECK(g[j] == 200 - g[32 - j]);
  CHECK(std::find(g.begin(), g.end(), 50) != g.end());
  CHECK(std::find(g.begin(), g.end(), 100) != g.end());

  CHECK(scatter_coherence(randomness_scatter(plane_wave(16, 3))) == doctest::Approx(1.0));
  CHECK(scatter_coherence({Complex(1, 0), Complex(-1, 0)}) == doctest::Approx(0.0));
}

TEST_CASE("parallel map keeps index order") {
  const auto r = parallel_map(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < 50; ++i) CHECK(r[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_map(10, 3, [](std::size_t i) -> int {
                    if (i == 7) throw ValidationError("boom");
                    return 0;
                  }),
                  ValidationError);
}

TEST_CASE("evolve table layout, metadata and free-run entropy") {
  auto c = quick("evolve");
  c.drive.amplitude = 0.0;
  const auto tables = run_experiment(c);
  REQUIRE(tables.size() == 1);
  const auto& t = tables[0];
  CHECK(t.columns == std::vector<std::string>{"t", "re_T", "im_T", "S", "p_A", "c_abs", "norm_error"});
  CHECK(t.rows.size() == 21);
  CHECK(t.meta("version").has_value());
  CHECK(t.meta("config.sites") == std::optional<std::string>("24"));
  CHECK(t.metadata.back().first == "wall_time_s");
  const auto S = t.column("S");
  for (double s : S) CHECK(std::abs(s - S[0]) < 1e-8);
  const auto tt = t.column("t");
  for (std::size_t i = 1; i < tt.size(); ++i) CHECK(tt[i] > tt[i - 1]);
}

TEST_CASE("re-running from the echoed config reproduces the table") {
  auto c = quick("evolve");
  c.drive.omega = 3.0;
  const auto first = run_experiment(c);
  auto again = default_config("evolve");
  apply_config_text(again, serialize_table(first[0]));
  CHECK(again.entries() == c.entries());
  CHECK(same_rows(run_experiment(again)[0], first[0]));
}

TEST_CASE("sweeps are independent of the worker count") {
  auto c = quick("sweep-k0");
  c.k_points = 6;
  c.workers = 1;
  const auto one = sweep_k0(c);
  c.workers = 3;
  const auto three = sweep_k0(c);
  CHECK(same_rows(one[0], three[0]));
  CHECK(one[0].columns == std::vector<std::string>{"k0", "k_index", "S_mean", "S_std"});
  const auto k = one[0].column("k0");
  for (std::size_t i = 1; i < k.size(); ++i) CHECK(k[i] > k[i - 1]);

  auto w = quick("sweep-omega");
  w.omega_list = {2, 5};
  w.workers = 1;
  const auto a = sweep_omega(w);
  w.workers = 2;
  CHECK(same_rows(a[0], sweep_omega(w)[0]));
  CHECK(a[0].rows.size() == 4);
}

TEST_CASE("snapshot at t = 0 of a plane wave is flat") {
  auto c = quick("snapshot");
  c.t_snapshot = 0.0;
  const auto t = snapshot_experiment(c)[0];
  CHECK(t.rows.size() == 24);
  for (double p : t.column("prob")) CHECK(p == doctest::Approx(1.0 / 24).epsilon(1e-13));
  CHECK(t.meta_number("coherence") == doctest::Approx(1.0));
  const auto m = t.column("re_M");
  CHECK(std::isnan(m.back()));
  CHECK_FALSE(std::isnan(m.front()));
}

TEST_CASE("square-wave and resonance drivers check their conditions") {
  auto c = quick("square-wave");
  c.drive.omega = 3.0;
  CHECK_THROWS_AS(square_wave_experiment(c), ValidationError);
  auto r = quick("resonance");
  r.drive.hopping = -1.0;
  CHECK_THROWS_AS(resonance_experiment(r), ValidationError);
}

TEST_CASE("small floquet-spectrum run") {
  auto c = quick("floquet-spectrum");
  c.drive.sites = 16;
  const auto t = floquet_spectrum_experiment(c)[0];
  CHECK(t.rows.size() == 16);
  CHECK(t.meta_number("unitarity_error") < 1e-8);
  for (double e : t.column("modulus_error")) CHECK(e < 1e-8);
  double w = 0;
  for (double x : t.column("weight_k0")) w += x;
  CHECK(w == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("magnus and entropy-scan drivers") {
  auto c = default_config("magnus");
  c.drive.sites = 50;
  c.magnus_sizes = {10, 100, 1000};
  const auto m = run_experiment(c);
  REQUIRE(m.size() == 2);
  CHECK(m[0].meta_number("order1_witness") == 0.0);
  CHECK(m[1].meta_number("strictly_increasing") == 1.0);
  for (double f : m[0].column("F")) CHECK(f >= 0);

  const auto e = run_experiment(default_config("entropy-scan"))[0];
  CHECK(e.rows.size() == 20);
  CHECK(e.meta_number("nonincreasing") == 1.0);
  CHECK(e.rows[0][1] == doctest::Approx(std::numbers::ln2));
}

TEST_CASE("write_tables creates the directory") {
  const auto dir = scratch_dir("write") / "nested";
  const auto paths = write_tables(run_experiment(default_config("entropy-scan")), dir.string());
  REQUIRE(paths.size() == 1);
  CHECK(fs::exists(paths[0]));
}

TEST_CASE("plots are deterministic and validate their columns") {
  auto t = run_experiment(default_config("entropy-scan"))[0];
  PlotSpec spec;
  spec.x = "c2";
  spec.y = {"max_S", "S_half"};
  const auto dir = scratch_dir("plot");
  emit_plot(t, spec, (dir / "a.svg").string());
  emit_plot(t, spec, (dir / "b.svg").string());
  CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));
  CHECK(slurp(dir / "a.svg").find("<polyline") != std::string::npos);
  spec.scatter = true;
  CHECK(render_svg(t, spec).find("<circle") != std::string::npos);

  ResultTable empty;
  empty.name = "empty";
  empty.columns = {"c2", "max_S"};
  spec.y = {"max_S"};
  const auto svg = render_svg(empty, spec);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<circle") == std::string::npos);

  spec.y = {"missing"};
  CHECK_THROWS_AS(render_svg(t, spec), ValidationError);
  spec.y = {"max_S"};
  CHECK_THROWS_AS(emit_plot(t, spec, "/nonexistent/dir/x.svg"), IoError);
}

}  // TEST_SUITE
