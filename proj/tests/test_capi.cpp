// Links against the shared library only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "accordion/accordion.h"

namespace fs = std::filesystem;

TEST_CASE("version and experiment names") {
  CHECK(std::strlen(acc_version()) > 0);
  CHECK(acc_experiment_count() == 9);
  CHECK(std::string(acc_experiment_name(0)) == "evolve");
  CHECK(acc_experiment_name(99) == nullptr);
}

TEST_CASE("configuration handles") {
  acc_config* c = nullptr;
  CHECK(acc_config_create("no-such", &c) == ACC_ERR_VALIDATION);
  CHECK(c == nullptr);
  CHECK(std::string(acc_last_error()).find("no-such") != std::string::npos);
  REQUIRE(acc_config_create("evolve", &c) == ACC_OK);
  CHECK(acc_config_set(c, "sites", "16") == ACC_OK);
  CHECK(acc_config_set(c, "bogus", "1") == ACC_ERR_VALIDATION);
  const char* v = nullptr;
  REQUIRE(acc_config_get(c, "sites", &v) == ACC_OK);
  CHECK(std::string(v) == "16");
  CHECK(acc_config_set(c, "sites", "5") == ACC_OK);
  CHECK(acc_config_validate(c) == ACC_ERR_VALIDATION);
  CHECK(acc_config_load(c, "/nonexistent.cfg") == ACC_ERR_IO);
  const char* text = nullptr;
  REQUIRE(acc_config_dump(c, &text) == ACC_OK);
  CHECK(std::string(text).find("sites = 5") != std::string::npos);
  CHECK(acc_config_set(nullptr, "sites", "4") == ACC_ERR_VALIDATION);
  acc_config_destroy(c);
  acc_config_destroy(nullptr);
}

TEST_CASE("run, inspect, write and plot") {
  acc_config* c = nullptr;
  REQUIRE(acc_config_create("evolve", &c) == ACC_OK);
  acc_config_set(c, "sites", "20");
  acc_config_set(c, "t_max", "0.5");
  acc_config_set(c, "output_stride", "50");
  acc_result* r = nullptr;
  REQUIRE(acc_run(c, &r) == ACC_OK);
  REQUIRE(acc_result_table_count(r) == 1);
  const char* name = nullptr;
  size_t rows = 0, cols = 0;
  REQUIRE(acc_result_table_shape(r, 0, &name, &rows, &cols) == ACC_OK);
  CHECK(std::string(name) == "evolve");
  CHECK(rows == 11);
  CHECK(cols == 7);
  const char* col = nullptr;
  REQUIRE(acc_result_column_name(r, 0, 1, &col) == ACC_OK);
  CHECK(std::string(col) == "re_T");
  double x = 0;
  REQUIRE(acc_result_value(r, 0, 0, 1, &x) == ACC_OK);
  CHECK(std::abs(x + 1.0) < 1e-14);
  CHECK(acc_result_value(r, 0, rows, 0, &x) == ACC_ERR_VALIDATION);
  CHECK(acc_result_table_shape(r, 3, &name, &rows, &cols) == ACC_ERR_VALIDATION);
  const char* meta = nullptr;
  CHECK(acc_result_metadata(r, 0, "config.sites", &meta) == ACC_OK);
  CHECK(std::string(meta) == "20");
  CHECK(acc_result_metadata(r, 0, "absent", &meta) == ACC_ERR_VALIDATION);

  const auto dir = fs::temp_directory_path() / "accordion_capi";
  fs::remove_all(dir);
  REQUIRE(acc_result_write(r, dir.string().c_str()) == ACC_OK);
  const auto table = (dir / "evolve.tsv").string();
  CHECK(fs::exists(table));
  const auto svg = (dir / "p.svg").string();
  CHECK(acc_plot_table(table.c_str(), "t", "S,p_A", 0, nullptr, svg.c_str()) == ACC_OK);
  CHECK(fs::file_size(svg) > 200);
  CHECK(acc_plot_table(table.c_str(), "t", "zz", 0, nullptr, svg.c_str()) == ACC_ERR_VALIDATION);
  CHECK(acc_plot_table((dir / "none.tsv").string().c_str(), "t", "S", 0, nullptr, svg.c_str()) ==
        ACC_ERR_IO);

  // a result table works as a configuration file
  acc_config* again = nullptr;
  REQUIRE(acc_config_create("evolve", &again) == ACC_OK);
  REQUIRE(acc_config_load(again, table.c_str()) == ACC_OK);
  const char* sites = nullptr;
  acc_config_get(again, "sites", &sites);
  CHECK(std::string(sites) == "20");
  acc_config_destroy(again);

  acc_result_destroy(r);
  acc_config_destroy(c);
}

TEST_CASE("numerical failures map to status 2") {
  acc_config* c = nullptr;
  REQUIRE(acc_config_create("square-wave", &c) == ACC_OK);
  acc_config_set(c, "omega", "3");
  acc_result* r = nullptr;
  CHECK(acc_run(c, &r) == ACC_ERR_VALIDATION);
  CHECK(r == nullptr);
  acc_config_destroy(c);
}

TEST_CASE("single evaluations") {
  double j = 0;
  REQUIRE(acc_bessel_j(0, 0.0, &j) == ACC_OK);
  CHECK(j == 1.0);
  CHECK(acc_bessel_j(600, 1.0, &j) == ACC_ERR_VALIDATION);
  double l1 = 0, l2 = 0, s = 0;
  REQUIRE(acc_entropy_from_invariants(0.5, 0.0, &l1, &l2, &s) == ACC_OK);
  CHECK(std::abs(s - std::log(2.0)) < 1e-14);
  CHECK(acc_entropy_from_invariants(0.5, 0.3, &l1, &l2, &s) == ACC_ERR_VALIDATION);
}
