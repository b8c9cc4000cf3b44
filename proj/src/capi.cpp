#include "accordion/accordion.h"

#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "accordion/bessel.hpp"
#include "accordion/config.hpp"
#include "accordion/entropy.hpp"
#include "accordion/error.hpp"
#include "accordion/experiments.hpp"
#include "accordion/plot.hpp"
#include "accordion/table.hpp"

struct acc_config {
  accordion::ExperimentConfig config;
  std::string scratch;
};

struct acc_result {
  std::vector<accordion::ResultTable> tables;
};

namespace {

thread_local std::string g_last_error;

acc_status fail(acc_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs f, mapping exceptions onto status codes.
template <class F>
acc_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return ACC_OK;
  } catch (const accordion::Error& e) {
    return fail(static_cast<acc_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ACC_ERR_NUMERICAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ACC_ERR_NUMERICAL, e.what());
  } catch (...) {
    return fail(ACC_ERR_NUMERICAL, "unknown failure");
  }
}

bool null_arg(const void* p, const char* what, acc_status* status) {
  if (p) return false;
  *status = fail(ACC_ERR_VALIDATION, std::string(what) + " is null");
  return true;
}

const accordion::ResultTable* table_at(const acc_result* r, size_t table, acc_status* status) {
  if (null_arg(r, "result", status)) return nullptr;
  if (table >= r->tables.size()) {
    *status = fail(ACC_ERR_VALIDATION, "table index out of range");
    return nullptr;
  }
  return &r->tables[table];
}

}  // namespace

extern "C" {

const char* acc_version(void) { return ACCORDION_VERSION; }

const char* acc_last_error(void) { return g_last_error.c_str(); }

size_t acc_experiment_count(void) { return accordion::experiment_names().size(); }

const char* acc_experiment_name(size_t index) {
  const auto& names = accordion::experiment_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

acc_status acc_config_create(const char* experiment, acc_config** out) {
  acc_status s = ACC_OK;
  if (null_arg(experiment, "experiment", &s) || null_arg(out, "output handle", &s)) return s;
  *out = nullptr;
  return guarded([&] {
    auto* c = new acc_config;
    try {
      c->config = accordion::default_config(experiment);
    } catch (...) {
      delete c;
      throw;
    }
    *out = c;
  });
}

void acc_config_destroy(acc_config* config) { delete config; }

acc_status acc_config_load(acc_config* config, const char* path) {
  acc_status s = ACC_OK;
  if (null_arg(config, "config", &s) || null_arg(path, "path", &s)) return s;
  return guarded([&] {
    accordion::ExperimentConfig next = config->config;
    accordion::apply_config_file(next, path);
    config->config = std::move(next);
  });
}

acc_status acc_config_set(acc_config* config, const char* key, const char* value) {
  acc_status s = ACC_OK;
  if (null_arg(config, "config", &s) || null_arg(key, "key", &s) || null_arg(value, "value", &s))
    return s;
  return guarded([&] { config->config.set(key, value); });
}

acc_status acc_config_get(acc_config* config, const char* key, const char** value) {
  acc_status s = ACC_OK;
  if (null_arg(config, "config", &s) || null_arg(key, "key", &s) || null_arg(value, "value", &s))
    return s;
  return guarded([&] {
    config->scratch = config->config.get(key);
    *value = config->scratch.c_str();
  });
}

acc_status acc_config_dump(acc_config* config, const char** text) {
  acc_status s = ACC_OK;
  if (null_arg(config, "config", &s) || null_arg(text, "text", &s)) return s;
  return guarded([&] {
    config->scratch = accordion::format_config(config->config);
    *text = config->scratch.c_str();
  });
}

acc_status acc_config_validate(const acc_config* config) {
  acc_status s = ACC_OK;
  if (null_arg(config, "config", &s)) return s;
  return guarded([&] { config->config.validate(); });
}

acc_status acc_run(const acc_config* config, acc_result** out) {
  acc_status s = ACC_OK;
  if (null_arg(config, "config", &s) || null_arg(out, "output handle", &s)) return s;
  *out = nullptr;
  return guarded([&] {
    auto tables = accordion::run_experiment(config->config);
    *out = new acc_result{std::move(tables)};
  });
}

void acc_result_destroy(acc_result* result) { delete result; }

size_t acc_result_table_count(const acc_result* result) {
  return result ? result->tables.size() : 0;
}

acc_status acc_result_table_shape(const acc_result* result, size_t table, const char** name,
                                  size_t* rows, size_t* columns) {
  acc_status s = ACC_OK;
  const auto* t = table_at(result, table, &s);
  if (!t) return s;
  if (name) *name = t->name.c_str();
  if (rows) *rows = t->rows.size();
  if (columns) *columns = t->columns.size();
  return ACC_OK;
}

acc_status acc_result_column_name(const acc_result* result, size_t table, size_t column,
                                  const char** name) {
  acc_status s = ACC_OK;
  const auto* t = table_at(result, table, &s);
  if (!t) return s;
  if (null_arg(name, "name", &s)) return s;
  if (column >= t->columns.size()) return fail(ACC_ERR_VALIDATION, "column index out of range");
  *name = t->columns[column].c_str();
  return ACC_OK;
}

acc_status acc_result_value(const acc_result* result, size_t table, size_t row, size_t column,
                            double* value) {
  acc_status s = ACC_OK;
  const auto* t = table_at(result, table, &s);
  if (!t) return s;
  if (null_arg(value, "value", &s)) return s;
  if (row >= t->rows.size() || column >= t->columns.size())
    return fail(ACC_ERR_VALIDATION, "cell index out of range");
  *value = t->rows[row][column];
  return ACC_OK;
}

acc_status acc_result_metadata(const acc_result* result, size_t table, const char* key,
                               const char** value) {
  acc_status s = ACC_OK;
  const auto* t = table_at(result, table, &s);
  if (!t) return s;
  if (null_arg(key, "key", &s) || null_arg(value, "value", &s)) return s;
  for (const auto& [k, v] : t->metadata)
    if (k == key) {
      *value = v.c_str();
      return ACC_OK;
    }
  return fail(ACC_ERR_VALIDATION, std::string("no metadata entry '") + key + "'");
}

acc_status acc_result_write(const acc_result* result, const char* directory) {
  acc_status s = ACC_OK;
  if (null_arg(result, "result", &s) || null_arg(directory, "directory", &s)) return s;
  return guarded([&] { accordion::write_tables(result->tables, directory); });
}

acc_status acc_plot_table(const char* table_path, const char* x_column, const char* y_columns,
                          int scatter, const char* title, const char* svg_path) {
  acc_status s = ACC_OK;
  if (null_arg(table_path, "table path", &s) || null_arg(x_column, "x column", &s) ||
      null_arg(y_columns, "y columns", &s) || null_arg(svg_path, "output path", &s))
    return s;
  return guarded([&] {
    const auto table = accordion::read_table(table_path);
    accordion::PlotSpec spec;
    spec.x = x_column;
    std::stringstream ss(y_columns);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) spec.y.push_back(item);
    spec.scatter = scatter != 0;
    spec.title = title ? title : table.name;
    accordion::emit_plot(table, spec, svg_path);
  });
}

acc_status acc_bessel_j(int order, double x, double* value) {
  acc_status s = ACC_OK;
  if (null_arg(value, "value", &s)) return s;
  return guarded([&] { *value = accordion::bessel_j(order, x); });
}

acc_status acc_entropy_from_invariants(double weight_a, double overlap_abs2, double* lambda1,
                                       double* lambda2, double* entropy) {
  return guarded([&] {
    const auto e = accordion::entropy_from_invariants(weight_a, overlap_abs2);
    if (lambda1) *lambda1 = e.lambda1;
    if (lambda2) *lambda2 = e.lambda2;
    if (entropy) *entropy = e.entropy;
  });
}

}  // extern "C"
