/* C interface to the driven-lattice simulator.
 *
 * Handles are opaque. Every function returning acc_status leaves a message
 * for the calling thread in acc_last_error() when it fails. Strings returned
 * through `const char**` stay valid until the owning handle is destroyed.
 */
#ifndef ACCORDION_H
#define ACCORDION_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ACC_API __declspec(dllexport)
#else
#define ACC_API __attribute__((visibility("default")))
#endif

/* Matches the CLI exit codes. */
typedef enum acc_status {
  ACC_OK = 0,
  ACC_ERR_VALIDATION = 1,
  ACC_ERR_NUMERICAL = 2,
  ACC_ERR_IO = 3
} acc_status;

typedef struct acc_config acc_config;
typedef struct acc_result acc_result;

ACC_API const char* acc_version(void);
ACC_API const char* acc_last_error(void);

/* Experiment names, index 0..acc_experiment_count()-1. */
ACC_API size_t acc_experiment_count(void);
ACC_API const char* acc_experiment_name(size_t index);

/* Configuration with the defaults of `experiment`. */
ACC_API acc_status acc_config_create(const char* experiment, acc_config** out);
ACC_API void acc_config_destroy(acc_config* config);
/* key = value file, or a result table whose "# config." lines are read. */
ACC_API acc_status acc_config_load(acc_config* config, const char* path);
ACC_API acc_status acc_config_set(acc_config* config, const char* key, const char* value);
/* Value of `key`; the string lives until the next call on this handle. */
ACC_API acc_status acc_config_get(acc_config* config, const char* key, const char** value);
/* Full `key = value` listing. */
ACC_API acc_status acc_config_dump(acc_config* config, const char** text);
ACC_API acc_status acc_config_validate(const acc_config* config);

ACC_API acc_status acc_run(const acc_config* config, acc_result** out);
ACC_API void acc_result_destroy(acc_result* result);
ACC_API size_t acc_result_table_count(const acc_result* result);
ACC_API acc_status acc_result_table_shape(const acc_result* result, size_t table,
                                          const char** name, size_t* rows, size_t* columns);
ACC_API acc_status acc_result_column_name(const acc_result* result, size_t table,
                                          size_t column, const char** name);
ACC_API acc_status acc_result_value(const acc_result* result, size_t table, size_t row,
                                    size_t column, double* value);
/* Metadata lookup; ACC_ERR_VALIDATION when the key is absent. */
ACC_API acc_status acc_result_metadata(const acc_result* result, size_t table, const char* key,
                                       const char** value);
/* Writes <directory>/<table name>.tsv for every table. */
ACC_API acc_status acc_result_write(const acc_result* result, const char* directory);

/* SVG of columns of a serialized table. `y_columns` is comma separated. */
ACC_API acc_status acc_plot_table(const char* table_path, const char* x_column,
                                  const char* y_columns, int scatter, const char* title,
                                  const char* svg_path);

/* Single evaluations. */
ACC_API acc_status acc_bessel_j(int order, double x, double* value);
ACC_API acc_status acc_entropy_from_invariants(double weight_a, double overlap_abs2,
                                               double* lambda1, double* lambda2,
                                               double* entropy);

#ifdef __cplusplus
}
#endif

#endif /* ACCORDION_H */
