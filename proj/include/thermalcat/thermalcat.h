/*
 * thermalcat C API.
 *
 * Every function returns a tc_status. On failure a human readable message is
 * available from tc_last_error() on the calling thread until the next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with tc_string_free().
 */
#ifndef THERMALCAT_H
#define THERMALCAT_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(THERMALCAT_BUILDING_LIBRARY)
#    define TC_API __declspec(dllexport)
#  else
#    define TC_API __declspec(dllimport)
#  endif
#else
#  define TC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tc_status {
  TC_OK = 0,
  TC_ERR_INVALID_ARGUMENT = 1,
  TC_ERR_PARSE = 2,
  TC_ERR_DOMAIN = 3,
  TC_ERR_DEGENERATE = 4,
  TC_ERR_UNDEFINED_VISIBILITY = 5,
  TC_ERR_GRID_TOO_SMALL = 6,
  TC_ERR_NUMERICAL = 7,
  TC_ERR_UNITS = 8,
  TC_ERR_CONTRACT = 9,
  TC_ERR_INTERNAL = 99
} tc_status;

typedef enum tc_tier { TC_TIER_FAST = 0, TC_TIER_ACCURATE = 1 } tc_tier;

/* Opaque scenario handle. */
typedef struct tc_scenario tc_scenario;

TC_API const char* tc_version(void);
TC_API const char* tc_last_error(void);
TC_API const char* tc_status_name(tc_status status);
TC_API void tc_string_free(char* s);

/* Scenario construction from scenario JSON text or a figure preset name. */
TC_API tc_status tc_scenario_parse(const char* json_text, tc_scenario** out);
TC_API tc_status tc_scenario_preset(const char* name, tc_scenario** out);
TC_API void tc_scenario_free(tc_scenario* scenario);

/* Newline separated preset names. */
TC_API tc_status tc_preset_names(char** out);

/* Canonical scenario JSON (parse of it yields the same scenario). */
TC_API tc_status tc_scenario_to_json(const tc_scenario* scenario, char** out);

/* Derived scales, thermal weights, tail mass and provenance flags as JSON. */
TC_API tc_status tc_scenario_metadata_json(const tc_scenario* scenario, char** out);

/* Grid sizes; fails when the scenario has no grids. */
TC_API tc_status tc_scenario_grid_shape(const tc_scenario* scenario, size_t* nx, size_t* nt);

/* Temperatures (units of the Einstein temperature) for visibility sweeps:
 * theta_list_in_ThetaE when present, otherwise theta_in_ThetaE. Writes up to
 * capacity values and always reports the full count. */
TC_API tc_status tc_scenario_thetas(const tc_scenario* scenario, double* out, size_t capacity,
                                    size_t* count);

/* Probability density on the scenario grid. x has nx entries, t has nt
 * entries, density has nt*nx entries in row-major order (t outer, x inner). */
TC_API tc_status tc_density_map(const tc_scenario* scenario, unsigned threads, double* x,
                                double* t, double* density, size_t nx, size_t nt);

/* Visibility and benchmark on thetas (units of the Einstein temperature) x
 * t-grid. v and a have ntheta*nt entries (theta outer). Undefined visibility
 * is written as NaN and counted in *undefined; a free release (no weak trap)
 * writes NaN for the benchmark. */
TC_API tc_status tc_visibility_map(const tc_scenario* scenario, const double* thetas,
                                   size_t ntheta, unsigned threads, double* t, double* v,
                                   double* a, size_t nt, size_t* undefined);

/* Single visibility value at time t for the scenario temperature. */
TC_API tc_status tc_visibility_at(const tc_scenario* scenario, double t, double* out);

TC_API tc_status tc_benchmark_A(double theta, double theta_e, double omega, double t,
                                double* out);
TC_API tc_status tc_heat_capacity_ratio(double theta_e_over_theta, double* out);

/* SI-only parameter summary, JSON. */
TC_API tc_status tc_params_report(const tc_scenario* scenario, double target_width, char** out);

/* Closed form versus split-operator grid. max_level < 0 means the cutoff.
 * *passed is 1 when every level is within 1e-6. */
TC_API tc_status tc_validate(const tc_scenario* scenario, tc_tier tier, unsigned threads,
                             int max_level, char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* THERMALCAT_H */
