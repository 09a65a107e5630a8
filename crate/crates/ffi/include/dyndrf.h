#ifndef DYNDRF_H
#define DYNDRF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. The first five match the exit codes of the `dyndrf` CLI.
typedef enum DrfStatus {
  DRF_STATUS_OK = 0,
  DRF_STATUS_PARSE_ERROR = 1,
  DRF_STATUS_VALIDATION_ERROR = 2,
  DRF_STATUS_PROPERTY_VIOLATION = 3,
  DRF_STATUS_INTERNAL_ERROR = 4,
  DRF_STATUS_NULL_POINTER = 5,
  DRF_STATUS_INVALID_ARGUMENT = 6,
  DRF_STATUS_PANIC = 7,
} DrfStatus;

typedef enum DrfAlgorithm {
  DRF_ALGORITHM_BISECT = 0,
  DRF_ALGORITHM_NAIVE = 1,
  DRF_ALGORITHM_LP = 2,
} DrfAlgorithm;

typedef enum DrfObjective {
  DRF_OBJECTIVE_MAXSUM = 0,
  DRF_OBJECTIVE_MAXMIN = 1,
  DRF_OBJECTIVE_BOTH = 2,
} DrfObjective;

// Opaque validated instance.
typedef struct DrfInstance DrfInstance;

// Opaque completed run: the instance and every step solution.
typedef struct DrfRun DrfRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds an instance from an `n x m` row-major matrix of fractions
// `num[i] / den[i]`. Rows whose largest entry is not 1 are normalized.
//
// # Safety
// `num` and `den` must each point to `n * m` readable values.
enum DrfStatus drf_instance_new(size_t n,
                                size_t m,
                                const int64_t *num,
                                const int64_t *den,
                                struct DrfInstance **out);

// Parses an instance in the text format read by `dyndrf allocate --in`.
//
// # Safety
// `text` must be a nul-terminated string.
enum DrfStatus drf_instance_parse(const char *text, struct DrfInstance **out);

// Renders an instance in the text format.
//
// # Safety
// `instance` must come from this library; `out` must be writable.
enum DrfStatus drf_instance_to_text(const struct DrfInstance *instance, char **out);

// # Safety
// `out` must be writable.
enum DrfStatus drf_gen_theorem1(size_t m,
                                size_t n,
                                int64_t eps_num,
                                int64_t eps_den,
                                struct DrfInstance **out);

// # Safety
// `out` must be writable.
enum DrfStatus drf_gen_theorem2(size_t m,
                                int64_t eps_num,
                                int64_t eps_den,
                                struct DrfInstance **out);

// # Safety
// `out` must be writable.
enum DrfStatus drf_gen_random(size_t n,
                              size_t m,
                              uint64_t seed,
                              uint32_t denom_bound,
                              struct DrfInstance **out);

// Agent count, or 0 for a null handle.
//
// # Safety
// `instance` must be null or come from this library.
size_t drf_instance_n(const struct DrfInstance *instance);

// Resource count, or 0 for a null handle.
//
// # Safety
// `instance` must be null or come from this library.
size_t drf_instance_m(const struct DrfInstance *instance);

// # Safety
// `instance` must be null or come from this library, and not be used again.
void drf_instance_free(struct DrfInstance *instance);

// Runs every step with the chosen routine. Each step is checked against
// the allocation properties; a failure yields `DRF_STATUS_PROPERTY_VIOLATION`.
//
// # Safety
// `instance` must come from this library; `out` must be writable.
enum DrfStatus drf_run_new(const struct DrfInstance *instance,
                           enum DrfAlgorithm algorithm,
                           struct DrfRun **out);

// # Safety
// `run` must be null or come from this library, and not be used again.
void drf_run_free(struct DrfRun *run);

// Exact share of `agent` after step `k`, as `p/q`.
//
// # Safety
// `run` must come from this library; `out` must be writable.
enum DrfStatus drf_run_share(const struct DrfRun *run, size_t k, size_t agent, char **out);

// Nearest double to the share of `agent` after step `k`.
//
// # Safety
// `run` must come from this library; `out` must be writable.
enum DrfStatus drf_run_share_f64(const struct DrfRun *run, size_t k, size_t agent, double *out);

// Exact water level of step `k`, as `p/q`.
//
// # Safety
// `run` must come from this library; `out` must be writable.
enum DrfStatus drf_run_water_level(const struct DrfRun *run, size_t k, char **out);

// One-based index of the first agent raised to the water level at step `k`.
//
// # Safety
// `run` must come from this library; `out` must be writable.
enum DrfStatus drf_run_split(const struct DrfRun *run, size_t k, size_t *out);

// The run as the JSON document written by `dyndrf allocate`.
//
// # Safety
// `run` must come from this library; `out` must be writable.
enum DrfStatus drf_run_report_json(const struct DrfRun *run, char **out);

// Per-step competitive ratios as the JSON document written by `dyndrf ratio`.
//
// # Safety
// `instance` must come from this library; `out` must be writable.
enum DrfStatus drf_ratio_report_json(const struct DrfInstance *instance,
                                     enum DrfObjective objective,
                                     char **out);

// Runs the full property battery on the instance.
//
// # Safety
// `instance` must come from this library.
enum DrfStatus drf_verify(const struct DrfInstance *instance);

// # Safety
// `s` must be null or a string returned by this library, not freed before.
void drf_string_free(char *s);

// Message for the last call on this thread; empty after a success. The
// pointer stays valid until the next call into this library on the same
// thread.
const char *drf_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYNDRF_H */
