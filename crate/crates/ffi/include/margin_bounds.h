#ifndef MARGIN_BOUNDS_H
#define MARGIN_BOUNDS_H

/* Generated by cbindgen from the margin-bounds-ffi sources. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MbStatus {
  MB_STATUS_OK = 0,
  MB_STATUS_NULL_POINTER = 1,
  MB_STATUS_INVALID_ARGUMENT = 2,
  MB_STATUS_INVALID_CLASS = 3,
  MB_STATUS_CAP_EXCEEDED = 4,
  MB_STATUS_PRECONDITION = 5,
  MB_STATUS_REGIME = 6,
  MB_STATUS_IO = 7,
  MB_STATUS_FORMAT = 8,
  MB_STATUS_PANIC = 9,
} MbStatus;

// An immutable tabulated function class.
typedef struct MbClass MbClass;

// Inputs of [`mb_rademacher_bound`].
typedef struct MbBoundParams {
  uint64_t c_categories;
  double sample_size;
  double gamma;
  double delta;
  double m_g;
  double k_g;
  double d_g;
} MbBoundParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len - 1` bytes) and returns the full message length.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t mb_last_error_message(char *buf, size_t len);

// Static NUL-terminated version string.
const char *mb_version(void);

// Builds a class from `n_functions * n_points` row-major values.
//
// # Safety
// `values` must point to `n_functions * n_points` readable doubles and
// `out` to a writable handle slot.
enum MbStatus mb_class_new(const double *values,
                           size_t n_functions,
                           size_t n_points,
                           double m_bound,
                           struct MbClass **out);

// Loads a class file; product classes are converted to their margin class.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a writable handle slot.
enum MbStatus mb_class_from_file(const char *path, struct MbClass **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `class` must come from this library and not be used afterwards.
void mb_class_free(struct MbClass *class_);

// Number of distinct functions and of points.
//
// # Safety
// `class` must be a live handle; the outputs writable.
enum MbStatus mb_class_shape(const struct MbClass *class_, size_t *n_functions, size_t *n_points);

// Clips every entry into `[0, gamma]` as a new handle.
//
// # Safety
// `class` must be a live handle and `out` a writable handle slot.
enum MbStatus mb_class_truncate(const struct MbClass *class_, double gamma, struct MbClass **out);

// `N(epsilon, F, d_p)`; `p` may be `INFINITY`. With `exact` false a greedy
// upper bound is returned.
//
// # Safety
// `class` must be a live handle and `out` writable.
enum MbStatus mb_covering_number(const struct MbClass *class_,
                                 double epsilon,
                                 double p,
                                 bool exact,
                                 size_t cap,
                                 size_t *out);

// `M(epsilon, F, d_p)`; with `exact` false a greedy lower bound.
//
// # Safety
// `class` must be a live handle and `out` writable.
enum MbStatus mb_packing_number(const struct MbClass *class_,
                                double epsilon,
                                double p,
                                bool exact,
                                size_t cap,
                                size_t *out);

// Monte Carlo empirical Rademacher complexity and its standard error.
//
// # Safety
// `class` must be a live handle; the outputs writable.
enum MbStatus mb_rademacher(const struct MbClass *class_,
                            size_t trials,
                            uint64_t seed,
                            double *value,
                            double *stderr);

// Exact `gamma`-dim.
//
// # Safety
// `class` must be a live handle and `out` writable.
enum MbStatus mb_fat_shattering_dim(const struct MbClass *class_, double gamma, size_t *out);

// `K_p = sum_k k^p / 2^k` for `3 <= p <= 64`.
//
// # Safety
// `out` must be writable.
enum MbStatus mb_k_p(uint32_t p, double *out);

// The Rademacher complexity bound; an inadmissible sample size yields
// `MB_STATUS_REGIME`.
//
// # Safety
// `params` must be readable and `out` writable.
enum MbStatus mb_rademacher_bound(const struct MbBoundParams *params, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MARGIN_BOUNDS_H */
