#ifndef COPRIMALITY_H
#define COPRIMALITY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CpMethod {
  CP_METHOD_BRUTEFORCE = 0,
  CP_METHOD_MOEBIUS = 1,
  /**
   * Run both counters and fail unless they agree.
   */
  CP_METHOD_BOTH = 2,
} CpMethod;

/**
 * Result code of every fallible call.
 */
typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_UTF8 = 2,
  CP_STATUS_INVALID_ARGUMENT = 3,
  CP_STATUS_GRAPH_ERROR = 4,
  CP_STATUS_POLYNOMIAL_ERROR = 5,
  CP_STATUS_ARITHMETIC_ERROR = 6,
  CP_STATUS_DENSITY_ERROR = 7,
  CP_STATUS_COUNT_ERROR = 8,
  CP_STATUS_INCONSISTENT = 9,
  CP_STATUS_PANIC = 10,
} CpStatus;

/**
 * Opaque graph handle.
 */
typedef struct CpGraph CpGraph;

typedef struct CpDensity {
  double value;
  uint64_t prime_bound;
  double tail_bound;
  double float_budget;
} CpDensity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *cp_last_error_message(void);

/**
 * Parses a graph in the text format (vertex count line, then `r s` lines).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must point to writable storage
 * for one pointer. On success `*out` owns a handle to release with [`cp_graph_free`].
 */
enum CpStatus cp_graph_parse(const char *text, struct CpGraph **out);

/**
 * Releases a handle from [`cp_graph_parse`]. NULL is ignored.
 *
 * # Safety
 * `graph` must be NULL or a live handle; it must not be used afterwards.
 */
void cp_graph_free(struct CpGraph *graph);

/**
 * Number of vertices, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t cp_graph_vertex_count(const struct CpGraph *graph);

/**
 * Number of edges, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t cp_graph_edge_count(const struct CpGraph *graph);

/**
 * Maximum vertex degree, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t cp_graph_max_degree(const struct CpGraph *graph);

/**
 * Coefficients `c_0..c_v` of `Q_G` (`is_signed`) or `Q_G^+` as a comma-separated
 * decimal list, e.g. `"1,0,-3,2"`.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable; free `*out` with [`cp_string_free`].
 */
enum CpStatus cp_poly_coefficients(const struct CpGraph *graph, bool is_signed, char **out);

/**
 * Truncated Euler product for the density, primes up to `prime_bound`.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum CpStatus cp_density(const struct CpGraph *graph, uint64_t prime_bound, struct CpDensity *out);

/**
 * Exact `g(x)` as a decimal string. `threads = 0` is treated as 1.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable; free `*out` with [`cp_string_free`].
 */
enum CpStatus cp_count(const struct CpGraph *graph,
                       uint64_t x,
                       enum CpMethod method,
                       uint32_t threads,
                       char **out);

/**
 * `f_G(m)` (`is_signed`) or `f_G^+(m)` as a decimal string. Uses enumeration
 * when feasible and checks it against the multiplicative formula.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable; free `*out` with [`cp_string_free`].
 */
enum CpStatus cp_f(const struct CpGraph *graph, uint64_t m, bool is_signed, char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string from this library that has not been freed.
 */
void cp_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* COPRIMALITY_H */
