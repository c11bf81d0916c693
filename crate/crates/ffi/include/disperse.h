/* C interface to the disperse low-dispersion point-set library. */

#ifndef DISPERSE_H
#define DISPERSE_H

/* Generated from the disperse-ffi crate by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Piecewise branch identifiers for `disperse_best_known_bound`.
 */
typedef enum DisperseBranch {
  DISPERSE_BRANCH_LARGE_EPS = 0,
  DISPERSE_BRANCH_MID_LOGLOG = 1,
  DISPERSE_BRANCH_TINY_EPS = 2,
} DisperseBranch;

/**
 * Outcome of a call. Zero is success; anything else is a failure and
 * leaves a message readable via `disperse_last_error`.
 */
typedef enum DisperseStatus {
  DISPERSE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  DISPERSE_STATUS_NULL_POINTER = 1,
  /**
   * Arguments outside the supported domain.
   */
  DISPERSE_STATUS_INVALID_PARAMS = 2,
  /**
   * No finite grid certifies the requested (eps, delta) pair.
   */
  DISPERSE_STATUS_NO_GRID_RESOLUTION = 3,
  /**
   * The net would exceed the requested cardinality cap.
   */
  DISPERSE_STATUS_NET_CAP_EXCEEDED = 4,
  /**
   * A size-formula hypothesis failed for the given net and delta.
   */
  DISPERSE_STATUS_HYPOTHESIS_FAILED = 5,
  /**
   * The exact solver's dimension or point-count cap was exceeded.
   */
  DISPERSE_STATUS_EXACTNESS_CAP = 6,
  /**
   * Rejection sampling could not find boxes of the requested volume.
   */
  DISPERSE_STATUS_SAMPLING_STALLED = 7,
  /**
   * Malformed point-set text.
   */
  DISPERSE_STATUS_PARSE_ERROR = 8,
  /**
   * Filesystem failure.
   */
  DISPERSE_STATUS_IO_ERROR = 9,
  /**
   * An internal invariant failed; the operation was rolled back.
   */
  DISPERSE_STATUS_PANIC = 10,
} DisperseStatus;

/**
 * Opaque handle to a box net (approximation family).
 */
typedef struct DisperseNet DisperseNet;

/**
 * Opaque handle to a point set in the unit cube.
 */
typedef struct DispersePoints DispersePoints;

/**
 * Flat summary of one construction run.
 */
typedef struct DisperseReport {
  /**
   * Root RNG seed the run used.
   */
  uint64_t seed;
  /**
   * Random-phase draw count.
   */
  uint64_t phase1_draws;
  /**
   * Net cardinality the run pierced against.
   */
  uint64_t net_size;
  /**
   * Net elements the random phase left unpierced.
   */
  uint64_t bad_count;
  /**
   * Deterministic repair points added.
   */
  uint64_t repair_count;
  /**
   * Final distinct point count.
   */
  uint64_t total;
  /**
   * Extra attempts beyond the first.
   */
  uint32_t retries;
  /**
   * True when the size certificate applies to this run.
   */
  bool accepted;
  /**
   * True for the two-phase method, false for pure random piercing.
   */
  bool two_phase;
  /**
   * Certified size bound for the method used.
   */
  double size_bound;
} DisperseReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *disperse_version(void);

/**
 * Copies the calling thread's most recent error message into `buf`
 * (always NUL-terminated, truncated to `cap` bytes) and returns the full
 * length including the terminator. `buf` may be null to query the length.
 *
 * # Safety
 * `buf` must point to at least `cap` writable bytes when non-null.
 */
size_t disperse_last_error(char *buf, size_t cap);

/**
 * Builds a point set from `count` points of `dim` coordinates each, laid
 * out row-major in `coords`. All coordinates must lie in `[0, 1]`.
 *
 * # Safety
 * `coords` must point to `dim * count` readable doubles (it may be null
 * when `count` is zero), and `out` must be a valid pointer.
 */
enum DisperseStatus disperse_points_new(size_t dim,
                                        const double *coords,
                                        size_t count,
                                        struct DispersePoints **out);

/**
 * Parses point-set text (one point per line, comma-separated coordinates,
 * `#` comments allowed).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum DisperseStatus disperse_points_parse(const char *text, struct DispersePoints **out);

/**
 * Releases a point set. Null is a no-op.
 *
 * # Safety
 * `p` must be null or a pointer returned by this library that has not
 * been freed already.
 */
void disperse_points_free(struct DispersePoints *p);

/**
 * Number of points, or 0 for null.
 *
 * # Safety
 * `p` must be null or a live point-set handle.
 */
size_t disperse_points_count(const struct DispersePoints *p);

/**
 * Point dimension, or 0 for null.
 *
 * # Safety
 * `p` must be null or a live point-set handle.
 */
size_t disperse_points_dim(const struct DispersePoints *p);

/**
 * Copies the coordinates row-major into `out` (up to `cap` doubles) and
 * returns the total number of doubles in the set, `count * dim`.
 *
 * # Safety
 * `p` must be null or a live handle; `out` must point to `cap` writable
 * doubles when non-null.
 */
size_t disperse_points_copy(const struct DispersePoints *p, double *out, size_t cap);

/**
 * Formats the point set as CSV text into `buf` (always NUL-terminated,
 * truncated to `cap` bytes) and returns the full length including the
 * terminator.
 *
 * # Safety
 * `p` must be null or a live handle; `buf` must point to `cap` writable
 * bytes when non-null.
 */
size_t disperse_points_format(const struct DispersePoints *p, char *buf, size_t cap);

/**
 * Builds the net a construction pierces against. Pass `delta <= 0` or NaN
 * for the default `eps / (4e)`; `cap` bounds the net cardinality
 * (elements), with 0 meaning the library default.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DisperseStatus disperse_net_build(size_t dim,
                                       double eps,
                                       double delta,
                                       bool torus,
                                       uint64_t cap,
                                       struct DisperseNet **out);

/**
 * Releases a net. Null is a no-op.
 *
 * # Safety
 * `net` must be null or an unfreed handle from `disperse_net_build`.
 */
void disperse_net_free(struct DisperseNet *net);

/**
 * Net cardinality, or 0 for null.
 *
 * # Safety
 * `net` must be null or a live net handle.
 */
uint64_t disperse_net_size(const struct DisperseNet *net);

/**
 * Element volume floor delta, or NaN for null.
 *
 * # Safety
 * `net` must be null or a live net handle.
 */
double disperse_net_delta(const struct DisperseNet *net);

/**
 * Grid resolution backing the net, or 0 for null.
 *
 * # Safety
 * `net` must be null or a live net handle.
 */
uint32_t disperse_net_grid(const struct DisperseNet *net);

/**
 * Fuzzes the net's approximation property with `trials` random boxes and
 * writes the violation count (expected 0).
 *
 * # Safety
 * `net` and `out_violations` must be valid pointers.
 */
enum DisperseStatus disperse_net_verify(const struct DisperseNet *net,
                                        uint64_t trials,
                                        uint64_t seed,
                                        uint64_t *out_violations);

/**
 * Runs a construction against the net and returns the produced point set
 * through `out_points`. With `use_random_only` false this is the two-phase
 * method (random sample plus deterministic repair); true selects the pure
 * random baseline. `out_report` may be null.
 *
 * # Safety
 * `net` and `out_points` must be valid pointers; `out_report` must be
 * null or valid.
 */
enum DisperseStatus disperse_construct(const struct DisperseNet *net,
                                       uint64_t seed,
                                       uint32_t max_retries,
                                       bool use_random_only,
                                       struct DispersePoints **out_points,
                                       struct DisperseReport *out_report);

/**
 * Exact dispersion of the point set: the volume of the largest empty
 * axis-parallel box (or wraparound box with `torus`). Caps of 0 select
 * the library defaults (dimension 3, 256 points). `out_degenerate` may be
 * null; it reports whether the supremum is only approached.
 *
 * # Safety
 * `p` and `out_value` must be valid pointers; `out_degenerate` must be
 * null or valid.
 */
enum DisperseStatus disperse_dispersion(const struct DispersePoints *p,
                                        bool torus,
                                        size_t cap_dim,
                                        size_t cap_points,
                                        double *out_value,
                                        bool *out_degenerate);

/**
 * Randomized lower estimate of the dispersion from `trials` grown empty
 * boxes. Deterministic in the seed.
 *
 * # Safety
 * `p` and `out_value` must be valid pointers.
 */
enum DisperseStatus disperse_dispersion_estimate(const struct DispersePoints *p,
                                                 uint64_t trials,
                                                 uint64_t seed,
                                                 bool torus,
                                                 double *out_value);

/**
 * Largest empty box restricted to a uniform grid of the given resolution:
 * an independent lower bound on the dispersion.
 *
 * # Safety
 * `p` and `out_value` must be valid pointers.
 */
enum DisperseStatus disperse_grid_oracle(const struct DispersePoints *p,
                                         uint32_t resolution,
                                         bool torus,
                                         double *out_value);

/**
 * Upper bound on how many points suffice for dispersion at most `eps` in
 * dimension `dim` (cube or torus family).
 *
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum DisperseStatus disperse_inverse_bound(double eps, size_t dim, bool torus, double *out_value);

/**
 * Size formulas for piercing a net of `net_size` elements with volume
 * floor `delta`: the pure-random bound `3 ln N / delta` and the two-phase
 * bound `ln(4 delta N) / delta`. Either out-pointer may be null.
 *
 * # Safety
 * `out_random` and `out_two_phase` must each be null or valid.
 */
enum DisperseStatus disperse_piercing_bounds(uint64_t net_size,
                                             double delta,
                                             double *out_random,
                                             double *out_two_phase);

/**
 * Best known upper bound on the minimal dispersion achievable with the
 * inverse function, as a piecewise formula over eps regimes. Writes the
 * bound value and, when `out_branch` is non-null, which branch applied.
 *
 * # Safety
 * `out_value` must be valid; `out_branch` must be null or valid.
 */
enum DisperseStatus disperse_best_known_bound(double eps,
                                              size_t dim,
                                              double constant,
                                              double *out_value,
                                              enum DisperseBranch *out_branch);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DISPERSE_H */
