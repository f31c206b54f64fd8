// SPDX-License-Identifier: Apache-2.0

#ifndef RECAPTURE_H
#define RECAPTURE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum RcStatus {
  RC_STATUS_OK = 0,
  RC_STATUS_NULL_POINTER = 1,
  RC_STATUS_INVALID_ARGUMENT = 2,
  RC_STATUS_ZERO_RECAPTURE = 3,
  RC_STATUS_INVALID_COUNTS = 4,
  RC_STATUS_INVALID_SEQUENCE = 5,
  RC_STATUS_LENGTH_MISMATCH = 6,
  RC_STATUS_DUPLICATE_ID = 7,
  RC_STATUS_EMPTY_INPUT = 8,
  RC_STATUS_DEGENERATE_INPUT = 9,
  RC_STATUS_PARSE_ERROR = 10,
  RC_STATUS_UNSUPPORTED_FORMAT = 11,
  RC_STATUS_EMPTY_TITLE = 12,
  RC_STATUS_BUFFER_TOO_SMALL = 13,
  RC_STATUS_PANIC = 99,
} RcStatus;

/**
 * Bibliographic export format accepted by `rc_coverage_from_exports`.
 */
typedef enum RcFormat {
  RC_FORMAT_CSV = 0,
  RC_FORMAT_RIS = 1,
  RC_FORMAT_BIBTEX = 2,
} RcFormat;

typedef enum RcKeywordType {
  RC_KEYWORD_TYPE_TYPE_I = 1,
  RC_KEYWORD_TYPE_TYPE_II = 2,
  RC_KEYWORD_TYPE_TYPE_III = 3,
  RC_KEYWORD_TYPE_TYPE_IV = 4,
} RcKeywordType;

/**
 * Opaque coverage series built from two bibliographic exports.
 */
typedef struct RcCoverage RcCoverage;

/**
 * Opaque truncated ranking of 64-bit ids.
 */
typedef struct RcRanking RcRanking;

typedef struct RcEstimate {
  double point;
  double stddev;
} RcEstimate;

typedef struct RcSimilarity {
  double s;
  double kendall;
  bool kendall_undefined;
  double overlap;
  size_t n;
} RcSimilarity;

/**
 * One depth of a coverage series.
 */
typedef struct RcCoveragePoint {
  size_t n;
  size_t n1;
  size_t n2;
  size_t r;
  double t;
  double c;
} RcCoveragePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *rc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rc_version(void);

/**
 * Two-sample Petersen estimate.
 */
enum RcStatus rc_petersen(uint64_t n1, uint64_t n2, uint64_t r, struct RcEstimate *out);

/**
 * Schnabel estimate over `len` samples given as three parallel arrays.
 *
 * # Safety
 * Each array must hold `len` readable elements.
 */
enum RcStatus rc_schnabel(const uint64_t *caught,
                          const uint64_t *recaptured,
                          const uint64_t *marked_before,
                          size_t len,
                          struct RcEstimate *out);

/**
 * Builds a ranking from `len` distinct ids, best first.
 *
 * # Safety
 * `ids` must hold `len` readable elements; `out` must be writable.
 */
enum RcStatus rc_ranking_new(const uint64_t *ids, size_t len, struct RcRanking **out);

/**
 * # Safety
 * `ranking` must come from `rc_ranking_new` and not be used afterwards.
 */
void rc_ranking_free(struct RcRanking *ranking);

/**
 * # Safety
 * `ranking` must be a live handle or null (which yields 0).
 */
size_t rc_ranking_len(const struct RcRanking *ranking);

/**
 * Similarity `S`, truncated Kendall tau and normalized overlap.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum RcStatus rc_similarity(const struct RcRanking *a,
                            const struct RcRanking *b,
                            struct RcSimilarity *out);

/**
 * Writes the overlap curve `R(0..=N)` into `out`, which must hold at least
 * `N + 1` values. `RC_STATUS_BUFFER_TOO_SMALL` is returned otherwise and
 * `written` still receives the required length.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must hold `capacity` writable
 * elements; `written` must be writable.
 */
enum RcStatus rc_overlap_curve(const struct RcRanking *a,
                               const struct RcRanking *b,
                               size_t *out,
                               size_t capacity,
                               size_t *written);

/**
 * Parses two exports and builds their coverage series up to `max_n`.
 *
 * # Safety
 * `first` and `second` must hold `first_len` and `second_len` readable
 * bytes; `out` must be writable.
 */
enum RcStatus rc_coverage_from_exports(const uint8_t *first,
                                       size_t first_len,
                                       enum RcFormat first_format,
                                       const uint8_t *second,
                                       size_t second_len,
                                       enum RcFormat second_format,
                                       size_t max_n,
                                       struct RcCoverage **out);

/**
 * # Safety
 * `series` must come from `rc_coverage_from_exports` and not be used
 * afterwards.
 */
void rc_coverage_free(struct RcCoverage *series);

/**
 * Number of depths in the series (0 for null).
 *
 * # Safety
 * `series` must be a live handle or null.
 */
size_t rc_coverage_len(const struct RcCoverage *series);

/**
 * Row `index` of the series; depth `n` is `index + 1`.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum RcStatus rc_coverage_point(const struct RcCoverage *series,
                                size_t index,
                                struct RcCoveragePoint *out);

/**
 * Keyword class of the series with default smoothing. `exponent` receives
 * the growth exponent of `T`, or NaN when it is undefined; it may be null.
 *
 * # Safety
 * `series` must be a live handle; `class` must be writable; `exponent` must
 * be writable or null.
 */
enum RcStatus rc_coverage_classify(const struct RcCoverage *series,
                                   enum RcKeywordType *class_,
                                   double *exponent);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RECAPTURE_H */
