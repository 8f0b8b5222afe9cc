#ifndef TMZV_H
#define TMZV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes.
typedef enum TmzvStatus {
  TMZV_STATUS_OK = 0,
  TMZV_STATUS_NULL_POINTER = 1,
  TMZV_STATUS_INVALID_UTF8 = 2,
  TMZV_STATUS_PARSE = 3,
  TMZV_STATUS_DOMAIN = 4,
  TMZV_STATUS_PARAM = 5,
  TMZV_STATUS_UNKNOWN_IDENTITY = 6,
  TMZV_STATUS_NUMERIC = 7,
  TMZV_STATUS_PANIC = 8,
} TmzvStatus;

// Opaque element of the word algebra.
typedef struct TmzvElement TmzvElement;

// Opaque numeric evaluator with its truncation settings and value cache.
typedef struct TmzvEvaluator TmzvEvaluator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *tmzv_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void tmzv_string_free(char *s);

// Parses and expands an expression such as `z(1) tst z(1)`.
//
// # Safety
// `src` must be a NUL-terminated string and `out` a valid pointer.
enum TmzvStatus tmzv_expand(const char *src, struct TmzvElement **out);

// Builds `z_{k_1} ... z_{k_n}`.
//
// # Safety
// `parts` must point to `len` integers (or be null with `len == 0`); `out` must be valid.
enum TmzvStatus tmzv_element_from_index(const uint32_t *parts,
                                        size_t len,
                                        struct TmzvElement **out);

// Canonical text form, e.g. `2 z1 z1 + (1-2t) z2`.
//
// # Safety
// `e` must be a live element handle and `out` a valid pointer.
enum TmzvStatus tmzv_element_to_string(const struct TmzvElement *e, char **out);

// Writes 1 to `out` when the elements are equal, 0 otherwise.
//
// # Safety
// Both handles must be live and `out` valid.
enum TmzvStatus tmzv_element_equal(const struct TmzvElement *a,
                                   const struct TmzvElement *b,
                                   int32_t *out);

// Releases an element handle; null is ignored.
//
// # Safety
// `e` must come from this library and not be freed twice.
void tmzv_element_free(struct TmzvElement *e);

// Creates an evaluator with outer truncation `m` (0 selects the default 100000).
//
// # Safety
// `out` must be a valid pointer.
enum TmzvStatus tmzv_evaluator_new(size_t m, struct TmzvEvaluator **out);

// Releases an evaluator handle; null is ignored.
//
// # Safety
// `ev` must come from this library and not be freed twice.
void tmzv_evaluator_free(struct TmzvEvaluator *ev);

// Evaluates ζ^t(k) at the given `t`, writing the value and its truncation estimate.
//
// # Safety
// `ev` must be live, `parts` must point to `len` integers, `value` and `err` valid (`err` may be null).
enum TmzvStatus tmzv_zeta_t(const struct TmzvEvaluator *ev,
                            const uint32_t *parts,
                            size_t len,
                            double t,
                            double *value,
                            double *err);

// Checks one catalog identity. `params` holds `key=value` pairs separated by spaces,
// e.g. `k=4 n=2` or `index=2,1`. Writes 1/0 to `pass` and the JSON report to `report`
// (pass null to skip it).
//
// # Safety
// `ev` must be live; `name` and `params` NUL-terminated; `pass` valid.
enum TmzvStatus tmzv_check(const struct TmzvEvaluator *ev,
                           const char *name,
                           const char *params,
                           int32_t *pass,
                           char **report);

// Library version as a static NUL-terminated string.
const char *tmzv_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TMZV_H */
