#ifndef SEMIGROUP_H
#define SEMIGROUP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_UTF8 = 2,
  SG_STATUS_PARSE = 3,
  SG_STATUS_STRUCTURE = 4,
  SG_STATUS_DOMAIN = 5,
  SG_STATUS_ARGUMENT = 6,
  SG_STATUS_INTERNAL = 7,
} SgStatus;

// Opaque handle to a function on `{-1} ∪ [0, ∞)`.
typedef struct SgFunction SgFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL after a success.
// Valid until the next call on the same thread.
const char *sg_last_error(void);

// Parses `{"minus_one": .., "breakpoints": [[u, v], ..]}`.
//
// # Safety
// `json` must be a valid C string; `out` must be writable.
enum SgStatus sg_function_from_json(const char *json, struct SgFunction **out);

// One of `zero`, `v:<s>`, `w:<s>`, `T0:<t>`.
//
// # Safety
// `name` must be a valid C string; `out` must be writable.
enum SgStatus sg_function_builtin(const char *name, struct SgFunction **out);

// # Safety
// `f` must be a live handle or NULL; `out` must be writable.
enum SgStatus sg_function_to_json(const struct SgFunction *f, char **out);

// # Safety
// `f` must come from this library and not be freed twice. NULL is ignored.
void sg_function_free(struct SgFunction *f);

// # Safety
// `s` must come from this library and not be freed twice. NULL is ignored.
void sg_string_free(char *s);

// `out = T(t) x`.
//
// # Safety
// `t` must be a valid C string, `x` a live handle, `out` writable.
enum SgStatus sg_apply(const char *t, const struct SgFunction *x, struct SgFunction **out);

// Exact sup distance between two functions.
//
// # Safety
// `a`, `b` must be live handles, `out` writable.
enum SgStatus sg_sup_dist(const struct SgFunction *a, const struct SgFunction *b, char **out);

// # Safety
// `x` must be a live handle, `out` writable.
enum SgStatus sg_in_c(const struct SgFunction *x, bool *out);

// # Safety
// `x` must be a live handle, `out` writable.
enum SgStatus sg_is_common_fixed_point(const struct SgFunction *x, bool *out);

// Value at `u`, where `u = -1` or `u ≥ 0`.
//
// # Safety
// `x` must be a live handle, `u` a valid C string, `out` writable.
enum SgStatus sg_eval(const struct SgFunction *x, const char *u, char **out);

// Residual `‖A(t)x − x‖` and its error bound. `h` may be NULL for the exact
// route, which accepts only the zero function.
//
// # Safety
// `x` must be a live handle, `t` a valid C string, `h` NULL or a valid C
// string, `residual` and `bound` writable.
enum SgStatus sg_cesaro_residual(const struct SgFunction *x,
                                 const char *t,
                                 const char *h,
                                 char **residual,
                                 char **bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEMIGROUP_H */
