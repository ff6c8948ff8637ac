#ifndef CYLINDRIC_H
#define CYLINDRIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. The first four values equal the exit codes
 * of the command-line tool.
 */
typedef enum CylStatus {
  CYL_STATUS_OK = 0,
  /**
   * Invalid input: bad parameters, syntax errors, malformed forms.
   */
  CYL_STATUS_INVALID = 1,
  /**
   * A form or search budget was exceeded.
   */
  CYL_STATUS_BUDGET = 2,
  /**
   * A construction failed its own verification.
   */
  CYL_STATUS_VERIFICATION = 3,
  /**
   * A required pointer argument was null.
   */
  CYL_STATUS_NULL_ARGUMENT = 4,
  /**
   * An internal panic was caught at the boundary.
   */
  CYL_STATUS_PANIC = 5,
} CylStatus;

/**
 * A normal form of some degree.
 */
typedef struct CylForm CylForm;

/**
 * Dimension, number of variables and variant.
 */
typedef struct CylParams CylParams;

/**
 * A verified split of a form below `t` into two disjoint forms.
 */
typedef struct CylSplit CylSplit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The library version as a static NUL-terminated string.
 */
const char *cyl_version(void);

/**
 * Message of the last failed call on this thread, or null if the last call
 * succeeded. The pointer stays valid until the next call on this thread.
 */
const char *cyl_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library that has not been freed.
 */
void cyl_string_free(char *s);

/**
 * Creates parameters; `variant` is `"nca"` or `"wca"`.
 *
 * # Safety
 * `variant` must be a NUL-terminated string and `out` writable.
 */
enum CylStatus cyl_params_new(size_t n, size_t m, const char *variant, struct CylParams **out);

/**
 * Releases parameters. Null is ignored.
 *
 * # Safety
 * `p` must be null or a handle from [`cyl_params_new`] that has not been freed.
 */
void cyl_params_free(struct CylParams *p);

/**
 * Parses a form from its JSON record (`{"degree", "color", "subs"}`).
 *
 * # Safety
 * `params` must be a live handle, `json` a NUL-terminated string and `out` writable.
 */
enum CylStatus cyl_form_from_json(const struct CylParams *params,
                                  const char *json,
                                  struct CylForm **out);

/**
 * Serializes a form to its JSON record; free the result with [`cyl_string_free`].
 *
 * # Safety
 * `form` must be a live handle and `out` writable.
 */
enum CylStatus cyl_form_to_json(const struct CylForm *form, char **out);

/**
 * Degree of a form; 0 for a null handle.
 *
 * # Safety
 * `form` must be null or a live handle.
 */
size_t cyl_form_degree(const struct CylForm *form);

/**
 * Releases a form. Null is ignored.
 *
 * # Safety
 * `form` must be null or a form handle from this library that has not been freed.
 */
void cyl_form_free(struct CylForm *form);

/**
 * Decides whether a form is satisfiable in the class of `params`.
 *
 * # Safety
 * `params` and `form` must be live handles and `out` writable.
 */
enum CylStatus cyl_is_satisfiable(const struct CylParams *params,
                                  const struct CylForm *form,
                                  bool *out);

/**
 * Decides whether two terms are equal in the class of `params`.
 * `budget` bounds the number of normal forms enumerated.
 *
 * # Safety
 * `params` must be a live handle, `lhs` and `rhs` NUL-terminated strings and `out` writable.
 */
enum CylStatus cyl_decide_equation(const struct CylParams *params,
                                   const char *lhs,
                                   const char *rhs,
                                   uint64_t budget,
                                   bool *out);

/**
 * Decides whether the join of a form set (or single form, as JSON) is zero.
 *
 * # Safety
 * `params` must be a live handle, `json` a NUL-terminated string and `out` writable.
 */
enum CylStatus cyl_decide_zero(const struct CylParams *params, const char *json, bool *out);

/**
 * Rewrites a term into the JSON form set of normal forms below it;
 * free the result with [`cyl_string_free`].
 *
 * # Safety
 * `params` must be a live handle, `term` a NUL-terminated string and `out` writable.
 */
enum CylStatus cyl_rewrite(const struct CylParams *params,
                           const char *term,
                           uint64_t budget,
                           char **out);

/**
 * Splits a satisfiable form below `t`. Fails with [`CylStatus::Invalid`]
 * if the form is not below `t` or unsatisfiable, and with
 * [`CylStatus::Verification`] if the constructed split does not verify.
 *
 * # Safety
 * `params` and `form` must be live handles and `out` writable.
 */
enum CylStatus cyl_split(const struct CylParams *params,
                         const struct CylForm *form,
                         struct CylSplit **out);

/**
 * The first half of a split as a new form handle.
 *
 * # Safety
 * `split` must be a live handle and `out` writable.
 */
enum CylStatus cyl_split_sigma(const struct CylSplit *split, struct CylForm **out);

/**
 * The second half of a split as a new form handle.
 *
 * # Safety
 * `split` must be a live handle and `out` writable.
 */
enum CylStatus cyl_split_gamma(const struct CylSplit *split, struct CylForm **out);

/**
 * Serializes a split, with its certificates, to JSON; free the result with
 * [`cyl_string_free`].
 *
 * # Safety
 * `split` must be a live handle and `out` writable.
 */
enum CylStatus cyl_split_to_json(const struct CylSplit *split, char **out);

/**
 * Releases a split. Null is ignored.
 *
 * # Safety
 * `split` must be null or a handle from [`cyl_split`] that has not been freed.
 */
void cyl_split_free(struct CylSplit *split);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYLINDRIC_H */
