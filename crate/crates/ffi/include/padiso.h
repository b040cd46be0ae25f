#ifndef PADISO_H
#define PADISO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes.
typedef enum PadisoStatus {
  PADISO_STATUS_OK = 0,
  PADISO_STATUS_NULL_POINTER = 1,
  PADISO_STATUS_INVALID_UTF8 = 2,
  // The job description does not match the schema.
  PADISO_STATUS_SCHEMA = 3,
  // A mathematical precondition failed; see `padiso_last_error`.
  PADISO_STATUS_MATH = 4,
  // Division needing more precision than the operands carry.
  PADISO_STATUS_DIVISION_PRECISION = 5,
  // Operands come from different contexts.
  PADISO_STATUS_CONTEXT_MISMATCH = 6,
  PADISO_STATUS_INVALID_PARAMETER = 7,
  PADISO_STATUS_INTERNAL = 8,
} PadisoStatus;

// Opaque handle to `O_K / p^M` for an unramified `K`.
typedef struct PadisoContext PadisoContext;

// Opaque handle to an element of a context.
typedef struct PadisoElement PadisoElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread; empty if none. Valid until
// the next call into the library from the same thread.
const char *padiso_last_error(void);

// Library version, a static string.
const char *padiso_version(void);

// Release a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void padiso_string_free(char *s);

// Run a JSON job, as the command-line tool does with the same config.
// `*report_out` receives the JSON report (also on failure, when the report
// describes the error); `*exit_code_out`, if not null, receives the
// command-line exit code (0, 2, 3 or 4).
//
// # Safety
// `config_json` must be a nul-terminated string; `report_out` must be
// writable.
enum PadisoStatus padiso_run_job(const char *config_json,
                                 char **report_out,
                                 int32_t *exit_code_out);

// Create the context of precision `precision` over the unramified extension
// of degree `degree` of `Q_p` (degree 1 is `Z/p^M`).
//
// # Safety
// `out` must be writable.
enum PadisoStatus padiso_context_new(uint64_t p,
                                     uint32_t precision,
                                     size_t degree,
                                     struct PadisoContext **out);

// # Safety
// `ctx` must come from `padiso_context_new` (or be null) and not be used
// afterwards. Elements created from it stay valid.
void padiso_context_free(struct PadisoContext *ctx);

// Parse a base-10 integer (any sign or length) into the context.
//
// # Safety
// `ctx` must be a live context, `text` a nul-terminated string and `out`
// writable.
enum PadisoStatus padiso_element_from_string(const struct PadisoContext *ctx,
                                             const char *text,
                                             struct PadisoElement **out);

// # Safety
// `e` must come from this library (or be null) and not be used afterwards.
void padiso_element_free(struct PadisoElement *e);

// Decimal rendering: an integer for degree 1, `(c0, c1, ...)` otherwise.
//
// # Safety
// `e` must be a live element and `out` writable; free the result with
// `padiso_string_free`.
enum PadisoStatus padiso_element_to_string(const struct PadisoElement *e, char **out);

// p-adic valuation; the precision for zero.
//
// # Safety
// `e` must be a live element and `out` writable.
enum PadisoStatus padiso_element_valuation(const struct PadisoElement *e, uint32_t *out);

// `*out = a + b`.
//
// # Safety
// `a`, `b` must be live elements and `out` writable.
enum PadisoStatus padiso_element_add(const struct PadisoElement *a,
                                     const struct PadisoElement *b,
                                     struct PadisoElement **out);

// `*out = a - b`.
//
// # Safety
// As `padiso_element_add`.
enum PadisoStatus padiso_element_sub(const struct PadisoElement *a,
                                     const struct PadisoElement *b,
                                     struct PadisoElement **out);

// `*out = a * b`.
//
// # Safety
// As `padiso_element_add`.
enum PadisoStatus padiso_element_mul(const struct PadisoElement *a,
                                     const struct PadisoElement *b,
                                     struct PadisoElement **out);

// `*out = a / b`; fails with `DivisionPrecision` when `v(b) > v(a)`.
//
// # Safety
// As `padiso_element_add`.
enum PadisoStatus padiso_element_div(const struct PadisoElement *a,
                                     const struct PadisoElement *b,
                                     struct PadisoElement **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADISO_H */
