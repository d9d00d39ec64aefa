#ifndef TDW_H
#define TDW_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TdwStatus {
  TDW_STATUS_OK = 0,
  /*
   The verdict compared two sides and they differ.
   */
  TDW_STATUS_MISMATCH = 1,
  TDW_STATUS_INVALID_INPUT = 2,
  TDW_STATUS_UNSTABLE = 3,
  TDW_STATUS_INTERNAL = 4,
  TDW_STATUS_NULL_POINTER = 5,
  TDW_STATUS_INVALID_UTF8 = 6,
  TDW_STATUS_PANIC = 7,
} TdwStatus;

typedef enum TdwCommand {
  TDW_COMMAND_MILNOR = 0,
  TDW_COMMAND_KOSZUL = 1,
  TDW_COMMAND_TWISTED = 2,
  TDW_COMMAND_CHECK_KB = 3,
  TDW_COMMAND_CHECK_LOG = 4,
  TDW_COMMAND_CHECK_SUM = 5,
  TDW_COMMAND_CHECK_QUASI_ISO = 6,
} TdwCommand;

/*
 Parsed polynomial together with its variable names.
 */
typedef struct TdwPolynomial TdwPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses `text` over the comma-separated `vars` (inferred when null) with
 divisor variables `divisor` (none when null). On success `*out` owns a
 new handle.

 # Safety
 String arguments must be null or valid nul-terminated strings; `out`
 must be a valid pointer.
 */
enum TdwStatus tdw_polynomial_parse(const char *text,
                                    const char *vars,
                                    const char *divisor,
                                    struct TdwPolynomial **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `p` must be null or a handle from `tdw_polynomial_parse` not yet freed.
 */
void tdw_polynomial_free(struct TdwPolynomial *p);

/*
 Canonical text of the polynomial in degrevlex order. Free the result
 with `tdw_string_free`.

 # Safety
 `p` must be a live handle and `out` a valid pointer.
 */
enum TdwStatus tdw_polynomial_render(const struct TdwPolynomial *p, char **out);

/*
 Number of variables of the polynomial's ring.

 # Safety
 `p` must be a live handle and `out` a valid pointer.
 */
enum TdwStatus tdw_polynomial_nvars(const struct TdwPolynomial *p, uintptr_t *out);

/*
 Milnor number `dim Q[x]/J(f)` under degrevlex.

 # Safety
 `p` must be a live handle and `out` a valid pointer.
 */
enum TdwStatus tdw_milnor_number(const struct TdwPolynomial *p, uintptr_t *out);

/*
 Runs a command on an expression and writes its JSON report to `*out`
 (free with `tdw_string_free`). The report is produced even when the
 command fails; the status then mirrors the CLI exit code. `order` may
 be null for degrevlex; `max_doublings < 0` keeps the default.

 # Safety
 String arguments must be null or valid nul-terminated strings; `out`
 must be a valid pointer.
 */
enum TdwStatus tdw_run_json(enum TdwCommand command,
                            const char *text,
                            const char *vars,
                            const char *divisor,
                            const char *order,
                            int32_t max_doublings,
                            char **out);

/*
 Releases a string returned by this library; null is ignored.

 # Safety
 `s` must be null or a string returned by this library not yet freed.
 */
void tdw_string_free(char *s);

/*
 Message of the last failure on this thread, or null. The pointer stays
 valid until the next call into the library on this thread.
 */
const char *tdw_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TDW_H */
