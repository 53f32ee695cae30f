#ifndef MODPOLY_H
#define MODPOLY_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum ModpolyStatus {
  MODPOLY_STATUS_OK = 0,
  MODPOLY_STATUS_NULL_POINTER = 1,
  MODPOLY_STATUS_INVALID_UTF8 = 2,
  MODPOLY_STATUS_PARSE_ERROR = 3,
  MODPOLY_STATUS_INVALID_MODULUS = 4,
  MODPOLY_STATUS_GUARD_EXCEEDED = 5,
  MODPOLY_STATUS_INTERNAL = 6,
} ModpolyStatus;

/**
 * Verdict of a verification.
 */
typedef enum ModpolyVerdict {
  MODPOLY_VERDICT_STRING_C_GROUP = 0,
  MODPOLY_VERDICT_NOT_SGGI = 1,
  MODPOLY_VERDICT_INTERSECTION_FAILS = 2,
  MODPOLY_VERDICT_DEGENERATE = 3,
} ModpolyVerdict;

/**
 * Opaque parsed diagram.
 */
typedef struct ModpolyDiagram ModpolyDiagram;

/**
 * Opaque verification report.
 */
typedef struct ModpolyReport ModpolyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next
 * failing call on the same thread.
 */
const char *modpoly_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void modpoly_string_free(char *s);

/**
 * Parses a diagram such as `"1 - 2 = 2"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum ModpolyStatus modpoly_diagram_parse(const char *text, struct ModpolyDiagram **out);

/**
 * Releases a diagram. NULL is ignored.
 *
 * # Safety
 * `d` must come from [`modpoly_diagram_parse`] and not have been freed.
 */
void modpoly_diagram_free(struct ModpolyDiagram *d);

/**
 * Number of nodes, or 0 for NULL.
 *
 * # Safety
 * `d` must be NULL or a live diagram.
 */
size_t modpoly_diagram_rank(const struct ModpolyDiagram *d);

/**
 * Canonical text form of the diagram.
 *
 * # Safety
 * `d` must be a live diagram and `out` writable.
 */
enum ModpolyStatus modpoly_diagram_render(const struct ModpolyDiagram *d, char **out);

/**
 * Verifies the reduction modulo `modulus`. `order_guard` of 0 disables the
 * order guard.
 *
 * # Safety
 * `d` must be a live diagram and `out` writable.
 */
enum ModpolyStatus modpoly_verify(const struct ModpolyDiagram *d,
                                  uint64_t modulus,
                                  uint64_t order_guard,
                                  struct ModpolyReport **out);

/**
 * Releases a report. NULL is ignored.
 *
 * # Safety
 * `r` must come from [`modpoly_verify`] and not have been freed.
 */
void modpoly_report_free(struct ModpolyReport *r);

/**
 * Verdict of a report.
 *
 * # Safety
 * `r` must be a live report and `out` writable.
 */
enum ModpolyStatus modpoly_report_verdict(const struct ModpolyReport *r, enum ModpolyVerdict *out);

/**
 * Group order as a decimal string.
 *
 * # Safety
 * `r` must be a live report and `out` writable.
 */
enum ModpolyStatus modpoly_report_order(const struct ModpolyReport *r, char **out);

/**
 * Schläfli type. Writes up to `cap` periods into `buf` and the full length
 * into `len`.
 *
 * # Safety
 * `r` must be a live report, `len` writable and `buf` valid for `cap` writes.
 */
enum ModpolyStatus modpoly_report_schlafli(const struct ModpolyReport *r,
                                           uint64_t *buf,
                                           size_t cap,
                                           size_t *len);

/**
 * Report as JSON.
 *
 * # Safety
 * `r` must be a live report and `out` writable.
 */
enum ModpolyStatus modpoly_report_to_json(const struct ModpolyReport *r, char **out);

/**
 * Classification of the maximal sections modulo `modulus`, as a JSON array.
 *
 * # Safety
 * `d` must be a live diagram and `out` writable.
 */
enum ModpolyStatus modpoly_classify_json(const struct ModpolyDiagram *d,
                                         uint64_t modulus,
                                         char **out);

/**
 * Order of the reduced group as a decimal string.
 *
 * # Safety
 * `d` must be a live diagram and `out` writable.
 */
enum ModpolyStatus modpoly_group_order(const struct ModpolyDiagram *d,
                                       uint64_t modulus,
                                       uint64_t order_guard,
                                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODPOLY_H */
