#ifndef QUARTICLOG_H
#define QUARTICLOG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QlStatus {
  QL_STATUS_OK = 0,
  QL_STATUS_NULL_POINTER = 1,
  /**
   * Argument outside the operation's domain, e.g. `q` not a prime `≡ 3 (mod 4)`.
   */
  QL_STATUS_DOMAIN = 2,
  /**
   * Malformed certificate document or string argument.
   */
  QL_STATUS_PARSE = 3,
  /**
   * A certificate parsed but one of its exact identities fails.
   */
  QL_STATUS_INVARIANT = 4,
  QL_STATUS_PRECISION = 5,
  /**
   * The requested field is not defined for this record.
   */
  QL_STATUS_NOT_AVAILABLE = 6,
  QL_STATUS_BUFFER_TOO_SMALL = 7,
  QL_STATUS_INTERNAL = 8,
  QL_STATUS_PANIC = 9,
} QlStatus;

typedef enum QlVerdict {
  QL_VERDICT_PASS = 0,
  QL_VERDICT_CONSISTENT = 1,
  QL_VERDICT_FAIL = 2,
  QL_VERDICT_SKIPPED = 3,
} QlVerdict;

typedef enum QlOrdField {
  QL_ORD_FIELD_PLUS = 0,
  QL_ORD_FIELD_MINUS = 1,
  QL_ORD_FIELD_ETA4 = 2,
  QL_ORD_FIELD_LOG = 3,
} QlOrdField;

/**
 * Opaque unit certificate.
 */
typedef struct QlCertificate QlCertificate;

/**
 * Opaque verification record.
 */
typedef struct QlRecord QlRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the next call
 * into this library from the same thread.
 */
const char *ql_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ql_version(void);

/**
 * Runs the full verification for `q`. `precision_bits = 0` selects the default 128;
 * `timeout_secs <= 0` removes the search time limit.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QlStatus ql_verify(uint64_t q,
                        uint32_t precision_bits,
                        double timeout_secs,
                        struct QlRecord **out);

/**
 * Verifies an imported certificate.
 *
 * # Safety
 * `cert` must be a live handle from [`ql_certificate_import_json`]; `out` must be
 * writable.
 */
enum QlStatus ql_verify_certificate(const struct QlCertificate *cert,
                                    uint32_t precision_bits,
                                    struct QlRecord **out);

/**
 * # Safety
 * `record` must be NULL or a handle not yet freed.
 */
void ql_record_free(struct QlRecord *record);

/**
 * # Safety
 * `record` must be a live handle and `out` writable.
 */
enum QlStatus ql_record_q(const struct QlRecord *record, uint64_t *out);

/**
 * # Safety
 * `record` must be a live handle and `out` writable.
 */
enum QlStatus ql_record_status(const struct QlRecord *record, enum QlVerdict *out);

/**
 * Reads one of the recorded orders. `*is_exact` is 0 when only the lower bound
 * `*value` is certified. Returns `NotAvailable` for fields the case does not define.
 *
 * # Safety
 * `record` must be a live handle; `value` and `is_exact` writable.
 */
enum QlStatus ql_record_ord(const struct QlRecord *record,
                            enum QlOrdField field,
                            int64_t *value,
                            int32_t *is_exact);

/**
 * `u mod 4` for `q ≡ 7 (mod 8)`.
 *
 * # Safety
 * `record` must be a live handle and `out` writable.
 */
enum QlStatus ql_record_u_mod4(const struct QlRecord *record, uint32_t *out);

/**
 * The record as one line of JSON.
 *
 * # Safety
 * `record` must be a live handle and `out` writable; free the result with
 * [`ql_string_free`].
 */
enum QlStatus ql_record_to_json(const struct QlRecord *record, char **out);

/**
 * The record as a CSV row in the fixed column order.
 *
 * # Safety
 * As [`ql_record_to_json`].
 */
enum QlStatus ql_record_to_csv(const struct QlRecord *record, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void ql_string_free(char *s);

/**
 * Parses and exactly checks a certificate document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` writable.
 */
enum QlStatus ql_certificate_import_json(const char *json, struct QlCertificate **out);

/**
 * # Safety
 * `cert` must be a live handle and `out` writable.
 */
enum QlStatus ql_certificate_export_json(const struct QlCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must be NULL or a handle not yet freed.
 */
void ql_certificate_free(struct QlCertificate *cert);

/**
 * Hilbert symbol `(a_num/a_den, b_num/b_den)` over ℚ₂; writes ±1.
 *
 * # Safety
 * `out` must be writable.
 */
enum QlStatus ql_hilbert_2(int64_t a_num,
                           int64_t a_den,
                           int64_t b_num,
                           int64_t b_den,
                           int32_t *out);

/**
 * Hilbert symbol over ℚ_p for an odd prime `p`; writes ±1.
 *
 * # Safety
 * `out` must be writable.
 */
enum QlStatus ql_hilbert_odd(uint64_t p,
                             int64_t a_num,
                             int64_t a_den,
                             int64_t b_num,
                             int64_t b_den,
                             int32_t *out);

/**
 * Splitting type of `x⁴ + q` over ℚ₂: writes up to `capacity` pairs `(e, f)` and the
 * number of factors to `*count`. `BufferTooSmall` still reports `*count`.
 *
 * # Safety
 * `e_out` and `f_out` must have room for `capacity` entries; `count` writable.
 */
enum QlStatus ql_factor_quartic(uint64_t q,
                                uint32_t *e_out,
                                uint32_t *f_out,
                                size_t capacity,
                                size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUARTICLOG_H */
