#ifndef TEMPERED_H
#define TEMPERED_H

/* Generated by cbindgen from tempered-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum TemperedStatus {
  TEMPERED_STATUS_OK = 0,
  TEMPERED_STATUS_NULL_ARGUMENT = 1,
  TEMPERED_STATUS_PARSE_ERROR = 2,
  TEMPERED_STATUS_DIMENSION_MISMATCH = 3,
  TEMPERED_STATUS_EVAL_ERROR = 4,
  TEMPERED_STATUS_BUDGET_EXCEEDED = 5,
  TEMPERED_STATUS_UNSUPPORTED = 6,
  TEMPERED_STATUS_PANIC = 7,
} TemperedStatus;

/**
 * Which dyadic set family a membership query addresses.
 */
typedef enum TemperedKrullSet {
  TEMPERED_KRULL_SET_DYADIC_VANISHING = 0,
  TEMPERED_KRULL_SET_ZERO_ORDER_DIVERGENT = 1,
  TEMPERED_KRULL_SET_ZERO_ORDER_BOUNDED = 2,
} TemperedKrullSet;

/**
 * Opaque expression handle.
 */
typedef struct TemperedExpr TemperedExpr;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *tempered_last_error(void);

/**
 * Release a string returned by this library.
 */
void tempered_string_free(char *s);

/**
 * Release an expression handle.
 */
void tempered_expr_free(struct TemperedExpr *expr);

/**
 * Parse an expression from canonical JSON. `dim = 0` infers the ambient
 * dimension from the document.
 */
enum TemperedStatus tempered_expr_parse(const char *json, size_t dim, struct TemperedExpr **out);

/**
 * Serialize an expression to canonical JSON.
 */
enum TemperedStatus tempered_expr_to_json(const struct TemperedExpr *expr, char **out);

/**
 * Ambient dimension of an expression.
 */
enum TemperedStatus tempered_expr_dim(const struct TemperedExpr *expr, size_t *out);

/**
 * The dyadic mask family member of the given order.
 */
enum TemperedStatus tempered_pattern_mask(size_t dim, uint32_t order, struct TemperedExpr **out);

/**
 * Exact evaluation; the result is `{"value": {"re", "im"}}` JSON.
 */
enum TemperedStatus tempered_eval(const struct TemperedExpr *expr,
                                  const int64_t *coords,
                                  size_t len,
                                  char **out);

/**
 * Approximate evaluation with a certified error bound:
 * `{"value": {"re", "im"}, "abs_err": "p/q"}`.
 */
enum TemperedStatus tempered_eval_approx(const struct TemperedExpr *expr,
                                         const int64_t *coords,
                                         size_t len,
                                         uint32_t precision_bits,
                                         char **out);

/**
 * Structural global growth certificate: `{"certificate": {"M", "m"}}`.
 */
enum TemperedStatus tempered_infer_certificate(const struct TemperedExpr *expr, char **out);

/**
 * Audit an upper certificate `|f| <= M (1+|n|)^m` on the window of the
 * given radius. `bound` is a rational string such as `"3/2"`.
 */
enum TemperedStatus tempered_audit_upper(const struct TemperedExpr *expr,
                                         const char *bound,
                                         uint32_t degree,
                                         uint64_t radius,
                                         char **out);

/**
 * Audit a lower certificate `|f| >= delta (1+|n|)^-m` on a window.
 */
enum TemperedStatus tempered_audit_lower(const struct TemperedExpr *expr,
                                         const char *delta,
                                         uint32_t degree,
                                         uint64_t radius,
                                         char **out);

/**
 * Divisibility verdict JSON (same shape as the CLI `divides` body).
 */
enum TemperedStatus tempered_divides(const struct TemperedExpr *g,
                                     const struct TemperedExpr *f,
                                     uint64_t radius,
                                     uint32_t m_cap,
                                     char **out);

/**
 * Invertibility verdict JSON.
 */
enum TemperedStatus tempered_is_invertible(const struct TemperedExpr *f,
                                           uint64_t radius,
                                           uint32_t m_cap,
                                           char **out);

/**
 * Magnitude-max GCD of a generator list, as a new expression handle.
 */
enum TemperedStatus tempered_gcd(const struct TemperedExpr *const *gens,
                                 size_t count,
                                 struct TemperedExpr **out);

/**
 * Ideal membership verdict JSON with cofactor witnesses.
 */
enum TemperedStatus tempered_ideal_member(const struct TemperedExpr *f,
                                          const struct TemperedExpr *const *gens,
                                          size_t count,
                                          uint64_t radius,
                                          uint32_t m_cap,
                                          char **out);

/**
 * Principalization report JSON.
 */
enum TemperedStatus tempered_principal(const struct TemperedExpr *const *gens,
                                       size_t count,
                                       uint64_t radius,
                                       uint32_t m_cap,
                                       char **out);

/**
 * Membership in the fixed maximal ideal at a point; writes 0 or 1.
 */
enum TemperedStatus tempered_fixed_maximal_member(const struct TemperedExpr *f,
                                                  const int64_t *coords,
                                                  size_t len,
                                                  uint8_t *out);

/**
 * Separator expression for two distinct points of the same dimension.
 */
enum TemperedStatus tempered_separator(const int64_t *first,
                                       const int64_t *second,
                                       size_t len,
                                       struct TemperedExpr **out);

/**
 * Prime classification JSON for the principal ideal generated by `d`.
 */
enum TemperedStatus tempered_classify_prime(const struct TemperedExpr *d,
                                            uint64_t radius,
                                            uint32_t m_cap,
                                            char **out);

/**
 * Membership in the diagonal decay ideal along an explicit subsequence.
 */
enum TemperedStatus tempered_nonfixed_member(const struct TemperedExpr *f,
                                             const uint64_t *subsequence,
                                             size_t len,
                                             char **out);

/**
 * Zero-order at a point with the given scan cap:
 * `{"order": {"kind", "value"}}`.
 */
enum TemperedStatus tempered_zero_order(const struct TemperedExpr *f,
                                        const int64_t *coords,
                                        size_t len,
                                        uint64_t cap,
                                        char **out);

/**
 * Membership verdict JSON for one of the dyadic set families.
 */
enum TemperedStatus tempered_krull_member(const struct TemperedExpr *f,
                                          enum TemperedKrullSet set,
                                          uint32_t degree,
                                          uint32_t horizon,
                                          char **out);

/**
 * Full chain evidence report JSON.
 */
enum TemperedStatus tempered_chain_report(size_t dim,
                                          uint32_t levels,
                                          uint32_t horizon,
                                          char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TEMPERED_H */
