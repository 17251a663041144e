#ifndef COMBQ_H
#define COMBQ_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CombqStatus {
  COMBQ_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  COMBQ_STATUS_NULL = 1,
  /**
   * Malformed text input, including invalid UTF-8.
   */
  COMBQ_STATUS_PARSE = 2,
  /**
   * Input violated a documented precondition.
   */
  COMBQ_STATUS_CONTRACT = 3,
  /**
   * A size or enumeration ceiling was exceeded.
   */
  COMBQ_STATUS_RESOURCE = 4,
  /**
   * An internal panic was caught at the boundary.
   */
  COMBQ_STATUS_PANIC = 5,
} CombqStatus;

/**
 * Binary operation selector for [`combq_cyclotomic_binary`].
 */
typedef enum CombqOp {
  COMBQ_OP_ADD = 0,
  COMBQ_OP_SUB = 1,
  COMBQ_OP_MUL = 2,
  COMBQ_OP_DIV = 3,
} CombqOp;

/**
 * Opaque exact cyclotomic number.
 */
typedef struct CombqCyclotomic CombqCyclotomic;

/**
 * Opaque exact square or rectangular matrix over a cyclotomic field.
 */
typedef struct CombqMatrix CombqMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *combq_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *combq_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void combq_string_free(char *s);

/**
 * Parses a literal such as `1/2*z - 1/2*z^3@8` or `3/4`.
 *
 * # Safety
 * `literal` must be a NUL-terminated string; `out` must be writable.
 */
enum CombqStatus combq_cyclotomic_parse(const char *literal, struct CombqCyclotomic **out);

/**
 * `ζ_n^k`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CombqStatus combq_cyclotomic_root_of_unity(uint32_t n,
                                                int64_t k,
                                                struct CombqCyclotomic **out);

/**
 * `a op b`, promoting to the common conductor.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum CombqStatus combq_cyclotomic_binary(enum CombqOp op,
                                         const struct CombqCyclotomic *a,
                                         const struct CombqCyclotomic *b,
                                         struct CombqCyclotomic **out);

/**
 * Complex conjugate.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum CombqStatus combq_cyclotomic_conjugate(const struct CombqCyclotomic *a,
                                            struct CombqCyclotomic **out);

/**
 * Exact equality.
 *
 * # Safety
 * `a`, `b` must be live handles; `equal` must be writable.
 */
enum CombqStatus combq_cyclotomic_equal(const struct CombqCyclotomic *a,
                                        const struct CombqCyclotomic *b,
                                        bool *equal);

/**
 * Whether the value lies in ℚ.
 *
 * # Safety
 * `a` must be a live handle; `rational` must be writable.
 */
enum CombqStatus combq_cyclotomic_is_rational(const struct CombqCyclotomic *a, bool *rational);

/**
 * Floating-point embedding with `ζ_n = e^{2πi/n}`.
 *
 * # Safety
 * `a` must be a live handle; `re` and `im` must be writable.
 */
enum CombqStatus combq_cyclotomic_to_complex(const struct CombqCyclotomic *a,
                                             double *re,
                                             double *im);

/**
 * Canonical text form; free with [`combq_string_free`].
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum CombqStatus combq_cyclotomic_to_string(const struct CombqCyclotomic *a, char **out);

/**
 * # Safety
 * `a` must come from this library and not have been freed. Null is ignored.
 */
void combq_cyclotomic_free(struct CombqCyclotomic *a);

/**
 * Row-major matrix from `rows * cols` literals.
 *
 * # Safety
 * `entries` must point to `rows * cols` NUL-terminated strings; `out` must
 * be writable.
 */
enum CombqStatus combq_matrix_from_literals(size_t rows,
                                            size_t cols,
                                            const char *const *entries,
                                            struct CombqMatrix **out);

/**
 * The order-`n` splitter `S_n`; `n = 8` gives the balanced beam splitter.
 *
 * # Safety
 * `out` must be writable.
 */
enum CombqStatus combq_matrix_splitter(uint32_t n, struct CombqMatrix **out);

/**
 * `a · b`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum CombqStatus combq_matrix_compose(const struct CombqMatrix *a,
                                      const struct CombqMatrix *b,
                                      struct CombqMatrix **out);

/**
 * `m^t` for a square matrix.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum CombqStatus combq_matrix_power(const struct CombqMatrix *m,
                                    uint64_t t,
                                    struct CombqMatrix **out);

/**
 * Multiplicative order up to `bound`; writes 0 when none was found.
 *
 * # Safety
 * `m` must be a live handle; `order` must be writable.
 */
enum CombqStatus combq_matrix_order(const struct CombqMatrix *m, uint64_t bound, uint64_t *order);

/**
 * Exact test of `m m† = I`.
 *
 * # Safety
 * `m` must be a live handle; `unitary` must be writable.
 */
enum CombqStatus combq_matrix_is_unitary(const struct CombqMatrix *m, bool *unitary);

/**
 * Dimensions of `m`.
 *
 * # Safety
 * `m` must be a live handle; `rows` and `cols` must be writable.
 */
enum CombqStatus combq_matrix_shape(const struct CombqMatrix *m, size_t *rows, size_t *cols);

/**
 * Copy of entry `(row, col)`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum CombqStatus combq_matrix_get(const struct CombqMatrix *m,
                                  size_t row,
                                  size_t col,
                                  struct CombqCyclotomic **out);

/**
 * # Safety
 * `m` must come from this library and not have been freed. Null is ignored.
 */
void combq_matrix_free(struct CombqMatrix *m);

/**
 * Bomb-tester scenario table as JSON, floats rounded to `precision` digits.
 *
 * # Safety
 * `out` must be writable; free the result with [`combq_string_free`].
 */
enum CombqStatus combq_bomb_json(uint32_t precision, char **out);

/**
 * Zeno table of the eight powers of the balanced splitter as JSON.
 *
 * # Safety
 * `out` must be writable; free the result with [`combq_string_free`].
 */
enum CombqStatus combq_zeno_table_json(char **out);

/**
 * Survival series of `S_n` up to `t_max` (0 means `n`) as JSON.
 *
 * # Safety
 * `out` must be writable; free the result with [`combq_string_free`].
 */
enum CombqStatus combq_zeno_scan_json(uint32_t n, uint64_t t_max, uint32_t precision, char **out);

/**
 * Evaluates a transport model given as JSON text.
 *
 * # Safety
 * `model` must be a NUL-terminated string; `out` must be writable; free the
 * result with [`combq_string_free`].
 */
enum CombqStatus combq_transport_json(const char *model, uint32_t precision, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMBQ_H */
