#ifndef BELLKIT_H
#define BELLKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BkStatus {
  BkStatus_Ok = 0,
  BkStatus_NullPointer = 1,
  BkStatus_InvalidArgument = 2,
  BkStatus_ShapeMismatch = 3,
  BkStatus_SizeLimit = 4,
  BkStatus_NotUnitary = 5,
  BkStatus_BadJson = 6,
  BkStatus_Panic = 7,
} BkStatus;

/**
 * A dense complex matrix.
 */
typedef struct BkMatrix BkMatrix;

/**
 * The outcome of a verification suite.
 */
typedef struct BkReport BkReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the next failing call.
 */
const char *bk_last_error(void);

/**
 * Library version as a static string.
 */
const char *bk_version(void);

/**
 * Builds a `rows x cols` matrix from row-major real and imaginary parts.
 * `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `rows * cols` doubles.
 */
enum BkStatus bk_matrix_new(size_t rows,
                            size_t cols,
                            const double *re,
                            const double *im,
                            struct BkMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library that has not been freed.
 */
void bk_matrix_free(struct BkMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `rows` and `cols` must be writable.
 */
enum BkStatus bk_matrix_shape(const struct BkMatrix *m, size_t *rows, size_t *cols);

/**
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable.
 */
enum BkStatus bk_matrix_get(const struct BkMatrix *m,
                            size_t row,
                            size_t col,
                            double *re,
                            double *im);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum BkStatus bk_matrix_mul(const struct BkMatrix *a,
                            const struct BkMatrix *b,
                            struct BkMatrix **out);

/**
 * Largest entrywise modulus of `a - b`.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum BkStatus bk_matrix_residual(const struct BkMatrix *a, const struct BkMatrix *b, double *out);

/**
 * The 4x4 Bell transform `B(epsilon, eta)`, each sign `+1` or `-1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BkStatus bk_bell_transform(int32_t epsilon, int32_t eta, struct BkMatrix **out);

/**
 * The twist permutation on `2n` qubits.
 *
 * # Safety
 * `out` must be writable.
 */
enum BkStatus bk_twist(size_t n, struct BkMatrix **out);

/**
 * The `2n`-qubit Bell state with labels given as the low `n` bits of `alpha`
 * and `beta`, most significant bit first. Returned as a column.
 *
 * # Safety
 * `out` must be writable.
 */
enum BkStatus bk_multi_bell(size_t n, uint64_t alpha, uint64_t beta, struct BkMatrix **out);

/**
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum BkStatus bk_yang_baxter_residual(const struct BkMatrix *r, size_t local_dim, double *out);

/**
 * Runs a named suite. `params_json` is null or a JSON object with any of
 * `family`, `d`, `n`, `gate`, `variant`, `trials`, `seed`, `tol`.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `params_json` null or NUL-terminated,
 * and `out` writable.
 */
enum BkStatus bk_run_suite(const char *name, const char *params_json, struct BkReport **out);

/**
 * 1 when every case passed, 0 otherwise, -1 for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
int32_t bk_report_passed(const struct BkReport *r);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
size_t bk_report_case_count(const struct BkReport *r);

/**
 * Largest residual among the cases that assert an identity.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
double bk_report_max_residual(const struct BkReport *r);

/**
 * The report as JSON, owned by the handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
const char *bk_report_json(const struct BkReport *r);

/**
 * # Safety
 * `r` must be null or a handle from this library that has not been freed.
 */
void bk_report_free(struct BkReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BELLKIT_H */
