#ifndef JACKSON_APPROX_H
#define JACKSON_APPROX_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

#define JA_OK 0

#define JA_ERR_NULL 1

#define JA_ERR_DOMAIN 2

#define JA_ERR_NON_FINITE 3

#define JA_ERR_UNDER_RESOLVED 4

#define JA_ERR_LAYOUT 5

#define JA_ERR_PARSE 6

#define JA_ERR_NUMERIC 7

#define JA_ERR_BUFFER 8

#define JA_ERR_PANIC 9

/*
 A zonal kernel given by its eigenvalue sequence.
 */
typedef struct JaKernel JaKernel;

/*
 An operator diagonal in the harmonic basis.
 */
typedef struct JaOperator JaOperator;

/*
 A two-point homogeneous space.
 */
typedef struct JaSpace JaSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the calling thread's last error message into `buf` (NUL
 terminated, truncated to `len`). Returns the full message length plus one,
 or 0 when no error has been recorded.

 # Safety
 `buf` must be valid for `len` bytes, or null with `len == 0`.
 */
size_t ja_last_error(char *buf, size_t len);

/*
 Library version as a static NUL-terminated string.
 */
const char *ja_version(void);

/*
 `family` is one of `sphere`, `real_projective`, `complex_projective`,
 `quaternionic_projective`, `cayley_plane` (or `s`, `rp`, `cp`, `hp`, `op`).

 # Safety
 `family` must be a NUL-terminated string; `out` must be writable.
 */
int32_t ja_space_new(const char *family, uint32_t m, struct JaSpace **out);

/*
 # Safety
 `space` must come from `ja_space_new` and not be used afterwards.
 */
void ja_space_free(struct JaSpace *space);

/*
 Dimension of the degree-`n` eigenspace, saturating at `u64::MAX`.

 # Safety
 Pointers must be valid.
 */
int32_t ja_space_harmonic_dim(const struct JaSpace *space, uint64_t n, uint64_t *out);

/*
 Weight `sin(t/2)^a sin(t)^b` for `t` in `(0, pi)`.

 # Safety
 Pointers must be valid.
 */
int32_t ja_space_weight(const struct JaSpace *space, double t, double *out);

/*
 Smallest `q` with `d_n <= (q n)^m` for `1 <= n <= n_max`.

 # Safety
 Pointers must be valid.
 */
int32_t ja_space_choose_q(const struct JaSpace *space, uint64_t n_max, uint64_t *out);

/*
 Normalizer `k_nu` and degree `nu = l (mu - 1)` of the Jackson kernel.

 # Safety
 Pointers must be valid; `out_nu` may be null.
 */
int32_t ja_jackson_normalizer(const struct JaSpace *space,
                              uint32_t l,
                              uint32_t mu,
                              double *out_k,
                              uint32_t *out_nu);

/*
 Mass of the normalized kernel against the weight, on a finer rule.

 # Safety
 Pointers must be valid.
 */
int32_t ja_jackson_mass(const struct JaSpace *space, uint32_t l, uint32_t mu, double *out);

/*
 `J(mu) = int D_nu t^gamma alpha dt`.

 # Safety
 Pointers must be valid.
 */
int32_t ja_jackson_moment(const struct JaSpace *space,
                          uint32_t l,
                          uint32_t mu,
                          double gamma,
                          double *out);

/*
 Writes `m_nu(0..=n_max)` into `buf`, which must hold `n_max + 1` values.

 # Safety
 `buf` must be valid for `len` doubles.
 */
int32_t ja_jackson_multipliers(const struct JaSpace *space,
                               uint32_t l,
                               uint32_t mu,
                               size_t n_max,
                               double *buf,
                               size_t len);

/*
 The moment-bound constant `c_{m,gamma,l}`.

 # Safety
 `out` must be writable.
 */
int32_t ja_moment_constant(uint32_t m, double gamma, uint32_t l, double *out);

/*
 Example kernel on `S^m`: `lambda_0 = tau_m`, `lambda_n = n^-(2m+beta-2)`.

 # Safety
 `out` must be writable.
 */
int32_t ja_kernel_example(uint32_t m, double beta, size_t n_trunc, struct JaKernel **out);

/*
 Kernel with eigenvalues `coeffs[0..len]` on `space`.

 # Safety
 `coeffs` must be valid for `len` doubles.
 */
int32_t ja_kernel_from_coeffs(const struct JaSpace *space,
                              const double *coeffs,
                              size_t len,
                              struct JaKernel **out);

/*
 Parses a `key = value` kernel description.

 # Safety
 `text` must be NUL terminated.
 */
int32_t ja_kernel_from_kv(const char *text, struct JaKernel **out);

/*
 # Safety
 `kernel` must come from a `ja_kernel_*` constructor and not be used afterwards.
 */
void ja_kernel_free(struct JaKernel *kernel);

/*
 `K` at points with `cos(distance) = cos_theta`; `out_tail` (optional)
 receives the truncation tail bound.

 # Safety
 Pointers must be valid; `out_tail` may be null.
 */
int32_t ja_kernel_eval(const struct JaKernel *kernel,
                       double cos_theta,
                       double *out_value,
                       double *out_tail);

/*
 Hoelder modulus `omega(t)` with the supremum over `u_grid` points.

 # Safety
 Pointers must be valid.
 */
int32_t ja_kernel_hoelder_modulus(const struct JaKernel *kernel,
                                  double t,
                                  size_t u_grid,
                                  double *out);

/*
 The integral operator of `kernel`.

 # Safety
 Pointers must be valid.
 */
int32_t ja_operator_from_kernel(const struct JaKernel *kernel, struct JaOperator **out);

/*
 Positive square root; fails on negative eigenvalues.

 # Safety
 Pointers must be valid.
 */
int32_t ja_operator_sqrt(const struct JaOperator *op, struct JaOperator **out);

/*
 `Phi_nu` applied to `op`, with the Jackson kernel of parameters `(l, mu)`.

 # Safety
 Pointers must be valid.
 */
int32_t ja_operator_smooth(const struct JaOperator *op,
                           uint32_t l,
                           uint32_t mu,
                           struct JaOperator **out);

/*
 # Safety
 `op` must come from a `ja_operator_*` constructor and not be used afterwards.
 */
void ja_operator_free(struct JaOperator *op);

/*
 Operator norm.

 # Safety
 Pointers must be valid.
 */
int32_t ja_operator_norm(const struct JaOperator *op, double *out);

/*
 `||a - b||` for operators on the same space and degree layout.

 # Safety
 Pointers must be valid.
 */
int32_t ja_operator_norm_diff(const struct JaOperator *a, const struct JaOperator *b, double *out);

/*
 Writes `a_1..a_{j_max}` into `buf`.

 # Safety
 `buf` must be valid for `len` doubles.
 */
int32_t ja_operator_approx_numbers(const struct JaOperator *op,
                                   size_t j_max,
                                   double *buf,
                                   size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JACKSON_APPROX_H */
