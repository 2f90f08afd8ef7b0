#ifndef VRD_H
#define VRD_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define VRD_THEORY_COHERENCE 0

#define VRD_THEORY_ENTANGLEMENT 1

#define VRD_THEORY_MAGIC 2

typedef enum VrdStatus {
  VRD_STATUS_OK = 0,
  VRD_STATUS_NULL_POINTER = 1,
  VRD_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Input is not a valid state, channel or observable.
   */
  VRD_STATUS_INVALID_STATE = 3,
  VRD_STATUS_UNSUPPORTED = 4,
  VRD_STATUS_INFEASIBLE = 5,
  VRD_STATUS_SOLVER = 6,
  VRD_STATUS_PANIC = 7,
} VrdStatus;

/**
 * A density matrix.
 */
typedef struct VrdState VrdState;

/**
 * A virtual operation `lambda_plus * Plus - lambda_minus * Minus`.
 */
typedef struct VrdVirtualOperation VrdVirtualOperation;

/**
 * Overhead bounds for `m` copies. `exact` is NaN when the bounds do not coincide.
 */
typedef struct VrdOverhead {
  double lower;
  double upper;
  double exact;
  /**
   * NaN when no overlap monotone is available.
   */
  double closed_form;
  /**
   * Nonzero when the target free set is a relaxation.
   */
  uint8_t relaxation;
} VrdOverhead;

typedef struct VrdRate {
  /**
   * Zero when every overhead is infinite.
   */
  size_t m_star;
  double rate;
} VrdRate;

typedef struct VrdEstimate {
  double mean;
  double std_error;
  double exact;
  double hoeffding_bound;
  size_t n_samples;
} VrdEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *vrd_last_error(void);

/**
 * Static name of a status code; null for an unknown code.
 */
const char *vrd_status_name(int32_t status);

/**
 * The noisy input `p psi + (1 - p) I / d` of a theory.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VrdStatus vrd_state_noisy(uint32_t theory_code, double p, struct VrdState **out);

/**
 * The pure target state for `m` copies of a theory.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VrdStatus vrd_state_target(uint32_t theory_code, size_t m, struct VrdState **out);

/**
 * A state from a row-major `dim x dim` matrix. `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` if non-null) must point to `dim * dim` doubles.
 */
enum VrdStatus vrd_state_from_matrix(size_t dim,
                                     const double *re,
                                     const double *im,
                                     struct VrdState **out);

/**
 * # Safety
 * `state` must be null or a valid handle; `out` must be valid for writes.
 */
enum VrdStatus vrd_state_dim(const struct VrdState *state, size_t *out);

/**
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void vrd_state_free(struct VrdState *state);

/**
 * Bounds on the sampling overhead of distilling `m` target copies within `eps`.
 *
 * # Safety
 * `state` must be a valid handle; `out` must be valid for writes.
 */
enum VrdStatus vrd_overhead(const struct VrdState *state,
                            uint32_t theory_code,
                            size_t m,
                            double eps,
                            struct VrdOverhead *out);

/**
 * Best `m / C^2` over `m = 1..=m_max`.
 *
 * # Safety
 * `state` must be a valid handle; `out` must be valid for writes.
 */
enum VrdStatus vrd_virtual_rate(const struct VrdState *state,
                                uint32_t theory_code,
                                double eps,
                                size_t m_max,
                                struct VrdRate *out);

/**
 * Largest `m <= m_max` reachable by a free operation within `eps`; zero if none.
 *
 * # Safety
 * `state` must be a valid handle; `out` must be valid for writes.
 */
enum VrdStatus vrd_conventional_rate(const struct VrdState *state,
                                     uint32_t theory_code,
                                     double eps,
                                     size_t m_max,
                                     size_t *out);

/**
 * The explicit Bell-state distillation operation for `1/3 <= p <= 1`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VrdStatus vrd_teleport_new(double p, struct VrdVirtualOperation **out);

/**
 * Coefficients of the decomposition and the overhead `lambda_plus + lambda_minus`.
 * Any out pointer may be null.
 *
 * # Safety
 * `vop` must be a valid handle; non-null out pointers must be valid for writes.
 */
enum VrdStatus vrd_vop_coefficients(const struct VrdVirtualOperation *vop,
                                    double *lambda_plus,
                                    double *lambda_minus,
                                    double *overhead);

/**
 * # Safety
 * `vop` must be null or a handle not yet freed.
 */
void vrd_vop_free(struct VrdVirtualOperation *vop);

/**
 * Monte-Carlo estimate of `tr[P Op(input)]`, where `P` projects onto the pure
 * state `target`. Deterministic for a given seed; `beta = 0.1`, `delta = 0.05`.
 *
 * # Safety
 * All handles must be valid; `out` must be valid for writes.
 */
enum VrdStatus vrd_estimate_projector(const struct VrdVirtualOperation *vop,
                                      const struct VrdState *input,
                                      const struct VrdState *target,
                                      size_t n_samples,
                                      uint64_t seed,
                                      struct VrdEstimate *out);

/**
 * Shots needed for accuracy `beta` with probability `1 - delta` at overhead `c`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VrdStatus vrd_required_samples(double c, double beta, double delta, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VRD_H */
