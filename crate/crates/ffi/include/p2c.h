#ifndef P2C_H
#define P2C_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Asymptotic family tag.
typedef enum P2cFamilyKind {
  P2C_FAMILY_KIND_N1 = 1,
  P2C_FAMILY_KIND_N2 = 2,
  P2C_FAMILY_KIND_N3 = 3,
  P2C_FAMILY_KIND_P1 = 4,
  P2C_FAMILY_KIND_P2 = 5,
} P2cFamilyKind;

// Result code of every fallible call.
typedef enum P2cStatus {
  P2C_STATUS_OK = 0,
  P2C_STATUS_NULL_POINTER = 1,
  P2C_STATUS_INVALID_ARGUMENT = 2,
  // The connection formulas are undefined for the input.
  P2C_STATUS_DOMAIN = 3,
  P2C_STATUS_INTEGRATION = 4,
  P2C_STATUS_CLASSIFICATION = 5,
  P2C_STATUS_STOKES = 6,
  P2C_STATUS_PANIC = 7,
} P2cStatus;

// Numeric Stokes multipliers of one `(a, b)`.
typedef struct P2cStokes P2cStokes;

// Integrated solution of one initial-value problem.
typedef struct P2cTrajectory P2cTrajectory;

// A family with its parameters packed in order:
// N1 `(d, phi)`, N2 `(eps, h)`, N3 `(beta, varphi)`, P1 `(sigma, gamma, chi)`,
// P2 `(kappa)`. Unused slots are zero.
typedef struct P2cFamily {
  enum P2cFamilyKind kind;
  double params[3];
  // Fit residual; zero for predictions.
  double residual;
} P2cFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread. Valid until the next failing
// call on the same thread; never null.
const char *p2c_last_error(void);

// Library version as a static NUL-terminated string.
const char *p2c_version(void);

// Integrates `q(0) = a`, `q'(0) = b` over `[t_min, t_max]` (which must
// contain 0) at relative tolerance `tol`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum P2cStatus p2c_trajectory_new(double a,
                                  double b,
                                  double t_min,
                                  double t_max,
                                  double tol,
                                  struct P2cTrajectory **out);

// # Safety
// `traj` must come from [`p2c_trajectory_new`] and not be used afterwards.
// Null is accepted.
void p2c_trajectory_free(struct P2cTrajectory *traj);

// Solution and derivative at `t`; fails at or near a pole.
//
// # Safety
// `traj` must be a live handle; `q` and `qp` may be null.
enum P2cStatus p2c_trajectory_eval(const struct P2cTrajectory *traj,
                                   double t,
                                   double *q,
                                   double *qp);

// Number of poles crossed; 0 for a null handle.
//
// # Safety
// `traj` must be a live handle or null.
size_t p2c_trajectory_pole_count(const struct P2cTrajectory *traj);

// Location and residue (+1 or -1) of pole `index`, in increasing `t`.
//
// # Safety
// `traj` must be a live handle; `t0` and `residue` may be null.
enum P2cStatus p2c_trajectory_pole(const struct P2cTrajectory *traj,
                                   size_t index,
                                   double *t0,
                                   double *residue);

// Classifies the trajectory on `[lo, hi]` with the default thresholds.
// A window on `t < 0` selects the negative-axis families, `t > 0` the
// positive-axis ones.
//
// # Safety
// `traj` must be a live handle and `out` valid for one write.
enum P2cStatus p2c_classify(const struct P2cTrajectory *traj,
                            double lo,
                            double hi,
                            struct P2cFamily *out);

// Numeric Stokes multipliers from the Lax pair. `radius <= 0` or `tol <= 0`
// select the defaults (8 and 1e-12).
//
// # Safety
// `out` must be valid for one write.
enum P2cStatus p2c_stokes_compute(double a,
                                  double b,
                                  double radius,
                                  double tol,
                                  struct P2cStokes **out);

// # Safety
// `stokes` must come from [`p2c_stokes_compute`] and not be used
// afterwards. Null is accepted.
void p2c_stokes_free(struct P2cStokes *stokes);

// Multiplier `s_k` for `k` in `-1..=3`.
//
// # Safety
// `stokes` must be a live handle; `re` and `im` may be null.
enum P2cStatus p2c_stokes_get(const struct P2cStokes *stokes, int32_t k, double *re, double *im);

// Constraint and reality residuals of the computed multipliers.
//
// # Safety
// `stokes` must be a live handle; the outputs may be null.
enum P2cStatus p2c_stokes_residuals(const struct P2cStokes *stokes,
                                    double *constraint,
                                    double *conj);

// Leading-order family predicted by the connection formulas, on the side
// the regime of `(a, b)` speaks about, and the index of the last curve
// crossed.
//
// # Safety
// `out` must be valid for one write; `curve_index` may be null.
enum P2cStatus p2c_predict_family(double a, double b, struct P2cFamily *out, uint32_t *curve_index);

// Point of the `n`-th curve of case `case` (1 or 2) on the line `a = value`
// (`fixed_a != 0`) or `b = value`.
//
// # Safety
// The outputs may be null.
enum P2cStatus p2c_locate_curve(int32_t case_,
                                uint32_t n,
                                int32_t fixed_a,
                                double value,
                                double *a,
                                double *b,
                                double *xi);

// Full connection report as a JSON string. Release it with
// [`p2c_string_free`].
//
// # Safety
// `out` must be valid for one write.
enum P2cStatus p2c_report_json(double a, double b, char **out);

// # Safety
// `s` must come from this library and not be used afterwards. Null is
// accepted.
void p2c_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* P2C_H */
