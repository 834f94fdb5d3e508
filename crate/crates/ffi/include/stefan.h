#ifndef STEFAN_H
#define STEFAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Kind of fixed-face condition in [`StefanProblem`].
typedef enum StefanBcKind {
  STEFAN_BC_KIND_DIRICHLET = 0,
  STEFAN_BC_KIND_NEUMANN = 1,
  STEFAN_BC_KIND_ROBIN = 2,
  STEFAN_BC_KIND_GENERAL = 3,
} StefanBcKind;

// Result code of every exported function.
typedef enum StefanStatus {
  STEFAN_STATUS_OK = 0,
  STEFAN_STATUS_NULL_POINTER = 1,
  STEFAN_STATUS_INVALID_INPUT = 2,
  STEFAN_STATUS_DOMAIN = 3,
  STEFAN_STATUS_PRECONDITION = 4,
  STEFAN_STATUS_NUMERICAL = 5,
  STEFAN_STATUS_VERIFICATION_FAILED = 6,
  STEFAN_STATUS_PANIC = 7,
} StefanStatus;

// Opaque solved problem.
typedef struct StefanSolution StefanSolution;

// Problem description. Only the fields used by `bc` are read:
// `u0` (Dirichlet), `q0` (Neumann), `h0, u_inf` (Robin),
// `lambda, h0, u_inf` (General).
typedef struct StefanProblem {
  double a;
  double k;
  double gamma;
  double beta;
  double delta;
  enum StefanBcKind bc;
  double u0;
  double q0;
  double h0;
  double u_inf;
  double lambda;
} StefanProblem;

typedef struct StefanCoefficients {
  double xi;
  double alpha;
  double c1;
  double c2;
} StefanCoefficients;

typedef struct StefanResidualReport {
  double pde_max_rel;
  double phase_temp_max_abs;
  double stefan_max_rel;
  double fixed_face_max_rel;
  bool passed;
} StefanResidualReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent non-OK status on this thread, or null.
// The pointer stays valid until the next failing call on the same thread.
const char *stefan_last_error_message(void);

// Solves `problem` and stores a new handle in `*out`.
//
// # Safety
// `problem` must point to a valid [`StefanProblem`]; `out` must be writable.
enum StefanStatus stefan_solve(const struct StefanProblem *problem, struct StefanSolution **out);

// Releases a handle from [`stefan_solve`]. Null is ignored.
//
// # Safety
// `solution` must be null or a handle not yet freed.
void stefan_solution_free(struct StefanSolution *solution);

// # Safety
// `solution` must be a live handle; `out` must be writable.
enum StefanStatus stefan_solution_coefficients(const struct StefanSolution *solution,
                                               struct StefanCoefficients *out);

// Temperature u(x, t) for 0 ≤ x ≤ s(t), t > 0.
//
// # Safety
// `solution` must be a live handle; `out` must be writable.
enum StefanStatus stefan_eval_u(const struct StefanSolution *solution,
                                double x,
                                double t,
                                double *out);

// Front position s(t) and speed ṡ(t).
//
// # Safety
// `solution` must be a live handle; `s` and `sdot` must be writable.
enum StefanStatus stefan_eval_front(const struct StefanSolution *solution,
                                    double t,
                                    double *s,
                                    double *sdot);

// Latent heat at the front, γ s(t)^β.
//
// # Safety
// `solution` must be a live handle; `out` must be writable.
enum StefanStatus stefan_latent_heat(const struct StefanSolution *solution, double t, double *out);

// Finite-difference residuals on an `nx × nt` grid over `[t0, t1]`.
// Returns `VerificationFailed` with `*out` filled when a gate is exceeded.
//
// # Safety
// `solution` must be a live handle; `out` must be writable.
enum StefanStatus stefan_verify(const struct StefanSolution *solution,
                                size_t nx,
                                size_t nt,
                                double t0,
                                double t1,
                                struct StefanResidualReport *out);

// Kummer's function M(a, b, z).
//
// # Safety
// `out` must be writable.
enum StefanStatus stefan_kummer_m(double a, double b, double z, double *out);

// Dirichlet datum u0 with the same front as `problem`, and the gap between
// the two solved roots.
//
// # Safety
// `problem` must point to a valid [`StefanProblem`]; `u0` and `xi_gap` must be writable.
enum StefanStatus stefan_to_dirichlet(const struct StefanProblem *problem,
                                      double *u0,
                                      double *xi_gap);

// Coefficient h0 of the convective problem (λ, h0, u∞) equivalent to the
// Dirichlet `problem`. Requires λ·u0 < u∞.
//
// # Safety
// `problem` must point to a valid [`StefanProblem`]; `h0` must be writable.
enum StefanStatus stefan_from_dirichlet(const struct StefanProblem *problem,
                                        double lambda,
                                        double u_inf,
                                        double *h0);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STEFAN_H */
