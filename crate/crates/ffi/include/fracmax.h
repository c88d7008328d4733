#ifndef FRACMAX_H
#define FRACMAX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FracmaxStatus {
  FRACMAX_STATUS_OK = 0,
  FRACMAX_STATUS_NULL_POINTER = 1,
  FRACMAX_STATUS_INVALID_PROBLEM = 2,
  FRACMAX_STATUS_INVALID_OPTIONS = 3,
  FRACMAX_STATUS_MODE_VIOLATION = 4,
  FRACMAX_STATUS_DIVISION_DOMAIN = 5,
  FRACMAX_STATUS_NO_BRACKET = 6,
  FRACMAX_STATUS_NON_CONVERGENCE = 7,
  FRACMAX_STATUS_UNSUPPORTED_STRATEGY = 8,
  FRACMAX_STATUS_NOT_FINITE = 9,
  FRACMAX_STATUS_ESTIMATE_UNDEFINED = 10,
  FRACMAX_STATUS_BUFFER_TOO_SMALL = 11,
  FRACMAX_STATUS_WRONG_FAMILY = 12,
  FRACMAX_STATUS_INTERNAL = 13,
} FracmaxStatus;

typedef enum FracmaxStrategy {
  FRACMAX_STRATEGY_BISECTION = 0,
  FRACMAX_STRATEGY_DINKELBACH = 1,
  FRACMAX_STRATEGY_HYBRID = 2,
} FracmaxStrategy;

typedef enum FracmaxMode {
  FRACMAX_MODE_DIFFERENCE = 0,
  FRACMAX_MODE_WEIGHTED_DIFFERENCE = 1,
} FracmaxMode;

/**
 * Opaque problem handle.
 */
typedef struct FracmaxProblem FracmaxProblem;

/**
 * Opaque solution handle.
 */
typedef struct FracmaxSolution FracmaxSolution;

typedef struct FracmaxOptions {
  double tolerance_j;
  double tolerance_beta;
  size_t max_iterations;
  enum FracmaxStrategy strategy;
} FracmaxOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never null.
 */
const char *fracmax_status_message(enum FracmaxStatus status);

/**
 * Message of the last failure on this thread, or null if none occurred.
 * Valid until the next failing call on the same thread.
 */
const char *fracmax_last_error_message(void);

struct FracmaxOptions fracmax_options_default(void);

/**
 * `(a0 x + b0) / (a x + b)` on `[x1, x2]`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum FracmaxStatus fracmax_linear_new(double a,
                                      double b,
                                      double a0,
                                      double b0,
                                      double x1,
                                      double x2,
                                      struct FracmaxProblem **out);

/**
 * `(a0 x² + b0 x + c0) / (a x² + b x + c)` on `[x1, x2]`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum FracmaxStatus fracmax_quadratic_new(double a,
                                         double b,
                                         double c,
                                         double a0,
                                         double b0,
                                         double c0,
                                         double x1,
                                         double x2,
                                         struct FracmaxProblem **out);

/**
 * `(<w0, x> + h0) / (<w, x> + h)` over the ball `|x| <= r` in `dimension`
 * dimensions. The arrays are copied.
 *
 * # Safety
 * `w0` and `w` must point to `dimension` doubles; `out` must be writable.
 */
enum FracmaxStatus fracmax_ball_new(const double *w0,
                                    const double *w,
                                    size_t dimension,
                                    double h0,
                                    double h,
                                    double r,
                                    struct FracmaxProblem **out);

/**
 * # Safety
 * `problem` must be null or a handle not yet freed.
 */
void fracmax_problem_free(struct FracmaxProblem *problem);

/**
 * Length of a point: 1 for interval problems, `n` for the ball. 0 for null.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t fracmax_problem_dimension(const struct FracmaxProblem *problem);

/**
 * Optimal value of the parametric subproblem at `beta`; the maximizer is
 * written to `x_out` when it is non-null (`x_len` must cover the dimension).
 *
 * # Safety
 * `problem` must be a live handle, `j_out` writable, and `x_out` null or
 * valid for `x_len` doubles.
 */
enum FracmaxStatus fracmax_problem_j(const struct FracmaxProblem *problem,
                                     double beta,
                                     enum FracmaxMode mode,
                                     double *j_out,
                                     double *x_out,
                                     size_t x_len);

/**
 * Ratio `W0(x) / W(x)` at a point of length `x_len`.
 *
 * # Safety
 * `problem` must be a live handle, `x` valid for `x_len` doubles, `out`
 * writable.
 */
enum FracmaxStatus fracmax_problem_ratio(const struct FracmaxProblem *problem,
                                         const double *x,
                                         size_t x_len,
                                         double *out);

/**
 * Maximizes the ratio by root finding. `options` may be null for defaults.
 *
 * # Safety
 * `problem` must be a live handle, `options` null or valid, `out` writable.
 */
enum FracmaxStatus fracmax_solve(const struct FracmaxProblem *problem,
                                 enum FracmaxMode mode,
                                 const struct FracmaxOptions *options,
                                 struct FracmaxSolution **out);

/**
 * Closed-form solution: endpoint rule for linear problems, quadratic formula
 * for the ball. Quadratic interval problems return `WrongFamily`.
 *
 * # Safety
 * `problem` must be a live handle, `out` writable.
 */
enum FracmaxStatus fracmax_solve_closed_form(const struct FracmaxProblem *problem,
                                             struct FracmaxSolution **out);

/**
 * Asymptotic estimate of the optimal ratio for a ball problem.
 *
 * # Safety
 * `problem` must be a live handle, `out` writable.
 */
enum FracmaxStatus fracmax_ball_estimate(const struct FracmaxProblem *problem, double *out);

/**
 * # Safety
 * `solution` must be null or a handle not yet freed.
 */
void fracmax_solution_free(struct FracmaxSolution *solution);

/**
 * NaN for a null handle.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
double fracmax_solution_beta_max(const struct FracmaxSolution *solution);

/**
 * `|j(beta_max)|`; NaN for a null handle.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
double fracmax_solution_residual(const struct FracmaxSolution *solution);

/**
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t fracmax_solution_iterations(const struct FracmaxSolution *solution);

/**
 * Number of `j` evaluations spent.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t fracmax_solution_evaluations(const struct FracmaxSolution *solution);

/**
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t fracmax_solution_dimension(const struct FracmaxSolution *solution);

/**
 * Copies the maximizer into `buf`.
 *
 * # Safety
 * `solution` must be a live handle and `buf` valid for `len` doubles.
 */
enum FracmaxStatus fracmax_solution_x_max(const struct FracmaxSolution *solution,
                                          double *buf,
                                          size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACMAX_H */
