//! Maximization of a ratio of two functionals `J(x) = W0(x) / W(x)`.
//!
//! The ratio problem is replaced by the parametric difference problem
//! `J_beta(x) = W0(x) - beta * W(x)` (or `W(x) * (W0(x) - beta * W(x))` when
//! the denominator may be negative). Its optimal value `j(beta)` is positive
//! below the optimal ratio, zero at it and negative above, so the optimal
//! ratio is the unique root of a scalar equation in `beta`.
//!
//! The crate is organized as:
//!
//! * [`reduction`]: the [`RatioProblem`] contract, evaluation of `j(beta)`
//!   and the top-level [`solve_ratio_max`] loop.
//! * [`rootfind`]: bracketing, bisection and a safeguarded hybrid iteration.
//! * [`problems`]: linear and quadratic fractions on an interval, ratios of
//!   logarithms, and affine fractions on a Euclidean ball.
//! * [`oracle`]: brute-force grid maximizers used for cross-checking.
//! * [`config`], [`expr`], [`cli`]: the command-line front end.

// `!(x > 0.0)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builtin;
pub mod cli;
pub mod config;
pub mod error;
pub mod expr;
pub mod oracle;
pub mod problems;
pub mod random;
pub mod reduction;
pub mod rootfind;
pub(crate) mod vector;

pub use error::{Error, Level, Result};
pub use reduction::{
    dinkelbach_step, evaluate_j, ratio_value, solve_ratio_max, RatioProblem, ReductionMode,
    Solution, SolverOptions, Strategy,
};
pub use rootfind::{bisect, find_bracket, hybrid_solve, Bracket, BracketSearch, RootReport};
