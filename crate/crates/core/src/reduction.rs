//! The ratio problem contract and its reduction to a scalar equation.

use std::cell::RefCell;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootfind::{
    find_bracket, hybrid_solve, Bracket, BracketSearch, RootReport, BRACKET_BUDGET,
    BRACKET_EXPANSION,
};

/// How the parametric objective is formed from `W0`, `W` and `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionMode {
    /// `W0(x) - beta * W(x)`, requires `W > 0` on the domain.
    Difference,
    /// `W(x) * (W0(x) - beta * W(x))`, requires only `W != 0`.
    WeightedDifference,
}

impl ReductionMode {
    /// Parametric objective value from the two functional values.
    pub fn objective(self, numerator: f64, denominator: f64, beta: f64) -> f64 {
        match self {
            ReductionMode::Difference => numerator - beta * denominator,
            ReductionMode::WeightedDifference => denominator * (numerator - beta * denominator),
        }
    }

    /// Whether a denominator value is admissible in this mode.
    pub fn admits(self, denominator: f64) -> bool {
        match self {
            ReductionMode::Difference => denominator > 0.0,
            ReductionMode::WeightedDifference => denominator != 0.0 && denominator.is_finite(),
        }
    }
}

/// A ratio `W0 / W` over a domain, together with an exact solver of the
/// parametric subproblem `max_x J_beta(x)`.
///
/// Implementations must be immutable after construction; all methods take
/// `&self` and are expected to be pure.
pub trait RatioProblem {
    type Point: Clone + fmt::Debug;

    fn numerator(&self, x: &Self::Point) -> f64;

    fn denominator(&self, x: &Self::Point) -> f64;

    /// A maximizer of `J_beta` over the domain for the given mode. Ties must
    /// be broken deterministically.
    fn argmax_parametric(&self, beta: f64, mode: ReductionMode) -> Result<Self::Point>;

    /// A fixed feasible point. Its ratio seeds the root search, since the
    /// ratio at any feasible point is a lower bound of the optimum.
    fn reference_point(&self) -> Self::Point;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Bisection,
    Dinkelbach,
    Hybrid,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bisection => "bisect",
            Strategy::Dinkelbach => "dinkelbach",
            Strategy::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bisect" | "bisection" => Ok(Strategy::Bisection),
            "dinkelbach" => Ok(Strategy::Dinkelbach),
            "hybrid" => Ok(Strategy::Hybrid),
            other => Err(format!(
                "unknown strategy `{other}` (expected bisect, dinkelbach or hybrid)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Absolute tolerance on `|j(beta)|`.
    pub tolerance_j: f64,
    /// Absolute tolerance on the bracket width.
    pub tolerance_beta: f64,
    pub max_iterations: usize,
    pub strategy: Strategy,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance_j: 1e-10,
            tolerance_beta: 1e-12,
            max_iterations: 200,
            strategy: Strategy::Hybrid,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance_j > 0.0) || !(self.tolerance_beta > 0.0) {
            return Err(Error::InvalidOptions(format!(
                "tolerances must be positive (tolerance_j = {}, tolerance_beta = {})",
                self.tolerance_j, self.tolerance_beta
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidOptions(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<P> {
    pub beta_max: f64,
    pub x_max: P,
    /// `|j(beta_max)|`.
    pub residual: f64,
    pub iterations: usize,
    /// Every evaluation of `j` in call order; the last entry is at `beta_max`.
    pub trace: Vec<(f64, f64)>,
}

impl<P> Solution<P> {
    pub fn evaluations(&self) -> usize {
        self.trace.len()
    }
}

/// Solves the parametric subproblem at `beta` and returns the maximizer with
/// the optimal value `j(beta)`.
pub fn evaluate_j<R: RatioProblem + ?Sized>(
    problem: &R,
    beta: f64,
    mode: ReductionMode,
) -> Result<(R::Point, f64)> {
    let x = problem.argmax_parametric(beta, mode)?;
    let w = problem.denominator(&x);
    if !mode.admits(w) {
        return Err(Error::ModeViolation {
            mode,
            denominator: w,
        });
    }
    let j = mode.objective(problem.numerator(&x), w, beta);
    if !j.is_finite() {
        return Err(Error::NotFinite { at: beta, value: j });
    }
    Ok((x, j))
}

pub fn ratio_value<R: RatioProblem + ?Sized>(problem: &R, x: &R::Point) -> Result<f64> {
    let w = problem.denominator(x);
    if w == 0.0 {
        return Err(Error::DivisionDomain);
    }
    Ok(problem.numerator(x) / w)
}

/// One fixed-point update `beta -> J(x_beta)` of the difference reduction.
///
/// If `beta` lies below the optimum, the result lies in `[beta, beta_max]`.
pub fn dinkelbach_step<R: RatioProblem + ?Sized>(problem: &R, beta: f64) -> Result<f64> {
    let mode = ReductionMode::Difference;
    let x = problem.argmax_parametric(beta, mode)?;
    let w = problem.denominator(&x);
    if !mode.admits(w) {
        return Err(Error::ModeViolation {
            mode,
            denominator: w,
        });
    }
    Ok(problem.numerator(&x) / w)
}

/// Maximizes `W0 / W` by finding the root of `j(beta)`.
///
/// The search is seeded with the ratio at the problem's reference point. After
/// the root finder stops, one fixed-point update `beta -> J(x_beta)` is tried
/// and kept if it does not increase `|j|`; for families whose maximizer is
/// piecewise constant in `beta` this lands exactly on the optimal ratio.
pub fn solve_ratio_max<R: RatioProblem + ?Sized>(
    problem: &R,
    mode: ReductionMode,
    opts: &SolverOptions,
) -> Result<Solution<R::Point>> {
    opts.validate()?;
    if opts.strategy == Strategy::Dinkelbach && mode != ReductionMode::Difference {
        return Err(Error::UnsupportedStrategy("dinkelbach"));
    }
    let trace = RefCell::new(Vec::new());
    let j = |beta: f64| -> Result<f64> {
        let (_, value) = evaluate_j(problem, beta, mode)?;
        trace.borrow_mut().push((beta, value));
        Ok(value)
    };
    let with_trace = |err: Error| match err {
        Error::NonConvergence {
            iterations,
            best_beta,
            best_residual,
            ..
        } => Error::NonConvergence {
            iterations,
            best_beta,
            best_residual,
            trace: trace.borrow().clone(),
        },
        other => other,
    };

    let seed = ratio_value(problem, &problem.reference_point())?;

    let (root, iterations) = match opts.strategy {
        Strategy::Dinkelbach => dinkelbach_loop(problem, seed, opts, &j).map_err(with_trace)?,
        strategy => {
            let bracket = match find_bracket(&j, seed, BRACKET_EXPANSION, BRACKET_BUDGET)? {
                BracketSearch::Root { beta } => {
                    return finish(problem, mode, beta, 0, trace.into_inner());
                }
                BracketSearch::Bracketed(b) => b,
            };
            let report = if strategy == Strategy::Hybrid && mode == ReductionMode::Difference {
                hybrid_solve(
                    &j,
                    |b: &Bracket| dinkelbach_step(problem, b.beta_lo),
                    bracket,
                    opts,
                )
            } else {
                crate::rootfind::bisect(&j, bracket, opts)
            }
            .map_err(with_trace)?;
            let RootReport {
                root, iterations, ..
            } = report;
            (root, iterations)
        }
    };
    finish(problem, mode, root, iterations, trace.into_inner())
}

fn dinkelbach_loop<R, F>(
    problem: &R,
    seed: f64,
    opts: &SolverOptions,
    j: &F,
) -> Result<(f64, usize)>
where
    R: RatioProblem + ?Sized,
    F: Fn(f64) -> Result<f64>,
{
    let mut beta = seed;
    let mut best = (seed, f64::INFINITY);
    for iteration in 0..opts.max_iterations {
        let value = j(beta)?;
        if value.abs() < best.1 {
            best = (beta, value.abs());
        }
        if value.abs() <= opts.tolerance_j {
            return Ok((beta, iteration));
        }
        let next = dinkelbach_step(problem, beta)?;
        if (next - beta).abs() <= opts.tolerance_beta {
            return Ok((next, iteration + 1));
        }
        beta = next;
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        best_beta: best.0,
        best_residual: best.1,
        trace: Vec::new(),
    })
}

fn finish<R: RatioProblem + ?Sized>(
    problem: &R,
    mode: ReductionMode,
    root: f64,
    iterations: usize,
    mut trace: Vec<(f64, f64)>,
) -> Result<Solution<R::Point>> {
    let (mut x_max, mut j_max) = evaluate_j(problem, root, mode)?;
    let mut beta_max = root;
    trace.push((root, j_max));
    if let Ok(polished) = ratio_value(problem, &x_max) {
        if polished.is_finite() && polished != root {
            if let Ok((x, jp)) = evaluate_j(problem, polished, mode) {
                trace.push((polished, jp));
                if jp.abs() <= j_max.abs() {
                    x_max = x;
                    j_max = jp;
                    beta_max = polished;
                } else {
                    trace.push((root, j_max));
                }
            }
        }
    }
    Ok(Solution {
        beta_max,
        x_max,
        residual: j_max.abs(),
        iterations,
        trace,
    })
}
