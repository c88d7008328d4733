use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use super::interval::FunctionalIntervalProblem;
use super::search::IntervalSearch;
use super::{check_interval, ScalarFn};
use crate::error::{Error, Level, Result};
use crate::reduction::{solve_ratio_max, RatioProblem, ReductionMode, Solution, SolverOptions};
use crate::rootfind::{bisect, find_bracket, BracketSearch, BRACKET_BUDGET, BRACKET_EXPANSION};

/// `ln f0(x) / ln f(x)` on `[x1, x2]` with `f0 > 0` and `f > 1`.
///
/// Positivity is verified at every node of the search grid when the problem
/// is built.
#[derive(Clone)]
pub struct LogRatioProblem {
    f0: ScalarFn,
    f: ScalarFn,
    logs: FunctionalIntervalProblem,
}

impl fmt::Debug for LogRatioProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LogRatioProblem")
            .field("logs", &self.logs)
            .finish_non_exhaustive()
    }
}

impl LogRatioProblem {
    pub fn new(
        f0: ScalarFn,
        f: ScalarFn,
        x1: f64,
        x2: f64,
        search: IntervalSearch,
    ) -> Result<Self> {
        check_interval(x1, x2)?;
        search.validate()?;
        for i in 0..search.grid_resolution {
            let x = search.node(x1, x2, i);
            let (v0, v) = (f0(x), f(x));
            if !(v0 > 0.0 && v0.is_finite()) {
                return Err(Error::InvalidProblem(format!(
                    "f0 must be positive: f0({x}) = {v0}"
                )));
            }
            if !(v > 1.0 && v.is_finite()) {
                return Err(Error::InvalidProblem(format!(
                    "f must exceed 1: f({x}) = {v}"
                )));
            }
        }
        let ln_f0 = {
            let f0 = f0.clone();
            Arc::new(move |x: f64| f0(x).ln()) as ScalarFn
        };
        let ln_f = {
            let f = f.clone();
            Arc::new(move |x: f64| f(x).ln()) as ScalarFn
        };
        let logs = FunctionalIntervalProblem::new(ln_f0, ln_f, x1, x2, search)?;
        Ok(LogRatioProblem { f0, f, logs })
    }

    pub fn interval(&self) -> (f64, f64) {
        self.logs.interval()
    }

    /// The problem as a ratio of the two logarithms.
    pub fn as_ratio(&self) -> &FunctionalIntervalProblem {
        &self.logs
    }

    /// Difference reduction with `W0 = ln f0`, `W = ln f`.
    pub fn solve_direct(&self, opts: &SolverOptions) -> Result<Solution<f64>> {
        solve_ratio_max(&self.logs, ReductionMode::Difference, opts)
    }

    /// `gamma(beta) = max_x f0 / f^beta` and a point attaining it.
    ///
    /// This is the unique `gamma` at which `max_x (f0 - gamma f^beta)` is zero.
    pub fn gamma(&self, beta: f64) -> Result<(f64, f64)> {
        let search = self.logs.search();
        let (x1, x2) = self.interval();
        search
            .maximize(|x| (self.f0)(x) / (self.f)(x).powf(beta), x1, x2)
            .map_err(|e| e.at_level(Level::Inner))
    }

    /// Maximizer of `f0 - gamma f^beta`.
    pub fn auxiliary_argmax(&self, gamma: f64, beta: f64) -> Result<f64> {
        let search = self.logs.search();
        let (x1, x2) = self.interval();
        search
            .maximize(|x| (self.f0)(x) - gamma * (self.f)(x).powf(beta), x1, x2)
            .map(|(x, _)| x)
            .map_err(|e| e.at_level(Level::Inner))
    }

    /// `f0(x) / f(x)^beta`
    pub fn power_ratio(&self, x: f64, beta: f64) -> f64 {
        (self.f0)(x) / (self.f)(x).powf(beta)
    }

    /// Nested scheme: for each `beta`, `gamma(beta)` zeroes the auxiliary
    /// problem `f0 - gamma f^beta -> max`; the optimum is the root of
    /// `f0 / f^beta = 1` evaluated at the auxiliary maximizer. The outer
    /// equation is solved by bracketed bisection.
    pub fn solve_nested(&self, opts: &SolverOptions) -> Result<Solution<f64>> {
        opts.validate()?;
        let trace = RefCell::new(Vec::new());
        let outer = |beta: f64| -> Result<f64> {
            let (_, gamma) = self.gamma(beta)?;
            let x = self.auxiliary_argmax(gamma, beta)?;
            let g = self.power_ratio(x, beta) - 1.0;
            if !g.is_finite() {
                return Err(Error::NotFinite { at: beta, value: g }.at_level(Level::Inner));
            }
            trace.borrow_mut().push((beta, g));
            Ok(g)
        };
        let outer_err = |e: Error| match e {
            nested @ Error::Nested { .. } => nested,
            other => other.at_level(Level::Outer),
        };

        let center = self.logs.reference_point();
        let seed = self.logs.numerator(&center) / self.logs.denominator(&center);
        let g_seed = outer(seed)?;
        let (root, iterations) = if g_seed.abs() <= opts.tolerance_j {
            (seed, 0)
        } else {
            match find_bracket(&outer, seed, BRACKET_EXPANSION, BRACKET_BUDGET)
                .map_err(outer_err)?
            {
                BracketSearch::Root { beta } => (beta, 0),
                BracketSearch::Bracketed(bracket) => {
                    let report = bisect(&outer, bracket, opts).map_err(outer_err)?;
                    (report.root, report.iterations)
                }
            }
        };
        let (_, gamma) = self.gamma(root)?;
        let x_max = self.auxiliary_argmax(gamma, root)?;
        let mut trace = trace.into_inner();
        trace.push((root, self.power_ratio(x_max, root) - 1.0));
        Ok(Solution {
            beta_max: root,
            x_max,
            residual: gamma.ln().abs(),
            iterations,
            trace,
        })
    }
}

impl RatioProblem for LogRatioProblem {
    type Point = f64;

    fn numerator(&self, x: &f64) -> f64 {
        self.logs.numerator(x)
    }

    fn denominator(&self, x: &f64) -> f64 {
        self.logs.denominator(x)
    }

    fn argmax_parametric(&self, beta: f64, mode: ReductionMode) -> Result<f64> {
        self.logs.argmax_parametric(beta, mode)
    }

    fn reference_point(&self) -> f64 {
        self.logs.reference_point()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(f: fn(f64) -> f64) -> ScalarFn {
        Arc::new(f)
    }

    #[test]
    fn identity_ratio_is_one() {
        let f = arc(|x| 2.0 + x * x);
        let p = LogRatioProblem::new(f.clone(), f, 0.0, 1.0, IntervalSearch::default()).unwrap();
        let opts = SolverOptions::default();
        assert!((p.solve_direct(&opts).unwrap().beta_max - 1.0).abs() <= 1e-12);
        assert!((p.solve_nested(&opts).unwrap().beta_max - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn constant_ratio_of_exponentials() {
        let p = LogRatioProblem::new(
            arc(|x| (2.0 * x).exp()),
            arc(f64::exp),
            1.0,
            2.0,
            IntervalSearch::default(),
        )
        .unwrap();
        let s = p.solve_direct(&SolverOptions::default()).unwrap();
        assert!((s.beta_max - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn gamma_at_zero_is_max_f0() {
        let p = LogRatioProblem::new(
            arc(|x| 1.0 + x * x),
            arc(|x| 2.0 + x),
            0.0,
            1.0,
            IntervalSearch::default(),
        )
        .unwrap();
        let (x, gamma) = p.gamma(0.0).unwrap();
        assert_eq!((x, gamma), (1.0, 2.0));
    }

    #[test]
    fn validation_samples_the_grid() {
        let s = IntervalSearch::default();
        assert!(LogRatioProblem::new(arc(|x| x), arc(|x| 2.0 + x), 0.0, 1.0, s).is_err());
        assert!(LogRatioProblem::new(arc(|_| 1.0), arc(|x| 1.0 + x), 0.0, 1.0, s).is_err());
        assert!(LogRatioProblem::new(arc(|_| 1.0), arc(|_| 3.0), 1.0, 0.0, s).is_err());
    }
}
