use serde::{Deserialize, Serialize};

use super::{check_finite, check_interval};
use crate::error::{Error, Result};
use crate::reduction::{RatioProblem, ReductionMode, Solution};

/// `(a0 x + b0) / (a x + b)` on `[x1, x2]` with `a > 0` and a positive
/// denominator at both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearIntervalProblem {
    a: f64,
    b: f64,
    a0: f64,
    b0: f64,
    x1: f64,
    x2: f64,
}

impl LinearIntervalProblem {
    pub fn new(a: f64, b: f64, a0: f64, b0: f64, x1: f64, x2: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("a0", a0), ("b0", b0)] {
            check_finite(name, v)?;
        }
        check_interval(x1, x2)?;
        if !(a > 0.0) {
            return Err(Error::InvalidProblem(format!(
                "a must be positive (got {a})"
            )));
        }
        for (name, x) in [("x1", x1), ("x2", x2)] {
            let w = a * x + b;
            if !(w > 0.0) {
                return Err(Error::InvalidProblem(format!(
                    "denominator a*x + b must be positive at {name} = {x} (got {w})"
                )));
            }
        }
        Ok(LinearIntervalProblem {
            a,
            b,
            a0,
            b0,
            x1,
            x2,
        })
    }

    /// `(a, b, a0, b0, x1, x2)`
    pub fn coefficients(&self) -> (f64, f64, f64, f64, f64, f64) {
        (self.a, self.b, self.a0, self.b0, self.x1, self.x2)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.x1, self.x2)
    }

    pub fn numerator_at(&self, x: f64) -> f64 {
        self.a0 * x + self.b0
    }

    pub fn denominator_at(&self, x: f64) -> f64 {
        self.a * x + self.b
    }

    /// The value of `beta` at which the parametric maximizer switches ends.
    pub fn switching_beta(&self) -> f64 {
        self.a0 / self.a
    }

    /// Maximizer of `(a0 - beta a) x + b0 - beta b`: the left end when
    /// `beta >= a0 / a` (boundary included), otherwise the right end.
    pub fn argmax(&self, beta: f64) -> f64 {
        if beta >= self.switching_beta() {
            self.x1
        } else {
            self.x2
        }
    }

    /// `j(beta)` for the difference reduction.
    pub fn j(&self, beta: f64) -> f64 {
        let x = self.argmax(beta);
        self.numerator_at(x) - beta * self.denominator_at(x)
    }

    /// Endpoint rule: the ratio is monotone, decreasing exactly when
    /// `a b0 - b a0 > 0`.
    pub fn solve_closed_form(&self) -> Solution<f64> {
        let x_max = if self.a * self.b0 - self.b * self.a0 > 0.0 {
            self.x1
        } else {
            self.x2
        };
        let beta_max = self.numerator_at(x_max) / self.denominator_at(x_max);
        Solution {
            beta_max,
            x_max,
            residual: 0.0,
            iterations: 0,
            trace: Vec::new(),
        }
    }

    /// Maximizer of `(a x + b)((a0 - beta a) x + b0 - beta b)`, a quadratic in
    /// `x`; ties go to the smaller `x`.
    fn argmax_weighted(&self, beta: f64) -> f64 {
        let (p, q) = (self.a, self.b);
        let (r, s) = (self.a0 - beta * self.a, self.b0 - beta * self.b);
        let g = |x: f64| (p * x + q) * (r * x + s);
        let curvature = p * r;
        let mut candidates = vec![self.x1];
        if curvature != 0.0 {
            let vertex = -(p * s + q * r) / (2.0 * curvature);
            if self.x1 < vertex && vertex < self.x2 {
                candidates.push(vertex);
            }
        }
        candidates.push(self.x2);
        argmax_of(&candidates, g)
    }
}

/// First candidate attaining the maximum of `f`, in the given order.
pub(crate) fn argmax_of<F: Fn(f64) -> f64>(candidates: &[f64], f: F) -> f64 {
    let mut best = candidates[0];
    let mut best_value = f(best);
    for &x in &candidates[1..] {
        let v = f(x);
        if v > best_value {
            best = x;
            best_value = v;
        }
    }
    best
}

impl RatioProblem for LinearIntervalProblem {
    type Point = f64;

    fn numerator(&self, x: &f64) -> f64 {
        self.numerator_at(*x)
    }

    fn denominator(&self, x: &f64) -> f64 {
        self.denominator_at(*x)
    }

    fn argmax_parametric(&self, beta: f64, mode: ReductionMode) -> Result<f64> {
        Ok(match mode {
            ReductionMode::Difference => self.argmax(beta),
            ReductionMode::WeightedDifference => self.argmax_weighted(beta),
        })
    }

    fn reference_point(&self) -> f64 {
        self.x1 + (self.x2 - self.x1) / 2.0
    }
}
