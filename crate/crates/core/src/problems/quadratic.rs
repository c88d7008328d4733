use roots::find_roots_cubic;
use serde::{Deserialize, Serialize};

use super::linear::argmax_of;
use super::{check_finite, check_interval};
use crate::error::{Error, Result};
use crate::reduction::{RatioProblem, ReductionMode};

/// `(a0 x² + b0 x + c0) / (a x² + b x + c)` on `[x1, x2]`, `a > 0`.
///
/// The denominator must be positive on the whole interval, which is checked at
/// both endpoints and at the vertex when it falls inside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticIntervalProblem {
    a: f64,
    b: f64,
    c: f64,
    a0: f64,
    b0: f64,
    c0: f64,
    x1: f64,
    x2: f64,
}

fn quad(a: f64, b: f64, c: f64, x: f64) -> f64 {
    (a * x + b) * x + c
}

impl QuadraticIntervalProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: f64,
        b: f64,
        c: f64,
        a0: f64,
        b0: f64,
        c0: f64,
        x1: f64,
        x2: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("a", a),
            ("b", b),
            ("c", c),
            ("a0", a0),
            ("b0", b0),
            ("c0", c0),
        ] {
            check_finite(name, v)?;
        }
        check_interval(x1, x2)?;
        if !(a > 0.0) {
            return Err(Error::InvalidProblem(format!(
                "a must be positive (got {a})"
            )));
        }
        let mut checks = vec![("x1", x1), ("x2", x2)];
        let vertex = -b / (2.0 * a);
        if x1 < vertex && vertex < x2 {
            checks.push(("the vertex -b/(2a)", vertex));
        }
        for (name, x) in checks {
            let w = quad(a, b, c, x);
            if !(w > 0.0) {
                return Err(Error::InvalidProblem(format!(
                    "denominator a*x^2 + b*x + c must be positive at {name} = {x} (got {w})"
                )));
            }
        }
        Ok(QuadraticIntervalProblem {
            a,
            b,
            c,
            a0,
            b0,
            c0,
            x1,
            x2,
        })
    }

    /// `(a, b, c, a0, b0, c0, x1, x2)`
    pub fn coefficients(&self) -> [f64; 8] {
        [
            self.a, self.b, self.c, self.a0, self.b0, self.c0, self.x1, self.x2,
        ]
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.x1, self.x2)
    }

    pub fn numerator_at(&self, x: f64) -> f64 {
        quad(self.a0, self.b0, self.c0, x)
    }

    pub fn denominator_at(&self, x: f64) -> f64 {
        quad(self.a, self.b, self.c, x)
    }

    /// Coefficients of `J_beta(x) = A x² + B x + C` for the difference reduction.
    fn parametric(&self, beta: f64) -> (f64, f64, f64) {
        (
            self.a0 - beta * self.a,
            self.b0 - beta * self.b,
            self.c0 - beta * self.c,
        )
    }

    /// Stationary point `-B / (2A)` of the parametric objective, if `A != 0`.
    pub fn stationary_point(&self, beta: f64) -> Option<f64> {
        let (a, b, _) = self.parametric(beta);
        (a != 0.0).then(|| -b / (2.0 * a))
    }

    /// Best of `x1`, the stationary point when it lies inside, and `x2`, in
    /// that order; ties go to the smaller `x`.
    pub fn argmax(&self, beta: f64) -> f64 {
        let (a, b, c) = self.parametric(beta);
        let mut candidates = vec![self.x1];
        if let Some(x3) = self.stationary_point(beta) {
            if self.x1 < x3 && x3 < self.x2 {
                candidates.push(x3);
            }
        }
        candidates.push(self.x2);
        argmax_of(&candidates, |x| quad(a, b, c, x))
    }

    /// `j(beta) = max{J_beta(x1), J_beta(x2), J_beta(x3)}`.
    pub fn j(&self, beta: f64) -> f64 {
        let (a, b, c) = self.parametric(beta);
        quad(a, b, c, self.argmax(beta))
    }

    /// Maximizer of the quartic `W (W0 - beta W)`: endpoints plus the real
    /// critical points inside the interval.
    fn argmax_weighted(&self, beta: f64) -> f64 {
        let (p2, p1, p0) = (self.a, self.b, self.c);
        let (q2, q1, q0) = self.parametric(beta);
        let e4 = p2 * q2;
        let e3 = p2 * q1 + p1 * q2;
        let e2 = p2 * q0 + p1 * q1 + p0 * q2;
        let e1 = p1 * q0 + p0 * q1;
        let g = |x: f64| quad(p2, p1, p0, x) * quad(q2, q1, q0, x);
        let dg = |x: f64| ((4.0 * e4 * x + 3.0 * e3) * x + 2.0 * e2) * x + e1;
        let ddg = |x: f64| (12.0 * e4 * x + 6.0 * e3) * x + 2.0 * e2;

        let mut candidates = vec![self.x1, self.x2];
        for &root in find_roots_cubic(4.0 * e4, 3.0 * e3, 2.0 * e2, e1).as_ref() {
            let mut x = root;
            for _ in 0..3 {
                let curvature = ddg(x);
                if curvature == 0.0 {
                    break;
                }
                let next = x - dg(x) / curvature;
                if !next.is_finite() {
                    break;
                }
                x = next;
            }
            if self.x1 < x && x < self.x2 {
                candidates.push(x);
            }
        }
        candidates.sort_by(f64::total_cmp);
        argmax_of(&candidates, g)
    }
}

impl RatioProblem for QuadraticIntervalProblem {
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
