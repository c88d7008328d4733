//! Random valid instances for property tests and benchmarks.
//!
//! Coefficients are drawn uniformly from `[-10, 10]` and redrawn until the
//! family's validity conditions hold. Ball dimensions range over `2..=16`.

use std::sync::Arc;

use rand::Rng;

use crate::problems::{
    FunctionalIntervalProblem, HilbertBallProblem, IntervalSearch, LinearIntervalProblem,
    LogRatioProblem, QuadraticIntervalProblem, ScalarFn,
};

pub const COEFFICIENT_RANGE: f64 = 10.0;

fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(-COEFFICIENT_RANGE..=COEFFICIENT_RANGE)
}

fn interval<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    loop {
        let (a, b) = (coefficient(rng), coefficient(rng));
        if a != b {
            return (a.min(b), a.max(b));
        }
    }
}

pub fn linear<R: Rng + ?Sized>(rng: &mut R) -> LinearIntervalProblem {
    loop {
        let a = rng.gen_range(0.0..=COEFFICIENT_RANGE);
        let (x1, x2) = interval(rng);
        let (b, a0, b0) = (coefficient(rng), coefficient(rng), coefficient(rng));
        if let Ok(p) = LinearIntervalProblem::new(a, b, a0, b0, x1, x2) {
            return p;
        }
    }
}

pub fn quadratic<R: Rng + ?Sized>(rng: &mut R) -> QuadraticIntervalProblem {
    loop {
        let a = rng.gen_range(0.0..=COEFFICIENT_RANGE);
        let (b, c) = (coefficient(rng), coefficient(rng));
        let (a0, b0, c0) = (coefficient(rng), coefficient(rng), coefficient(rng));
        let (x1, x2) = interval(rng);
        if let Ok(p) = QuadraticIntervalProblem::new(a, b, c, a0, b0, c0, x1, x2) {
            return p;
        }
    }
}

pub fn ball<R: Rng + ?Sized>(rng: &mut R) -> HilbertBallProblem {
    let n = rng.gen_range(2..=16);
    loop {
        let w0: Vec<f64> = (0..n).map(|_| coefficient(rng)).collect();
        let w: Vec<f64> = (0..n).map(|_| coefficient(rng)).collect();
        let (h0, h) = (coefficient(rng), coefficient(rng));
        let r = rng.gen_range(0.0..=COEFFICIENT_RANGE);
        if let Ok(p) = HilbertBallProblem::new(w0, w, h0, h, r) {
            return p;
        }
    }
}

/// Coefficients of `f0(x) = p0 + p1 x + p2 x²` and `f(x) = q0 + q1 x + q2 x²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRatioCoefficients {
    pub f0: [f64; 3],
    pub f: [f64; 3],
    pub x1: f64,
    pub x2: f64,
}

impl LogRatioCoefficients {
    pub fn f0(&self) -> ScalarFn {
        let [p0, p1, p2] = self.f0;
        Arc::new(move |x: f64| p0 + x * (p1 + x * p2))
    }

    pub fn f(&self) -> ScalarFn {
        let [q0, q1, q2] = self.f;
        Arc::new(move |x: f64| q0 + x * (q1 + x * q2))
    }

    pub fn problem(&self) -> LogRatioProblem {
        LogRatioProblem::new(
            self.f0(),
            self.f(),
            self.x1,
            self.x2,
            IntervalSearch::default(),
        )
        .expect("generated coefficients are valid")
    }
}

/// Exact minimum of `c0 + c1 x + c2 x²` on `[x1, x2]`.
fn quadratic_min(c: [f64; 3], x1: f64, x2: f64) -> f64 {
    let eval = |x: f64| c[0] + x * (c[1] + x * c[2]);
    let mut m = eval(x1).min(eval(x2));
    if c[2] > 0.0 {
        let v = -c[1] / (2.0 * c[2]);
        if x1 < v && v < x2 {
            m = m.min(eval(v));
        }
    }
    m
}

/// Smooth instance with `f0 >= 0.1` and `f >= 1.1` on the interval.
pub fn log_ratio<R: Rng + ?Sized>(rng: &mut R) -> LogRatioCoefficients {
    loop {
        let (x1, x2) = interval(rng);
        let f0 = [coefficient(rng), coefficient(rng), coefficient(rng)];
        let f = [coefficient(rng), coefficient(rng), coefficient(rng)];
        if quadratic_min(f0, x1, x2) >= 0.1 && quadratic_min(f, x1, x2) >= 1.1 {
            return LogRatioCoefficients { f0, f, x1, x2 };
        }
    }
}

/// Affine ratio whose denominator has a fixed but arbitrary sign on the
/// interval; only the weighted reduction applies when it is negative.
pub fn signed_affine<R: Rng + ?Sized>(rng: &mut R) -> FunctionalIntervalProblem {
    loop {
        let (x1, x2) = interval(rng);
        let (a, b, a0, b0) = (
            coefficient(rng),
            coefficient(rng),
            coefficient(rng),
            coefficient(rng),
        );
        let (w1, w2) = (a * x1 + b, a * x2 + b);
        if w1.signum() == w2.signum() && w1.abs().min(w2.abs()) > 0.1 {
            return FunctionalIntervalProblem::new(
                Arc::new(move |x| a0 * x + b0),
                Arc::new(move |x| a * x + b),
                x1,
                x2,
                IntervalSearch::default(),
            )
            .expect("valid interval");
        }
    }
}
