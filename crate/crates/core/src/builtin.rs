//! The two built-in ball examples and their published reference values.

use crate::config::{FamilyConfig, ProblemConfig, SolverOverrides};
use crate::problems::HilbertBallProblem;

pub const W0: [f64; 10] = [1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 10.0];
pub const W: [f64; 10] = [1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0];
pub const H: f64 = 2.7;
pub const R: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct BuiltinExample {
    pub name: &'static str,
    pub h0: f64,
    pub h: f64,
    /// Reference values, rounded to two decimals.
    pub reported_beta_max: f64,
    pub reported_estimate: f64,
    pub reported_j0: f64,
}

impl BuiltinExample {
    pub fn problem(&self) -> HilbertBallProblem {
        HilbertBallProblem::new(W0.to_vec(), W.to_vec(), self.h0, self.h, R)
            .expect("built-in example data is valid")
    }

    pub fn config(&self) -> ProblemConfig {
        ProblemConfig::new(
            FamilyConfig::Ball {
                w0: W0.to_vec(),
                w: W.to_vec(),
                h0: self.h0,
                h: self.h,
                r: R,
            },
            SolverOverrides::default(),
        )
    }
}

pub fn examples() -> Vec<BuiltinExample> {
    vec![
        BuiltinExample {
            name: "example-1",
            h0: 15.0,
            h: H,
            reported_beta_max: 43.61,
            reported_estimate: 41.95,
            reported_j0: 25.25,
        },
        BuiltinExample {
            name: "example-2",
            h0: -15.0,
            h: H,
            reported_beta_max: -1.18,
            reported_estimate: -2.04,
            reported_j0: -4.75,
        },
    ]
}
