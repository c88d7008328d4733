use std::fmt;

use super::search::IntervalSearch;
use super::{check_interval, ScalarFn};
use crate::error::Result;
use crate::reduction::{RatioProblem, ReductionMode};

/// Ratio of two arbitrary scalar functions on `[x1, x2]`.
///
/// No sign requirement is imposed on the denominator at construction; the
/// reduction mode checks it at every parametric maximizer.
#[derive(Clone)]
pub struct FunctionalIntervalProblem {
    numerator: ScalarFn,
    denominator: ScalarFn,
    x1: f64,
    x2: f64,
    search: IntervalSearch,
}

impl fmt::Debug for FunctionalIntervalProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionalIntervalProblem")
            .field("x1", &self.x1)
            .field("x2", &self.x2)
            .field("search", &self.search)
            .finish_non_exhaustive()
    }
}

impl FunctionalIntervalProblem {
    pub fn new(
        numerator: ScalarFn,
        denominator: ScalarFn,
        x1: f64,
        x2: f64,
        search: IntervalSearch,
    ) -> Result<Self> {
        check_interval(x1, x2)?;
        search.validate()?;
        Ok(FunctionalIntervalProblem {
            numerator,
            denominator,
            x1,
            x2,
            search,
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.x1, self.x2)
    }

    pub fn search(&self) -> IntervalSearch {
        self.search
    }
}

impl RatioProblem for FunctionalIntervalProblem {
    type Point = f64;

    fn numerator(&self, x: &f64) -> f64 {
        (self.numerator)(*x)
    }

    fn denominator(&self, x: &f64) -> f64 {
        (self.denominator)(*x)
    }

    fn argmax_parametric(&self, beta: f64, mode: ReductionMode) -> Result<f64> {
        let objective = |x: f64| mode.objective((self.numerator)(x), (self.denominator)(x), beta);
        let (x, _) = self.search.maximize(objective, self.x1, self.x2)?;
        Ok(x)
    }

    fn reference_point(&self) -> f64 {
        self.x1 + (self.x2 - self.x1) / 2.0
    }
}
