//! Concrete ratio problems with exact parametric maximizers.
//!
//! | family | domain | `W0`, `W` |
//! |---|---|---|
//! | [`LinearIntervalProblem`] | `[x1, x2]` | affine in `x` |
//! | [`QuadraticIntervalProblem`] | `[x1, x2]` | quadratic in `x` |
//! | [`LogRatioProblem`] | `[x1, x2]` | `ln f0`, `ln f` |
//! | [`HilbertBallProblem`] | `{‖x‖ <= r}` in `R^n` | `<w0, x> + h0`, `<w, x> + h` |
//!
//! [`FunctionalIntervalProblem`] accepts arbitrary scalar functions and
//! solves the subproblem by grid scan plus golden-section refinement.

mod ball;
mod interval;
mod linear;
mod logratio;
mod quadratic;
pub mod search;

use std::sync::Arc;

pub use ball::{AsymptotePoint, HilbertBallProblem};
pub use interval::FunctionalIntervalProblem;
pub use linear::LinearIntervalProblem;
pub use logratio::LogRatioProblem;
pub use quadratic::QuadraticIntervalProblem;
pub use search::IntervalSearch;

/// Shared, reentrant scalar function.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub(crate) fn check_interval(x1: f64, x2: f64) -> crate::Result<()> {
    if !(x1.is_finite() && x2.is_finite() && x1 < x2) {
        return Err(crate::Error::InvalidProblem(format!(
            "interval endpoints must be finite with x1 < x2 (got x1 = {x1}, x2 = {x2})"
        )));
    }
    Ok(())
}

pub(crate) fn check_finite(name: &str, value: f64) -> crate::Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::InvalidProblem(format!(
            "{name} must be finite (got {value})"
        )))
    }
}
