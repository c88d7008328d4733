use std::fmt;

use crate::reduction::ReductionMode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Nesting level of a failure inside the nested log-ratio scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Inner,
    Outer,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Inner => f.write_str("inner"),
            Level::Outer => f.write_str("outer"),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid solver options: {0}")]
    InvalidOptions(String),

    #[error("denominator {denominator} at the parametric maximizer violates mode {mode:?}")]
    ModeViolation {
        mode: ReductionMode,
        denominator: f64,
    },

    #[error("ratio undefined: denominator is zero")]
    DivisionDomain,

    #[error("invalid bracket [{beta_lo}, {beta_hi}] with j = ({j_lo}, {j_hi}); expected j_lo > 0 > j_hi")]
    InvalidBracket {
        beta_lo: f64,
        beta_hi: f64,
        j_lo: f64,
        j_hi: f64,
    },

    #[error("no sign change found; last probed interval [{beta_lo}, {beta_hi}] with j = ({j_lo}, {j_hi})")]
    NoBracket {
        beta_lo: f64,
        beta_hi: f64,
        j_lo: f64,
        j_hi: f64,
    },

    #[error("no convergence after {iterations} iterations (best beta {best_beta}, |j| = {best_residual})")]
    NonConvergence {
        iterations: usize,
        best_beta: f64,
        best_residual: f64,
        trace: Vec<(f64, f64)>,
    },

    #[error("strategy {0} is only defined for the difference reduction")]
    UnsupportedStrategy(&'static str),

    #[error("non-finite value {value} while evaluating at {at}")]
    NotFinite { at: f64, value: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("asymptotic estimate undefined: zero denominator")]
    EstimateUndefined,

    #[error("oracle domain error: denominator vanishes at x = {x}")]
    OracleDomain { x: f64 },

    #[error("{level} level: {source}")]
    Nested {
        level: Level,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_level(self, level: Level) -> Self {
        Error::Nested {
            level,
            source: Box::new(self),
        }
    }

    /// True for failures of an iterative scheme to reach its tolerance.
    pub fn is_convergence_failure(&self) -> bool {
        match self {
            Error::NonConvergence { .. } | Error::NoBracket { .. } => true,
            Error::Nested { source, .. } => source.is_convergence_failure(),
            _ => false,
        }
    }
}
