//! Root finding for the strictly sign-structured function `j(beta)`.
//!
//! `j` is positive to the left of its root and negative to the right, so a
//! [`Bracket`] always has a fixed orientation. All routines only ever call the
//! evaluator at points strictly inside the current bracket and keep that
//! orientation intact.

use crate::error::{Error, Result};
use crate::reduction::SolverOptions;

/// Default multiplier applied to the probe step while searching for a bracket.
pub const BRACKET_EXPANSION: f64 = 2.0;
/// Default number of expansion probes.
pub const BRACKET_BUDGET: usize = 64;
/// Distance of the first probe from the seed.
pub const INITIAL_STEP: f64 = 1.0;

/// Interval `[beta_lo, beta_hi]` with `j(beta_lo) > 0 > j(beta_hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub j_lo: f64,
    pub j_hi: f64,
}

impl Bracket {
    pub fn new(beta_lo: f64, beta_hi: f64, j_lo: f64, j_hi: f64) -> Result<Self> {
        let bracket = Bracket {
            beta_lo,
            beta_hi,
            j_lo,
            j_hi,
        };
        bracket.validate()?;
        Ok(bracket)
    }

    /// Checks the orientation invariant. A reversed bracket is rejected rather
    /// than swapped.
    pub fn validate(&self) -> Result<()> {
        let ok = self.beta_lo.is_finite()
            && self.beta_hi.is_finite()
            && self.beta_lo < self.beta_hi
            && self.j_lo > 0.0
            && self.j_hi < 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidBracket {
                beta_lo: self.beta_lo,
                beta_hi: self.beta_hi,
                j_lo: self.j_lo,
                j_hi: self.j_hi,
            })
        }
    }

    pub fn width(&self) -> f64 {
        self.beta_hi - self.beta_lo
    }

    pub fn midpoint(&self) -> f64 {
        self.beta_lo + (self.beta_hi - self.beta_lo) / 2.0
    }

    pub fn contains_strictly(&self, beta: f64) -> bool {
        self.beta_lo < beta && beta < self.beta_hi
    }

    /// Replaces the end on the same side of the root as `beta`.
    fn shrink(&mut self, beta: f64, j: f64) {
        if j > 0.0 {
            self.beta_lo = beta;
            self.j_lo = j;
        } else {
            self.beta_hi = beta;
            self.j_hi = j;
        }
    }

    /// The end with the smaller `|j|`, left end on ties.
    fn best_end(&self) -> (f64, f64) {
        if self.j_lo.abs() <= self.j_hi.abs() {
            (self.beta_lo, self.j_lo)
        } else {
            (self.beta_hi, self.j_hi)
        }
    }
}

/// Outcome of [`find_bracket`]: a probe may land exactly on the root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BracketSearch {
    Bracketed(Bracket),
    Root { beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootReport {
    pub root: f64,
    /// `j(root)` as last evaluated.
    pub j_root: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub final_bracket_width: f64,
}

fn checked(beta: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NotFinite { at: beta, value })
    }
}

/// Locates a sign change of `j` by geometric expansion away from `seed`.
///
/// The sign of `j(seed)` tells on which side of the seed the root lies; probes
/// are placed at `seed ± step` with `step` starting at [`INITIAL_STEP`] and
/// multiplied by `expansion_factor` after every probe that keeps the sign.
/// Makes at most `budget + 1` evaluations.
pub fn find_bracket<F>(
    mut j: F,
    seed: f64,
    expansion_factor: f64,
    budget: usize,
) -> Result<BracketSearch>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(expansion_factor > 1.0) || budget == 0 || !seed.is_finite() {
        return Err(Error::InvalidOptions(format!(
            "bracket search needs expansion_factor > 1, budget >= 1 and a finite seed \
             (got {expansion_factor}, {budget}, {seed})"
        )));
    }
    let j_seed = checked(seed, j(seed)?)?;
    if j_seed == 0.0 {
        return Ok(BracketSearch::Root { beta: seed });
    }
    // Root lies to the right of a positive seed and to the left of a negative one.
    let direction = if j_seed > 0.0 { 1.0 } else { -1.0 };
    let (mut near, mut j_near) = (seed, j_seed);
    let mut step = INITIAL_STEP;
    let mut last = (seed, j_seed);
    for _ in 0..budget {
        let probe = seed + direction * step;
        let j_probe = checked(probe, j(probe)?)?;
        last = (probe, j_probe);
        if j_probe == 0.0 {
            return Ok(BracketSearch::Root { beta: probe });
        }
        if j_probe.signum() != j_seed.signum() {
            let bracket = if direction > 0.0 {
                Bracket::new(near, probe, j_near, j_probe)?
            } else {
                Bracket::new(probe, near, j_probe, j_near)?
            };
            return Ok(BracketSearch::Bracketed(bracket));
        }
        near = probe;
        j_near = j_probe;
        step *= expansion_factor;
    }
    let ((beta_lo, j_lo), (beta_hi, j_hi)) = if direction > 0.0 {
        ((seed, j_seed), last)
    } else {
        (last, (seed, j_seed))
    };
    Err(Error::NoBracket {
        beta_lo,
        beta_hi,
        j_lo,
        j_hi,
    })
}

/// Plain bisection.
///
/// Stops once `|j(mid)| <= tolerance_j`, once the bracket is no wider than
/// `tolerance_beta`, or once the bracket can no longer be split in floating
/// point. In the latter two cases the bracket end with the smaller `|j|` is
/// reported.
pub fn bisect<F>(j: F, bracket: Bracket, opts: &SolverOptions) -> Result<RootReport>
where
    F: FnMut(f64) -> Result<f64>,
{
    hybrid_solve(j, |b: &Bracket| Ok(b.midpoint()), bracket, opts)
}

/// Bracket-safeguarded iteration driven by an arbitrary step proposer.
///
/// `propose` sees the current bracket and returns a candidate `beta`. The
/// candidate is accepted only if it lies strictly inside the bracket, and only
/// while accepted proposals keep at least halving the bracket; otherwise the
/// midpoint is used for the next evaluation. The bracket width strictly
/// decreases at every iteration.
pub fn hybrid_solve<F, P>(
    mut j: F,
    mut propose: P,
    bracket: Bracket,
    opts: &SolverOptions,
) -> Result<RootReport>
where
    F: FnMut(f64) -> Result<f64>,
    P: FnMut(&Bracket) -> Result<f64>,
{
    opts.validate()?;
    bracket.validate()?;
    let mut b = bracket;
    let mut evaluations = 0;
    let mut best = b.best_end();
    let mut force_bisect = false;

    let report = |root: (f64, f64), evaluations, iterations, b: &Bracket| RootReport {
        root: root.0,
        j_root: root.1,
        evaluations,
        iterations,
        final_bracket_width: b.width(),
    };

    for iteration in 0..opts.max_iterations {
        let mid = b.midpoint();
        if b.width() <= opts.tolerance_beta || !b.contains_strictly(mid) {
            return Ok(report(b.best_end(), evaluations, iteration, &b));
        }
        let width_before = b.width();
        let mut proposed = false;
        let candidate = if force_bisect {
            mid
        } else {
            let p = propose(&b)?;
            if p.is_finite() && b.contains_strictly(p) {
                proposed = true;
                p
            } else {
                mid
            }
        };
        let jc = checked(candidate, j(candidate)?)?;
        evaluations += 1;
        if jc.abs() < best.1.abs() {
            best = (candidate, jc);
        }
        if jc.abs() <= opts.tolerance_j {
            b.shrink(candidate, jc);
            return Ok(report((candidate, jc), evaluations, iteration + 1, &b));
        }
        b.shrink(candidate, jc);
        force_bisect = proposed && b.width() > width_before / 2.0;
    }
    if b.width() <= opts.tolerance_beta {
        return Ok(report(b.best_end(), evaluations, opts.max_iterations, &b));
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        best_beta: best.0,
        best_residual: best.1.abs(),
        trace: Vec::new(),
    })
}
