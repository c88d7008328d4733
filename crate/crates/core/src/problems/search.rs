//! Derivative-free maximization of a scalar function on an interval.

use crate::error::{Error, Result};

/// Uniform grid scan followed by golden-section refinement around the best
/// node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSearch {
    /// Number of grid nodes, endpoints included.
    pub grid_resolution: usize,
    /// Bracket width at which golden-section refinement stops.
    pub refine_tolerance: f64,
}

impl Default for IntervalSearch {
    fn default() -> Self {
        IntervalSearch {
            grid_resolution: 4097,
            refine_tolerance: 1e-12,
        }
    }
}

impl IntervalSearch {
    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution < 2 {
            return Err(Error::InvalidProblem(
                "grid_resolution must be at least 2".into(),
            ));
        }
        if !(self.refine_tolerance > 0.0) {
            return Err(Error::InvalidProblem(
                "refine_tolerance must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Grid node `i` of `[x1, x2]`; the last node is exactly `x2`.
    pub fn node(&self, x1: f64, x2: f64, i: usize) -> f64 {
        let last = self.grid_resolution - 1;
        if i == last {
            x2
        } else {
            x1 + i as f64 * ((x2 - x1) / last as f64)
        }
    }

    /// Maximizes `f` on `[x1, x2]`. The first grid node wins ties and the
    /// refined point replaces it only if strictly better.
    pub fn maximize<F: Fn(f64) -> f64>(&self, f: F, x1: f64, x2: f64) -> Result<(f64, f64)> {
        let n = self.grid_resolution;
        let mut best_i = 0;
        let mut best = f(x1);
        if best.is_nan() {
            return Err(Error::NotFinite {
                at: x1,
                value: best,
            });
        }
        for i in 1..n {
            let x = self.node(x1, x2, i);
            let v = f(x);
            if v.is_nan() {
                return Err(Error::NotFinite { at: x, value: v });
            }
            if v > best {
                best = v;
                best_i = i;
            }
        }
        let x_best = self.node(x1, x2, best_i);
        let lo = self.node(x1, x2, best_i.saturating_sub(1));
        let hi = self.node(x1, x2, (best_i + 1).min(n - 1));
        let (xr, vr) = golden_max(&f, lo, hi, self.refine_tolerance);
        if vr > best {
            Ok((xr, vr))
        } else {
            Ok((x_best, best))
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    // ~ log(width / tol) / log(phi) steps; the cap only guards pathological widths.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
