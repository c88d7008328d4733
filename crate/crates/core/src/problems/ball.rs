use serde::{Deserialize, Serialize};

use super::check_finite;
use super::search::golden_max;
use crate::error::{Error, Result};
use crate::reduction::{RatioProblem, ReductionMode, Solution};
use crate::vector::{axpy_neg, dot, norm, scaled};

/// `(<w0, x> + h0) / (<w, x> + h)` over the ball `‖x‖ <= r` in `R^n`.
///
/// Requires `h > r ‖w‖`, which keeps the denominator positive on the ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertBallProblem {
    w0: Vec<f64>,
    w: Vec<f64>,
    h0: f64,
    h: f64,
    r: f64,
}

/// One row of the asymptote sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptotePoint {
    pub beta: f64,
    /// `r ‖w0 - beta w‖`
    pub y1: f64,
    /// `beta h - h0`
    pub y2: f64,
    /// `-r ‖w‖ beta + r <w0, w~>`, the asymptote of `y1` as `beta -> -inf`.
    pub y3: f64,
    /// `r ‖w‖ beta - r <w0, w~>`, the asymptote of `y1` as `beta -> +inf`.
    pub y4: f64,
}

/// Number of boundary angles scanned by the weighted-mode maximizer.
const CIRCLE_SCAN: usize = 1024;

impl HilbertBallProblem {
    pub fn new(w0: Vec<f64>, w: Vec<f64>, h0: f64, h: f64, r: f64) -> Result<Self> {
        if w0.is_empty() || w0.len() != w.len() {
            return Err(Error::InvalidProblem(format!(
                "w0 and w must be non-empty and of equal length (got {} and {})",
                w0.len(),
                w.len()
            )));
        }
        if w0.iter().chain(&w).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem(
                "vector entries must be finite".into(),
            ));
        }
        for (name, v) in [("h0", h0), ("h", h), ("r", r)] {
            check_finite(name, v)?;
        }
        if !(r > 0.0) {
            return Err(Error::InvalidProblem(format!(
                "radius r must be positive (got {r})"
            )));
        }
        let bound = r * norm(&w);
        if !(h > bound) {
            return Err(Error::InvalidProblem(format!(
                "h must exceed r*|w| = {bound} (got h = {h})"
            )));
        }
        Ok(HilbertBallProblem { w0, w, h0, h, r })
    }

    pub fn dimension(&self) -> usize {
        self.w0.len()
    }

    pub fn w0(&self) -> &[f64] {
        &self.w0
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `<w0, w~>` with `w~ = w / ‖w‖`, taken as zero when `w = 0`.
    fn w0_along_w(&self) -> f64 {
        let nw = norm(&self.w);
        if nw == 0.0 {
            0.0
        } else {
            dot(&self.w0, &self.w) / nw
        }
    }

    fn unit(&self, axis: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.dimension()];
        e[axis] = self.r;
        e
    }

    /// `x_beta = r w_beta / ‖w_beta‖` with `w_beta = w0 - beta w`; falls back
    /// to `r e1` when `w_beta = 0`, where every point of the sphere is optimal.
    pub fn argmax(&self, beta: f64) -> Vec<f64> {
        let w_beta = axpy_neg(&self.w0, beta, &self.w);
        let n = norm(&w_beta);
        if n == 0.0 {
            self.unit(0)
        } else {
            scaled(&w_beta, self.r / n)
        }
    }

    /// `j(beta) = r ‖w0 - beta w‖ + h0 - beta h`.
    pub fn j(&self, beta: f64) -> f64 {
        self.r * norm(&axpy_neg(&self.w0, beta, &self.w)) + self.h0 - beta * self.h
    }

    fn j_slope(&self, beta: f64) -> f64 {
        let w_beta = axpy_neg(&self.w0, beta, &self.w);
        let n = norm(&w_beta);
        let along = if n == 0.0 {
            0.0
        } else {
            -dot(&self.w, &w_beta) / n
        };
        self.r * along - self.h
    }

    /// Solves `r ‖w0 - beta w‖ = beta h - h0` by squaring it into a quadratic
    /// in `beta` and keeping the root with `beta h - h0 >= 0`.
    pub fn solve_quadratic(&self) -> Result<Solution<Vec<f64>>> {
        let r2 = self.r * self.r;
        let qa = r2 * dot(&self.w, &self.w) - self.h * self.h;
        let qb = r2 * dot(&self.w0, &self.w) - self.h0 * self.h;
        let qc = r2 * dot(&self.w0, &self.w0) - self.h0 * self.h0;
        // qa beta^2 - 2 qb beta + qc = 0, qa < 0
        let disc = qb * qb - qa * qc;
        let scale = (qb * qb).max((qa * qc).abs()).max(f64::MIN_POSITIVE);
        if disc < -1e-12 * scale {
            return Err(Error::Inconsistent(format!(
                "squared equation has no real root (discriminant {disc})"
            )));
        }
        let sqrt_disc = disc.max(0.0).sqrt();
        let s = qb + sqrt_disc.copysign(qb);
        let mut roots = vec![s / qa];
        if s != 0.0 {
            roots.push(qc / s);
        }
        let slack = 1e-9 * (1.0 + self.h0.abs());
        let mut best: Option<(f64, f64)> = None;
        for beta in roots {
            if beta * self.h - self.h0 < -slack {
                continue;
            }
            let residual = self.j(beta).abs();
            if best.is_none_or(|(_, r)| residual < r) {
                best = Some((beta, residual));
            }
        }
        let Some((mut beta, mut residual)) = best else {
            return Err(Error::Inconsistent(
                "no root of the squared equation satisfies beta*h - h0 >= 0".into(),
            ));
        };
        // squaring loses a few digits when the roots are close; Newton restores them
        for _ in 0..3 {
            let slope = self.j_slope(beta);
            if slope == 0.0 {
                break;
            }
            let next = beta - self.j(beta) / slope;
            let next_residual = self.j(next).abs();
            if !(next_residual < residual) {
                break;
            }
            beta = next;
            residual = next_residual;
        }
        Ok(Solution {
            beta_max: beta,
            x_max: self.argmax(beta),
            residual,
            iterations: 0,
            trace: vec![(beta, self.j(beta))],
        })
    }

    /// Large-`|beta|` estimate of the optimum obtained by replacing
    /// `r ‖w0 - beta w‖` with its asymptotes.
    pub fn asymptotic_estimate(&self) -> Result<f64> {
        let along = self.w0_along_w();
        let nw = norm(&self.w);
        let (num, den) = if self.h0 + self.r * norm(&self.w0) > 0.0 {
            (self.h0 - self.r * along, self.h - self.r * nw)
        } else {
            (self.h0 + self.r * along, self.h + self.r * nw)
        };
        if den == 0.0 {
            return Err(Error::EstimateUndefined);
        }
        Ok(num / den)
    }

    pub fn asymptote_curves(&self, betas: &[f64]) -> Vec<AsymptotePoint> {
        let nw = norm(&self.w);
        let along = self.w0_along_w();
        betas
            .iter()
            .map(|&beta| AsymptotePoint {
                beta,
                y1: self.r * norm(&axpy_neg(&self.w0, beta, &self.w)),
                y2: beta * self.h - self.h0,
                y3: -self.r * nw * beta + self.r * along,
                y4: self.r * nw * beta - self.r * along,
            })
            .collect()
    }

    /// Orthonormal basis of `span{w0, w}` (zero, one or two vectors).
    pub fn span_basis(&self) -> Vec<Vec<f64>> {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(2);
        for v in [&self.w0, &self.w] {
            let scale = norm(v);
            if scale == 0.0 {
                continue;
            }
            let mut u = v.clone();
            for b in &basis {
                let c = dot(&u, b);
                u.iter_mut().zip(b).for_each(|(ui, bi)| *ui -= c * bi);
            }
            let n = norm(&u);
            if n > 1e-12 * scale {
                basis.push(scaled(&u, 1.0 / n));
            }
        }
        basis
    }

    /// Maximizer of `(<w, x> + h)(<w_beta, x> + h_beta)` over the ball.
    ///
    /// The objective depends on `x` only through its projection onto
    /// `span{w0, w}`. In a plane the product of two affine functions has no
    /// interior strict maximum, so the circle of radius `r` is scanned and the
    /// best local maxima refined. On a line the quadratic is maximized on
    /// `[-r, r]` directly.
    fn argmax_weighted(&self, beta: f64) -> Vec<f64> {
        let basis = self.span_basis();
        let h_beta = self.h0 - beta * self.h;
        let w_beta = axpy_neg(&self.w0, beta, &self.w);
        let coords = |v: &[f64]| -> Vec<f64> { basis.iter().map(|b| dot(v, b)).collect() };
        let (cw, cb) = (coords(&self.w), coords(&w_beta));
        let lift = |c: &[f64]| -> Vec<f64> {
            let mut x = vec![0.0; self.dimension()];
            for (b, ci) in basis.iter().zip(c) {
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += ci * bi);
            }
            x
        };
        match basis.len() {
            0 => self.unit(0),
            1 if self.dimension() == 1 => {
                let (p, q) = (cw[0], cb[0]);
                let g = |s: f64| (p * s + self.h) * (q * s + h_beta);
                let mut candidates = vec![-self.r];
                if p * q != 0.0 {
                    let vertex = -(p * h_beta + q * self.h) / (2.0 * p * q);
                    if vertex.abs() < self.r {
                        candidates.push(vertex);
                    }
                }
                candidates.push(self.r);
                vec![super::linear::argmax_of(&candidates, g)]
            }
            _ => {
                // a line in n >= 2 dimensions still leaves a full circle to scan
                let (u, v) = if basis.len() == 2 {
                    ((cw[0], cb[0]), (cw[1], cb[1]))
                } else {
                    ((cw[0], cb[0]), (0.0, 0.0))
                };
                let r = self.r;
                let phi = |t: f64| {
                    let (c, s) = (t.cos(), t.sin());
                    (r * (u.0 * c + v.0 * s) + self.h) * (r * (u.1 * c + v.1 * s) + h_beta)
                };
                let step = std::f64::consts::TAU / CIRCLE_SCAN as f64;
                let values: Vec<f64> = (0..CIRCLE_SCAN).map(|k| phi(k as f64 * step)).collect();
                let mut best = (0.0, f64::NEG_INFINITY);
                for k in 0..CIRCLE_SCAN {
                    let prev = values[(k + CIRCLE_SCAN - 1) % CIRCLE_SCAN];
                    let next = values[(k + 1) % CIRCLE_SCAN];
                    if values[k] < prev || values[k] < next {
                        continue;
                    }
                    let t = k as f64 * step;
                    let (tr, vr) = golden_max(&phi, t - step, t + step, 1e-13);
                    let (t, v) = if vr > values[k] {
                        (tr, vr)
                    } else {
                        (t, values[k])
                    };
                    if v > best.1 {
                        best = (t, v);
                    }
                }
                let (c, s) = (best.0.cos(), best.0.sin());
                if basis.len() == 2 {
                    lift(&[r * c, r * s])
                } else {
                    let mut x = lift(&[r * c]);
                    // second direction: any unit vector orthogonal to the line
                    let ortho = self.orthogonal_to(&basis[0]);
                    x.iter_mut()
                        .zip(&ortho)
                        .for_each(|(xi, oi)| *xi += r * s * oi);
                    x
                }
            }
        }
    }

    /// A unit vector orthogonal to the unit vector `u` (dimension >= 2).
    fn orthogonal_to(&self, u: &[f64]) -> Vec<f64> {
        // axis least aligned with u
        let axis = (0..u.len())
            .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
            .unwrap_or(0);
        let mut e = vec![0.0; u.len()];
        e[axis] = 1.0;
        let c = u[axis];
        e.iter_mut().zip(u).for_each(|(ei, ui)| *ei -= c * ui);
        let n = norm(&e);
        scaled(&e, 1.0 / n)
    }
}

impl RatioProblem for HilbertBallProblem {
    type Point = Vec<f64>;

    fn numerator(&self, x: &Vec<f64>) -> f64 {
        dot(&self.w0, x) + self.h0
    }

    fn denominator(&self, x: &Vec<f64>) -> f64 {
        dot(&self.w, x) + self.h
    }

    fn argmax_parametric(&self, beta: f64, mode: ReductionMode) -> Result<Vec<f64>> {
        Ok(match mode {
            ReductionMode::Difference => self.argmax(beta),
            ReductionMode::WeightedDifference => self.argmax_weighted(beta),
        })
    }

    fn reference_point(&self) -> Vec<f64> {
        vec![0.0; self.dimension()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::evaluate_j;

    fn example(h0: f64) -> HilbertBallProblem {
        HilbertBallProblem::new(
            vec![1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 10.0],
            vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            h0,
            2.7,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn j_at_zero() {
        let s = 105f64.sqrt();
        assert!((example(15.0).j(0.0) - (s + 15.0)).abs() < 1e-12);
        assert!((example(-15.0).j(0.0) - (s - 15.0)).abs() < 1e-12);
    }

    #[test]
    fn argmax_at_zero_is_normalized_w0() {
        let p = example(15.0);
        let x = p.argmax(0.0);
        let n = 105f64.sqrt();
        for (xi, wi) in x.iter().zip(p.w0()) {
            assert!((xi - wi / n).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_direction_falls_back_to_first_axis() {
        let p = HilbertBallProblem::new(vec![2.0, 4.0], vec![1.0, 2.0], 0.0, 10.0, 2.0).unwrap();
        assert_eq!(p.argmax(2.0), vec![2.0, 0.0]);
    }

    #[test]
    fn identity_ratio() {
        let p = HilbertBallProblem::new(vec![1.0, -2.0, 0.5], vec![1.0, -2.0, 0.5], 4.0, 4.0, 1.0)
            .unwrap();
        let s = p.solve_quadratic().unwrap();
        assert!((s.beta_max - 1.0).abs() < 1e-12);
        assert_eq!(p.asymptotic_estimate().unwrap(), 1.0);
    }

    #[test]
    fn validation() {
        assert!(HilbertBallProblem::new(vec![1.0], vec![1.0, 0.0], 0.0, 5.0, 1.0).is_err());
        assert!(HilbertBallProblem::new(vec![], vec![], 0.0, 5.0, 1.0).is_err());
        assert!(HilbertBallProblem::new(vec![1.0], vec![3.0], 0.0, 3.0, 1.0).is_err());
        assert!(HilbertBallProblem::new(vec![1.0], vec![3.0], 0.0, 5.0, 0.0).is_err());
    }

    #[test]
    fn asymptote_columns_at_zero() {
        let p = example(15.0);
        let row = p.asymptote_curves(&[0.0])[0];
        assert!((row.y1 - 105f64.sqrt()).abs() < 1e-12);
        assert_eq!(row.y2, -15.0);
        assert!((row.y3 + row.y4).abs() < 1e-12);
    }

    #[test]
    fn weighted_argmax_beats_span_grid() {
        let p = HilbertBallProblem::new(
            vec![1.0, -2.0, 0.5, 3.0],
            vec![0.5, 1.0, -1.0, 0.2],
            1.5,
            4.0,
            1.3,
        )
        .unwrap();
        let basis = p.span_basis();
        assert_eq!(basis.len(), 2);
        for beta in [-4.0, -1.0, 0.0, 0.3, 2.0, 7.0] {
            let x = p.argmax_weighted(beta);
            assert!(norm(&x) <= p.r() * (1.0 + 1e-12));
            let g = |x: &Vec<f64>| {
                ReductionMode::WeightedDifference.objective(p.numerator(x), p.denominator(x), beta)
            };
            let best = g(&x);
            for i in 0..=60 {
                for k in 0..240 {
                    let rho = p.r() * i as f64 / 60.0;
                    let t = std::f64::consts::TAU * k as f64 / 240.0;
                    let y: Vec<f64> = (0..4)
                        .map(|d| rho * (t.cos() * basis[0][d] + t.sin() * basis[1][d]))
                        .collect();
                    assert!(best >= g(&y) - 1e-10, "beta {beta}");
                }
            }
        }
    }

    #[test]
    fn weighted_and_difference_j_agree_in_sign() {
        let p = example(15.0);
        for beta in [0.0, 20.0, 43.0, 44.0, 80.0] {
            let (_, jd) = evaluate_j(&p, beta, ReductionMode::Difference).unwrap();
            let (_, jw) = evaluate_j(&p, beta, ReductionMode::WeightedDifference).unwrap();
            assert_eq!(jd.signum(), jw.signum(), "beta {beta}");
        }
    }
}
