//! Brute-force grid maximizers of `W0 / W`, independent of the reduction.
//!
//! These exist to cross-check the solvers: they never form `J_beta` and never
//! look for a root. On ties the first node in scan order wins.

use crate::error::{Error, Result};
use crate::problems::HilbertBallProblem;
use crate::reduction::RatioProblem;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<P> {
    pub x_star: P,
    /// `W0(x_star) / W(x_star)`
    pub j_star: f64,
    pub resolution: usize,
}

/// Node `i` of a grid splitting `[lo, hi]` into `cells` equal cells.
///
/// Grids with `2 * cells` cells contain every node of the coarser grid
/// exactly, so refining never loses a node.
fn node(lo: f64, hi: f64, cells: usize, i: usize) -> f64 {
    if i == cells {
        hi
    } else {
        lo + i as f64 * ((hi - lo) / cells as f64)
    }
}

/// Maximizes `w0(x) / w(x)` over `resolution + 1` equally spaced nodes of
/// `[x1, x2]` (`resolution` cells).
pub fn grid_max_interval<N, D>(
    w0: N,
    w: D,
    x1: f64,
    x2: f64,
    resolution: usize,
) -> Result<OracleResult<f64>>
where
    N: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if resolution < 2 || !(x1 < x2) {
        return Err(Error::InvalidOptions(format!(
            "oracle grid needs resolution >= 2 and x1 < x2 (got {resolution}, [{x1}, {x2}])"
        )));
    }
    let mut best: Option<(f64, f64)> = None;
    for i in 0..=resolution {
        let x = node(x1, x2, resolution, i);
        let den = w(x);
        if den == 0.0 {
            return Err(Error::OracleDomain { x });
        }
        let value = w0(x) / den;
        if best.is_none_or(|(_, v)| value > v) {
            best = Some((x, value));
        }
    }
    let (x_star, j_star) = best.expect("grid has at least three nodes");
    Ok(OracleResult {
        x_star,
        j_star,
        resolution,
    })
}

/// Grid oracle over an interval problem's own functionals.
pub fn grid_max_problem<R>(
    problem: &R,
    x1: f64,
    x2: f64,
    resolution: usize,
) -> Result<OracleResult<f64>>
where
    R: RatioProblem<Point = f64> + ?Sized,
{
    grid_max_interval(
        |x| problem.numerator(&x),
        |x| problem.denominator(&x),
        x1,
        x2,
        resolution,
    )
}

/// Maximizes the ball ratio over a polar grid of the disk of radius `r` in
/// `span{w0, w}`.
///
/// The ratio depends on `x` only through `<w0, x>` and `<w, x>`, so the
/// projection of any maximizer onto that span is again a maximizer. The grid
/// has `resolution` radial cells and `resolution` angles; when `w0` and `w`
/// are parallel the span is a line and `[-r, r]` is split into
/// `resolution²` cells instead.
pub fn disk_max_ball(p: &HilbertBallProblem, resolution: usize) -> Result<OracleResult<Vec<f64>>> {
    if resolution < 2 {
        return Err(Error::InvalidOptions(
            "disk oracle needs resolution >= 2".into(),
        ));
    }
    let basis = p.span_basis();
    let coords = |v: &[f64]| -> Vec<f64> {
        basis
            .iter()
            .map(|b| v.iter().zip(b).map(|(x, y)| x * y).sum())
            .collect()
    };
    let (c0, c) = (coords(p.w0()), coords(p.w()));
    let (h0, h, r) = (p.h0(), p.h(), p.r());
    let lift = |s: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; p.dimension()];
        for (b, si) in basis.iter().zip(s) {
            x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += si * bi);
        }
        x
    };
    match basis.len() {
        0 => {
            return Err(Error::InvalidOptions(
                "disk oracle needs w0 and w not both zero".into(),
            ))
        }
        1 => {
            let cells = resolution * resolution;
            let mut best = (0.0, f64::NEG_INFINITY);
            for i in 0..=cells {
                let s = node(-r, r, cells, i);
                let value = (c0[0] * s + h0) / (c[0] * s + h);
                if value > best.1 {
                    best = (s, value);
                }
            }
            return Ok(OracleResult {
                x_star: lift(&[best.0]),
                j_star: best.1,
                resolution,
            });
        }
        _ => {}
    }
    let step = std::f64::consts::TAU / resolution as f64;
    let angles: Vec<(f64, f64)> = (0..resolution)
        .map(|k| {
            let t = k as f64 * step;
            (t.cos(), t.sin())
        })
        .collect();
    let mut best = ([0.0, 0.0], f64::NEG_INFINITY);
    for i in 0..=resolution {
        let rho = node(0.0, r, resolution, i);
        for &(cos, sin) in &angles {
            let (s, t) = (rho * cos, rho * sin);
            let value = (c0[0] * s + c0[1] * t + h0) / (c[0] * s + c[1] * t + h);
            if value > best.1 {
                best = ([s, t], value);
            }
            if i == 0 {
                // the centre is a single point
                break;
            }
        }
    }
    Ok(OracleResult {
        x_star: lift(&best.0),
        j_star: best.1,
        resolution,
    })
}

/// Upper bound on how far the grid maximum can sit below the true maximum:
/// one cell width times twice the steepest slope seen between neighbouring
/// nodes.
pub fn interval_gap_bound<N, D>(w0: N, w: D, x1: f64, x2: f64, resolution: usize) -> f64
where
    N: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let spacing = (x2 - x1) / resolution as f64;
    let ratio = |x: f64| w0(x) / w(x);
    let mut prev = ratio(x1);
    let mut lipschitz: f64 = 0.0;
    for i in 1..=resolution {
        let v = ratio(node(x1, x2, resolution, i));
        lipschitz = lipschitz.max((v - prev).abs() / spacing);
        prev = v;
    }
    2.0 * lipschitz * spacing
}
