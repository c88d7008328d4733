//! Command implementations behind the `fracmax` binary.
//!
//! Every command writes to a caller-supplied sink and reports failures as a
//! [`CliError`] whose [`CliError::exit_code`] follows the contract
//! 0 success, 1 example check failed, 2 input error, 3 no convergence.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::builtin::{self, BuiltinExample};
use crate::config::{Family, Instance, ProblemConfig};
use crate::error::Error;
use crate::reduction::{evaluate_j, ratio_value, solve_ratio_max, ReductionMode, SolverOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

/// Default comparison tolerance for the example self-check.
pub const EXAMPLE_TOLERANCE: f64 = 0.01;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Convergence(String),
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Convergence(_) => EXIT_CONVERGENCE,
            CliError::CheckFailed(_) => EXIT_CHECK_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Convergence(m) => write!(f, "solver failed: {m}"),
            CliError::CheckFailed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_convergence_failure() {
            CliError::Convergence(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

fn io_error(context: &str) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{context}: {e}"))
}

pub fn load_config(path: &Path) -> Result<ProblemConfig, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(&path.display().to_string()))?;
    ProblemConfig::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Machine-readable solution record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub beta_max: f64,
    pub x_max: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    /// Asymptotic estimate, ball problems only.
    pub estimate: Option<f64>,
}

pub fn solve_instance(instance: &Instance, opts: &SolverOptions) -> Result<SolveReport, Error> {
    let mode = ReductionMode::Difference;
    let scalar = |s: crate::Solution<f64>| SolveReport {
        beta_max: s.beta_max,
        x_max: vec![s.x_max],
        residual: s.residual,
        iterations: s.iterations,
        estimate: None,
    };
    Ok(match instance {
        Instance::Linear(p) => scalar(solve_ratio_max(p, mode, opts)?),
        Instance::Quadratic(p) => scalar(solve_ratio_max(p, mode, opts)?),
        Instance::LogRatio(p) => scalar(p.solve_direct(opts)?),
        Instance::Ball(p) => {
            let s = solve_ratio_max(p, mode, opts)?;
            SolveReport {
                beta_max: s.beta_max,
                x_max: s.x_max,
                residual: s.residual,
                iterations: s.iterations,
                estimate: p.asymptotic_estimate().ok(),
            }
        }
    })
}

fn family_name(instance: &Instance) -> &'static str {
    match instance {
        Instance::Linear(_) => Family::Linear.name(),
        Instance::Quadratic(_) => Family::Quadratic.name(),
        Instance::LogRatio(_) => Family::LogRatio.name(),
        Instance::Ball(_) => Family::Ball.name(),
    }
}

pub fn write_report<W: Write>(
    out: &mut W,
    instance: &Instance,
    opts: &SolverOptions,
    report: &SolveReport,
) -> io::Result<()> {
    let x = report
        .x_max
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    writeln!(out, "family      {}", family_name(instance))?;
    writeln!(out, "strategy    {}", opts.strategy)?;
    writeln!(out, "beta_max    {}", report.beta_max)?;
    writeln!(out, "x_max       [{x}]")?;
    writeln!(out, "residual    {:e}", report.residual)?;
    writeln!(out, "iterations  {}", report.iterations)?;
    if let Some(e) = report.estimate {
        writeln!(out, "estimate    {e}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct SolveArgs {
    pub strategy: Option<crate::Strategy>,
    pub tolerance: Option<f64>,
    pub json: bool,
    pub dump_config: bool,
}

pub fn cmd_solve<W: Write>(
    config_path: &Path,
    args: &SolveArgs,
    out: &mut W,
) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    if args.dump_config {
        return out
            .write_all(config.to_text().as_bytes())
            .map_err(io_error("stdout"));
    }
    let mut opts = config.solver.apply(SolverOptions::default());
    if let Some(s) = args.strategy {
        opts.strategy = s;
    }
    if let Some(t) = args.tolerance {
        opts.tolerance_j = t;
    }
    opts.validate()?;
    let instance = config
        .instance()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let report = solve_instance(&instance, &opts)?;
    if args.json {
        serde_json::to_writer_pretty(&mut *out, &report)
            .map_err(|e| CliError::Input(e.to_string()))?;
        writeln!(out).map_err(io_error("stdout"))?;
    } else {
        write_report(out, &instance, &opts, &report).map_err(io_error("stdout"))?;
    }
    Ok(())
}

/// One row of a `beta` sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub beta: f64,
    pub j: f64,
    pub ratio_at_xbeta: f64,
}

/// Uniform grid from `from` to `to` inclusive; a single sample requires
/// `from == to`.
pub fn beta_grid(from: f64, to: f64, samples: usize) -> Result<Vec<f64>, CliError> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::Input("sweep bounds must be finite".into()));
    }
    match samples {
        0 => Err(CliError::Input("--samples must be at least 1".into())),
        1 if from == to => Ok(vec![from]),
        1 => Err(CliError::Input(
            "a single sample needs --from equal to --to".into(),
        )),
        _ if !(from < to) => Err(CliError::Input(format!(
            "--from ({from}) must be below --to ({to})"
        ))),
        n => {
            let step = (to - from) / (n - 1) as f64;
            Ok((0..n)
                .map(|i| {
                    if i == n - 1 {
                        to
                    } else {
                        from + i as f64 * step
                    }
                })
                .collect())
        }
    }
}

fn sample<R: crate::RatioProblem + ?Sized>(p: &R, beta: f64) -> Result<CurveSample, Error> {
    let (x, j) = evaluate_j(p, beta, ReductionMode::Difference)?;
    Ok(CurveSample {
        beta,
        j,
        ratio_at_xbeta: ratio_value(p, &x)?,
    })
}

pub fn curve_samples(instance: &Instance, betas: &[f64]) -> Result<Vec<CurveSample>, Error> {
    betas
        .iter()
        .map(|&beta| match instance {
            Instance::Linear(p) => sample(p, beta),
            Instance::Quadratic(p) => sample(p, beta),
            Instance::LogRatio(p) => sample(p, beta),
            Instance::Ball(p) => sample(p, beta),
        })
        .collect()
}

/// 17 significant digits.
fn full(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_curve_csv<W: Write>(out: &mut W, samples: &[CurveSample]) -> io::Result<()> {
    writeln!(out, "beta,j,ratio_at_xbeta")?;
    for s in samples {
        writeln!(
            out,
            "{},{},{}",
            full(s.beta),
            full(s.j),
            full(s.ratio_at_xbeta)
        )?;
    }
    Ok(())
}

pub fn write_asymptote_csv<W: Write>(
    out: &mut W,
    rows: &[crate::problems::AsymptotePoint],
) -> io::Result<()> {
    writeln!(out, "beta,y1,y2,y3,y4")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            full(r.beta),
            full(r.y1),
            full(r.y2),
            full(r.y3),
            full(r.y4)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub samples: usize,
}

/// Explicit bounds, or `[min(0, beta_max), max(0, beta_max)]` from a solve.
fn sweep_grid(
    config: &ProblemConfig,
    instance: &Instance,
    args: &SweepArgs,
) -> Result<Vec<f64>, CliError> {
    let (from, to) = match (args.from, args.to) {
        (Some(f), Some(t)) => (f, t),
        (f, t) => {
            let opts = config.solver.apply(SolverOptions::default());
            let beta = solve_instance(instance, &opts)?.beta_max;
            (f.unwrap_or(beta.min(0.0)), t.unwrap_or(beta.max(0.0)))
        }
    };
    beta_grid(from, to, args.samples)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(io_error(&path.display().to_string()))
}

pub fn cmd_curve(config_path: &Path, args: &SweepArgs, out_path: &Path) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let instance = config
        .instance()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let betas = sweep_grid(&config, &instance, args)?;
    let samples = curve_samples(&instance, &betas)?;
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &samples).map_err(io_error("csv"))?;
    write_file(out_path, &buf)
}

pub fn cmd_asymptote(
    config_path: &Path,
    args: &SweepArgs,
    out_path: &Path,
) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let instance = config
        .instance()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let Instance::Ball(ball) = &instance else {
        return Err(CliError::Input(format!(
            "asymptote curves need a [ball] config, found [{}]",
            family_name(&instance)
        )));
    };
    let betas = sweep_grid(&config, &instance, args)?;
    let mut buf = Vec::new();
    write_asymptote_csv(&mut buf, &ball.asymptote_curves(&betas)).map_err(io_error("csv"))?;
    write_file(out_path, &buf)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleCheck {
    pub example: &'static str,
    pub quantity: &'static str,
    pub expected: f64,
    pub actual: f64,
    pub passed: bool,
}

/// Solves each example with the default solver and compares the optimum and
/// the asymptotic estimate with the reference values.
pub fn check_examples(
    examples: &[BuiltinExample],
    tolerance: f64,
) -> Result<Vec<ExampleCheck>, Error> {
    let mut rows = Vec::new();
    for ex in examples {
        let p = ex.problem();
        let s = solve_ratio_max(&p, ReductionMode::Difference, &SolverOptions::default())?;
        let estimate = p.asymptotic_estimate()?;
        for (quantity, expected, actual) in [
            ("beta_max", ex.reported_beta_max, s.beta_max),
            ("estimate", ex.reported_estimate, estimate),
        ] {
            rows.push(ExampleCheck {
                example: ex.name,
                quantity,
                expected,
                actual,
                passed: (actual - expected).abs() <= tolerance,
            });
        }
    }
    Ok(rows)
}

pub fn write_check_table<W: Write>(
    out: &mut W,
    rows: &[ExampleCheck],
    tolerance: f64,
) -> io::Result<()> {
    writeln!(
        out,
        "{:<10} {:<9} {:>9} {:>20}  result (tol {tolerance})",
        "example", "quantity", "expected", "actual"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<10} {:<9} {:>9} {:>20.12}  {}",
            r.example,
            r.quantity,
            r.expected,
            r.actual,
            if r.passed { "pass" } else { "FAIL" }
        )?;
    }
    Ok(())
}

pub fn run_example_checks<W: Write>(
    examples: &[BuiltinExample],
    tolerance: f64,
    out: &mut W,
) -> Result<(), CliError> {
    if !(tolerance >= 0.0) {
        return Err(CliError::Input(format!(
            "--tol must be non-negative (got {tolerance})"
        )));
    }
    let rows = check_examples(examples, tolerance)?;
    write_check_table(out, &rows, tolerance).map_err(io_error("stdout"))?;
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| {
            format!(
                "{} {}: expected {}, got {}",
                r.example, r.quantity, r.expected, r.actual
            )
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(failed.join("; ")))
    }
}

pub fn cmd_examples<W: Write>(tolerance: Option<f64>, out: &mut W) -> Result<(), CliError> {
    run_example_checks(
        &builtin::examples(),
        tolerance.unwrap_or(EXAMPLE_TOLERANCE),
        out,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = beta_grid(0.0, 43.61, 100).unwrap();
        assert_eq!(g.len(), 100);
        assert_eq!((g[0], g[99]), (0.0, 43.61));
        assert_eq!(beta_grid(2.0, 2.0, 1).unwrap(), vec![2.0]);
        assert!(beta_grid(2.0, 1.0, 5).is_err());
        assert!(beta_grid(1.0, 2.0, 1).is_err());
        assert!(beta_grid(1.0, 2.0, 0).is_err());
    }

    #[test]
    fn examples_pass_at_default_tolerance() {
        let rows = check_examples(&builtin::examples(), EXAMPLE_TOLERANCE).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.passed), "{rows:?}");
    }

    #[test]
    fn examples_fail_at_tight_tolerance() {
        let mut sink = Vec::new();
        let err = run_example_checks(&builtin::examples(), 1e-6, &mut sink).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_CHECK_FAILED);
    }

    #[test]
    fn perturbed_denominator_offset_fails_first_example() {
        let mut examples = builtin::examples();
        examples[0].h = 2.8;
        let rows = check_examples(&examples, EXAMPLE_TOLERANCE).unwrap();
        let beta = rows
            .iter()
            .find(|r| r.example == "example-1" && r.quantity == "beta_max")
            .unwrap();
        assert!(!beta.passed);
        assert!(beta.actual < 43.61);
    }

    #[test]
    fn csv_uses_seventeen_significant_digits() {
        let mut buf = Vec::new();
        write_curve_csv(
            &mut buf,
            &[CurveSample {
                beta: 0.1,
                j: -2.0,
                ratio_at_xbeta: 1.0 / 3.0,
            }],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row = text.lines().nth(1).unwrap();
        for field in row.split(',') {
            let mantissa = field.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{field}");
            let v: f64 = field.parse().unwrap();
            assert!(v.is_finite());
        }
        assert_eq!(text.lines().next(), Some("beta,j,ratio_at_xbeta"));
    }
}
