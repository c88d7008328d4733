//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.
//!
//! Run with `cargo test -p fracmax --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use fracmax::builtin::{self, BuiltinExample};
use fracmax::config::ProblemConfig;
use fracmax::oracle::{disk_max_ball, grid_max_interval, interval_gap_bound};
use fracmax::problems::{IntervalSearch, LogRatioProblem, ScalarFn};
use fracmax::random;
use fracmax::{
    dinkelbach_step, evaluate_j, ratio_value, solve_ratio_max, RatioProblem, ReductionMode,
    SolverOptions, Strategy,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const DIFF: ReductionMode = ReductionMode::Difference;

fn opts(strategy: Strategy) -> SolverOptions {
    SolverOptions {
        strategy,
        ..SolverOptions::default()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(label: &str, actual: f64, expected: f64, tol: f64) -> Result<(), String> {
    ensure((actual - expected).abs() <= tol, || {
        format!("{label} = {actual:.6}, expected {expected} +- {tol}")
    })
}

fn example(name: &str) -> BuiltinExample {
    builtin::examples()
        .into_iter()
        .find(|e| e.name == name)
        .expect("built-in example")
}

fn reproduce(name: &str, beta: f64, estimate: f64, j0: f64) -> Outcome {
    let start = Instant::now();
    let p = example(name).problem();
    let closed = p.solve_quadratic().map_err(|e| e.to_string())?;
    let hybrid = solve_ratio_max(&p, DIFF, &opts(Strategy::Hybrid)).map_err(|e| e.to_string())?;
    let est = p.asymptotic_estimate().map_err(|e| e.to_string())?;
    let j_at_0 = p.j(0.0);
    let elapsed = start.elapsed();

    close("closed-form beta_max", closed.beta_max, beta, 0.01)?;
    close("hybrid beta_max", hybrid.beta_max, beta, 0.01)?;
    for (label, b) in [
        ("closed-form", closed.beta_max),
        ("hybrid", hybrid.beta_max),
    ] {
        let r = p.j(b).abs();
        ensure(r <= 1e-9, || format!("{label} residual {r:e} > 1e-9"))?;
    }
    close("estimate", est, estimate, 0.01)?;
    close("j(0)", j_at_0, j0, 0.01)?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "beta_max {:.5} (closed) {:.5} (hybrid), estimate {est:.5}, j(0) {j_at_0:.5}, {:.1} ms",
        closed.beta_max,
        hybrid.beta_max,
        elapsed.as_secs_f64() * 1e3
    ))
}

fn criterion_1() -> Outcome {
    reproduce("example-1", 43.61, 41.95, 25.25)
}

fn criterion_2() -> Outcome {
    reproduce("example-2", -1.18, -2.04, -4.75)
}

/// Probes at distances `10^u * max(1, |beta_max|)` with `u` in `[-4, 1]` on
/// either side of the root.
fn sign_pattern<R: RatioProblem + ?Sized>(p: &R, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let sol = solve_ratio_max(p, DIFF, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let scale = sol.beta_max.abs().max(1.0);
    let mut violations = 0;
    for _ in 0..10 {
        let offset = 10f64.powf(rng.gen_range(-4.0..1.0)) * scale;
        let beta = if rng.gen_bool(0.5) {
            sol.beta_max + offset
        } else {
            sol.beta_max - offset
        };
        let (_, j) = evaluate_j(p, beta, DIFF).map_err(|e| e.to_string())?;
        let expected = (sol.beta_max - beta).signum();
        if j.signum() != expected || j.abs() <= 1e-12 {
            violations += 1;
        }
    }
    Ok(violations)
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let per_family = 50;
    let mut violations = 0;
    for _ in 0..per_family {
        violations += sign_pattern(&random::linear(&mut rng), &mut rng)?;
        violations += sign_pattern(&random::quadratic(&mut rng), &mut rng)?;
        violations += sign_pattern(&random::log_ratio(&mut rng).problem(), &mut rng)?;
        violations += sign_pattern(&random::ball(&mut rng), &mut rng)?;
    }
    ensure(violations == 0, || format!("{violations} sign violations"))?;
    Ok(format!(
        "{} instances x 10 probes, 0 violations",
        4 * per_family
    ))
}

/// Solver against the interval grid oracle; returns `beta_max - j_star`.
fn against_grid<R, N, D>(p: &R, w0: N, w: D, x1: f64, x2: f64) -> Result<f64, String>
where
    R: RatioProblem<Point = f64>,
    N: Fn(f64) -> f64 + Copy,
    D: Fn(f64) -> f64 + Copy,
{
    const CELLS: usize = 20_000;
    let sol = solve_ratio_max(p, DIFF, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let oracle = grid_max_interval(w0, w, x1, x2, CELLS).map_err(|e| e.to_string())?;
    let gap = interval_gap_bound(w0, w, x1, x2, CELLS);
    let diff = sol.beta_max - oracle.j_star;
    ensure(diff >= -1e-9, || {
        format!("solver {} below oracle {}", sol.beta_max, oracle.j_star)
    })?;
    ensure(diff <= gap, || {
        format!(
            "solver {} exceeds oracle {} by more than {gap:e}",
            sol.beta_max, oracle.j_star
        )
    })?;
    Ok(diff)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 100;
    let mut worst_interval: f64 = 0.0;
    for _ in 0..n {
        let lin = random::linear(&mut rng);
        let (x1, x2) = lin.interval();
        let d = against_grid(
            &lin,
            |x| lin.numerator_at(x),
            |x| lin.denominator_at(x),
            x1,
            x2,
        )
        .map_err(|e| format!("linear {lin:?}: {e}"))?;
        worst_interval = worst_interval.max(d);

        let quad = random::quadratic(&mut rng);
        let (x1, x2) = quad.interval();
        let d = against_grid(
            &quad,
            |x| quad.numerator_at(x),
            |x| quad.denominator_at(x),
            x1,
            x2,
        )
        .map_err(|e| format!("quadratic {quad:?}: {e}"))?;
        worst_interval = worst_interval.max(d);

        let coeffs = random::log_ratio(&mut rng);
        let lr = coeffs.problem();
        let (f0, f) = (coeffs.f0(), coeffs.f());
        let (x1, x2) = lr.interval();
        let d = against_grid(lr.as_ratio(), |x| f0(x).ln(), |x| f(x).ln(), x1, x2)
            .map_err(|e| format!("logratio {coeffs:?}: {e}"))?;
        worst_interval = worst_interval.max(d);
    }

    let mut worst_ball: f64 = 0.0;
    for _ in 0..n {
        let ball = random::ball(&mut rng);
        let sol =
            solve_ratio_max(&ball, DIFF, &SolverOptions::default()).map_err(|e| e.to_string())?;
        let oracle = disk_max_ball(&ball, 2000).map_err(|e| e.to_string())?;
        let diff = sol.beta_max - oracle.j_star;
        ensure(diff >= -1e-9, || {
            format!(
                "ball: solver {} below oracle {}",
                sol.beta_max, oracle.j_star
            )
        })?;
        ensure(diff.abs() <= 0.01, || {
            format!("ball: solver {} vs oracle {}", sol.beta_max, oracle.j_star)
        })?;
        worst_ball = worst_ball.max(diff.abs());
    }
    Ok(format!(
        "{n} per family; worst interval excess {worst_interval:.2e}, worst ball gap {worst_ball:.2e}"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 1000;
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let p = random::linear(&mut rng);
        let (a, b, a0, b0, _, _) = p.coefficients();
        let closed = p.solve_closed_form();
        let solved =
            solve_ratio_max(&p, DIFF, &SolverOptions::default()).map_err(|e| e.to_string())?;
        if a * b0 - b * a0 != 0.0 {
            compared += 1;
            ensure(closed.x_max == solved.x_max, || {
                format!(
                    "{p:?}: closed x = {}, solver x = {}",
                    closed.x_max, solved.x_max
                )
            })?;
        }
        let d = (closed.beta_max - solved.beta_max).abs();
        ensure(d <= 1e-12, || {
            format!("{p:?}: beta {} vs {}", closed.beta_max, solved.beta_max)
        })?;
        worst = worst.max(d);
    }
    Ok(format!(
        "{n} instances ({compared} with ab0 - ba0 != 0), identical endpoints, max beta diff {worst:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    const CELLS: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pairs = 500;
    let mut plus_sign_failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let p = random::quadratic(&mut rng);
        let beta = rng.gen_range(-20.0..20.0);
        let [a, b, c, a0, b0, c0, x1, x2] = p.coefficients();
        let (qa, qb, qc) = (a0 - beta * a, b0 - beta * b, c0 - beta * c);
        let jb = move |x: f64| (qa * x + qb) * x + qc;

        let grid = grid_max_interval(jb, |_| 1.0, x1, x2, CELLS).map_err(|e| e.to_string())?;
        let gap = interval_gap_bound(jb, |_| 1.0, x1, x2, CELLS);
        let j = p.j(beta);
        let diff = j - grid.j_star;
        ensure(
            diff >= -1e-9 * (1.0 + grid.j_star.abs()) && diff <= gap + 1e-12,
            || {
                format!(
                    "{p:?} beta {beta}: j = {j}, grid {} (gap {gap:e})",
                    grid.j_star
                )
            },
        )?;
        worst = worst.max(diff);

        // The stationary point with the opposite sign.
        let mut best = jb(x1).max(jb(x2));
        if qa != 0.0 {
            let x3 = qb / (2.0 * qa);
            if x1 < x3 && x3 < x2 {
                best = best.max(jb(x3));
            }
        }
        if best < grid.j_star - gap {
            plus_sign_failures += 1;
        }
    }
    Ok(format!(
        "{pairs} pairs, max excess over grid {worst:.1e}; +B/(2A) would fail on {plus_sign_failures}"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 50;
    let o = SolverOptions::default();
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let coeffs = random::log_ratio(&mut rng);
        let p = coeffs.problem();
        let direct = p.solve_direct(&o).map_err(|e| format!("{coeffs:?}: {e}"))?;
        let nested = p.solve_nested(&o).map_err(|e| format!("{coeffs:?}: {e}"))?;
        let d = (direct.beta_max - nested.beta_max).abs();
        ensure(d <= 1e-6, || {
            format!(
                "{coeffs:?}: direct {} nested {}",
                direct.beta_max, nested.beta_max
            )
        })?;
        worst = worst.max(d);
    }

    let g: ScalarFn = std::sync::Arc::new(|x: f64| 2.0 + x * x);
    let identity = LogRatioProblem::new(g.clone(), g, -1.0, 2.0, IntervalSearch::default())
        .map_err(|e| e.to_string())?;
    for (label, sol) in [
        ("direct", identity.solve_direct(&o)),
        ("nested", identity.solve_nested(&o)),
    ] {
        let beta = sol.map_err(|e| e.to_string())?.beta_max;
        ensure((beta - 1.0).abs() <= 1e-12, || {
            format!("identity {label}: beta_max = {beta}")
        })?;
    }
    Ok(format!(
        "{n} instances, max route difference {worst:.1e}; identity case exact"
    ))
}

struct Monotone {
    steps: usize,
    hybrid: usize,
    bisection: usize,
}

fn dinkelbach_run<R: RatioProblem + ?Sized>(p: &R) -> Result<Monotone, String> {
    let err = |e: fracmax::Error| e.to_string();
    let mut beta = ratio_value(p, &p.reference_point()).map_err(err)?;
    let mut steps = 0;
    loop {
        let (_, j) = evaluate_j(p, beta, DIFF).map_err(err)?;
        if j.abs() <= 1e-10 {
            break;
        }
        ensure(steps < 50, || {
            format!("no convergence in 50 steps (beta {beta}, j {j:e})")
        })?;
        let next = dinkelbach_step(p, beta).map_err(err)?;
        ensure(next >= beta, || {
            format!("iterate decreased: {beta} -> {next}")
        })?;
        beta = next;
        steps += 1;
    }
    let hybrid = solve_ratio_max(p, DIFF, &opts(Strategy::Hybrid)).map_err(err)?;
    let bisection = solve_ratio_max(p, DIFF, &opts(Strategy::Bisection)).map_err(err)?;
    Ok(Monotone {
        steps,
        hybrid: hybrid.evaluations(),
        bisection: bisection.evaluations(),
    })
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut runs = Vec::new();
    for _ in 0..50 {
        runs.push(dinkelbach_run(&random::linear(&mut rng))?);
        runs.push(dinkelbach_run(&random::quadratic(&mut rng))?);
        runs.push(dinkelbach_run(&random::log_ratio(&mut rng).problem())?);
        runs.push(dinkelbach_run(&random::ball(&mut rng))?);
    }
    let max_steps = runs.iter().map(|r| r.steps).max().unwrap_or(0);
    let worst = runs
        .iter()
        .map(|r| r.hybrid as f64 / r.bisection as f64)
        .fold(0.0, f64::max);
    ensure(worst <= 2.0, || {
        format!("hybrid used {worst:.2}x bisection's evaluations")
    })?;
    let (h, b): (usize, usize) = runs
        .iter()
        .fold((0, 0), |(h, b), r| (h + r.hybrid, b + r.bisection));
    Ok(format!(
        "{} runs, max {max_steps} steps; evaluations hybrid {h} vs bisection {b}, worst ratio {worst:.2}",
        runs.len()
    ))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fracmax")
}

fn configs() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("configs directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    v.sort();
    v
}

fn run(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(bin())
        .args(args)
        .output()
        .map_err(|e| e.to_string())
}

fn sweep_twice(cmd: &str, cfg: &Path, dir: &Path) -> Result<(), String> {
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.join(format!("{cmd}-{i}.csv"));
        let status = run(&[
            cmd,
            cfg.to_str().unwrap(),
            "--samples",
            "257",
            "--out",
            out.to_str().unwrap(),
        ])?;
        ensure(status.status.success(), || {
            format!("{cmd} exited {:?}", status.status.code())
        })?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1] && !outputs[0].is_empty(), || {
        format!("{cmd} output differs between runs")
    })
}

fn criterion_9() -> Outcome {
    let out = run(&["examples"])?;
    ensure(out.status.code() == Some(0), || {
        format!("examples exited {:?}", out.status.code())
    })?;

    let tmp = std::env::temp_dir().join(format!("fracmax-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).map_err(|e| e.to_string())?;
    let result = (|| {
        let cfgs = configs();
        for cfg in &cfgs {
            sweep_twice("curve", cfg, &tmp)?;
            let original = ProblemConfig::parse(&std::fs::read_to_string(cfg).unwrap())
                .map_err(|e| e.to_string())?;
            let dumped = run(&["solve", cfg.to_str().unwrap(), "--dump-config"])?;
            ensure(dumped.status.success(), || {
                format!("dump of {} failed", cfg.display())
            })?;
            let reparsed = ProblemConfig::parse(&String::from_utf8_lossy(&dumped.stdout))
                .map_err(|e| e.to_string())?;
            ensure(original == reparsed, || {
                format!("round trip changed {}", cfg.display())
            })?;
        }
        let ball = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/example1.cfg");
        sweep_twice("asymptote", &ball, &tmp)?;
        Ok(format!(
            "examples exit 0; curve/asymptote byte-identical; {} configs round-trip",
            cfgs.len()
        ))
    })();
    let _ = std::fs::remove_dir_all(&tmp);
    result
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Example 1 reproduction", criterion_1),
        ("Example 2 reproduction", criterion_2),
        ("sign pattern", criterion_3),
        ("oracle equivalence", criterion_4),
        ("linear closed form", criterion_5),
        ("quadratic candidate rule", criterion_6),
        ("log-ratio route agreement", criterion_7),
        ("Dinkelbach monotonicity", criterion_8),
        ("CLI integration", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
