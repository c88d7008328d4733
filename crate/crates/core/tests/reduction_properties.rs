use fracmax::problems::HilbertBallProblem;
use fracmax::random;
use fracmax::{
    dinkelbach_step, evaluate_j, ratio_value, solve_ratio_max, RatioProblem, ReductionMode,
    SolverOptions, Strategy,
};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

fn coincidence<R: RatioProblem + ?Sized>(p: &R) {
    let sol = solve_ratio_max(p, ReductionMode::Difference, &SolverOptions::default()).unwrap();
    let (_, j) = evaluate_j(p, sol.beta_max, ReductionMode::Difference).unwrap();
    assert!(j.abs() <= 1e-9 * (1.0 + sol.beta_max.abs()), "j = {j}");
    let ratio = ratio_value(p, &sol.x_max).unwrap();
    assert!(
        rel(ratio, sol.beta_max) <= 1e-9,
        "{ratio} vs {}",
        sol.beta_max
    );
}

fn mode_equivalence<R: RatioProblem + ?Sized>(p: &R) {
    let d = solve_ratio_max(p, ReductionMode::Difference, &SolverOptions::default()).unwrap();
    let w = solve_ratio_max(
        p,
        ReductionMode::WeightedDifference,
        &SolverOptions::default(),
    )
    .unwrap();
    assert!(
        rel(d.beta_max, w.beta_max) <= 1e-8,
        "{} vs {}",
        d.beta_max,
        w.beta_max
    );
}

/// Iterates from the reference point; the sequence must climb and stay below
/// the optimum.
fn dinkelbach_bounded<R: RatioProblem + ?Sized>(p: &R) {
    let target = solve_ratio_max(p, ReductionMode::Difference, &SolverOptions::default())
        .unwrap()
        .beta_max;
    let mut beta = ratio_value(p, &p.reference_point()).unwrap();
    for _ in 0..30 {
        let (_, j) = evaluate_j(p, beta, ReductionMode::Difference).unwrap();
        if j.abs() <= 1e-10 {
            break;
        }
        let next = dinkelbach_step(p, beta).unwrap();
        assert!(next >= beta, "{beta} -> {next}");
        assert!(
            next <= target + 1e-9 * (1.0 + target.abs()),
            "{next} above {target}"
        );
        beta = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maximizer_coincides_with_ratio(seed in any::<u64>()) {
        let mut r = rng(seed);
        coincidence(&random::linear(&mut r));
        coincidence(&random::quadratic(&mut r));
        coincidence(&random::ball(&mut r));
        coincidence(&random::log_ratio(&mut r).problem());
    }

    #[test]
    fn difference_and_weighted_modes_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        mode_equivalence(&random::linear(&mut r));
        mode_equivalence(&random::quadratic(&mut r));
        mode_equivalence(&random::ball(&mut r));
    }

    #[test]
    fn dinkelbach_climbs_below_optimum(seed in any::<u64>()) {
        let mut r = rng(seed);
        dinkelbach_bounded(&random::linear(&mut r));
        dinkelbach_bounded(&random::quadratic(&mut r));
        dinkelbach_bounded(&random::ball(&mut r));
    }

    #[test]
    fn shift_by_denominator_shifts_optimum(seed in any::<u64>(), c in -10.0f64..10.0) {
        let p = random::ball(&mut rng(seed));
        // W0 + c W = <w0 + c w, x> + h0 + c h
        let shifted_w0: Vec<f64> = p.w0().iter().zip(p.w()).map(|(a, b)| a + c * b).collect();
        let q = HilbertBallProblem::new(shifted_w0, p.w().to_vec(), p.h0() + c * p.h(), p.h(), p.r())
            .unwrap();
        let a = solve_ratio_max(&p, ReductionMode::Difference, &SolverOptions::default()).unwrap();
        let b = solve_ratio_max(&q, ReductionMode::Difference, &SolverOptions::default()).unwrap();
        prop_assert!(rel(b.beta_max, a.beta_max + c) <= 1e-9);
        let shifted_ratio = ratio_value(&q, &a.x_max).unwrap();
        prop_assert!(rel(shifted_ratio, ratio_value(&p, &a.x_max).unwrap() + c) <= 1e-9);
    }

    #[test]
    fn weighted_mode_handles_negative_denominators(seed in any::<u64>()) {
        let p = random::signed_affine(&mut rng(seed));
        let (x1, x2) = p.interval();
        let sol = solve_ratio_max(&p, ReductionMode::WeightedDifference, &SolverOptions::default())
            .unwrap();
        let oracle = fracmax::oracle::grid_max_problem(&p, x1, x2, 4096).unwrap();
        prop_assert!(sol.beta_max >= oracle.j_star - 1e-9);
        prop_assert!(sol.beta_max - oracle.j_star <= 1e-6 * (1.0 + oracle.j_star.abs()));
    }
}

#[test]
fn strategies_agree_on_every_family() {
    let mut r = rng(11);
    for _ in 0..20 {
        let p = random::quadratic(&mut r);
        let betas: Vec<f64> = [Strategy::Bisection, Strategy::Dinkelbach, Strategy::Hybrid]
            .into_iter()
            .map(|strategy| {
                let o = SolverOptions {
                    strategy,
                    ..Default::default()
                };
                solve_ratio_max(&p, ReductionMode::Difference, &o)
                    .unwrap()
                    .beta_max
            })
            .collect();
        assert!(
            rel(betas[0], betas[1]) <= 1e-9 && rel(betas[0], betas[2]) <= 1e-9,
            "{betas:?}"
        );
    }
}

#[test]
fn dinkelbach_rejects_weighted_mode() {
    let p = random::linear(&mut rng(1));
    let o = SolverOptions {
        strategy: Strategy::Dinkelbach,
        ..Default::default()
    };
    let err = solve_ratio_max(&p, ReductionMode::WeightedDifference, &o).unwrap_err();
    assert!(matches!(err, fracmax::Error::UnsupportedStrategy(_)));
}

#[test]
fn trace_ends_at_the_answer() {
    let p = random::ball(&mut rng(5));
    let sol = solve_ratio_max(&p, ReductionMode::Difference, &SolverOptions::default()).unwrap();
    assert_eq!(sol.trace.last().unwrap().0, sol.beta_max);
    assert_eq!(sol.evaluations(), sol.trace.len());
}

#[test]
fn tight_budget_reports_non_convergence() {
    let p = random::log_ratio(&mut rng(2)).problem();
    let o = SolverOptions {
        strategy: Strategy::Bisection,
        max_iterations: 2,
        ..Default::default()
    };
    let err = solve_ratio_max(&p, ReductionMode::Difference, &o).unwrap_err();
    assert!(err.is_convergence_failure(), "{err}");
    match err {
        fracmax::Error::NonConvergence { trace, .. } => assert!(!trace.is_empty()),
        other => panic!("unexpected {other}"),
    }
}
