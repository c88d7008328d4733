//! C interface to `fracmax`.
//!
//! Problems and solutions are opaque heap handles created by `fracmax_*_new`
//! or `fracmax_solve` and released with the matching `*_free`. Every fallible
//! call returns a [`FracmaxStatus`]; the detailed message of the most recent
//! failure on the calling thread is available from
//! [`fracmax_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracmax::problems::{HilbertBallProblem, LinearIntervalProblem, QuadraticIntervalProblem};
use fracmax::{
    evaluate_j, ratio_value, solve_ratio_max, Error, ReductionMode, Solution, SolverOptions,
    Strategy,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracmaxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidProblem = 2,
    InvalidOptions = 3,
    ModeViolation = 4,
    DivisionDomain = 5,
    NoBracket = 6,
    NonConvergence = 7,
    UnsupportedStrategy = 8,
    NotFinite = 9,
    EstimateUndefined = 10,
    BufferTooSmall = 11,
    WrongFamily = 12,
    Internal = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracmaxMode {
    Difference = 0,
    WeightedDifference = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracmaxStrategy {
    Bisection = 0,
    Dinkelbach = 1,
    Hybrid = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracmaxOptions {
    pub tolerance_j: f64,
    pub tolerance_beta: f64,
    pub max_iterations: usize,
    pub strategy: FracmaxStrategy,
}

enum Family {
    Linear(LinearIntervalProblem),
    Quadratic(QuadraticIntervalProblem),
    Ball(HilbertBallProblem),
}

/// Opaque problem handle.
pub struct FracmaxProblem {
    family: Family,
}

/// Opaque solution handle.
pub struct FracmaxSolution {
    beta_max: f64,
    x_max: Vec<f64>,
    residual: f64,
    iterations: usize,
    evaluations: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn status_of(err: &Error) -> FracmaxStatus {
    match err {
        Error::InvalidProblem(_) => FracmaxStatus::InvalidProblem,
        Error::InvalidOptions(_) => FracmaxStatus::InvalidOptions,
        Error::ModeViolation { .. } => FracmaxStatus::ModeViolation,
        Error::DivisionDomain | Error::OracleDomain { .. } => FracmaxStatus::DivisionDomain,
        Error::InvalidBracket { .. } | Error::NoBracket { .. } => FracmaxStatus::NoBracket,
        Error::NonConvergence { .. } => FracmaxStatus::NonConvergence,
        Error::UnsupportedStrategy(_) => FracmaxStatus::UnsupportedStrategy,
        Error::NotFinite { .. } => FracmaxStatus::NotFinite,
        Error::EstimateUndefined => FracmaxStatus::EstimateUndefined,
        Error::Nested { source, .. } => status_of(source),
        _ => FracmaxStatus::Internal,
    }
}

fn fail(err: Error) -> FracmaxStatus {
    let status = status_of(&err);
    set_last_error(err.to_string());
    status
}

fn fail_with(status: FracmaxStatus, message: &str) -> FracmaxStatus {
    set_last_error(message.to_string());
    status
}

/// Runs `f`, turning a panic into `Internal`.
fn guard(f: impl FnOnce() -> FracmaxStatus) -> FracmaxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail_with(FracmaxStatus::Internal, "panic inside fracmax"),
    }
}

impl From<FracmaxMode> for ReductionMode {
    fn from(m: FracmaxMode) -> Self {
        match m {
            FracmaxMode::Difference => ReductionMode::Difference,
            FracmaxMode::WeightedDifference => ReductionMode::WeightedDifference,
        }
    }
}

impl From<FracmaxStrategy> for Strategy {
    fn from(s: FracmaxStrategy) -> Self {
        match s {
            FracmaxStrategy::Bisection => Strategy::Bisection,
            FracmaxStrategy::Dinkelbach => Strategy::Dinkelbach,
            FracmaxStrategy::Hybrid => Strategy::Hybrid,
        }
    }
}

impl From<FracmaxOptions> for SolverOptions {
    fn from(o: FracmaxOptions) -> Self {
        SolverOptions {
            tolerance_j: o.tolerance_j,
            tolerance_beta: o.tolerance_beta,
            max_iterations: o.max_iterations,
            strategy: o.strategy.into(),
        }
    }
}

impl From<Solution<f64>> for FracmaxSolution {
    fn from(s: Solution<f64>) -> Self {
        let evaluations = s.evaluations();
        FracmaxSolution {
            beta_max: s.beta_max,
            x_max: vec![s.x_max],
            residual: s.residual,
            iterations: s.iterations,
            evaluations,
        }
    }
}

impl From<Solution<Vec<f64>>> for FracmaxSolution {
    fn from(s: Solution<Vec<f64>>) -> Self {
        let evaluations = s.evaluations();
        FracmaxSolution {
            beta_max: s.beta_max,
            x_max: s.x_max,
            residual: s.residual,
            iterations: s.iterations,
            evaluations,
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FracmaxStatus {
    if out.is_null() {
        return fail_with(FracmaxStatus::NullPointer, "output pointer is null");
    }
    out.write(value);
    FracmaxStatus::Ok
}

unsafe fn publish_problem(out: *mut *mut FracmaxProblem, family: Family) -> FracmaxStatus {
    let handle = Box::into_raw(Box::new(FracmaxProblem { family }));
    out.write(handle);
    FracmaxStatus::Ok
}

unsafe fn problem_ref<'a>(p: *const FracmaxProblem) -> Result<&'a FracmaxProblem, FracmaxStatus> {
    p.as_ref()
        .ok_or_else(|| fail_with(FracmaxStatus::NullPointer, "problem handle is null"))
}

unsafe fn slice<'a>(data: *const f64, len: usize) -> Result<&'a [f64], FracmaxStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail_with(
            FracmaxStatus::NullPointer,
            "array pointer is null",
        ));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn fracmax_status_message(status: FracmaxStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FracmaxStatus::Ok => c"ok",
        FracmaxStatus::NullPointer => c"null pointer argument",
        FracmaxStatus::InvalidProblem => c"invalid problem data",
        FracmaxStatus::InvalidOptions => c"invalid solver options",
        FracmaxStatus::ModeViolation => c"denominator outside the reduction's domain",
        FracmaxStatus::DivisionDomain => c"denominator vanishes",
        FracmaxStatus::NoBracket => c"no sign change found",
        FracmaxStatus::NonConvergence => c"iteration limit reached",
        FracmaxStatus::UnsupportedStrategy => c"strategy not supported for this mode",
        FracmaxStatus::NotFinite => c"non-finite value",
        FracmaxStatus::EstimateUndefined => c"estimate undefined",
        FracmaxStatus::BufferTooSmall => c"buffer too small",
        FracmaxStatus::WrongFamily => c"operation not available for this problem family",
        FracmaxStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Message of the last failure on this thread, or null if none occurred.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fracmax_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

#[no_mangle]
pub extern "C" fn fracmax_options_default() -> FracmaxOptions {
    let d = SolverOptions::default();
    FracmaxOptions {
        tolerance_j: d.tolerance_j,
        tolerance_beta: d.tolerance_beta,
        max_iterations: d.max_iterations,
        strategy: FracmaxStrategy::Hybrid,
    }
}

/// `(a0 x + b0) / (a x + b)` on `[x1, x2]`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fracmax_linear_new(
    a: f64,
    b: f64,
    a0: f64,
    b0: f64,
    x1: f64,
    x2: f64,
    out: *mut *mut FracmaxProblem,
) -> FracmaxStatus {
    guard(|| {
        if out.is_null() {
            return fail_with(FracmaxStatus::NullPointer, "output pointer is null");
        }
        match LinearIntervalProblem::new(a, b, a0, b0, x1, x2) {
            Ok(p) => publish_problem(out, Family::Linear(p)),
            Err(e) => fail(e),
        }
    })
}

/// `(a0 x² + b0 x + c0) / (a x² + b x + c)` on `[x1, x2]`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fracmax_quadratic_new(
    a: f64,
    b: f64,
    c: f64,
    a0: f64,
    b0: f64,
    c0: f64,
    x1: f64,
    x2: f64,
    out: *mut *mut FracmaxProblem,
) -> FracmaxStatus {
    guard(|| {
        if out.is_null() {
            return fail_with(FracmaxStatus::NullPointer, "output pointer is null");
        }
        match QuadraticIntervalProblem::new(a, b, c, a0, b0, c0, x1, x2) {
            Ok(p) => publish_problem(out, Family::Quadratic(p)),
            Err(e) => fail(e),
        }
    })
}

/// `(<w0, x> + h0) / (<w, x> + h)` over the ball `|x| <= r` in `dimension`
/// dimensions. The arrays are copied.
///
/// # Safety
/// `w0` and `w` must point to `dimension` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fracmax_ball_new(
    w0: *const f64,
    w: *const f64,
    dimension: usize,
    h0: f64,
    h: f64,
    r: f64,
    out: *mut *mut FracmaxProblem,
) -> FracmaxStatus {
    guard(|| {
        if out.is_null() {
            return fail_with(FracmaxStatus::NullPointer, "output pointer is null");
        }
        let (w0, w) = match (slice(w0, dimension), slice(w, dimension)) {
            (Ok(a), Ok(b)) => (a.to_vec(), b.to_vec()),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match HilbertBallProblem::new(w0, w, h0, h, r) {
            Ok(p) => publish_problem(out, Family::Ball(p)),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `problem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fracmax_problem_free(problem: *mut FracmaxProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Length of a point: 1 for interval problems, `n` for the ball. 0 for null.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracmax_problem_dimension(problem: *const FracmaxProblem) -> usize {
    match problem.as_ref().map(|p| &p.family) {
        None => 0,
        Some(Family::Ball(b)) => b.dimension(),
        Some(_) => 1,
    }
}

/// Optimal value of the parametric subproblem at `beta`; the maximizer is
/// written to `x_out` when it is non-null (`x_len` must cover the dimension).
///
/// # Safety
/// `problem` must be a live handle, `j_out` writable, and `x_out` null or
/// valid for `x_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fracmax_problem_j(
    problem: *const FracmaxProblem,
    beta: f64,
    mode: FracmaxMode,
    j_out: *mut f64,
    x_out: *mut f64,
    x_len: usize,
) -> FracmaxStatus {
    guard(|| {
        let p = match problem_ref(problem) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if j_out.is_null() {
            return fail_with(FracmaxStatus::NullPointer, "output pointer is null");
        }
        let mode = mode.into();
        let result = match &p.family {
            Family::Linear(q) => evaluate_j(q, beta, mode).map(|(x, j)| (vec![x], j)),
            Family::Quadratic(q) => evaluate_j(q, beta, mode).map(|(x, j)| (vec![x], j)),
            Family::Ball(q) => evaluate_j(q, beta, mode),
        };
        let (x, j) = match result {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        if !x_out.is_null() {
            if x_len < x.len() {
                return fail_with(FracmaxStatus::BufferTooSmall, "maximizer buffer too small");
            }
            ptr::copy_nonoverlapping(x.as_ptr(), x_out, x.len());
        }
        write_out(j_out, j)
    })
}

/// Ratio `W0(x) / W(x)` at a point of length `x_len`.
///
/// # Safety
/// `problem` must be a live handle, `x` valid for `x_len` doubles, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fracmax_problem_ratio(
    problem: *const FracmaxProblem,
    x: *const f64,
    x_len: usize,
    out: *mut f64,
) -> FracmaxStatus {
    guard(|| {
        let p = match problem_ref(problem) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let x = match slice(x, x_len) {
            Ok(x) => x,
            Err(s) => return s,
        };
        let value = match &p.family {
            Family::Linear(q) if x_len == 1 => ratio_value(q, &x[0]),
            Family::Quadratic(q) if x_len == 1 => ratio_value(q, &x[0]),
            Family::Ball(q) if x_len == q.dimension() => ratio_value(q, &x.to_vec()),
            _ => return fail_with(FracmaxStatus::BufferTooSmall, "point has the wrong length"),
        };
        match value {
            Ok(v) => write_out(out, v),
            Err(e) => fail(e),
        }
    })
}

/// Maximizes the ratio by root finding. `options` may be null for defaults.
///
/// # Safety
/// `problem` must be a live handle, `options` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fracmax_solve(
    problem: *const FracmaxProblem,
    mode: FracmaxMode,
    options: *const FracmaxOptions,
    out: *mut *mut FracmaxSolution,
) -> FracmaxStatus {
    guard(|| {
        let p = match problem_ref(problem) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail_with(FracmaxStatus::NullPointer, "output pointer is null");
        }
        let opts: SolverOptions = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| fracmax_options_default())
            .into();
        let mode = mode.into();
        let solution: Result<FracmaxSolution, Error> = match &p.family {
            Family::Linear(q) => solve_ratio_max(q, mode, &opts).map(Into::into),
            Family::Quadratic(q) => solve_ratio_max(q, mode, &opts).map(Into::into),
            Family::Ball(q) => solve_ratio_max(q, mode, &opts).map(Into::into),
        };
        match solution {
            Ok(s) => {
                out.write(Box::into_raw(Box::new(s)));
                FracmaxStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Closed-form solution: endpoint rule for linear problems, quadratic formula
/// for the ball. Quadratic interval problems return `WrongFamily`.
///
/// # Safety
/// `problem` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fracmax_solve_closed_form(
    problem: *const FracmaxProblem,
    out: *mut *mut FracmaxSolution,
) -> FracmaxStatus {
    guard(|| {
        let p = match problem_ref(problem) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail_with(FracmaxStatus::NullPointer, "output pointer is null");
        }
        let solution: FracmaxSolution = match &p.family {
            Family::Linear(q) => q.solve_closed_form().into(),
            Family::Ball(q) => match q.solve_quadratic() {
                Ok(s) => s.into(),
                Err(e) => return fail(e),
            },
            Family::Quadratic(_) => {
                return fail_with(FracmaxStatus::WrongFamily, "no closed form for this family")
            }
        };
        out.write(Box::into_raw(Box::new(solution)));
        FracmaxStatus::Ok
    })
}

/// Asymptotic estimate of the optimal ratio for a ball problem.
///
/// # Safety
/// `problem` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fracmax_ball_estimate(
    problem: *const FracmaxProblem,
    out: *mut f64,
) -> FracmaxStatus {
    guard(|| {
        let p = match problem_ref(problem) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match &p.family {
            Family::Ball(q) => match q.asymptotic_estimate() {
                Ok(v) => write_out(out, v),
                Err(e) => fail(e),
            },
            _ => fail_with(
                FracmaxStatus::WrongFamily,
                "estimate requires a ball problem",
            ),
        }
    })
}

/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fracmax_solution_free(solution: *mut FracmaxSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// NaN for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracmax_solution_beta_max(solution: *const FracmaxSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.beta_max)
}

/// `|j(beta_max)|`; NaN for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracmax_solution_residual(solution: *const FracmaxSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.residual)
}

/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracmax_solution_iterations(solution: *const FracmaxSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.iterations)
}

/// Number of `j` evaluations spent.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracmax_solution_evaluations(solution: *const FracmaxSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.evaluations)
}

/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracmax_solution_dimension(solution: *const FracmaxSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.x_max.len())
}

/// Copies the maximizer into `buf`.
///
/// # Safety
/// `solution` must be a live handle and `buf` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fracmax_solution_x_max(
    solution: *const FracmaxSolution,
    buf: *mut f64,
    len: usize,
) -> FracmaxStatus {
    let Some(s) = solution.as_ref() else {
        return fail_with(FracmaxStatus::NullPointer, "solution handle is null");
    };
    if buf.is_null() {
        return fail_with(FracmaxStatus::NullPointer, "output pointer is null");
    }
    if len < s.x_max.len() {
        return fail_with(FracmaxStatus::BufferTooSmall, "maximizer buffer too small");
    }
    ptr::copy_nonoverlapping(s.x_max.as_ptr(), buf, s.x_max.len());
    FracmaxStatus::Ok
}
