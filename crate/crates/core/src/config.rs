//! Problem configuration files.
//!
//! A config holds exactly one family section and an optional `[solver]`
//! section. Blank lines and `#` comments are ignored; vectors are
//! comma-separated numbers.
//!
//! ```text
//! [ball]
//! w0 = 1, 1, 1, 1, 1, 0, 0, 0, 0, 10
//! w  = 1, 0, 0, 0, 0, 1, 1, 1, 1, 1
//! h0 = 15
//! h  = 2.7
//! r  = 1
//!
//! [solver]
//! strategy = hybrid
//! tolerance_j = 1e-10
//! ```
//!
//! | section | keys |
//! |---|---|
//! | `[linear]` | `a b a0 b0 x1 x2` |
//! | `[quadratic]` | `a b c a0 b0 c0 x1 x2` |
//! | `[logratio]` | `f0_expr f_expr x1 x2`, optional `grid_resolution refine_tolerance` |
//! | `[ball]` | `w0 w h0 h r` |
//! | `[solver]` | optional `strategy tolerance_j tolerance_beta max_iterations` |
//!
//! Expressions follow the grammar in [`crate::expr`].

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::expr::Expr;
use crate::problems::{
    HilbertBallProblem, IntervalSearch, LinearIntervalProblem, LogRatioProblem,
    QuadraticIntervalProblem,
};
use crate::reduction::{SolverOptions, Strategy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line number, 0 when the error concerns the file as a whole.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Linear,
    Quadratic,
    LogRatio,
    Ball,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Quadratic => "quadratic",
            Family::LogRatio => "logratio",
            Family::Ball => "ball",
        }
    }

    fn from_section(name: &str) -> Option<Self> {
        Some(match name {
            "linear" => Family::Linear,
            "quadratic" => Family::Quadratic,
            "logratio" => Family::LogRatio,
            "ball" => Family::Ball,
            _ => return None,
        })
    }

    fn required_keys(self) -> &'static [&'static str] {
        match self {
            Family::Linear => &["a", "b", "a0", "b0", "x1", "x2"],
            Family::Quadratic => &["a", "b", "c", "a0", "b0", "c0", "x1", "x2"],
            Family::LogRatio => &["f0_expr", "f_expr", "x1", "x2"],
            Family::Ball => &["w0", "w", "h0", "h", "r"],
        }
    }

    fn optional_keys(self) -> &'static [&'static str] {
        match self {
            Family::LogRatio => &["grid_resolution", "refine_tolerance"],
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyConfig {
    Linear {
        a: f64,
        b: f64,
        a0: f64,
        b0: f64,
        x1: f64,
        x2: f64,
    },
    Quadratic {
        a: f64,
        b: f64,
        c: f64,
        a0: f64,
        b0: f64,
        c0: f64,
        x1: f64,
        x2: f64,
    },
    LogRatio {
        f0_expr: Expr,
        f_expr: Expr,
        x1: f64,
        x2: f64,
        grid_resolution: Option<usize>,
        refine_tolerance: Option<f64>,
    },
    Ball {
        w0: Vec<f64>,
        w: Vec<f64>,
        h0: f64,
        h: f64,
        r: f64,
    },
}

impl FamilyConfig {
    pub fn family(&self) -> Family {
        match self {
            FamilyConfig::Linear { .. } => Family::Linear,
            FamilyConfig::Quadratic { .. } => Family::Quadratic,
            FamilyConfig::LogRatio { .. } => Family::LogRatio,
            FamilyConfig::Ball { .. } => Family::Ball,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolverOverrides {
    pub strategy: Option<Strategy>,
    pub tolerance_j: Option<f64>,
    pub tolerance_beta: Option<f64>,
    pub max_iterations: Option<usize>,
}

impl SolverOverrides {
    fn is_empty(&self) -> bool {
        *self == SolverOverrides::default()
    }

    pub fn apply(&self, mut opts: SolverOptions) -> SolverOptions {
        if let Some(s) = self.strategy {
            opts.strategy = s;
        }
        if let Some(t) = self.tolerance_j {
            opts.tolerance_j = t;
        }
        if let Some(t) = self.tolerance_beta {
            opts.tolerance_beta = t;
        }
        if let Some(n) = self.max_iterations {
            opts.max_iterations = n;
        }
        opts
    }
}

/// A validated problem built from a config.
#[derive(Debug, Clone)]
pub enum Instance {
    Linear(LinearIntervalProblem),
    Quadratic(QuadraticIntervalProblem),
    LogRatio(LogRatioProblem),
    Ball(HilbertBallProblem),
}

#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub family: FamilyConfig,
    pub solver: SolverOverrides,
    /// Line of the family section header, for error reporting.
    header_line: usize,
}

impl ProblemConfig {
    pub fn new(family: FamilyConfig, solver: SolverOverrides) -> Self {
        ProblemConfig {
            family,
            solver,
            header_line: 0,
        }
    }

    /// Parses and validates a config, including the family invariants.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let sections = split_sections(text)?;
        let mut family_section: Option<&Section> = None;
        let mut solver_section: Option<&Section> = None;
        for section in &sections {
            if section.name == "solver" {
                if solver_section.is_some() {
                    return err(section.line, "duplicate [solver] section");
                }
                solver_section = Some(section);
            } else if Family::from_section(&section.name).is_some() {
                if let Some(first) = family_section {
                    return err(
                        section.line,
                        format!(
                            "second family section [{}]; [{}] already declared on line {}",
                            section.name, first.name, first.line
                        ),
                    );
                }
                family_section = Some(section);
            } else {
                return err(
                    section.line,
                    format!(
                        "unknown section [{}] (expected linear, quadratic, logratio, ball or solver)",
                        section.name
                    ),
                );
            }
        }
        let Some(section) = family_section else {
            return err(
                0,
                "no family section (expected one of [linear], [quadratic], [logratio], [ball])",
            );
        };
        let family = parse_family(section)?;
        let solver = match solver_section {
            Some(s) => parse_solver(s)?,
            None => SolverOverrides::default(),
        };
        let config = ProblemConfig {
            family,
            solver,
            header_line: section.line,
        };
        config.instance()?;
        if let Some(s) = solver_section {
            if let Err(e) = config.solver.apply(SolverOptions::default()).validate() {
                return err(s.line, e.to_string());
            }
        }
        Ok(config)
    }

    /// Builds the problem, reporting invariant violations against the
    /// family header line.
    pub fn instance(&self) -> Result<Instance, ConfigError> {
        let line = self.header_line;
        let wrap = |e: crate::Error| ConfigError {
            line,
            message: format!("[{}] {}", self.family.family().name(), e),
        };
        Ok(match &self.family {
            &FamilyConfig::Linear {
                a,
                b,
                a0,
                b0,
                x1,
                x2,
            } => Instance::Linear(LinearIntervalProblem::new(a, b, a0, b0, x1, x2).map_err(wrap)?),
            &FamilyConfig::Quadratic {
                a,
                b,
                c,
                a0,
                b0,
                c0,
                x1,
                x2,
            } => Instance::Quadratic(
                QuadraticIntervalProblem::new(a, b, c, a0, b0, c0, x1, x2).map_err(wrap)?,
            ),
            FamilyConfig::LogRatio {
                f0_expr,
                f_expr,
                x1,
                x2,
                grid_resolution,
                refine_tolerance,
            } => {
                let defaults = IntervalSearch::default();
                let search = IntervalSearch {
                    grid_resolution: grid_resolution.unwrap_or(defaults.grid_resolution),
                    refine_tolerance: refine_tolerance.unwrap_or(defaults.refine_tolerance),
                };
                Instance::LogRatio(
                    LogRatioProblem::new(f0_expr.to_fn(), f_expr.to_fn(), *x1, *x2, search)
                        .map_err(wrap)?,
                )
            }
            FamilyConfig::Ball { w0, w, h0, h, r } => Instance::Ball(
                HilbertBallProblem::new(w0.clone(), w.clone(), *h0, *h, *r).map_err(wrap)?,
            ),
        })
    }

    /// Canonical text form; [`ProblemConfig::parse`] reads it back to an
    /// equal config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let num = |v: f64| format!("{v:?}");
        let vec = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "[{}]", self.family.family().name());
        match &self.family {
            FamilyConfig::Linear {
                a,
                b,
                a0,
                b0,
                x1,
                x2,
            } => {
                for (k, v) in [
                    ("a", a),
                    ("b", b),
                    ("a0", a0),
                    ("b0", b0),
                    ("x1", x1),
                    ("x2", x2),
                ] {
                    let _ = writeln!(out, "{k} = {}", num(*v));
                }
            }
            FamilyConfig::Quadratic {
                a,
                b,
                c,
                a0,
                b0,
                c0,
                x1,
                x2,
            } => {
                for (k, v) in [
                    ("a", a),
                    ("b", b),
                    ("c", c),
                    ("a0", a0),
                    ("b0", b0),
                    ("c0", c0),
                    ("x1", x1),
                    ("x2", x2),
                ] {
                    let _ = writeln!(out, "{k} = {}", num(*v));
                }
            }
            FamilyConfig::LogRatio {
                f0_expr,
                f_expr,
                x1,
                x2,
                grid_resolution,
                refine_tolerance,
            } => {
                let _ = writeln!(out, "f0_expr = {f0_expr}");
                let _ = writeln!(out, "f_expr = {f_expr}");
                let _ = writeln!(out, "x1 = {}", num(*x1));
                let _ = writeln!(out, "x2 = {}", num(*x2));
                if let Some(n) = grid_resolution {
                    let _ = writeln!(out, "grid_resolution = {n}");
                }
                if let Some(t) = refine_tolerance {
                    let _ = writeln!(out, "refine_tolerance = {}", num(*t));
                }
            }
            FamilyConfig::Ball { w0, w, h0, h, r } => {
                let _ = writeln!(out, "w0 = {}", vec(w0));
                let _ = writeln!(out, "w = {}", vec(w));
                let _ = writeln!(out, "h0 = {}", num(*h0));
                let _ = writeln!(out, "h = {}", num(*h));
                let _ = writeln!(out, "r = {}", num(*r));
            }
        }
        if !self.solver.is_empty() {
            let _ = writeln!(out, "\n[solver]");
            let s = &self.solver;
            if let Some(v) = s.strategy {
                let _ = writeln!(out, "strategy = {v}");
            }
            if let Some(v) = s.tolerance_j {
                let _ = writeln!(out, "tolerance_j = {}", num(v));
            }
            if let Some(v) = s.tolerance_beta {
                let _ = writeln!(out, "tolerance_beta = {}", num(v));
            }
            if let Some(v) = s.max_iterations {
                let _ = writeln!(out, "max_iterations = {v}");
            }
        }
        out
    }
}

/// Field-by-field equality; where the config came from is ignored.
impl PartialEq for ProblemConfig {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.solver == other.solver
    }
}

struct Entry {
    line: usize,
    value: String,
}

struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

fn split_sections(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(line, format!("malformed section header `{content}`"));
            };
            sections.push(Section {
                name: name.trim().to_string(),
                line,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return err(line, format!("expected `key = value`, found `{content}`"));
        };
        let key = key.trim();
        if key.is_empty() {
            return err(line, "missing key before `=`");
        }
        let Some(section) = sections.last_mut() else {
            return err(
                line,
                format!("key `{key}` appears before any section header"),
            );
        };
        if let Some(previous) = section.entries.get(key) {
            return err(
                line,
                format!(
                    "duplicate key `{key}` (first set on line {})",
                    previous.line
                ),
            );
        }
        section.entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.trim().to_string(),
            },
        );
    }
    Ok(sections)
}

impl Section {
    fn check_keys(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        for (key, entry) in &self.entries {
            if !allowed.contains(&key.as_str()) {
                return err(
                    entry.line,
                    format!(
                        "unknown key `{key}` in [{}] (allowed: {})",
                        self.name,
                        allowed.join(", ")
                    ),
                );
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.entries.get(key).ok_or_else(|| ConfigError {
            line: self.line,
            message: format!("missing key `{key}` in [{}]", self.name),
        })
    }

    fn number(&self, key: &str) -> Result<f64, ConfigError> {
        parse_number(self.get(key)?, key)
    }

    fn optional<T>(
        &self,
        key: &str,
        parse: impl Fn(&Entry, &str) -> Result<T, ConfigError>,
    ) -> Result<Option<T>, ConfigError> {
        self.entries.get(key).map(|e| parse(e, key)).transpose()
    }
}

fn parse_number(entry: &Entry, key: &str) -> Result<f64, ConfigError> {
    match entry.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => err(
            entry.line,
            format!("`{key}` must be a finite number, found `{}`", entry.value),
        ),
    }
}

fn parse_count(entry: &Entry, key: &str) -> Result<usize, ConfigError> {
    entry.value.parse::<usize>().or_else(|_| {
        err(
            entry.line,
            format!(
                "`{key}` must be a non-negative integer, found `{}`",
                entry.value
            ),
        )
    })
}

fn parse_vector(entry: &Entry, key: &str) -> Result<Vec<f64>, ConfigError> {
    let mut out = Vec::new();
    for (i, item) in entry.value.split(',').enumerate() {
        let item = item.trim();
        match item.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ => {
                return err(
                    entry.line,
                    format!(
                        "`{key}` component {} must be a finite number, found `{item}`",
                        i + 1
                    ),
                )
            }
        }
    }
    Ok(out)
}

fn parse_expr(entry: &Entry, key: &str) -> Result<Expr, ConfigError> {
    Expr::parse(&entry.value).map_err(|e| ConfigError {
        line: entry.line,
        message: format!("`{key}`: {e}"),
    })
}

fn parse_family(s: &Section) -> Result<FamilyConfig, ConfigError> {
    let family = Family::from_section(&s.name).expect("caller checked the section name");
    let allowed: Vec<&str> = family
        .required_keys()
        .iter()
        .chain(family.optional_keys())
        .copied()
        .collect();
    s.check_keys(&allowed)?;
    Ok(match family {
        Family::Linear => FamilyConfig::Linear {
            a: s.number("a")?,
            b: s.number("b")?,
            a0: s.number("a0")?,
            b0: s.number("b0")?,
            x1: s.number("x1")?,
            x2: s.number("x2")?,
        },
        Family::Quadratic => FamilyConfig::Quadratic {
            a: s.number("a")?,
            b: s.number("b")?,
            c: s.number("c")?,
            a0: s.number("a0")?,
            b0: s.number("b0")?,
            c0: s.number("c0")?,
            x1: s.number("x1")?,
            x2: s.number("x2")?,
        },
        Family::LogRatio => FamilyConfig::LogRatio {
            f0_expr: parse_expr(s.get("f0_expr")?, "f0_expr")?,
            f_expr: parse_expr(s.get("f_expr")?, "f_expr")?,
            x1: s.number("x1")?,
            x2: s.number("x2")?,
            grid_resolution: s.optional("grid_resolution", parse_count)?,
            refine_tolerance: s.optional("refine_tolerance", parse_number)?,
        },
        Family::Ball => FamilyConfig::Ball {
            w0: parse_vector(s.get("w0")?, "w0")?,
            w: parse_vector(s.get("w")?, "w")?,
            h0: s.number("h0")?,
            h: s.number("h")?,
            r: s.number("r")?,
        },
    })
}

fn parse_solver(s: &Section) -> Result<SolverOverrides, ConfigError> {
    s.check_keys(&[
        "strategy",
        "tolerance_j",
        "tolerance_beta",
        "max_iterations",
    ])?;
    let strategy = s.optional("strategy", |e, _| {
        e.value.parse::<Strategy>().or_else(|m| err(e.line, m))
    })?;
    Ok(SolverOverrides {
        strategy,
        tolerance_j: s.optional("tolerance_j", parse_number)?,
        tolerance_beta: s.optional("tolerance_beta", parse_number)?,
        max_iterations: s.optional("max_iterations", parse_count)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BALL: &str = "\
# positive example
[ball]
w0 = 1, 1, 1, 1, 1, 0, 0, 0, 0, 10
w  = 1, 0, 0, 0, 0, 1, 1, 1, 1, 1
h0 = 15
h  = 2.7   # denominator offset
r  = 1

[solver]
strategy = dinkelbach
tolerance_j = 1e-11
";

    #[test]
    fn parses_ball_with_solver_block() {
        let c = ProblemConfig::parse(BALL).unwrap();
        let FamilyConfig::Ball { w0, h, .. } = &c.family else {
            panic!("wrong family");
        };
        assert_eq!(w0.len(), 10);
        assert_eq!(*h, 2.7);
        assert_eq!(c.solver.strategy, Some(Strategy::Dinkelbach));
        assert_eq!(c.solver.tolerance_j, Some(1e-11));
        assert!(matches!(c.instance().unwrap(), Instance::Ball(_)));
    }

    #[test]
    fn dump_reparses_identically() {
        let c = ProblemConfig::parse(BALL).unwrap();
        let again = ProblemConfig::parse(&c.to_text()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.to_text(), again.to_text());
    }

    #[test]
    fn logratio_expressions() {
        let text = "[logratio]\nf0_expr = 1 + x^2\nf_expr = 2 + x\nx1 = 0\nx2 = 1\ngrid_resolution = 513\n";
        let c = ProblemConfig::parse(text).unwrap();
        let again = ProblemConfig::parse(&c.to_text()).unwrap();
        assert_eq!(c, again);
    }

    fn line_of(text: &str) -> (usize, String) {
        let e = ProblemConfig::parse(text).unwrap_err();
        (e.line, e.message)
    }

    #[test]
    fn errors_are_line_precise() {
        let (line, msg) = line_of("[linear]\na = 1\nb = one\n");
        assert_eq!(line, 3);
        assert!(msg.contains("`b`"), "{msg}");

        let (line, msg) = line_of("[linear]\na = 1\nb = 1\na0 = 2\nb0 = 0\nx1 = 0\n");
        assert_eq!(line, 1);
        assert!(msg.contains("missing key `x2`"), "{msg}");

        let (line, _) = line_of("[linear]\na = 1\na = 2\n");
        assert_eq!(line, 3);

        let (line, msg) = line_of("[linear]\nzeta = 1\n");
        assert_eq!(line, 2);
        assert!(msg.contains("unknown key"), "{msg}");

        let (line, msg) = line_of("[ball]\nw0 = 1\nw = 1\nh0 = 0\nh = 2\nr = 1\n[linear]\n");
        assert_eq!(line, 7);
        assert!(msg.contains("second family"), "{msg}");

        let (line, _) = line_of("a = 1\n");
        assert_eq!(line, 1);

        let (line, msg) = line_of("[logratio]\nf0_expr = 1 + y\nf_expr = 2\nx1 = 0\nx2 = 1\n");
        assert_eq!(line, 2);
        assert!(msg.contains("unknown identifier"), "{msg}");

        let (line, _) = line_of("[ball]\nw0 = 1, x\nw = 1, 0\nh0 = 0\nh = 2\nr = 1\n");
        assert_eq!(line, 2);
    }

    #[test]
    fn family_invariants_checked_on_load() {
        let (line, msg) = line_of("\n[ball]\nw0 = 1, 0\nw = 3, 0\nh0 = 0\nh = 2\nr = 1\n");
        assert_eq!(line, 2);
        assert!(msg.contains("h must exceed"), "{msg}");

        let (line, msg) = line_of(
            "[linear]\na = 1\nb = 1\na0 = 2\nb0 = 0\nx1 = 0\nx2 = 1\n[solver]\ntolerance_j = 0\n",
        );
        assert_eq!(line, 8);
        assert!(msg.contains("tolerances"), "{msg}");

        assert!(ProblemConfig::parse("").is_err());
        assert!(ProblemConfig::parse("[cubic]\n").is_err());
    }
}
