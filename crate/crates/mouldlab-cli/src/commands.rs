//! The `eval`, `check`, `report` and `ma` commands, as pure functions from
//! arguments to an exit code and output text.
//!
//! Exit codes: 0 success / property holds, 1 property fails, 2 usage,
//! parse, type or evaluation error.

use std::time::Instant;

use mouldlab::acceptance::{disclosure, run_criterion, AcceptanceConfig, CriterionOutcome};
use mouldlab::checks::{
    check_alternal, check_circ_neutral, check_first_alternality, check_krv_ell, check_push_invariant, fay_defect,
    verify_equivalences, CheckReport, Mode,
};
use mouldlab::mouldcore::MouldA;
use mouldlab::ncseries::{ma_ab, NCSeries};
use mouldlab::serial::{constants_to_json, mould_to_json, scalar_to_json};
use mouldlab::Error;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::dsl::{evaluate, parse_expr, EvalConfig, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Output format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Properties accepted by `check`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Alternal,
    Push,
    CircNeutral,
    FirstAlt,
    Fay,
    Krv,
    Equiv,
}

/// Result of running a command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

fn pretty(v: &Json) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn moulda_to_json(m: &MouldA) -> Json {
    json!({ "a_coeff": scalar_to_json(&m.a_coeff), "body": mould_to_json(&m.body) })
}

/// Renders a value in the requested format.
pub fn render_value(v: &Value, format: Format) -> String {
    match format {
        Format::Json => pretty(&match v {
            Value::Scalar(s) => json!({ "scalar": scalar_to_json(s) }),
            Value::Mould(m) => mould_to_json(m),
            Value::MouldA(m) => moulda_to_json(m),
            Value::Constants(c) => constants_to_json(c),
        }),
        Format::Text => {
            let mut s = match v {
                Value::Scalar(s) => s.to_string(),
                Value::Mould(m) => m.render(),
                Value::MouldA(m) => m.render(),
                Value::Constants(c) => {
                    let items: Vec<String> = c.entries().map(|(r, x)| format!("c{r} = {x}")).collect();
                    if items.is_empty() {
                        "all constants zero".into()
                    } else {
                        items.join("\n")
                    }
                }
            };
            s.push('\n');
            s
        }
    }
}

/// `eval EXPR`: evaluates and prints the canonical form.
pub fn cmd_eval(expr: &str, cfg: &EvalConfig, format: Format) -> Outcome {
    match parse_expr(expr).and_then(|e| evaluate(&e, cfg)) {
        Ok(v) => Outcome::ok(render_value(&v, format)),
        Err(e) => Outcome::usage(e),
    }
}

fn report_out(rep: &CheckReport, format: Format) -> Outcome {
    let stdout = match format {
        Format::Json => pretty(&rep.to_json()),
        Format::Text => format!("{}\n", rep.render_text()),
    };
    Outcome { code: if rep.holds() { EXIT_OK } else { EXIT_FAILS }, stdout, stderr: String::new() }
}

/// `check PROPERTY EXPR`: exit 0 if the property holds at every computed
/// depth, 1 with the witness report otherwise.
pub fn cmd_check(property: Property, expr: &str, mode: Mode, cfg: &EvalConfig, format: Format) -> Outcome {
    let m = match parse_expr(expr).and_then(|e| evaluate(&e, cfg)) {
        Ok(Value::Mould(m)) => m,
        Ok(_) => return Outcome::usage("check needs an expression whose value is a mould"),
        Err(e) => return Outcome::usage(e),
    };
    let rep = match property {
        Property::Alternal => check_alternal(&m),
        Property::Push => check_push_invariant(&m),
        Property::CircNeutral => check_circ_neutral(&m, mode),
        Property::FirstAlt => check_first_alternality(&m, mode),
        Property::Fay => fay_defect(&m, mode),
        Property::Krv => check_krv_ell(&m),
        Property::Equiv => {
            return match verify_equivalences(&m, None, mode) {
                Ok(r) => {
                    let holds = r.all_hold() && r.agree;
                    let stdout = match format {
                        Format::Json => pretty(&r.to_json()),
                        Format::Text => r.render_text(),
                    };
                    Outcome { code: if holds { EXIT_OK } else { EXIT_FAILS }, stdout, stderr: String::new() }
                }
                Err(Error::Inapplicable(msg)) => Outcome {
                    code: EXIT_FAILS,
                    stdout: match format {
                        Format::Json => pretty(&json!({ "property": "equiv", "inapplicable": msg })),
                        Format::Text => format!("equivalences inapplicable: {msg}\n"),
                    },
                    stderr: String::new(),
                },
                Err(e) => Outcome::usage(e),
            };
        }
    };
    match rep {
        Ok(rep) => report_out(&rep, format),
        Err(e) => Outcome::usage(e),
    }
}

/// Thread count from `MOULDLAB_THREADS` (unset or 0 means automatic).
pub fn threads_from_env() -> Result<usize, String> {
    match std::env::var("MOULDLAB_THREADS") {
        Err(_) => Ok(0),
        Ok(s) => s.trim().parse().map_err(|_| format!("MOULDLAB_THREADS must be a nonnegative integer, got '{s}'")),
    }
}

/// The acceptance report as JSON (no timings, so equal seeds give
/// byte-identical output).
pub fn report_json(cfg: &AcceptanceConfig, outcomes: &[CriterionOutcome]) -> Json {
    json!({
        "suite": "acceptance",
        "seed": cfg.seed,
        "max_depth": cfg.max_depth,
        "max_weight": cfg.max_weight,
        "passed": outcomes.iter().all(|o| o.passed),
        "partial": outcomes.iter().any(|o| o.partial),
        "criteria": outcomes.iter().map(CriterionOutcome::to_json).collect::<Vec<_>>(),
    })
}

/// `report --suite acceptance`: runs criteria 1–9 concurrently, then the
/// runtime/disclosure criterion; output is ordered by criterion id and
/// timings go to standard error.
pub fn cmd_report(cfg: &AcceptanceConfig, format: Format, threads: usize) -> Outcome {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let start = Instant::now();
    let mut timed: Vec<(CriterionOutcome, f64)> = pool.install(|| {
        (1..=9u32)
            .into_par_iter()
            .map(|id| {
                let t = Instant::now();
                let o = run_criterion(id, cfg);
                (o, t.elapsed().as_secs_f64())
            })
            .collect()
    });
    let total = start.elapsed();
    timed.sort_by_key(|(o, _)| o.id);
    let mut stderr = String::new();
    for (o, secs) in &timed {
        stderr.push_str(&format!("criterion {}: {secs:.2}s\n", o.id));
    }
    stderr.push_str(&format!("total: {:.2}s\n", total.as_secs_f64()));
    let mut outcomes: Vec<CriterionOutcome> = timed.into_iter().map(|(o, _)| o).collect();
    outcomes.push(disclosure(total));
    let passed = outcomes.iter().all(|o| o.passed);
    let stdout = match format {
        Format::Json => pretty(&report_json(cfg, &outcomes)),
        Format::Text => {
            let mut s = String::new();
            for o in &outcomes {
                s.push_str(&o.line());
                s.push('\n');
                for d in &o.details {
                    s.push_str(&format!("    {d}\n"));
                }
            }
            s
        }
    };
    Outcome { code: if passed { EXIT_OK } else { EXIT_FAILS }, stdout, stderr }
}

/// `ma SERIES`: parses a series in `a, b` and prints `q·a + ma(rest)`.
pub fn cmd_ma(series: &str, max_weight: usize, format: Format) -> Outcome {
    match NCSeries::parse(series, max_weight).and_then(|f| ma_ab(&f)) {
        Ok(m) => Outcome::ok(render_value(&Value::MouldA(m), format)),
        Err(e) => Outcome::usage(e),
    }
}
