//! Executes parsed scripts and renders their results.

use serde_json::{json, Map, Value};

use crate::checks::{self, CheckReport, Verdict};
use crate::error::Error;
use crate::invariants::{
    ideal_invariants, is_reduction, module_invariants, sally_length, FitConfig,
};
use crate::ring::goto_defect;
use crate::script::{Command, ParseError, ReplayBuilder, SessionScript};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_STABILIZED: i32 = 3;

/// The worked semigroup session shipped as `brimcalc example paper`.
pub const WORKED_EXAMPLE: &str = "\
# two copies of I = (t^7, t^17, t^33) over k[[t^7, t^15, t^17, t^33]]
ring R = semigroup(7, 15, 17, 33)
ideal I = (t^7, t^17, t^33)
ideal J = (t^7)
module M = I (+) I
compute invariants I
compute invariants M
compute reduction I J
check cm_fiber I reduction J
check vasconcelos M
";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Status {
    pub violated: bool,
    pub input_error: bool,
    pub not_stabilized: bool,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        if self.input_error {
            EXIT_INPUT
        } else if self.not_stabilized {
            EXIT_NOT_STABILIZED
        } else if self.violated {
            EXIT_VIOLATED
        } else {
            EXIT_OK
        }
    }

    pub fn record_report(&mut self, r: &CheckReport) {
        self.violated |= r.verdict == Verdict::Violated;
        self.not_stabilized |= r.not_stabilized();
        self.input_error |= r.failure == Some(checks::FailureKind::Input);
    }

    fn record_error(&mut self, e: &Error) {
        if e.is_not_stabilized() {
            self.not_stabilized = true;
        } else {
            self.input_error = true;
        }
    }

    pub fn merge(&mut self, other: Status) {
        self.violated |= other.violated;
        self.input_error |= other.input_error;
        self.not_stabilized |= other.not_stabilized;
    }
}

pub struct Outcome {
    pub document: Value,
    pub exit_code: i32,
}

fn error_status(e: &Error) -> &'static str {
    if e.is_not_stabilized() {
        "not_stabilized"
    } else {
        "input_error"
    }
}

enum CommandOutput {
    Report(CheckReport),
    Computed(Value),
    Failed(Value, Error),
}

fn computed(head: Value, value: crate::Result<Value>) -> CommandOutput {
    match value {
        Ok(v) => CommandOutput::Computed(v),
        Err(e) => CommandOutput::Failed(head, e),
    }
}

fn run_command(s: &SessionScript, command: &Command, cfg: &FitConfig) -> CommandOutput {
    let ideal = |n: &str| s.ideal(n).expect("resolved by the parser");
    let module = |n: &str| s.module(n).expect("resolved by the parser");
    let ring = &s.ring.as_ref().expect("commands need a ring").1;
    let mut replay = ReplayBuilder::new(ring, s.settings);
    let (report, replay_command) = match command {
        Command::ComputeInvariants { target } => {
            let value = if let Some(i) = s.ideal(target) {
                ideal_invariants(i, cfg)
                    .map(|inv| json!({ "kind": "ideal", "target": target, "invariants": inv }))
            } else {
                module_invariants(module(target), cfg)
                    .map(|inv| json!({ "kind": "module", "target": target, "invariants": inv }))
            };
            return computed(json!({ "kind": "invariants", "target": target }), value);
        }
        Command::ComputeReduction { i, j } => {
            let (ii, jj) = (ideal(i), ideal(j));
            let value = (|| -> crate::Result<Value> {
                let red = is_reduction(jj, ii, cfg.s_max)?;
                let mut v = json!({
                    "kind": "reduction",
                    "i": i,
                    "j": j,
                    "reduction_number": red,
                    "goto_defect": goto_defect(ii, jj)?,
                });
                if red.is_some() {
                    v["sally_length_1"] = json!(sally_length(ii, jj, 1)?);
                }
                Ok(v)
            })();
            return computed(json!({ "kind": "reduction", "i": i, "j": j }), value);
        }
        Command::Vasconcelos { module: m } => {
            let name = replay.module(module(m));
            (
                checks::check_vasconcelos(module(m), cfg),
                Command::Vasconcelos { module: name },
            )
        }
        Command::Northcott { module: m } => {
            let name = replay.module(module(m));
            (
                checks::check_northcott_equality(module(m), cfg),
                Command::Northcott { module: name },
            )
        }
        Command::CmFiber { i, j } => (
            checks::check_cm_fiber_ideal(ideal(i), ideal(j), cfg),
            Command::CmFiber { i: replay.ideal(ideal(i)), j: replay.ideal(ideal(j)) },
        ),
        Command::ReductionBound { i, j } => (
            checks::check_reduction_bound(ideal(i), ideal(j), cfg),
            Command::ReductionBound { i: replay.ideal(ideal(i)), j: replay.ideal(ideal(j)) },
        ),
        Command::SumFormulas { i, rank } => (
            checks::check_sum_formulas(ideal(i), *rank, cfg),
            Command::SumFormulas { i: replay.ideal(ideal(i)), rank: *rank },
        ),
        Command::MixedSum { i, j, u, v } => (
            checks::check_mixed_sum(ideal(i), ideal(j), *u, *v, cfg),
            Command::MixedSum { i: replay.ideal(ideal(i)), j: replay.ideal(ideal(j)), u: *u, v: *v },
        ),
        Command::PropDecomposition { i, j } => (
            checks::check_prop_decomposition(ideal(i), ideal(j), cfg.initial_n_max(2, 2), cfg),
            Command::PropDecomposition { i: replay.ideal(ideal(i)), j: replay.ideal(ideal(j)) },
        ),
    };
    let mut report = report;
    if report.verdict == Verdict::Violated {
        report.replay = Some(replay.finish(&replay_command));
    }
    CommandOutput::Report(report)
}

/// Runs every command in order; failures are recorded per command.
pub fn run_script(s: &SessionScript, base: &FitConfig) -> Outcome {
    let mut cfg = *base;
    s.settings.apply(&mut cfg);
    let mut status = Status::default();
    let mut results = Vec::new();
    for st in &s.commands {
        let mut head = Map::new();
        head.insert("command".into(), json!(st.command.to_string()));
        head.insert("line".into(), json!(st.line));
        let body = match run_command(s, &st.command, &cfg) {
            CommandOutput::Report(report) => {
                status.record_report(&report);
                report.to_json()
            }
            CommandOutput::Computed(v) => {
                head.insert("status".into(), json!("ok"));
                v
            }
            CommandOutput::Failed(v, e) => {
                status.record_error(&e);
                head.insert("status".into(), json!(error_status(&e)));
                head.insert("error".into(), json!(e.to_string()));
                v
            }
        };
        if let Value::Object(fields) = body {
            head.extend(fields);
        }
        results.push(Value::Object(head));
    }
    let ideals: Vec<Value> = s
        .ideals
        .iter()
        .map(|(n, i)| json!({ "name": n, "generators": i.to_string(), "m_primary": i.is_m_primary() }))
        .collect();
    let modules: Vec<Value> = s
        .modules
        .iter()
        .map(|(n, m, parts)| json!({ "name": n, "summands": parts, "rank": m.rank() }))
        .collect();
    let document = json!({
        "version": VERSION,
        "ring": s.ring.as_ref().map(|(n, r)| json!({ "name": n, "ring": r.to_string() })),
        "ideals": ideals,
        "modules": modules,
        "results": results,
    });
    Outcome {
        document,
        exit_code: status.exit_code(),
    }
}

pub fn parse_error_document(e: &ParseError) -> Value {
    json!({
        "version": VERSION,
        "error": {
            "line": e.line,
            "column": e.column,
            "kind": e.kind.as_str(),
            "message": e.message,
        },
    })
}

/// Left-aligned columns separated by two spaces.
pub fn format_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (k, c) in cells.iter().enumerate() {
            if k + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{:<w$}  ", c, w = widths[k]));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => "-".into(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn invariant_summary(v: &Value) -> String {
    let inv = &v["invariants"];
    match v["kind"].as_str() {
        Some("ideal") => format!(
            "e = {}, f = {}, colength = {}, mu = {}",
            inv["e"], inv["f"], inv["colength"], inv["mu"]
        ),
        Some("module") => format!(
            "br = {}, f = {}, len(F/M) = {}, mu = {}",
            inv["br"], inv["f"], inv["len_f_mod_m"], inv["mu_m"]
        ),
        Some("reduction") => match v["reduction_number"].as_u64() {
            Some(r) => format!(
                "red = {r}, len(mI/mJ) = {}, sally(1) = {}",
                v["goto_defect"],
                cell(v.get("sally_length_1"))
            ),
            None => "not a reduction".into(),
        },
        _ => String::new(),
    }
}

/// Human-readable rendering of a script result document.
pub fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    if let Some(r) = doc["ring"].as_object() {
        out.push_str(&format!("ring {} = {}\n", cell(r.get("name")), cell(r.get("ring"))));
    }
    let mut rows = Vec::new();
    for r in doc["results"].as_array().into_iter().flatten() {
        let (status, detail) = match r.get("verdict") {
            Some(v) => (
                cell(Some(v)),
                r.get("reason").map(|x| cell(Some(x))).unwrap_or_default(),
            ),
            None => match r["status"].as_str() {
                Some("ok") => ("ok".into(), invariant_summary(r)),
                _ => (cell(r.get("status")), cell(r.get("error"))),
            },
        };
        rows.push(vec![
            cell(r.get("line")),
            cell(r.get("command")),
            status,
            cell(r.get("lhs")),
            cell(r.get("rhs")),
            cell(r.get("slack")),
            detail,
        ]);
    }
    if !rows.is_empty() {
        out.push_str(&format_table(
            &["line", "command", "result", "lhs", "rhs", "slack", "detail"],
            &rows,
        ));
    }
    for r in doc["results"].as_array().into_iter().flatten() {
        if let Some(script) = r.get("replay").and_then(Value::as_str) {
            out.push_str(&format!("\nreplay for line {}:\n{}", cell(r.get("line")), script));
        }
    }
    out
}
