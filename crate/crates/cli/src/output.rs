//! JSON and plain-text rendering of reports.

use std::fmt::Write;

use serde::Serialize;
use t2lift_core::{CheckReport, Evidence, Witness};

use crate::compute::Computed;
use crate::runner::RunReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format '{other}' (expected json or text)")),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn witness_line(w: &Witness) -> String {
    let mut s = format!("witness {}", w.component);
    if let Some(e) = &w.expr {
        let _ = write!(s, " = {e}");
    }
    if let Some(p) = &w.point {
        let coords: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v:.6}")).collect();
        let _ = write!(s, " at ({})", coords.join(", "));
    }
    if let Some(r) = w.residual {
        let _ = write!(s, " residual {r:.3e}");
    }
    s
}

pub fn check_text(c: &CheckReport, out: &mut String) {
    let tag = if c.consistent { "ok  " } else { "FAIL" };
    let _ = write!(out, "[{tag}] {} {}", c.check, c.verdict.as_str());
    if let Some(ms) = c.elapsed_ms {
        let _ = write!(out, " ({ms} ms)");
    }
    out.push('\n');
    for (k, v) in &c.metadata {
        let _ = writeln!(out, "       {k}: {v}");
    }
    for cond in &c.conditions {
        let ev = match cond.evidence {
            Evidence::Symbolic => "symbolic",
            Evidence::Numeric => "numeric",
        };
        let _ = writeln!(
            out,
            "       - {}: {} ({ev})",
            cond.name,
            cond.verdict.as_str()
        );
        if let Some(n) = &cond.note {
            let _ = writeln!(out, "           note: {n}");
        }
        for w in &cond.witnesses {
            let _ = writeln!(out, "           {}", witness_line(w));
        }
    }
    for n in &c.notes {
        let _ = writeln!(out, "       note: {n}");
    }
}

pub fn run_text(r: &RunReport) -> String {
    let mut out = format!(
        "spec {} (seed {}, tol {:e}, samples {})\n",
        r.spec, r.seed, r.tolerance, r.samples
    );
    if let Some(v) = r.h_variant {
        let _ = writeln!(out, "H variant: {v}");
    }
    for c in &r.checks {
        check_text(c, &mut out);
    }
    for s in &r.skipped {
        let _ = writeln!(out, "[skip] {}: {}", s.suite, s.reason);
    }
    let _ = writeln!(
        out,
        "result: {}",
        if r.consistent {
            "consistent"
        } else {
            "INCONSISTENT"
        }
    );
    out
}

pub fn computed_text(c: &Computed) -> String {
    let mut out = format!(
        "{} of {} on the {} chart, valence ({},{})\n",
        c.quantity, c.spec, c.chart, c.valence[0], c.valence[1]
    );
    if c.components.is_empty() {
        out.push_str("  all components vanish\n");
    }
    for comp in &c.components {
        let _ = writeln!(out, "  {} = {}", comp.index, comp.expr);
    }
    out
}
