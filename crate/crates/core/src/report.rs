//! Text and JSON-lines rendering of experiment reports.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::experiments::{ExperimentReport, InstanceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "table" => Ok(Format::Table),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(Error::InvalidArgument(format!("unknown format {s:?}"))),
        }
    }
}

/// Renders a report. Output is deterministic unless `timings` is set. A
/// report with no instances renders as the header alone.
pub fn emit(report: &ExperimentReport, format: Format, timings: bool) -> String {
    match format {
        Format::Table => table(report, timings),
        Format::Jsonl => jsonl(report, timings),
    }
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    record: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

fn line<T: Serialize>(out: &mut String, record: &str, body: &T) {
    let text = serde_json::to_string(&Tagged { record, body }).expect("records serialize");
    out.push_str(&text);
    out.push('\n');
}

fn jsonl(r: &ExperimentReport, timings: bool) -> String {
    let mut out = String::new();
    line(
        &mut out,
        "header",
        &json!({ "theorem": r.theorem, "max_degree": r.max_degree }),
    );
    if r.instances == 0 && r.groups.is_empty() {
        return out;
    }
    for g in &r.groups {
        line(&mut out, "group", g);
    }
    for c in &r.counterexamples {
        line(&mut out, "counterexample", c);
    }
    for w in &r.witnesses {
        line(&mut out, "witness", w);
    }
    let mut summary = json!({
        "status": r.status,
        "instances": r.instances,
        "budget_exhausted": r.budget_exhausted,
        "structural_checks": r.structural_checks,
        "counterexamples": r.counterexamples.len(),
        "notes": r.notes,
    });
    if timings {
        summary["wall_time_ms"] = json!(r.wall_time.as_millis() as u64);
    }
    line(&mut out, "summary", &summary);
    out
}

fn instance_line(out: &mut String, i: &InstanceRecord) {
    let _ = write!(out, "  {} {} type {}", i.group, i.map, i.kernel_type);
    if i.synchronizes {
        let _ = write!(out, " synchronized");
        if let Some(l) = i.word_length {
            let _ = write!(out, " (word length {l})");
        }
    } else {
        let edges = i.gr_edges.as_ref().map_or(0, Vec::len);
        let _ = write!(out, " not synchronized, min rank {}, Gr {} edges", i.min_rank, edges);
    }
    if !i.note.is_empty() {
        let _ = write!(out, " - {}", i.note);
    }
    out.push('\n');
}

fn table(r: &ExperimentReport, timings: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "theorem {}  max degree {}", r.theorem, r.max_degree);
    if r.instances == 0 && r.groups.is_empty() {
        return out;
    }
    let width = r.groups.iter().map(|g| g.group.len()).max().unwrap_or(5).max(5);
    let _ = writeln!(out, "{:<width$}  {:>6}  {:>9}  {:>10}  {:>8}", "group", "degree", "primitive", "instances", "non-sync");
    for g in &r.groups {
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>9}  {:>10}  {:>8}",
            g.group,
            g.degree,
            if g.primitive { "yes" } else { "no" },
            g.instances,
            g.non_synchronizing
        );
    }
    if !r.counterexamples.is_empty() {
        let _ = writeln!(out, "counterexamples:");
        for c in &r.counterexamples {
            instance_line(&mut out, c);
        }
    }
    if !r.witnesses.is_empty() {
        let _ = writeln!(out, "witnesses:");
        for w in &r.witnesses {
            instance_line(&mut out, w);
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = write!(
        out,
        "status {}  instances {}  structural checks {}",
        r.status.as_str(),
        r.instances,
        r.structural_checks
    );
    if r.budget_exhausted {
        let _ = write!(out, "  (budget exhausted)");
    }
    if timings {
        let _ = write!(out, "  {:.3}s", r.wall_time.as_secs_f64());
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{verify_theorem, VerifyOptions};

    #[test]
    fn empty_report_is_header_only() {
        let r = ExperimentReport::new("rystsov", 4);
        assert_eq!(emit(&r, Format::Jsonl, false).lines().count(), 1);
        assert_eq!(emit(&r, Format::Table, true).lines().count(), 1);
    }

    #[test]
    fn jsonl_lines_parse_and_are_stable() {
        let r = verify_theorem("grid-counterexample", &VerifyOptions::new(9)).unwrap();
        let a = emit(&r, Format::Jsonl, false);
        for l in a.lines() {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            assert!(v["record"].is_string());
        }
        let again = verify_theorem("grid-counterexample", &VerifyOptions::new(9)).unwrap();
        assert_eq!(a, emit(&again, Format::Jsonl, false));
        assert!(a.lines().last().unwrap().contains("\"status\":\"pass\""));
    }
}
