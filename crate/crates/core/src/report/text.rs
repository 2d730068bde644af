use std::fmt::Write;

use crate::engine::catalog::{descriptor, CATALOG};
use crate::engine::descriptor::{ModeGate, RuleScope};

use super::Report;

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    for d in &report.diagnostics {
        let _ = writeln!(
            out,
            "{}:{}:{}: {} {}: {}",
            d.path, d.line, d.column, d.rule.id, d.rule.name, d.message
        );
    }
    for (path, f) in &report.parse_failures {
        let _ = writeln!(out, "{path}:{}:{}: error: {}", f.line, f.column, f.message);
    }
    for n in &report.notices {
        let _ = writeln!(out, "{}:{}: info: {}", n.path, n.line, n.message);
    }
    for e in &report.tool_errors {
        let _ = writeln!(out, "{}: internal error in {}: {}", e.path, e.rule, e.message);
    }
    let summary = report.summary();
    if !out.is_empty() {
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "{} in {}",
        plural(summary.total, "smell"),
        plural(report.files, "file")
    );
    for (id, n) in &summary.by_rule {
        let name = descriptor(id).map(|d| d.name).unwrap_or("");
        let _ = writeln!(out, "  {id} {name}: {n}");
    }
    if !report.parse_failures.is_empty() {
        let _ = writeln!(
            out,
            "{} failed to parse",
            plural(report.parse_failures.len(), "file")
        );
    }
    out
}

/// Catalog entry for one rule, or `None` for an unknown id.
pub fn explain(id: &str) -> Option<String> {
    let d = descriptor(id)?;
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", d.id, d.name);
    let _ = writeln!(out, "Stage:    {}", d.stage_label());
    let _ = writeln!(out, "Effect:   {}", d.effect_label());
    let _ = writeln!(out, "Type:     {}", d.kind);
    let scope = match d.scope {
        RuleScope::PerFile => "per file",
        RuleScope::ProjectLevel => "project",
    };
    let gate = match d.mode_gate {
        ModeGate::Always => "all modes",
        ModeGate::DevelopmentOnly => "development mode only",
    };
    let _ = writeln!(out, "Scope:    {scope}, {gate}");
    let _ = writeln!(out, "Severity: {}", d.severity.label());
    let _ = writeln!(out);
    let _ = writeln!(out, "{}", d.description);
    let _ = writeln!(out);
    let _ = writeln!(out, "Advice: {}", d.advice);
    Some(out)
}

/// One row per rule.
pub fn list_rules() -> String {
    let mut out = String::new();
    for d in CATALOG {
        let _ = writeln!(
            out,
            "{}  {:<50}  {:<36}  {:<30}  {}",
            d.id,
            d.name,
            d.stage_label(),
            d.effect_label(),
            d.kind
        );
    }
    out
}
