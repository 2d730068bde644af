use std::collections::BTreeMap;

use serde::Serialize;

use crate::engine::Severity;

use super::Report;

#[derive(Serialize)]
struct JsonReport<'a> {
    tool: &'a str,
    version: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<&'a str>,
    files: usize,
    diagnostics: Vec<JsonDiagnostic<'a>>,
    parse_failures: Vec<JsonFailure<'a>>,
    notices: Vec<JsonNotice<'a>>,
    summary: JsonSummary,
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    rule: &'a str,
    name: &'a str,
    path: &'a str,
    line: u32,
    column: u32,
    severity: Severity,
    stage: String,
    effect: Vec<&'a str>,
    message: &'a str,
    advice: &'a str,
}

#[derive(Serialize)]
struct JsonFailure<'a> {
    path: &'a str,
    line: u32,
    column: u32,
    message: &'a str,
}

#[derive(Serialize)]
struct JsonNotice<'a> {
    path: &'a str,
    line: u32,
    message: &'a str,
}

#[derive(Serialize)]
struct JsonSummary {
    total: usize,
    parse_failures: usize,
    by_rule: BTreeMap<&'static str, usize>,
    by_effect: BTreeMap<&'static str, usize>,
}

pub fn render_json(report: &Report) -> String {
    let summary = report.summary();
    let doc = JsonReport {
        tool: report.tool,
        version: report.version,
        timestamp: report.timestamp.as_deref(),
        files: report.files,
        diagnostics: report
            .diagnostics
            .iter()
            .map(|d| JsonDiagnostic {
                rule: d.rule.id,
                name: d.rule.name,
                path: &d.path,
                line: d.line,
                column: d.column,
                severity: d.severity,
                stage: d.rule.stage_label(),
                effect: d.rule.effects.iter().map(|e| e.label()).collect(),
                message: &d.message,
                advice: d.rule.advice,
            })
            .collect(),
        parse_failures: report
            .parse_failures
            .iter()
            .map(|(path, f)| JsonFailure {
                path,
                line: f.line,
                column: f.column,
                message: &f.message,
            })
            .collect(),
        notices: report
            .notices
            .iter()
            .map(|n| JsonNotice {
                path: &n.path,
                line: n.line,
                message: &n.message,
            })
            .collect(),
        summary: JsonSummary {
            total: summary.total,
            parse_failures: report.parse_failures.len(),
            by_rule: summary.by_rule,
            by_effect: summary.by_effect,
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}
