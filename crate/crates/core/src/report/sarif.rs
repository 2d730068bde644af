use serde_json::{json, Value};

use crate::engine::catalog::CATALOG;
use crate::engine::Severity;

use super::Report;

const SCHEMA: &str = "https://json.schemastore.org/sarif-2.1.0.json";

fn level(s: Severity) -> &'static str {
    match s {
        Severity::Warning => "warning",
        Severity::Info => "note",
    }
}

/// Relative URI reference for a path: forward slashes, everything outside
/// the unreserved set percent-encoded.
fn uri(path: &str) -> String {
    let mut out = String::new();
    for b in path.replace('\\', "/").bytes() {
        match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.' | b'_' | b'~' | b'/' => {
                out.push(b as char)
            }
            _ => out.push_str(&format!("%{b:02X}")),
        }
    }
    out
}

fn location(path: &str, line: u32, column: u32) -> Value {
    json!({
        "physicalLocation": {
            "artifactLocation": { "uri": uri(path) },
            "region": { "startLine": line, "startColumn": column }
        }
    })
}

pub fn render_sarif(report: &Report) -> String {
    let rules: Vec<Value> = CATALOG
        .iter()
        .map(|d| {
            json!({
                "id": d.id,
                "name": d.name,
                "shortDescription": { "text": d.name },
                "fullDescription": { "text": d.advice },
                "defaultConfiguration": { "level": level(d.severity) },
                "properties": {
                    "stage": d.stage_label(),
                    "effect": d.effects.iter().map(|e| e.label()).collect::<Vec<_>>(),
                    "type": d.kind.to_string(),
                }
            })
        })
        .collect();
    let results: Vec<Value> = report
        .diagnostics
        .iter()
        .map(|d| {
            let index = CATALOG.iter().position(|r| r.id == d.rule.id).unwrap_or(0);
            json!({
                "ruleId": d.rule.id,
                "ruleIndex": index,
                "level": level(d.severity),
                "message": { "text": d.message },
                "locations": [location(&d.path, d.line, d.column)]
            })
        })
        .collect();

    let mut notifications: Vec<Value> = report
        .parse_failures
        .iter()
        .map(|(path, f)| {
            json!({
                "level": "error",
                "message": { "text": format!("parse failure: {}", f.message) },
                "locations": [location(path, f.line, f.column)]
            })
        })
        .collect();
    notifications.extend(report.notices.iter().map(|n| {
        json!({
            "level": "note",
            "message": { "text": n.message },
            "locations": [location(&n.path, n.line, 1)]
        })
    }));
    let mut invocation = json!({
        "executionSuccessful": report.tool_errors.is_empty(),
        "toolExecutionNotifications": notifications,
    });
    if let Some(ts) = &report.timestamp {
        invocation["startTimeUtc"] = json!(ts);
    }

    let doc = json!({
        "$schema": SCHEMA,
        "version": "2.1.0",
        "runs": [{
            "tool": {
                "driver": {
                    "name": report.tool,
                    "version": report.version,
                    "rules": rules,
                }
            },
            "invocations": [invocation],
            "results": results,
        }]
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("sarif serializes");
    s.push('\n');
    s
}
