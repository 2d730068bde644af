use serde_json::Value;

use super::*;
use crate::engine::catalog;
use crate::frontend::ast::Span;

fn diag(id: &str, path: &str, line: u32, column: u32) -> Diagnostic {
    let rule = catalog::descriptor(id).unwrap();
    Diagnostic {
        rule,
        path: path.into(),
        span: Span::new(0, 1),
        line,
        column,
        message: format!("{id} message"),
        severity: rule.severity,
    }
}

fn report(diags: Vec<Diagnostic>, files: usize) -> Report {
    let mut diagnostics = diags;
    diagnostics.sort();
    Report::new(
        RunResult {
            diagnostics,
            files,
            ..RunResult::default()
        },
        false,
    )
}

#[test]
fn empty_text_is_summary_only() {
    assert_eq!(render_text(&report(vec![], 0)), "0 smells in 0 files\n");
}

#[test]
fn text_line_format() {
    let out = render_text(&report(vec![diag("ML03", "a.py", 3, 5)], 1));
    assert!(out.starts_with("a.py:3:5: ML03 Chain Indexing: ML03 message\n"), "{out}");
    assert!(out.contains("1 smell in 1 file"));
}

#[test]
fn text_sorted_by_path_then_line() {
    let out = render_text(&report(
        vec![diag("ML01", "b.py", 1, 1), diag("ML03", "a.py", 9, 1), diag("ML02", "a.py", 2, 1)],
        2,
    ));
    let lines: Vec<&str> = out.lines().take(3).collect();
    assert!(lines[0].starts_with("a.py:2:"));
    assert!(lines[1].starts_with("a.py:9:"));
    assert!(lines[2].starts_with("b.py:1:"));
}

#[test]
fn json_empty_and_round_trip() {
    let empty: Value = serde_json::from_str(&render_json(&report(vec![], 0))).unwrap();
    assert_eq!(empty["diagnostics"], Value::Array(vec![]));
    assert_eq!(empty["files"], 0);
    assert!(empty.get("timestamp").is_none());

    let r = report(vec![diag("ML14", "a.py", 4, 2)], 1);
    let v: Value = serde_json::from_str(&render_json(&r)).unwrap();
    let d = &v["diagnostics"][0];
    assert_eq!(d["rule"], "ML14");
    assert_eq!(d["name"], "Randomness Uncontrolled");
    assert_eq!(d["path"], "a.py");
    assert_eq!(d["line"], 4);
    assert_eq!(d["column"], 2);
    assert_eq!(d["severity"], "warning");
    assert_eq!(d["stage"], "Model Training & Model Evaluation");
    assert_eq!(d["effect"], serde_json::json!(["Reproducibility"]));
    assert_eq!(d["message"], "ML14 message");
    assert_eq!(d["advice"], catalog::ML14.advice);
    assert_eq!(v["summary"]["total"], 1);
    assert_eq!(v["summary"]["by_rule"]["ML14"], 1);
}

#[test]
fn json_is_byte_stable() {
    let r = report(vec![diag("ML01", "a.py", 1, 1), diag("ML22", "b.py", 1, 1)], 2);
    assert_eq!(render_json(&r), render_json(&r.clone()));
}

#[test]
fn timestamps_are_opt_in() {
    let r = Report::new(RunResult::default(), true);
    let v: Value = serde_json::from_str(&render_json(&r)).unwrap();
    assert!(v["timestamp"].is_string());
    let s: Value = serde_json::from_str(&render_sarif(&r)).unwrap();
    assert!(s["runs"][0]["invocations"][0]["startTimeUtc"].is_string());
}

#[test]
fn sarif_shape() {
    let empty: Value = serde_json::from_str(&render_sarif(&report(vec![], 0))).unwrap();
    assert_eq!(empty["version"], "2.1.0");
    assert_eq!(empty["runs"][0]["results"], Value::Array(vec![]));
    assert_eq!(empty["runs"][0]["tool"]["driver"]["rules"].as_array().unwrap().len(), 22);

    let r = report(vec![diag("ML20", "x/y.py", 7, 3)], 1);
    let v: Value = serde_json::from_str(&render_sarif(&r)).unwrap();
    let res = &v["runs"][0]["results"][0];
    assert_eq!(res["ruleId"], "ML20");
    assert_eq!(res["ruleIndex"], 19);
    let region = &res["locations"][0]["physicalLocation"]["region"];
    assert_eq!(region["startLine"], 7);
    assert_eq!(region["startColumn"], 3);
}

#[test]
fn renderers_agree_on_count() {
    let r = report(
        vec![diag("ML01", "a.py", 1, 1), diag("ML04", "a.py", 2, 1), diag("ML13", "b.py", 1, 1)],
        2,
    );
    let text = render_text(&r)
        .lines()
        .filter(|l| l.contains(": ML"))
        .count();
    let json: Value = serde_json::from_str(&render_json(&r)).unwrap();
    let sarif: Value = serde_json::from_str(&render_sarif(&r)).unwrap();
    assert_eq!(text, 3);
    assert_eq!(json["diagnostics"].as_array().unwrap().len(), 3);
    assert_eq!(sarif["runs"][0]["results"].as_array().unwrap().len(), 3);
    let s = r.summary();
    assert_eq!(s.by_rule.values().sum::<usize>(), s.total);
}

#[test]
fn explain_catalog_rows() {
    let ml14 = explain("ML14").unwrap();
    assert!(ml14.contains("Stage:    Model Training & Model Evaluation"), "{ml14}");
    assert!(ml14.contains("Effect:   Reproducibility"));
    assert!(explain("ML03").unwrap().contains("Type:     API-Specific: Pandas"));
    assert!(explain("ML99").is_none());
}

#[test]
fn list_has_22_rows() {
    let list = list_rules();
    let ids: Vec<&str> = list.lines().map(|l| &l[..4]).collect();
    let want: Vec<String> = (1..=22).map(|i| format!("ML{i:02}")).collect();
    assert_eq!(ids, want);
}
