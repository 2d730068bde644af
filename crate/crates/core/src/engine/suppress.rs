//! `# mlint: disable=<ids>` comments.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::frontend::CommentTable;

use super::catalog::is_rule_id;
use super::Diagnostic;

pub const DIRECTIVE: &str = "# mlint: disable=";

/// Informational message that is not a rule finding (bad suppression
/// comments and the like). Never affects the exit code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Notice {
    pub path: String,
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LineSuppression {
    pub all: bool,
    pub ids: BTreeSet<String>,
}

impl LineSuppression {
    pub fn covers(&self, id: &str) -> bool {
        self.all || self.ids.contains(id)
    }
}

fn looks_like_id(tok: &str) -> bool {
    tok.len() == 4
        && tok.starts_with("ML")
        && tok[2..].bytes().all(|b| b.is_ascii_digit())
}

/// Parses the suppression directive in every comment of a file.
pub fn parse_suppressions(
    path: &str,
    comments: &CommentTable,
) -> (BTreeMap<u32, LineSuppression>, Vec<Notice>) {
    let mut map = BTreeMap::new();
    let mut notices = Vec::new();
    for (line, text) in comments.iter() {
        let Some(pos) = text.find(DIRECTIVE) else {
            continue;
        };
        let rest = &text[pos + DIRECTIVE.len()..];
        let list = rest.split('#').next().unwrap_or("").trim();
        let mut sup = LineSuppression::default();
        let mut note = |message: String| {
            notices.push(Notice {
                path: path.to_string(),
                line,
                message,
            })
        };
        if list.is_empty() {
            note("suppression comment lists no rule ids".into());
            continue;
        }
        for tok in list.split(',').map(str::trim) {
            if tok == "all" {
                sup.all = true;
            } else if is_rule_id(tok) {
                sup.ids.insert(tok.to_string());
            } else if looks_like_id(tok) {
                note(format!("suppression names unknown rule id {tok}"));
            } else {
                note(format!("malformed suppression entry {tok:?}"));
            }
        }
        if sup.all || !sup.ids.is_empty() {
            map.insert(line, sup);
        }
    }
    (map, notices)
}

/// Drops diagnostics whose line carries a matching suppression. Diagnostics
/// must all belong to `path`.
pub fn apply_suppressions(
    path: &str,
    comments: &CommentTable,
    diagnostics: Vec<Diagnostic>,
) -> (Vec<Diagnostic>, Vec<Notice>) {
    let (map, notices) = parse_suppressions(path, comments);
    let kept = diagnostics
        .into_iter()
        .filter(|d| !map.get(&d.line).is_some_and(|s| s.covers(d.rule.id)))
        .collect();
    (kept, notices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::catalog;
    use crate::frontend::ast::Span;
    use crate::frontend::parse;

    fn diag(id: &str, line: u32) -> Diagnostic {
        Diagnostic {
            rule: catalog::descriptor(id).unwrap(),
            path: "a.py".into(),
            span: Span::new(0, 1),
            line,
            column: 1,
            message: String::new(),
            severity: catalog::descriptor(id).unwrap().severity,
        }
    }

    fn run(src: &str, diags: Vec<Diagnostic>) -> (Vec<&'static str>, Vec<Notice>) {
        let unit = parse("a.py", src);
        let (kept, notices) = apply_suppressions("a.py", &unit.comments, diags);
        (kept.iter().map(|d| d.rule.id).collect(), notices)
    }

    #[test]
    fn removes_only_named_rule() {
        let (kept, notices) = run(
            "x = 1  # mlint: disable=ML03\n",
            vec![diag("ML03", 1), diag("ML08", 1), diag("ML03", 2)],
        );
        assert_eq!(kept, ["ML08", "ML03"]);
        assert!(notices.is_empty());
    }

    #[test]
    fn all_removes_everything_on_the_line() {
        let (kept, _) = run(
            "x = 1  # mlint: disable=all\n",
            vec![diag("ML03", 1), diag("ML08", 1)],
        );
        assert!(kept.is_empty());
    }

    #[test]
    fn unknown_id_is_a_notice() {
        let (kept, notices) = run("x = 1  # mlint: disable=ML99\n", vec![diag("ML03", 1)]);
        assert_eq!(kept, ["ML03"]);
        assert_eq!(notices.len(), 1);
        assert!(notices[0].message.contains("ML99"));
    }

    #[test]
    fn list_and_trailing_comment() {
        let (kept, notices) = run(
            "x = 1  # expect: ML03 # mlint: disable=ML03, ML08 # reason\n",
            vec![diag("ML03", 1), diag("ML08", 1), diag("ML01", 1)],
        );
        assert_eq!(kept, ["ML01"]);
        assert!(notices.is_empty());
    }

    #[test]
    fn malformed_entries() {
        let (kept, notices) = run("x = 1  # mlint: disable=\ny = 2  # mlint: disable=ML3x,ML01\n", vec![diag("ML01", 2)]);
        assert!(kept.is_empty());
        assert_eq!(notices.len(), 2);
    }

    #[test]
    fn wrong_prefix_is_not_a_directive() {
        let (kept, notices) = run("x = 1  # mlint disable=ML03\n", vec![diag("ML03", 1)]);
        assert_eq!(kept, ["ML03"]);
        assert!(notices.is_empty());
    }
}
