//! Fixture corpus verification driven by `# expect:` comments.
//!
//! Inside a directory named `positive` or `negative`, each `*.py` file is
//! analyzed as its own project and each subdirectory as one multi-file
//! project. Files anywhere else are analyzed on their own.

pub mod alias;
pub mod fuzz;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use crate::cli::display_path;
use crate::engine::{self, catalog, Diagnostic, RunConfig, RunResult};
use crate::frontend::{self, SourceUnit};
use crate::rules;
use crate::semantic::ApiSignatureTable;

pub const EXPECT: &str = "# expect:";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Expectation {
    pub path: String,
    pub line: u32,
    pub rule: &'static str,
    /// Always true; clean fixtures simply carry no expectations.
    pub present: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessError {
    pub path: String,
    pub line: u32,
    pub message: String,
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.path, self.line, self.message)
    }
}

impl std::error::Error for HarnessError {}

/// Parses the rule list of one comment, if it carries an expectation.
fn parse_comment(comment: &str) -> Option<Result<Vec<&'static str>, String>> {
    let at = comment.find(EXPECT)?;
    let rest = &comment[at + EXPECT.len()..];
    let list = rest.split('#').next().unwrap_or("");
    let items: Vec<&str> = list.split(',').map(str::trim).collect();
    if items.iter().all(|s| s.is_empty()) {
        return Some(Err("expectation lists no rule ids".into()));
    }
    Some(
        items
            .into_iter()
            .map(|s| {
                catalog::descriptor(s)
                    .map(|d| d.id)
                    .ok_or_else(|| format!("bad rule id {s:?} in expectation"))
            })
            .collect(),
    )
}

/// Expectations of one parsed unit. One per id per annotated line.
pub fn unit_expectations(unit: &SourceUnit) -> Result<Vec<Expectation>, HarnessError> {
    if let Some(f) = &unit.failure {
        return Err(HarnessError {
            path: unit.path.clone(),
            line: f.line,
            message: format!("fixture does not parse: {}", f.message),
        });
    }
    let mut out = Vec::new();
    for (line, comment) in unit.comments.iter() {
        match parse_comment(comment) {
            None => {}
            Some(Ok(ids)) => out.extend(ids.into_iter().map(|rule| Expectation {
                path: unit.path.clone(),
                line,
                rule,
                present: true,
            })),
            Some(Err(message)) => {
                return Err(HarnessError {
                    path: unit.path.clone(),
                    line,
                    message,
                })
            }
        }
    }
    Ok(out)
}

/// One group of files analyzed together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Project {
    pub files: Vec<PathBuf>,
}

fn is_container(p: &Path) -> bool {
    matches!(
        p.file_name().and_then(|n| n.to_str()),
        Some("positive" | "negative")
    )
}

fn py_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file() && e.path().extension().is_some_and(|x| x == "py"))
        .map(|e| e.into_path())
        .collect();
    v.sort();
    v
}

/// Splits a fixture tree into projects, in path order.
pub fn projects(root: &Path) -> Vec<Project> {
    let mut out = Vec::new();
    for file in py_files(root) {
        let parent = file.parent().unwrap_or(root);
        let container = file
            .ancestors()
            .skip(1)
            .take_while(|a| a.starts_with(root))
            .find(|a| is_container(a));
        match container {
            Some(c) if c != parent => {
                // Inside a multi-file project: the container's child dir.
                let top = file
                    .ancestors()
                    .find(|a| a.parent() == Some(c))
                    .unwrap_or(parent)
                    .to_path_buf();
                match out.last_mut() {
                    Some(Project { files }) if files[0].starts_with(&top) => files.push(file),
                    _ => out.push(Project { files: vec![file] }),
                }
            }
            _ => out.push(Project { files: vec![file] }),
        }
    }
    out
}

fn load_project(root: &Path, p: &Project) -> Result<Vec<SourceUnit>, HarnessError> {
    p.files
        .iter()
        .map(|f| {
            let shown = display_path(f.strip_prefix(root).unwrap_or(f));
            frontend::load(f, shown.clone()).map_err(|e| HarnessError {
                path: shown,
                line: 0,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn collect_expectations(fixture_dir: &Path) -> Result<Vec<Expectation>, HarnessError> {
    let mut out = Vec::new();
    for p in projects(fixture_dir) {
        for unit in load_project(fixture_dir, &p)? {
            out.extend(unit_expectations(&unit)?);
        }
    }
    out.sort();
    Ok(out)
}

/// An actual diagnostic reduced to what expectations can name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub path: String,
    pub line: u32,
    pub rule: &'static str,
    pub message: String,
}

impl From<&Diagnostic> for Finding {
    fn from(d: &Diagnostic) -> Self {
        Finding {
            path: d.path.clone(),
            line: d.line,
            rule: d.rule.id,
            message: d.message.clone(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub projects: usize,
    pub files: usize,
    pub expected: usize,
    pub false_negatives: Vec<Expectation>,
    pub false_positives: Vec<Finding>,
    pub errors: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.false_negatives.is_empty() && self.false_positives.is_empty() && self.errors.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} files in {} projects, {} expected findings",
            self.files, self.projects, self.expected
        )?;
        for e in &self.false_negatives {
            writeln!(f, "missing: {}:{}: {}", e.path, e.line, e.rule)?;
        }
        for d in &self.false_positives {
            writeln!(f, "unexpected: {}:{}: {} {}", d.path, d.line, d.rule, d.message)?;
        }
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        Ok(())
    }
}

/// Multiset difference of expectations and findings, keyed by
/// (path, line, rule).
pub fn diff(expected: &[Expectation], actual: &[Finding]) -> (Vec<Expectation>, Vec<Finding>) {
    type Key = (String, u32, &'static str);
    let mut want: BTreeMap<Key, Vec<&Expectation>> = BTreeMap::new();
    for e in expected {
        want.entry((e.path.clone(), e.line, e.rule)).or_default().push(e);
    }
    let mut fps = Vec::new();
    for a in actual {
        let key = (a.path.clone(), a.line, a.rule);
        match want.get_mut(&key).and_then(|v| v.pop()) {
            Some(_) => {}
            None => fps.push(a.clone()),
        }
    }
    let fns = want.into_values().flatten().cloned().collect();
    (fns, fps)
}

/// Runs one project and returns the engine result.
pub fn analyze(units: &[SourceUnit], sigs: &ApiSignatureTable, config: &RunConfig) -> RunResult {
    engine::run(&rules::all(), units, sigs, config)
}

pub fn verify(fixture_dir: &Path, config: &RunConfig) -> VerifyReport {
    let sigs = match &config.signatures {
        Some(p) => match ApiSignatureTable::load(p) {
            Ok(s) => s,
            Err(e) => {
                return VerifyReport {
                    errors: vec![e.to_string()],
                    ..VerifyReport::default()
                }
            }
        },
        None => ApiSignatureTable::bundled(),
    };
    let mut report = VerifyReport::default();
    for p in projects(fixture_dir) {
        report.projects += 1;
        report.files += p.files.len();
        let units = match load_project(fixture_dir, &p) {
            Ok(u) => u,
            Err(e) => {
                report.errors.push(e.to_string());
                continue;
            }
        };
        let mut expected = Vec::new();
        for u in &units {
            match unit_expectations(u) {
                Ok(e) => expected.extend(e),
                Err(e) => report.errors.push(e.to_string()),
            }
        }
        let result = analyze(&units, &sigs, config);
        for e in &result.tool_errors {
            report.errors.push(format!("{}: internal error in {}: {}", e.path, e.rule, e.message));
        }
        for n in &result.notices {
            report.errors.push(format!("{}:{}: {}", n.path, n.line, n.message));
        }
        let actual: Vec<Finding> = result.diagnostics.iter().map(Finding::from).collect();
        let (fns, fps) = diff(&expected, &actual);
        report.expected += expected.len();
        report.false_negatives.extend(fns);
        report.false_positives.extend(fps);
    }
    report.false_negatives.sort();
    report.false_positives.sort();
    report
}

/// Per-rule corpus coverage: expected sites under `MLxx/positive` and
/// files under `MLxx/negative`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coverage {
    pub positive_sites: usize,
    pub negative_files: usize,
}

pub fn coverage(fixture_dir: &Path) -> Result<BTreeMap<&'static str, Coverage>, HarnessError> {
    let mut out: BTreeMap<&'static str, Coverage> =
        catalog::CATALOG.iter().map(|d| (d.id, Coverage::default())).collect();
    for e in collect_expectations(fixture_dir)? {
        let mut parts = e.path.split('/');
        if let (Some(rule), Some("positive")) = (parts.next(), parts.next()) {
            if rule == e.rule {
                out.get_mut(e.rule).unwrap().positive_sites += 1;
            }
        }
    }
    for d in catalog::CATALOG {
        out.get_mut(d.id).unwrap().negative_files = py_files(&fixture_dir.join(d.id).join("negative")).len();
    }
    Ok(out)
}
