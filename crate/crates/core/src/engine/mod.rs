//! Rule abstraction and the two-phase run.

pub mod catalog;
pub mod descriptor;
pub mod facts;
pub mod params;
pub mod suppress;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::frontend::ast::{Expr, ExprKind, Module, NodeId, Span, Stmt};
use crate::frontend::{ParseFailure, SourceUnit};
use crate::semantic::{flatten, ApiSignatureTable, CallSite, SemanticModel};

pub use descriptor::{RuleDescriptor, Severity};
pub use facts::{ProjectFacts, Site};
pub use params::RuleParams;
pub use suppress::Notice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: &'static RuleDescriptor,
    pub path: String,
    pub span: Span,
    pub line: u32,
    pub column: u32,
    pub message: String,
    pub severity: Severity,
}

impl Diagnostic {
    fn key(&self) -> (&str, u32, u32, &str, &str, Span) {
        (
            &self.path,
            self.line,
            self.column,
            self.rule.id,
            &self.message,
            self.span,
        )
    }
}

impl Ord for Diagnostic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key()
            .cmp(&other.key())
            .then(self.severity.cmp(&other.severity))
    }
}

impl PartialOrd for Diagnostic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Development,
    Production,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Development => "development",
            Mode::Production => "production",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "development" => Ok(Mode::Development),
            "production" => Ok(Mode::Production),
            _ => Err(format!(
                "invalid mode {s:?} (expected development or production)"
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub selected: BTreeSet<&'static str>,
    pub ignored: BTreeSet<&'static str>,
    pub mode: Mode,
    pub params: RuleParams,
    pub signatures: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            selected: catalog::CATALOG.iter().map(|d| d.id).collect(),
            ignored: BTreeSet::new(),
            mode: Mode::Development,
            params: RuleParams::default(),
            signatures: None,
        }
    }
}

impl RunConfig {
    pub fn with_mode(mode: Mode) -> Self {
        RunConfig {
            mode,
            ..Self::default()
        }
    }

    /// Removes ignored ids from the selection.
    pub fn normalize(&mut self) {
        let ignored = &self.ignored;
        self.selected.retain(|id| !ignored.contains(id));
    }

    pub fn ignore(&mut self, id: &str) {
        if let Some(d) = catalog::descriptor(id) {
            self.ignored.insert(d.id);
        }
        self.normalize();
    }

    pub fn is_enabled(&self, d: &RuleDescriptor) -> bool {
        if !self.selected.contains(d.id) || self.ignored.contains(d.id) {
            return false;
        }
        match d.mode_gate {
            descriptor::ModeGate::Always => true,
            descriptor::ModeGate::DevelopmentOnly => self.mode == Mode::Development,
        }
    }

    pub fn ml09_unknown_rank_info(&self) -> bool {
        self.params
            .ml09_unknown_rank_info
            .unwrap_or(self.mode == Mode::Development)
    }
}

/// Everything a per-file rule may look at.
pub struct FileContext<'a> {
    pub unit: &'a SourceUnit,
    pub module: &'a Module,
    pub model: &'a SemanticModel,
    pub sigs: &'a ApiSignatureTable,
    pub config: &'a RunConfig,
    /// Flat statements, indexed like `model.stmts`.
    pub stmts: Vec<&'a Stmt>,
    exprs: Vec<Option<&'a Expr>>,
    /// Flat index of the statement owning each expression.
    expr_stmt: Vec<u32>,
}

impl<'a> FileContext<'a> {
    pub fn new(
        unit: &'a SourceUnit,
        model: &'a SemanticModel,
        sigs: &'a ApiSignatureTable,
        config: &'a RunConfig,
    ) -> Option<Self> {
        let module = unit.ast.as_ref()?;
        let n = module.node_count as usize;
        let mut exprs = vec![None; n];
        let mut expr_stmt = vec![u32::MAX; n];
        let stmts = flatten(module);
        for (i, s) in stmts.iter().enumerate() {
            for root in s.exprs() {
                root.walk(&mut |e| {
                    let k = e.id.0 as usize;
                    if k < n {
                        exprs[k] = Some(e);
                        expr_stmt[k] = i as u32;
                    }
                });
            }
        }
        Some(FileContext {
            unit,
            module,
            model,
            sigs,
            config,
            stmts,
            exprs,
            expr_stmt,
        })
    }

    /// Flat index of the statement that owns expression `id`.
    pub fn stmt_of(&self, id: NodeId) -> Option<usize> {
        match self.expr_stmt.get(id.0 as usize) {
            Some(&i) if i != u32::MAX => Some(i as usize),
            _ => None,
        }
    }

    /// Every expression of the file in pre-order.
    pub fn exprs(&self) -> impl Iterator<Item = &'a Expr> + '_ {
        self.exprs.iter().filter_map(|e| *e)
    }

    pub fn path(&self) -> &str {
        &self.unit.path
    }

    pub fn expr(&self, id: NodeId) -> Option<&'a Expr> {
        self.exprs.get(id.0 as usize).copied().flatten()
    }

    pub fn call_expr(&self, call: &CallSite) -> Option<&'a ExprKind> {
        self.expr(call.node).map(|e| &e.kind)
    }

    pub fn site(&self, span: Span) -> Site {
        let (line, column) = self.unit.span_to_location(span);
        Site {
            path: self.unit.path.clone(),
            line,
            column,
            span,
        }
    }

    pub fn diag(
        &self,
        rule: &'static RuleDescriptor,
        span: Span,
        message: impl Into<String>,
    ) -> Diagnostic {
        let (line, column) = self.unit.span_to_location(span);
        Diagnostic {
            rule,
            path: self.unit.path.clone(),
            span,
            line,
            column,
            message: message.into(),
            severity: rule.severity,
        }
    }
}

pub fn diag_at(rule: &'static RuleDescriptor, site: &Site, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        rule,
        path: site.path.clone(),
        span: site.span,
        line: site.line,
        column: site.column,
        message: message.into(),
        severity: rule.severity,
    }
}

/// One detection rule. Implementations hold no mutable state.
pub trait Rule: Send + Sync {
    fn descriptor(&self) -> &'static RuleDescriptor;

    fn check_file(&self, _cx: &FileContext, _out: &mut Vec<Diagnostic>) {}

    fn check_project(&self, _facts: &ProjectFacts, _config: &RunConfig, _out: &mut Vec<Diagnostic>) {}
}

/// A rule (or analysis stage) that panicked on one file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ToolError {
    pub path: String,
    pub rule: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct RunResult {
    pub diagnostics: Vec<Diagnostic>,
    pub notices: Vec<Notice>,
    pub tool_errors: Vec<ToolError>,
    pub parse_failures: Vec<(String, ParseFailure)>,
    pub files: usize,
}

impl RunResult {
    /// 0 when clean, 1 when anything was found or failed to parse.
    pub fn exit_code(&self) -> i32 {
        if self.diagnostics.is_empty() && self.parse_failures.is_empty() {
            0
        } else {
            1
        }
    }
}

fn panic_message(e: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = e.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = e.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".into()
    }
}

struct FileOutcome {
    diagnostics: Vec<Diagnostic>,
    facts: ProjectFacts,
    errors: Vec<ToolError>,
}

fn analyze_file(
    rules: &[&dyn Rule],
    unit: &SourceUnit,
    sigs: &ApiSignatureTable,
    config: &RunConfig,
) -> FileOutcome {
    let mut out = FileOutcome {
        diagnostics: Vec::new(),
        facts: ProjectFacts::default(),
        errors: Vec::new(),
    };
    let Some(module) = unit.ast.as_ref() else {
        return out;
    };
    let error = |rule: &str, e| ToolError {
        path: unit.path.clone(),
        rule: rule.to_string(),
        message: panic_message(e),
    };
    let model = match catch_unwind(AssertUnwindSafe(|| SemanticModel::build(module, sigs))) {
        Ok(m) => m,
        Err(e) => {
            out.errors.push(error("semantic", e));
            return out;
        }
    };
    let Some(cx) = FileContext::new(unit, &model, sigs, config) else {
        return out;
    };
    match catch_unwind(AssertUnwindSafe(|| facts::extract(&cx))) {
        Ok(f) => out.facts = f,
        Err(e) => out.errors.push(error("facts", e)),
    }
    for rule in rules {
        let mut local = Vec::new();
        match catch_unwind(AssertUnwindSafe(|| rule.check_file(&cx, &mut local))) {
            Ok(()) => out.diagnostics.extend(local),
            Err(e) => out.errors.push(error(rule.descriptor().id, e)),
        }
    }
    out
}

/// Runs enabled rules over `units`: per-file rules in parallel, then
/// project-level rules over the merged facts, then suppressions.
pub fn run(
    rules: &[Box<dyn Rule>],
    units: &[SourceUnit],
    sigs: &ApiSignatureTable,
    config: &RunConfig,
) -> RunResult {
    let enabled: Vec<&dyn Rule> = rules
        .iter()
        .map(|r| r.as_ref())
        .filter(|r| config.is_enabled(r.descriptor()))
        .collect();

    let outcomes: Vec<FileOutcome> = units
        .par_iter()
        .map(|u| analyze_file(&enabled, u, sigs, config))
        .collect();

    let mut result = RunResult {
        files: units.len(),
        ..RunResult::default()
    };
    let mut facts = ProjectFacts::default();
    let mut raw = Vec::new();
    for o in outcomes {
        facts.merge(&o.facts);
        raw.extend(o.diagnostics);
        result.tool_errors.extend(o.errors);
    }
    for rule in &enabled {
        let mut local = Vec::new();
        match catch_unwind(AssertUnwindSafe(|| rule.check_project(&facts, config, &mut local))) {
            Ok(()) => raw.extend(local),
            Err(e) => result.tool_errors.push(ToolError {
                path: String::new(),
                rule: rule.descriptor().id.to_string(),
                message: panic_message(e),
            }),
        }
    }

    let mut by_path: BTreeMap<String, Vec<Diagnostic>> = BTreeMap::new();
    for d in raw {
        by_path.entry(d.path.clone()).or_default().push(d);
    }
    for unit in units {
        if let Some(f) = &unit.failure {
            result.parse_failures.push((unit.path.clone(), f.clone()));
        }
        let diags = by_path.remove(&unit.path).unwrap_or_default();
        let (kept, notices) = suppress::apply_suppressions(&unit.path, &unit.comments, diags);
        result.diagnostics.extend(kept);
        result.notices.extend(notices);
    }
    // Diagnostics for paths that are not units cannot be suppressed.
    for (_, diags) in by_path {
        result.diagnostics.extend(diags);
    }

    result.diagnostics.sort();
    result.diagnostics.dedup();
    result.notices.sort();
    result.notices.dedup();
    result.tool_errors.sort();
    result.parse_failures.sort_by(|a, b| a.0.cmp(&b.0));
    result
}
