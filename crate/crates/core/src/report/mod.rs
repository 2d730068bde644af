//! Text, JSON and SARIF output plus rule explanations.

mod json;
mod sarif;
mod text;

use std::collections::BTreeMap;

use crate::engine::{Diagnostic, Notice, RunResult, ToolError};
use crate::frontend::ParseFailure;

pub use json::render_json;
pub use sarif::render_sarif;
pub use text::{explain, list_rules, render_text};

pub const TOOL_NAME: &str = "mlint";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Sarif,
}

/// Everything the renderers need. Diagnostics are kept in engine order.
#[derive(Debug, Clone)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    /// RFC 3339; only set when timestamps were requested.
    pub timestamp: Option<String>,
    pub files: usize,
    pub diagnostics: Vec<Diagnostic>,
    pub parse_failures: Vec<(String, ParseFailure)>,
    pub notices: Vec<Notice>,
    pub tool_errors: Vec<ToolError>,
}

/// Counts derived from the diagnostic list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub by_rule: BTreeMap<&'static str, usize>,
    pub by_effect: BTreeMap<&'static str, usize>,
}

impl Report {
    pub fn new(result: RunResult, timestamps: bool) -> Self {
        Report {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            timestamp: timestamps.then(|| chrono::Utc::now().to_rfc3339()),
            files: result.files,
            diagnostics: result.diagnostics,
            parse_failures: result.parse_failures,
            notices: result.notices,
            tool_errors: result.tool_errors,
        }
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary {
            total: self.diagnostics.len(),
            ..Summary::default()
        };
        for d in &self.diagnostics {
            *s.by_rule.entry(d.rule.id).or_default() += 1;
            for e in d.rule.effects {
                *s.by_effect.entry(e.label()).or_default() += 1;
            }
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => render_text(self),
            Format::Json => render_json(self),
            Format::Sarif => render_sarif(self),
        }
    }
}

#[cfg(test)]
mod tests;
