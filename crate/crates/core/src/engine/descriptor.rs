use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Stage {
    DataCleaning,
    FeatureEngineering,
    ModelTraining,
    ModelEvaluation,
}

impl Stage {
    pub fn label(self) -> &'static str {
        match self {
            Stage::DataCleaning => "Data Cleaning",
            Stage::FeatureEngineering => "Feature Engineering",
            Stage::ModelTraining => "Model Training",
            Stage::ModelEvaluation => "Model Evaluation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Effect {
    ErrorProne,
    Efficiency,
    Readability,
    Robustness,
    Reproducibility,
    MemoryIssue,
}

impl Effect {
    pub const ALL: [Effect; 6] = [
        Effect::ErrorProne,
        Effect::Efficiency,
        Effect::Readability,
        Effect::Robustness,
        Effect::Reproducibility,
        Effect::MemoryIssue,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Effect::ErrorProne => "Error-prone",
            Effect::Efficiency => "Efficiency",
            Effect::Readability => "Readability",
            Effect::Robustness => "Robustness",
            Effect::Reproducibility => "Reproducibility",
            Effect::MemoryIssue => "Memory Issue",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Library {
    Pandas,
    NumPy,
    TensorFlow2,
    PyTorch,
}

impl Library {
    pub fn label(self) -> &'static str {
        match self {
            Library::Pandas => "Pandas",
            Library::NumPy => "NumPy",
            Library::TensorFlow2 => "TensorFlow 2",
            Library::PyTorch => "PyTorch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Generic,
    ApiSpecific(Library),
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleKind::Generic => f.write_str("Generic"),
            RuleKind::ApiSpecific(lib) => write!(f, "API-Specific: {}", lib.label()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleScope {
    PerFile,
    ProjectLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeGate {
    Always,
    DevelopmentOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Info,
}

impl Severity {
    pub fn label(self) -> &'static str {
        match self {
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct RuleDescriptor {
    pub id: &'static str,
    pub name: &'static str,
    /// Usually one stage; a few smells span two.
    pub stages: &'static [Stage],
    pub effects: &'static [Effect],
    pub kind: RuleKind,
    pub scope: RuleScope,
    pub mode_gate: ModeGate,
    pub severity: Severity,
    pub description: &'static str,
    pub advice: &'static str,
}

impl RuleDescriptor {
    pub fn stage_label(&self) -> String {
        self.stages
            .iter()
            .map(|s| s.label())
            .collect::<Vec<_>>()
            .join(" & ")
    }

    pub fn effect_label(&self) -> String {
        self.effects
            .iter()
            .map(|e| e.label())
            .collect::<Vec<_>>()
            .join(" & ")
    }
}
