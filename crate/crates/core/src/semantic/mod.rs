//! Per-file semantic facts: import aliases, value provenance, call sites and
//! statement order.

pub mod aliases;
mod infer;
pub mod signatures;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::frontend::ast::{Module, NodeId, Span, Stmt};

pub use aliases::{AliasTable, ImportRecord};
pub use signatures::{ApiSignatureTable, SignatureError};

/// Library-object category inferred for a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Unknown,
    DataFrame,
    Series,
    NdArray,
    Tensor,
    Estimator,
    Scaler,
    Model,
    Optimizer,
    DataLoader,
    MetricFn,
}

impl Tag {
    pub const ALL: [Tag; 11] = [
        Tag::Unknown,
        Tag::DataFrame,
        Tag::Series,
        Tag::NdArray,
        Tag::Tensor,
        Tag::Estimator,
        Tag::Scaler,
        Tag::Model,
        Tag::Optimizer,
        Tag::DataLoader,
        Tag::MetricFn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tag::Unknown => "Unknown",
            Tag::DataFrame => "DataFrame",
            Tag::Series => "Series",
            Tag::NdArray => "NdArray",
            Tag::Tensor => "Tensor",
            Tag::Estimator => "Estimator",
            Tag::Scaler => "Scaler",
            Tag::Model => "Model",
            Tag::Optimizer => "Optimizer",
            Tag::DataLoader => "DataLoader",
            Tag::MetricFn => "MetricFn",
        }
    }

    pub fn from_name(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Arrays and tensors, the operands of elementwise arithmetic.
    pub fn is_array_like(self) -> bool {
        matches!(self, Tag::NdArray | Tag::Tensor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub tag: Tag,
    /// Expression that established the tag.
    pub origin: Span,
    /// Known array rank; only ever set for arrays and tensors.
    pub rank: Option<u32>,
    /// Canonical name of the constructor call that produced the value.
    pub api: Option<String>,
}

impl Provenance {
    pub fn unknown() -> Self {
        Provenance {
            tag: Tag::Unknown,
            origin: Span::default(),
            rank: None,
            api: None,
        }
    }

    pub fn new(tag: Tag, origin: Span) -> Self {
        if tag == Tag::Unknown {
            return Self::unknown();
        }
        Provenance {
            tag,
            origin,
            rank: None,
            api: None,
        }
    }

    pub fn is_unknown(&self) -> bool {
        self.tag == Tag::Unknown
    }

    pub fn is(&self, tag: Tag) -> bool {
        self.tag == tag
    }

    /// Merge at a control-flow join. Agreement keeps the tag; anything else
    /// is Unknown.
    pub fn join(&self, other: &Provenance) -> Provenance {
        if self.tag != other.tag || self.tag == Tag::Unknown {
            return Provenance::unknown();
        }
        Provenance {
            tag: self.tag,
            origin: self.origin.min(other.origin),
            rank: if self.rank == other.rank { self.rank } else { None },
            api: if self.api == other.api {
                self.api.clone()
            } else {
                None
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScopeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeKind {
    Module,
    Function,
    Class,
}

#[derive(Debug, Clone)]
pub struct ScopeInfo {
    pub id: ScopeId,
    pub kind: ScopeKind,
    pub name: String,
    pub parent: Option<ScopeId>,
    /// Flat index of the defining statement; `None` for the module.
    pub def_stmt: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct StmtInfo {
    pub node: NodeId,
    pub span: Span,
    pub scope: ScopeId,
    /// Flat indices of the enclosing loops within the same scope,
    /// outermost first.
    pub loops: Vec<usize>,
}

impl StmtInfo {
    pub fn loop_depth(&self) -> u32 {
        self.loops.len() as u32
    }
}

#[derive(Debug, Clone)]
pub struct CallSite {
    pub node: NodeId,
    pub span: Span,
    /// Resolved library name (`numpy.dot`) or `<Tag>.<method>` for methods
    /// on a value of known provenance (`DataFrame.merge`).
    pub canonical: Option<String>,
    /// Attribute name when the callee is `<expr>.<name>`.
    pub method: Option<String>,
    /// Dotted source path of the method receiver, e.g. `self.model`.
    pub receiver_path: Option<String>,
    pub receiver: Provenance,
    pub result: Provenance,
    pub scope: ScopeId,
    /// Flat index of the statement containing the call.
    pub stmt: usize,
    pub loops: Vec<usize>,
}

impl CallSite {
    pub fn loop_depth(&self) -> u32 {
        self.loops.len() as u32
    }

    pub fn is(&self, canonical: &str) -> bool {
        self.canonical.as_deref() == Some(canonical)
    }

    pub fn is_method(&self, name: &str) -> bool {
        self.method.as_deref() == Some(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefKind {
    Function,
    Class,
}

#[derive(Debug, Clone)]
pub struct DefInfo {
    pub name: String,
    pub kind: DefKind,
    pub span: Span,
    pub stmt: usize,
    /// Scope opened by this definition.
    pub scope: ScopeId,
    /// Canonical names of direct bases (classes only).
    pub bases: Vec<String>,
}

/// A `Pipeline(...)`/`make_pipeline(...)` construction and the constructors
/// called inside its arguments.
#[derive(Debug, Clone)]
pub struct PipelineInfo {
    pub span: Span,
    pub members: Vec<(Span, Tag, String)>,
}

impl PipelineInfo {
    pub fn has(&self, tag: Tag) -> bool {
        self.members.iter().any(|(_, t, _)| *t == tag)
    }
}

/// Single-name assignment `name = value`.
#[derive(Debug, Clone)]
pub struct AssignFact {
    pub stmt: usize,
    pub scope: ScopeId,
    pub target: String,
    pub value: NodeId,
}

pub type Env = BTreeMap<String, Provenance>;

#[derive(Debug, Clone)]
pub struct SemanticModel {
    pub aliases: AliasTable,
    pub expr_provenance: HashMap<NodeId, Provenance>,
    /// Variable environment after each flat statement.
    pub env_after: Vec<Arc<Env>>,
    pub stmts: Vec<StmtInfo>,
    pub scopes: Vec<ScopeInfo>,
    /// Every call in the file, ordered by node id (source pre-order).
    pub call_index: Vec<CallSite>,
    pub def_index: Vec<DefInfo>,
    pub model_classes: BTreeSet<String>,
    pub pipelines: Vec<PipelineInfo>,
    /// Constructor call span to the pipeline containing it.
    pub pipeline_member_of: BTreeMap<Span, usize>,
    pub assignments: Vec<AssignFact>,
}

impl SemanticModel {
    pub fn build(module: &Module, sigs: &ApiSignatureTable) -> Self {
        let aliases = AliasTable::resolve(module);
        infer::infer(module, aliases, sigs)
    }

    pub fn provenance(&self, id: NodeId) -> Provenance {
        self.expr_provenance
            .get(&id)
            .cloned()
            .unwrap_or_else(Provenance::unknown)
    }

    pub fn tag_of(&self, id: NodeId) -> Tag {
        self.expr_provenance
            .get(&id)
            .map(|p| p.tag)
            .unwrap_or(Tag::Unknown)
    }

    /// Provenance of variable `name` after flat statement `stmt`.
    pub fn var_provenance_at(&self, name: &str, stmt: usize) -> Provenance {
        self.env_after
            .get(stmt)
            .and_then(|env| env.get(name))
            .cloned()
            .unwrap_or_else(Provenance::unknown)
    }

    /// Call facts of one scope in statement order.
    pub fn calls_in_scope(&self, scope: ScopeId) -> impl Iterator<Item = &CallSite> {
        self.call_index.iter().filter(move |c| c.scope == scope)
    }

    /// Call facts grouped per scope, each in statement order.
    pub fn statement_order_facts(&self) -> BTreeMap<ScopeId, Vec<&CallSite>> {
        let mut out: BTreeMap<ScopeId, Vec<&CallSite>> = BTreeMap::new();
        for c in &self.call_index {
            out.entry(c.scope).or_default().push(c);
        }
        out
    }

    pub fn call_by_node(&self, id: NodeId) -> Option<&CallSite> {
        self.call_index
            .binary_search_by_key(&id, |c| c.node)
            .ok()
            .map(|i| &self.call_index[i])
    }

    pub fn scope(&self, id: ScopeId) -> &ScopeInfo {
        &self.scopes[id.0 as usize]
    }

    /// Class definition enclosing the function scope `id`, if the function
    /// is a method.
    pub fn enclosing_class(&self, id: ScopeId) -> Option<&DefInfo> {
        let parent = self.scope(id).parent?;
        let scope = self.scope(parent);
        if scope.kind != ScopeKind::Class {
            return None;
        }
        self.def_index.iter().find(|d| d.scope == parent)
    }
}

/// Statements in the same pre-order that numbers [`StmtInfo`] entries.
pub fn flatten(module: &Module) -> Vec<&Stmt> {
    let mut out = Vec::new();
    module.walk_stmts(&mut |s| out.push(s));
    out
}
