//! Owned, closed-set Python syntax tree.
//!
//! The tree is lowered from the parser's AST and keeps only the node kinds the
//! rules reason about. Everything else becomes an `Opaque` node that still
//! carries its child expressions and statement bodies, so nested code is
//! visited, but the opaque node itself never matches anything.

use std::fmt;

/// Half-open byte range `[start, end)` into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub start: u32,
    pub end: u32,
}

impl Span {
    pub fn new(start: u32, end: u32) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> u32 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn cover(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.start as usize..self.end as usize]
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Pre-order identifier of a node, unique within one file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, PartialEq)]
pub struct Module {
    pub body: Vec<Stmt>,
    /// Total number of ids handed out; every `NodeId` is below this.
    pub node_count: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub id: NodeId,
    pub span: Span,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportName {
    /// Dotted module or symbol name as written (`numpy`, `torch.nn`).
    pub name: String,
    pub asname: Option<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Keyword {
    /// `None` for `**kwargs` splats.
    pub arg: Option<String>,
    pub value: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub annotation: Option<Expr>,
    pub default: Option<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WithItem {
    pub context: Expr,
    pub target: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Handler {
    pub type_: Option<Expr>,
    pub name: Option<String>,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Import {
        names: Vec<ImportName>,
    },
    ImportFrom {
        module: Option<String>,
        /// Number of leading dots of a relative import.
        level: u32,
        names: Vec<ImportName>,
    },
    Assign {
        targets: Vec<Expr>,
        value: Expr,
    },
    AugAssign {
        target: Expr,
        op: BinOpKind,
        value: Expr,
    },
    /// Annotated assignment; `value` is absent for bare declarations.
    AnnAssign {
        target: Expr,
        annotation: Expr,
        value: Option<Expr>,
    },
    Expr(Expr),
    For {
        target: Expr,
        iter: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
        is_async: bool,
    },
    While {
        test: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
    },
    If {
        test: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
    },
    With {
        items: Vec<WithItem>,
        body: Vec<Stmt>,
        is_async: bool,
    },
    Try {
        body: Vec<Stmt>,
        handlers: Vec<Handler>,
        orelse: Vec<Stmt>,
        finalbody: Vec<Stmt>,
    },
    FunctionDef {
        name: String,
        params: Vec<Param>,
        decorators: Vec<Expr>,
        returns: Option<Expr>,
        body: Vec<Stmt>,
        is_async: bool,
    },
    ClassDef {
        name: String,
        bases: Vec<Expr>,
        keywords: Vec<Keyword>,
        decorators: Vec<Expr>,
        body: Vec<Stmt>,
    },
    Return(Option<Expr>),
    Pass,
    Break,
    Continue,
    /// Any other statement (`del`, `raise`, `assert`, `match`, `global`, ...).
    Opaque {
        label: &'static str,
        exprs: Vec<Expr>,
        bodies: Vec<Vec<Stmt>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub id: NodeId,
    pub span: Span,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOpKind {
    Add,
    Sub,
    Mult,
    MatMult,
    Div,
    Mod,
    Pow,
    LShift,
    RShift,
    BitOr,
    BitXor,
    BitAnd,
    FloorDiv,
}

impl BinOpKind {
    /// Operators that act elementwise on arrays and tensors.
    pub fn is_elementwise_arith(self) -> bool {
        matches!(
            self,
            BinOpKind::Add
                | BinOpKind::Sub
                | BinOpKind::Mult
                | BinOpKind::Div
                | BinOpKind::Mod
                | BinOpKind::Pow
                | BinOpKind::FloorDiv
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOpKind {
    Not,
    Invert,
    Neg,
    Pos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOpKind {
    And,
    Or,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOpKind {
    Eq,
    NotEq,
    Lt,
    LtE,
    Gt,
    GtE,
    Is,
    IsNot,
    In,
    NotIn,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    None,
    Bool(bool),
    /// Integers that fit in `i64`; larger ones are kept as text.
    Int(i64),
    BigInt(String),
    Float(f64),
    Complex,
    Str(String),
    Bytes,
    Ellipsis,
}

impl Literal {
    /// Numeric value of int/float literals.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Literal::Int(v) => Some(*v as f64),
            Literal::Float(v) => Some(*v),
            Literal::BigInt(s) => s.parse().ok(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Name(String),
    Attribute {
        value: Box<Expr>,
        attr: String,
    },
    Call {
        func: Box<Expr>,
        args: Vec<Expr>,
        keywords: Vec<Keyword>,
    },
    Subscript {
        value: Box<Expr>,
        index: Box<Expr>,
    },
    Compare {
        left: Box<Expr>,
        ops: Vec<CmpOpKind>,
        comparators: Vec<Expr>,
    },
    BinOp {
        left: Box<Expr>,
        op: BinOpKind,
        right: Box<Expr>,
    },
    UnaryOp {
        op: UnaryOpKind,
        operand: Box<Expr>,
    },
    BoolOp {
        op: BoolOpKind,
        values: Vec<Expr>,
    },
    Constant(Literal),
    List(Vec<Expr>),
    Tuple(Vec<Expr>),
    Set(Vec<Expr>),
    Dict {
        /// `None` keys are `**mapping` entries.
        keys: Vec<Option<Expr>>,
        values: Vec<Expr>,
    },
    Slice {
        lower: Option<Box<Expr>>,
        upper: Option<Box<Expr>>,
        step: Option<Box<Expr>>,
    },
    Starred(Box<Expr>),
    NamedExpr {
        target: Box<Expr>,
        value: Box<Expr>,
    },
    IfExp {
        test: Box<Expr>,
        body: Box<Expr>,
        orelse: Box<Expr>,
    },
    /// Lambdas, comprehensions, f-strings, await/yield and friends.
    Opaque {
        label: &'static str,
        children: Vec<Expr>,
    },
}

impl Expr {
    pub fn as_name(&self) -> Option<&str> {
        match &self.kind {
            ExprKind::Name(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match &self.kind {
            ExprKind::Constant(l) => Some(l),
            _ => None,
        }
    }

    /// `a.b.c` for pure name/attribute chains, `None` otherwise.
    pub fn dotted_path(&self) -> Option<String> {
        match &self.kind {
            ExprKind::Name(n) => Some(n.clone()),
            ExprKind::Attribute { value, attr } => {
                let mut base = value.dotted_path()?;
                base.push('.');
                base.push_str(attr);
                Some(base)
            }
            _ => None,
        }
    }

    /// Direct child expressions in source order.
    pub fn children(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        match &self.kind {
            ExprKind::Name(_) | ExprKind::Constant(_) => {}
            ExprKind::Attribute { value, .. } => out.push(value.as_ref()),
            ExprKind::Call {
                func,
                args,
                keywords,
            } => {
                out.push(func.as_ref());
                out.extend(args.iter());
                out.extend(keywords.iter().map(|k| &k.value));
            }
            ExprKind::Subscript { value, index } => {
                out.push(value.as_ref());
                out.push(index.as_ref());
            }
            ExprKind::Compare {
                left, comparators, ..
            } => {
                out.push(left.as_ref());
                out.extend(comparators.iter());
            }
            ExprKind::BinOp { left, right, .. } => {
                out.push(left.as_ref());
                out.push(right.as_ref());
            }
            ExprKind::UnaryOp { operand, .. } => out.push(operand.as_ref()),
            ExprKind::BoolOp { values, .. } => out.extend(values.iter()),
            ExprKind::List(items) | ExprKind::Tuple(items) | ExprKind::Set(items) => {
                out.extend(items.iter())
            }
            ExprKind::Dict { keys, values } => {
                for (k, v) in keys.iter().zip(values) {
                    if let Some(k) = k {
                        out.push(k);
                    }
                    out.push(v);
                }
            }
            ExprKind::Slice { lower, upper, step } => {
                out.extend(lower.as_deref());
                out.extend(upper.as_deref());
                out.extend(step.as_deref());
            }
            ExprKind::Starred(v) => out.push(v.as_ref()),
            ExprKind::NamedExpr { target, value } => {
                out.push(target.as_ref());
                out.push(value.as_ref());
            }
            ExprKind::IfExp { test, body, orelse } => {
                out.push(body.as_ref());
                out.push(test.as_ref());
                out.push(orelse.as_ref());
            }
            ExprKind::Opaque { children, .. } => out.extend(children.iter()),
        }
        out
    }

    /// Pre-order traversal of this expression and all its descendants.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        for child in self.children() {
            child.walk(f);
        }
    }

    /// True if any node in this expression satisfies `pred`.
    pub fn any(&self, pred: &mut dyn FnMut(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        self.children().into_iter().any(|c| c.any(pred))
    }
}

impl Stmt {
    /// Expressions owned directly by this statement (not by nested bodies),
    /// in evaluation-ish source order.
    pub fn exprs(&self) -> Vec<&Expr> {
        match &self.kind {
            StmtKind::Import { .. }
            | StmtKind::ImportFrom { .. }
            | StmtKind::Pass
            | StmtKind::Break
            | StmtKind::Continue => Vec::new(),
            StmtKind::Assign { targets, value } => {
                let mut v: Vec<&Expr> = targets.iter().collect();
                v.push(value);
                v
            }
            StmtKind::AugAssign { target, value, .. } => vec![target, value],
            StmtKind::AnnAssign {
                target,
                annotation,
                value,
            } => {
                let mut v = vec![target, annotation];
                v.extend(value.iter());
                v
            }
            StmtKind::Expr(e) => vec![e],
            StmtKind::For { target, iter, .. } => vec![target, iter],
            StmtKind::While { test, .. } | StmtKind::If { test, .. } => vec![test],
            StmtKind::With { items, .. } => items
                .iter()
                .flat_map(|i| std::iter::once(&i.context).chain(i.target.iter()))
                .collect(),
            StmtKind::Try { handlers, .. } => {
                handlers.iter().filter_map(|h| h.type_.as_ref()).collect()
            }
            StmtKind::FunctionDef {
                params,
                decorators,
                returns,
                ..
            } => {
                let mut v: Vec<&Expr> = decorators.iter().collect();
                for p in params {
                    v.extend(p.default.iter());
                    v.extend(p.annotation.iter());
                }
                v.extend(returns.iter());
                v
            }
            StmtKind::ClassDef {
                bases,
                keywords,
                decorators,
                ..
            } => decorators
                .iter()
                .chain(bases.iter())
                .chain(keywords.iter().map(|k| &k.value))
                .collect(),
            StmtKind::Return(v) => v.iter().collect(),
            StmtKind::Opaque { exprs, .. } => exprs.iter().collect(),
        }
    }

    /// Nested statement bodies in source order. Function and class bodies are
    /// included; callers that stay within one scope must skip them.
    pub fn bodies(&self) -> Vec<&[Stmt]> {
        match &self.kind {
            StmtKind::For { body, orelse, .. }
            | StmtKind::While { body, orelse, .. }
            | StmtKind::If { body, orelse, .. } => vec![body, orelse],
            StmtKind::With { body, .. } => vec![body],
            StmtKind::Try {
                body,
                handlers,
                orelse,
                finalbody,
            } => {
                let mut v: Vec<&[Stmt]> = vec![body];
                v.extend(handlers.iter().map(|h| h.body.as_slice()));
                v.push(orelse);
                v.push(finalbody);
                v
            }
            StmtKind::FunctionDef { body, .. } | StmtKind::ClassDef { body, .. } => vec![body],
            StmtKind::Opaque { bodies, .. } => bodies.iter().map(|b| b.as_slice()).collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_scope(&self) -> bool {
        matches!(
            self.kind,
            StmtKind::FunctionDef { .. } | StmtKind::ClassDef { .. }
        )
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.kind, StmtKind::For { .. } | StmtKind::While { .. })
    }
}

impl Module {
    /// Pre-order traversal of every statement in the file, including those in
    /// function and class bodies.
    pub fn walk_stmts<'a>(&'a self, f: &mut dyn FnMut(&'a Stmt)) {
        fn go<'a>(body: &'a [Stmt], f: &mut dyn FnMut(&'a Stmt)) {
            for s in body {
                f(s);
                for b in s.bodies() {
                    go(b, f);
                }
            }
        }
        go(&self.body, f);
    }

    /// Pre-order traversal of every expression in the file.
    pub fn walk_exprs<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        self.walk_stmts(&mut |s| {
            for e in s.exprs() {
                e.walk(f);
            }
        });
    }
}
