//! Conversion from the parser's tree into the owned [`ast`](super::ast) form.

use rustpython_parser::ast as py;
use rustpython_parser::ast::Ranged;
use rustpython_parser::text_size::TextRange;

use super::ast::*;

/// Maximum combined statement/expression nesting accepted. Deeper inputs are
/// reported as parse failures instead of risking stack exhaustion in the
/// recursive passes downstream.
pub const MAX_DEPTH: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TooDeep {
    pub offset: u32,
}

pub fn lower_module(body: &[py::Stmt]) -> Result<Module, TooDeep> {
    let mut l = Lowerer { next: 0, depth: 0 };
    let body = l.stmts(body)?;
    Ok(Module {
        body,
        node_count: l.next,
    })
}

struct Lowerer {
    next: u32,
    depth: u32,
}

fn span(r: TextRange) -> Span {
    Span::new(r.start().into(), r.end().into())
}

type R<T> = Result<T, TooDeep>;

impl Lowerer {
    fn id(&mut self) -> NodeId {
        let id = NodeId(self.next);
        self.next += 1;
        id
    }

    fn enter(&mut self, r: TextRange) -> R<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(TooDeep {
                offset: r.start().into(),
            });
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn stmts(&mut self, body: &[py::Stmt]) -> R<Vec<Stmt>> {
        body.iter().map(|s| self.stmt(s)).collect()
    }

    fn exprs(&mut self, es: &[py::Expr]) -> R<Vec<Expr>> {
        es.iter().map(|e| self.expr(e)).collect()
    }

    fn opt(&mut self, e: &Option<Box<py::Expr>>) -> R<Option<Expr>> {
        e.as_deref().map(|e| self.expr(e)).transpose()
    }

    fn boxed(&mut self, e: &py::Expr) -> R<Box<Expr>> {
        Ok(Box::new(self.expr(e)?))
    }

    fn keywords(&mut self, ks: &[py::Keyword]) -> R<Vec<Keyword>> {
        ks.iter()
            .map(|k| {
                Ok(Keyword {
                    arg: k.arg.as_ref().map(|a| a.to_string()),
                    value: self.expr(&k.value)?,
                    span: span(k.range),
                })
            })
            .collect()
    }

    fn params(&mut self, a: &py::Arguments) -> R<Vec<Param>> {
        let mut out = Vec::new();
        let with_default = a
            .posonlyargs
            .iter()
            .chain(a.args.iter())
            .chain(a.kwonlyargs.iter());
        for p in with_default {
            out.push(Param {
                name: p.def.arg.to_string(),
                annotation: self.opt(&p.def.annotation)?,
                default: self.opt(&p.default)?,
                span: span(p.def.range),
            });
        }
        for p in a.vararg.iter().chain(a.kwarg.iter()) {
            out.push(Param {
                name: p.arg.to_string(),
                annotation: self.opt(&p.annotation)?,
                default: None,
                span: span(p.range),
            });
        }
        Ok(out)
    }

    fn import_names(names: &[py::Alias]) -> Vec<ImportName> {
        names
            .iter()
            .map(|a| ImportName {
                name: a.name.to_string(),
                asname: a.asname.as_ref().map(|n| n.to_string()),
                span: span(a.range),
            })
            .collect()
    }

    fn handlers(&mut self, hs: &[py::ExceptHandler]) -> R<Vec<Handler>> {
        hs.iter()
            .map(|h| {
                let py::ExceptHandler::ExceptHandler(h) = h;
                Ok(Handler {
                    type_: self.opt(&h.type_)?,
                    name: h.name.as_ref().map(|n| n.to_string()),
                    body: self.stmts(&h.body)?,
                    span: span(h.range),
                })
            })
            .collect()
    }

    fn with_items(&mut self, items: &[py::WithItem]) -> R<Vec<WithItem>> {
        items
            .iter()
            .map(|i| {
                Ok(WithItem {
                    context: self.expr(&i.context_expr)?,
                    target: self.opt(&i.optional_vars)?,
                })
            })
            .collect()
    }

    fn stmt(&mut self, s: &py::Stmt) -> R<Stmt> {
        let range = s.range();
        self.enter(range)?;
        let id = self.id();
        let kind = self.stmt_kind(s)?;
        self.leave();
        Ok(Stmt {
            id,
            span: span(range),
            kind,
        })
    }

    fn stmt_kind(&mut self, s: &py::Stmt) -> R<StmtKind> {
        use py::Stmt as S;
        Ok(match s {
            S::Import(i) => StmtKind::Import {
                names: Self::import_names(&i.names),
            },
            S::ImportFrom(i) => StmtKind::ImportFrom {
                module: i.module.as_ref().map(|m| m.to_string()),
                level: i.level.map(|l| l.to_u32()).unwrap_or(0),
                names: Self::import_names(&i.names),
            },
            S::Assign(a) => StmtKind::Assign {
                targets: self.exprs(&a.targets)?,
                value: self.expr(&a.value)?,
            },
            S::AugAssign(a) => StmtKind::AugAssign {
                target: self.expr(&a.target)?,
                op: binop(a.op),
                value: self.expr(&a.value)?,
            },
            S::AnnAssign(a) => StmtKind::AnnAssign {
                target: self.expr(&a.target)?,
                annotation: self.expr(&a.annotation)?,
                value: self.opt(&a.value)?,
            },
            S::Expr(e) => StmtKind::Expr(self.expr(&e.value)?),
            S::For(f) => StmtKind::For {
                target: self.expr(&f.target)?,
                iter: self.expr(&f.iter)?,
                body: self.stmts(&f.body)?,
                orelse: self.stmts(&f.orelse)?,
                is_async: false,
            },
            S::AsyncFor(f) => StmtKind::For {
                target: self.expr(&f.target)?,
                iter: self.expr(&f.iter)?,
                body: self.stmts(&f.body)?,
                orelse: self.stmts(&f.orelse)?,
                is_async: true,
            },
            S::While(w) => StmtKind::While {
                test: self.expr(&w.test)?,
                body: self.stmts(&w.body)?,
                orelse: self.stmts(&w.orelse)?,
            },
            S::If(i) => StmtKind::If {
                test: self.expr(&i.test)?,
                body: self.stmts(&i.body)?,
                orelse: self.stmts(&i.orelse)?,
            },
            S::With(w) => StmtKind::With {
                items: self.with_items(&w.items)?,
                body: self.stmts(&w.body)?,
                is_async: false,
            },
            S::AsyncWith(w) => StmtKind::With {
                items: self.with_items(&w.items)?,
                body: self.stmts(&w.body)?,
                is_async: true,
            },
            S::Try(t) => StmtKind::Try {
                body: self.stmts(&t.body)?,
                handlers: self.handlers(&t.handlers)?,
                orelse: self.stmts(&t.orelse)?,
                finalbody: self.stmts(&t.finalbody)?,
            },
            S::TryStar(t) => StmtKind::Try {
                body: self.stmts(&t.body)?,
                handlers: self.handlers(&t.handlers)?,
                orelse: self.stmts(&t.orelse)?,
                finalbody: self.stmts(&t.finalbody)?,
            },
            S::FunctionDef(f) => StmtKind::FunctionDef {
                name: f.name.to_string(),
                params: self.params(&f.args)?,
                decorators: self.exprs(&f.decorator_list)?,
                returns: self.opt(&f.returns)?,
                body: self.stmts(&f.body)?,
                is_async: false,
            },
            S::AsyncFunctionDef(f) => StmtKind::FunctionDef {
                name: f.name.to_string(),
                params: self.params(&f.args)?,
                decorators: self.exprs(&f.decorator_list)?,
                returns: self.opt(&f.returns)?,
                body: self.stmts(&f.body)?,
                is_async: true,
            },
            S::ClassDef(c) => StmtKind::ClassDef {
                name: c.name.to_string(),
                bases: self.exprs(&c.bases)?,
                keywords: self.keywords(&c.keywords)?,
                decorators: self.exprs(&c.decorator_list)?,
                body: self.stmts(&c.body)?,
            },
            S::Return(r) => StmtKind::Return(self.opt(&r.value)?),
            S::Pass(_) => StmtKind::Pass,
            S::Break(_) => StmtKind::Break,
            S::Continue(_) => StmtKind::Continue,
            S::Delete(d) => StmtKind::Opaque {
                label: "del",
                exprs: self.exprs(&d.targets)?,
                bodies: Vec::new(),
            },
            S::Raise(r) => {
                let mut exprs = Vec::new();
                exprs.extend(self.opt(&r.exc)?);
                exprs.extend(self.opt(&r.cause)?);
                StmtKind::Opaque {
                    label: "raise",
                    exprs,
                    bodies: Vec::new(),
                }
            }
            S::Assert(a) => {
                let mut exprs = vec![self.expr(&a.test)?];
                exprs.extend(self.opt(&a.msg)?);
                StmtKind::Opaque {
                    label: "assert",
                    exprs,
                    bodies: Vec::new(),
                }
            }
            S::Match(m) => {
                let mut exprs = vec![self.expr(&m.subject)?];
                let mut bodies = Vec::new();
                for case in &m.cases {
                    exprs.extend(self.opt(&case.guard)?);
                    bodies.push(self.stmts(&case.body)?);
                }
                StmtKind::Opaque {
                    label: "match",
                    exprs,
                    bodies,
                }
            }
            S::TypeAlias(t) => StmtKind::Opaque {
                label: "type",
                exprs: vec![self.expr(&t.value)?],
                bodies: Vec::new(),
            },
            S::Global(_) => StmtKind::Opaque {
                label: "global",
                exprs: Vec::new(),
                bodies: Vec::new(),
            },
            S::Nonlocal(_) => StmtKind::Opaque {
                label: "nonlocal",
                exprs: Vec::new(),
                bodies: Vec::new(),
            },
        })
    }

    fn expr(&mut self, e: &py::Expr) -> R<Expr> {
        let range = e.range();
        self.enter(range)?;
        let id = self.id();
        let kind = self.expr_kind(e)?;
        self.leave();
        Ok(Expr {
            id,
            span: span(range),
            kind,
        })
    }

    fn comprehension(
        &mut self,
        label: &'static str,
        elts: &[&py::Expr],
        gens: &[py::Comprehension],
    ) -> R<ExprKind> {
        let mut children = Vec::new();
        for g in gens {
            children.push(self.expr(&g.iter)?);
            children.push(self.expr(&g.target)?);
            children.extend(self.exprs(&g.ifs)?);
        }
        for e in elts {
            children.push(self.expr(e)?);
        }
        Ok(ExprKind::Opaque { label, children })
    }

    fn expr_kind(&mut self, e: &py::Expr) -> R<ExprKind> {
        use py::Expr as E;
        Ok(match e {
            E::Name(n) => ExprKind::Name(n.id.to_string()),
            E::Attribute(a) => ExprKind::Attribute {
                value: self.boxed(&a.value)?,
                attr: a.attr.to_string(),
            },
            E::Call(c) => ExprKind::Call {
                func: self.boxed(&c.func)?,
                args: self.exprs(&c.args)?,
                keywords: self.keywords(&c.keywords)?,
            },
            E::Subscript(s) => ExprKind::Subscript {
                value: self.boxed(&s.value)?,
                index: self.boxed(&s.slice)?,
            },
            E::Compare(c) => ExprKind::Compare {
                left: self.boxed(&c.left)?,
                ops: c.ops.iter().map(|o| cmpop(*o)).collect(),
                comparators: self.exprs(&c.comparators)?,
            },
            E::BinOp(b) => ExprKind::BinOp {
                left: self.boxed(&b.left)?,
                op: binop(b.op),
                right: self.boxed(&b.right)?,
            },
            E::UnaryOp(u) => ExprKind::UnaryOp {
                op: match u.op {
                    py::UnaryOp::Not => UnaryOpKind::Not,
                    py::UnaryOp::Invert => UnaryOpKind::Invert,
                    py::UnaryOp::USub => UnaryOpKind::Neg,
                    py::UnaryOp::UAdd => UnaryOpKind::Pos,
                },
                operand: self.boxed(&u.operand)?,
            },
            E::BoolOp(b) => ExprKind::BoolOp {
                op: match b.op {
                    py::BoolOp::And => BoolOpKind::And,
                    py::BoolOp::Or => BoolOpKind::Or,
                },
                values: self.exprs(&b.values)?,
            },
            E::Constant(c) => ExprKind::Constant(literal(&c.value)),
            E::List(l) => ExprKind::List(self.exprs(&l.elts)?),
            E::Tuple(t) => ExprKind::Tuple(self.exprs(&t.elts)?),
            E::Set(s) => ExprKind::Set(self.exprs(&s.elts)?),
            E::Dict(d) => {
                let mut keys = Vec::with_capacity(d.keys.len());
                for k in &d.keys {
                    keys.push(k.as_ref().map(|k| self.expr(k)).transpose()?);
                }
                ExprKind::Dict {
                    keys,
                    values: self.exprs(&d.values)?,
                }
            }
            E::Slice(s) => ExprKind::Slice {
                lower: self.opt(&s.lower)?.map(Box::new),
                upper: self.opt(&s.upper)?.map(Box::new),
                step: self.opt(&s.step)?.map(Box::new),
            },
            E::Starred(s) => ExprKind::Starred(self.boxed(&s.value)?),
            E::NamedExpr(n) => ExprKind::NamedExpr {
                target: self.boxed(&n.target)?,
                value: self.boxed(&n.value)?,
            },
            E::IfExp(i) => ExprKind::IfExp {
                test: self.boxed(&i.test)?,
                body: self.boxed(&i.body)?,
                orelse: self.boxed(&i.orelse)?,
            },
            E::Lambda(l) => {
                let mut children = Vec::new();
                for p in self.params(&l.args)? {
                    children.extend(p.default);
                }
                children.push(self.expr(&l.body)?);
                ExprKind::Opaque {
                    label: "lambda",
                    children,
                }
            }
            E::ListComp(c) => self.comprehension("listcomp", &[&c.elt], &c.generators)?,
            E::SetComp(c) => self.comprehension("setcomp", &[&c.elt], &c.generators)?,
            E::GeneratorExp(c) => self.comprehension("genexp", &[&c.elt], &c.generators)?,
            E::DictComp(c) => {
                self.comprehension("dictcomp", &[&c.key, &c.value], &c.generators)?
            }
            E::Await(a) => ExprKind::Opaque {
                label: "await",
                children: vec![self.expr(&a.value)?],
            },
            E::Yield(y) => ExprKind::Opaque {
                label: "yield",
                children: self.opt(&y.value)?.into_iter().collect(),
            },
            E::YieldFrom(y) => ExprKind::Opaque {
                label: "yield from",
                children: vec![self.expr(&y.value)?],
            },
            E::JoinedStr(j) => ExprKind::Opaque {
                label: "fstring",
                children: self.exprs(&j.values)?,
            },
            E::FormattedValue(f) => {
                let mut children = vec![self.expr(&f.value)?];
                children.extend(self.opt(&f.format_spec)?);
                ExprKind::Opaque {
                    label: "format",
                    children,
                }
            }
        })
    }
}

fn binop(op: py::Operator) -> BinOpKind {
    use py::Operator as O;
    match op {
        O::Add => BinOpKind::Add,
        O::Sub => BinOpKind::Sub,
        O::Mult => BinOpKind::Mult,
        O::MatMult => BinOpKind::MatMult,
        O::Div => BinOpKind::Div,
        O::Mod => BinOpKind::Mod,
        O::Pow => BinOpKind::Pow,
        O::LShift => BinOpKind::LShift,
        O::RShift => BinOpKind::RShift,
        O::BitOr => BinOpKind::BitOr,
        O::BitXor => BinOpKind::BitXor,
        O::BitAnd => BinOpKind::BitAnd,
        O::FloorDiv => BinOpKind::FloorDiv,
    }
}

fn cmpop(op: py::CmpOp) -> CmpOpKind {
    use py::CmpOp as C;
    match op {
        C::Eq => CmpOpKind::Eq,
        C::NotEq => CmpOpKind::NotEq,
        C::Lt => CmpOpKind::Lt,
        C::LtE => CmpOpKind::LtE,
        C::Gt => CmpOpKind::Gt,
        C::GtE => CmpOpKind::GtE,
        C::Is => CmpOpKind::Is,
        C::IsNot => CmpOpKind::IsNot,
        C::In => CmpOpKind::In,
        C::NotIn => CmpOpKind::NotIn,
    }
}

fn literal(c: &py::Constant) -> Literal {
    match c {
        py::Constant::None => Literal::None,
        py::Constant::Bool(b) => Literal::Bool(*b),
        py::Constant::Str(s) => Literal::Str(s.clone()),
        py::Constant::Bytes(_) => Literal::Bytes,
        py::Constant::Int(i) => {
            let text = i.to_string();
            match text.parse::<i64>() {
                Ok(v) => Literal::Int(v),
                Err(_) => Literal::BigInt(text),
            }
        }
        py::Constant::Float(f) => Literal::Float(*f),
        py::Constant::Complex { .. } => Literal::Complex,
        py::Constant::Ellipsis => Literal::Ellipsis,
        py::Constant::Tuple(_) => Literal::Ellipsis,
    }
}
