//! ML01-ML09.

use std::collections::BTreeSet;

use crate::engine::catalog::*;
use crate::engine::params::any_matches;
use crate::engine::{Diagnostic, FileContext, Rule, RuleDescriptor};
use crate::frontend::ast::{CmpOpKind, Expr, ExprKind, Literal, NodeId, Span, StmtKind};
use crate::semantic::Tag;

use super::{is_literal_bool, parts, CallParts};

pub struct Ml01;

const ROW_ITERATORS: &[&str] = &["iterrows", "itertuples", "items", "iteritems"];

fn names_in(e: &Expr, out: &mut BTreeSet<String>) {
    e.walk(&mut |n| {
        if let Some(name) = n.as_name() {
            out.insert(name.to_string());
        }
    });
}

/// `t[i]` with `t` a tensor and `i` mentioning a loop variable.
fn indexes_tensor(cx: &FileContext, e: &Expr, loop_vars: &BTreeSet<String>) -> bool {
    e.any(&mut |n| match &n.kind {
        ExprKind::Subscript { value, index } => {
            cx.model.tag_of(value.id) == Tag::Tensor
                && index.any(&mut |i| i.as_name().is_some_and(|v| loop_vars.contains(v)))
        }
        _ => false,
    })
}

impl Ml01 {
    fn tensor_accumulation(&self, cx: &FileContext, loop_idx: usize, loop_vars: &BTreeSet<String>) -> bool {
        cx.model.stmts.iter().enumerate().any(|(i, info)| {
            if !info.loops.contains(&loop_idx) {
                return false;
            }
            match &cx.stmts[i].kind {
                StmtKind::AugAssign { value, .. } => indexes_tensor(cx, value, loop_vars),
                StmtKind::Assign { targets, value } => {
                    let mut lhs = BTreeSet::new();
                    for t in targets {
                        if let Some(n) = t.as_name() {
                            lhs.insert(n.to_string());
                        }
                    }
                    let mut rhs = BTreeSet::new();
                    names_in(value, &mut rhs);
                    !lhs.is_disjoint(&rhs) && indexes_tensor(cx, value, loop_vars)
                }
                StmtKind::Expr(e) => CallParts::of(e).is_some_and(|c| {
                    matches!(&c.func.kind, ExprKind::Attribute { attr, .. } if attr == "append" || attr == "extend")
                        && c.args.iter().any(|a| indexes_tensor(cx, a, loop_vars))
                }),
                _ => false,
            }
        })
    }
}

impl Rule for Ml01 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML01
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for (idx, stmt) in cx.stmts.iter().enumerate() {
            let StmtKind::For { target, iter, .. } = &stmt.kind else {
                continue;
            };
            let header = Span::new(stmt.span.start, iter.span.end);
            if let Some(c) = CallParts::of(iter) {
                if let ExprKind::Attribute { value, attr } = &c.func.kind {
                    if ROW_ITERATORS.contains(&attr.as_str()) && cx.model.tag_of(value.id) == Tag::DataFrame {
                        out.push(cx.diag(
                            &ML01,
                            header,
                            format!("loop over DataFrame.{attr}() processes rows one at a time"),
                        ));
                        continue;
                    }
                }
            }
            let mut vars = BTreeSet::new();
            names_in(target, &mut vars);
            if !vars.is_empty() && self.tensor_accumulation(cx, idx, &vars) {
                out.push(cx.diag(
                    &ML01,
                    header,
                    "loop indexes a tensor element by element and accumulates the result",
                ));
            }
        }
    }
}

pub struct Ml02;

const NAN_NAMES: &[&str] = &["numpy.nan", "numpy.NaN", "numpy.NAN", "math.nan"];

fn is_nan(cx: &FileContext, e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Attribute { .. } | ExprKind::Name(_) => e
            .dotted_path()
            .and_then(|p| cx.model.aliases.canonical(&p))
            .is_some_and(|c| NAN_NAMES.contains(&c.as_str())),
        ExprKind::Call { func, args, keywords } => {
            func.as_name() == Some("float")
                && cx.model.aliases.lookup("float").is_none()
                && keywords.is_empty()
                && matches!(args.as_slice(), [a] if matches!(&a.kind,
                    ExprKind::Constant(Literal::Str(s))
                        if matches!(s.trim().to_ascii_lowercase().as_str(), "nan" | "+nan" | "-nan")))
        }
        _ => false,
    }
}

impl Rule for Ml02 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML02
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for e in cx.exprs() {
            let ExprKind::Compare { left, ops, comparators } = &e.kind else {
                continue;
            };
            let mut lhs: &Expr = left;
            for (op, rhs) in ops.iter().zip(comparators) {
                if matches!(op, CmpOpKind::Eq | CmpOpKind::NotEq) && (is_nan(cx, lhs) || is_nan(cx, rhs)) {
                    let message = if *op == CmpOpKind::Eq {
                        "comparison with NaN using == is always False; use isna()"
                    } else {
                        "comparison with NaN using != is always True; use notna()"
                    };
                    out.push(cx.diag(&ML02, e.span, message));
                    break;
                }
                lhs = rhs;
            }
        }
    }
}

pub struct Ml03;

impl Rule for Ml03 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML03
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        // Subscripts that are part of an assignment target chain.
        let mut stores: BTreeSet<NodeId> = BTreeSet::new();
        for s in &cx.stmts {
            let targets: Vec<&Expr> = match &s.kind {
                StmtKind::Assign { targets, .. } => targets.iter().collect(),
                StmtKind::AugAssign { target, .. } => vec![target],
                StmtKind::AnnAssign { target, .. } => vec![target],
                _ => continue,
            };
            for mut t in targets {
                while let ExprKind::Subscript { value, .. } = &t.kind {
                    stores.insert(t.id);
                    t = value;
                }
            }
        }
        for e in cx.exprs() {
            let ExprKind::Subscript { value: inner, .. } = &e.kind else {
                continue;
            };
            let ExprKind::Subscript { value: base, .. } = &inner.kind else {
                continue;
            };
            if matches!(base.kind, ExprKind::Subscript { .. }) || cx.model.tag_of(base.id) != Tag::DataFrame {
                continue;
            }
            let message = if stores.contains(&e.id) {
                "chained indexing on a DataFrame; assignment to chained index may silently fail"
            } else {
                "chained indexing on a DataFrame"
            };
            out.push(cx.diag(&ML03, e.span, message));
        }
    }
}

pub struct Ml04;

impl Rule for Ml04 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML04
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let readers = &cx.config.params.ml04_readers;
        for call in &cx.model.call_index {
            let Some(api) = call.canonical.as_deref() else {
                continue;
            };
            if !any_matches(api, readers) {
                continue;
            }
            let Some(c) = parts(cx, call) else { continue };
            if c.has_splat() {
                continue;
            }
            let mut missing = Vec::new();
            if !c.has_keyword("dtype") {
                missing.push("dtype");
            }
            if !c.has_keyword("usecols") && !c.has_keyword("columns") {
                missing.push("column selection (usecols)");
            }
            if !missing.is_empty() {
                out.push(cx.diag(
                    &ML04,
                    call.span,
                    format!("{api}() without {}", missing.join(" and ")),
                ));
            }
        }
    }
}

pub struct Ml05;

fn empty_literal(e: &Expr) -> Option<&'static str> {
    match &e.kind {
        ExprKind::Constant(Literal::Int(0)) => Some("0"),
        ExprKind::Constant(Literal::Float(f)) if *f == 0.0 => Some("0.0"),
        ExprKind::Constant(Literal::Str(s)) if s.is_empty() => Some("\"\""),
        _ => None,
    }
}

impl Rule for Ml05 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML05
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for s in &cx.stmts {
            let StmtKind::Assign { targets, value } = &s.kind else {
                continue;
            };
            let Some(lit) = empty_literal(value) else { continue };
            for t in targets {
                let ExprKind::Subscript { value: df, index } = &t.kind else {
                    continue;
                };
                if !matches!(index.kind, ExprKind::Constant(Literal::Str(_))) {
                    continue;
                }
                if cx.model.tag_of(df.id) == Tag::DataFrame {
                    out.push(cx.diag(
                        &ML05,
                        t.span,
                        format!("new DataFrame column initialized with {lit} instead of NaN"),
                    ));
                }
            }
        }
    }
}

pub struct Ml06;

impl Rule for Ml06 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML06
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for call in &cx.model.call_index {
            // Positional offset of `how` in the signature.
            let base = if call.is("DataFrame.merge") {
                1
            } else if call.is("pandas.merge") {
                2
            } else {
                continue;
            };
            let Some(c) = parts(cx, call) else { continue };
            if c.has_splat() {
                continue;
            }
            let given = |pos: usize, name: &str| c.arg(base + pos, name).is_some();
            let on = given(1, "on")
                || ((given(2, "left_on") || given(4, "left_index"))
                    && (given(3, "right_on") || given(5, "right_index")));
            let mut missing = Vec::new();
            if !on {
                missing.push("on");
            }
            if !given(0, "how") {
                missing.push("how");
            }
            if !given(10, "validate") {
                missing.push("validate");
            }
            if !missing.is_empty() {
                out.push(cx.diag(
                    &ML06,
                    call.span,
                    format!("merge() without explicit {}", missing.join(", ")),
                ));
            }
        }
    }
}

pub struct Ml07;

impl Rule for Ml07 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML07
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let apis = &cx.config.params.ml07_apis;
        for s in &cx.stmts {
            let StmtKind::Expr(e) = &s.kind else { continue };
            let Some(c) = CallParts::of(e) else { continue };
            let Some(call) = cx.model.call_by_node(e.id) else {
                continue;
            };
            let Some(api) = call.canonical.as_deref() else {
                continue;
            };
            if !any_matches(api, apis) || c.has_splat() || c.has_keyword("out") {
                continue;
            }
            let inplace = c
                .keyword("inplace")
                .is_some_and(|k| !is_literal_bool(&k.value, false));
            if !inplace {
                out.push(cx.diag(
                    &ML07,
                    call.span,
                    format!("result of {api}() is discarded; it returns a new object"),
                ));
            }
        }
    }
}

pub struct Ml08;

impl Rule for Ml08 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML08
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for e in cx.exprs() {
            if let ExprKind::Attribute { value, attr } = &e.kind {
                if attr == "values" && cx.model.tag_of(value.id) == Tag::DataFrame {
                    out.push(cx.diag(&ML08, e.span, "DataFrame.values used for conversion; use to_numpy()"));
                }
            }
        }
    }
}

pub struct Ml09;

impl Rule for Ml09 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML09
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let unknown_tier = cx.config.ml09_unknown_rank_info();
        for call in &cx.model.call_index {
            if !call.is("numpy.dot") {
                continue;
            }
            let Some(c) = parts(cx, call) else { continue };
            let (Some(a), Some(b)) = (c.arg(0, "a"), c.arg(1, "b")) else {
                continue;
            };
            let (pa, pb) = (cx.model.provenance(a.id), cx.model.provenance(b.id));
            if !pa.is(Tag::NdArray) || !pb.is(Tag::NdArray) {
                continue;
            }
            match (pa.rank, pb.rank) {
                (Some(2), Some(2)) => out.push(cx.diag(
                    &ML09,
                    call.span,
                    "numpy.dot() on two 2-D arrays; use numpy.matmul() or @",
                )),
                (ra, rb) if unknown_tier && ra.unwrap_or(2) == 2 && rb.unwrap_or(2) == 2 => {
                    out.push(cx.diag(
                        &ML09,
                        call.span,
                        "numpy.dot() on arrays of unverified rank; use numpy.matmul() or @ for matrices",
                    ))
                }
                _ => {}
            }
        }
    }
}
