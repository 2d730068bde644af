//! The 22 detection rules.

mod data_cleaning;
mod evaluation;
mod training;


use crate::engine::{FileContext, Rule};
use crate::frontend::ast::{Expr, ExprKind, Keyword, Literal};
use crate::semantic::{CallSite, Tag};

/// Every rule, in id order.
pub fn all() -> Vec<Box<dyn Rule>> {
    vec![
        Box::new(data_cleaning::Ml01),
        Box::new(data_cleaning::Ml02),
        Box::new(data_cleaning::Ml03),
        Box::new(data_cleaning::Ml04),
        Box::new(data_cleaning::Ml05),
        Box::new(data_cleaning::Ml06),
        Box::new(data_cleaning::Ml07),
        Box::new(data_cleaning::Ml08),
        Box::new(data_cleaning::Ml09),
        Box::new(training::Ml10),
        Box::new(training::Ml11),
        Box::new(training::Ml12),
        Box::new(training::Ml13),
        Box::new(training::Ml14),
        Box::new(training::Ml15),
        Box::new(training::Ml16),
        Box::new(training::Ml17),
        Box::new(training::Ml18),
        Box::new(training::Ml19),
        Box::new(training::Ml20),
        Box::new(evaluation::Ml21),
        Box::new(evaluation::Ml22),
    ]
}

/// The pieces of a call expression.
struct CallParts<'a> {
    func: &'a Expr,
    args: &'a [Expr],
    keywords: &'a [Keyword],
}

impl<'a> CallParts<'a> {
    fn of(e: &'a Expr) -> Option<Self> {
        match &e.kind {
            ExprKind::Call {
                func,
                args,
                keywords,
            } => Some(CallParts {
                func,
                args,
                keywords,
            }),
            _ => None,
        }
    }

    fn keyword(&self, name: &str) -> Option<&'a Keyword> {
        self.keywords.iter().find(|k| k.arg.as_deref() == Some(name))
    }

    fn has_keyword(&self, name: &str) -> bool {
        self.keyword(name).is_some()
    }

    /// `**kwargs` may supply anything, so keyword checks give up.
    fn has_splat(&self) -> bool {
        self.keywords.iter().any(|k| k.arg.is_none())
            || self
                .args
                .iter()
                .any(|a| matches!(a.kind, ExprKind::Starred(_)))
    }

    /// Argument at `pos` or passed as `name`.
    fn arg(&self, pos: usize, name: &str) -> Option<&'a Expr> {
        self.args
            .get(pos)
            .filter(|a| !matches!(a.kind, ExprKind::Starred(_)))
            .or_else(|| self.keyword(name).map(|k| &k.value))
    }

    /// Receiver of a method call.
    fn receiver(&self) -> Option<&'a Expr> {
        match &self.func.kind {
            ExprKind::Attribute { value, .. } => Some(value),
            _ => None,
        }
    }
}

fn parts<'a>(cx: &FileContext<'a>, call: &CallSite) -> Option<CallParts<'a>> {
    CallParts::of(cx.expr(call.node)?)
}

fn is_literal_bool(e: &Expr, v: bool) -> bool {
    matches!(e.kind, ExprKind::Constant(Literal::Bool(b)) if b == v)
}

fn last_segment(path: &str) -> &str {
    path.rsplit('.').next().unwrap_or(path)
}

/// Receiver looks like a model: Model provenance, or an untyped name such
/// as `model`, `self.net`.
fn model_like(call: &CallSite) -> bool {
    if call.receiver.is(Tag::Model) {
        return true;
    }
    call.receiver.is_unknown()
        && call.receiver_path.as_deref().is_some_and(|p| {
            let last = last_segment(p).to_ascii_lowercase();
            last.contains("model") || last.contains("net")
        })
}

/// Receiver looks like an optimizer: Optimizer provenance, or an untyped
/// name such as `optimizer`, `opt`.
fn optimizer_like(call: &CallSite) -> bool {
    if call.receiver.is(Tag::Optimizer) {
        return true;
    }
    call.receiver.is_unknown()
        && call.receiver_path.as_deref().is_some_and(|p| {
            let last = last_segment(p).to_ascii_lowercase();
            last.contains("optim") || last == "opt"
        })
}

/// Call result established by this call itself (a constructor).
fn is_constructor(call: &CallSite) -> bool {
    !call.result.is_unknown()
        && call.result.origin == call.span
        && call.result.api.is_some()
        && call.result.api == call.canonical
}
