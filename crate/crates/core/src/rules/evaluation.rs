//! ML21-ML22.

use crate::engine::catalog::*;
use crate::engine::params::any_matches;
use crate::engine::{Diagnostic, FileContext, Rule, RuleDescriptor};
use crate::frontend::ast::Expr;
use crate::semantic::{CallSite, Tag};

use super::{last_segment, parts, CallParts};

const SPLIT: &str = "sklearn.model_selection.train_test_split";
const CROSS_VALIDATION: &[&str] = &[
    "sklearn.model_selection.cross_val_score",
    "sklearn.model_selection.cross_validate",
    "sklearn.model_selection.cross_val_predict",
];
const PIPELINES: &[&str] = &["sklearn.pipeline.Pipeline", "sklearn.pipeline.make_pipeline"];

pub struct Ml21;

fn is_fitted_transform(cx: &FileContext, e: &Expr) -> bool {
    let Some(call) = cx.model.call_by_node(e.id) else { return false };
    let fitted_receiver = matches!(call.receiver.tag, Tag::Scaler | Tag::Estimator)
        && !call.receiver.api.as_deref().is_some_and(|a| PIPELINES.contains(&a));
    if !fitted_receiver {
        return false;
    }
    if call.is_method("fit_transform") {
        return true;
    }
    // `scaler.fit(X).transform(X)`
    call.is_method("transform")
        && CallParts::of(e)
            .and_then(|c| c.receiver())
            .and_then(|r| cx.model.call_by_node(r.id))
            .is_some_and(|r| r.is_method("fit"))
}

impl Ml21 {
    /// `e` is a transform result directly or through the latest assignment
    /// to a name before `stmt` in the same scope.
    fn transformed(cx: &FileContext, e: &Expr, call: &CallSite) -> bool {
        if is_fitted_transform(cx, e) {
            return true;
        }
        let Some(name) = e.as_name() else { return false };
        cx.model
            .assignments
            .iter()
            .filter(|a| a.scope == call.scope && a.target == name && a.stmt < call.stmt)
            .last()
            .and_then(|a| cx.expr(a.value))
            .is_some_and(|v| is_fitted_transform(cx, v))
    }

    fn split(&self, cx: &FileContext, call: &CallSite, out: &mut Vec<Diagnostic>) {
        let Some(c) = parts(cx, call) else { return };
        if c.args.iter().any(|a| Self::transformed(cx, a, call)) {
            out.push(cx.diag(
                &ML21,
                call.span,
                "data is transformed before train_test_split(); fit preprocessing on the training split only (use a Pipeline)",
            ));
        }
    }

    fn cross_validation(&self, cx: &FileContext, call: &CallSite, out: &mut Vec<Diagnostic>) {
        let Some(c) = parts(cx, call) else { return };
        let (Some(est), Some(data)) = (c.arg(0, "estimator"), c.arg(1, "X")) else {
            return;
        };
        let p = cx.model.provenance(est.id);
        if !p.is(Tag::Estimator) || p.api.as_deref().is_some_and(|a| PIPELINES.contains(&a)) {
            return;
        }
        let Some(var) = data.as_name() else { return };
        let leaked = cx.model.calls_in_scope(call.scope).any(|f| {
            if f.node >= call.node || !f.is_method("fit_transform") || !f.receiver.is(Tag::Scaler) {
                return false;
            }
            let on_var = parts(cx, f)
                .and_then(|fc| fc.arg(0, "X"))
                .is_some_and(|a| a.as_name() == Some(var));
            let into_var = cx
                .model
                .assignments
                .iter()
                .any(|a| a.value == f.node && a.target == var);
            on_var || into_var
        });
        if leaked {
            let api = call.canonical.as_deref().map(last_segment).unwrap_or("cross-validation");
            out.push(cx.diag(
                &ML21,
                call.span,
                format!("{api}() on data scaled outside the folds; wrap the scaler and estimator in a Pipeline"),
            ));
        }
    }
}

impl Rule for Ml21 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML21
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for call in &cx.model.call_index {
            if call.is(SPLIT) {
                self.split(cx, call, out);
            } else if call.canonical.as_deref().is_some_and(|n| CROSS_VALIDATION.contains(&n)) {
                self.cross_validation(cx, call, out);
            }
        }
    }
}

pub struct Ml22;

impl Rule for Ml22 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML22
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let params = &cx.config.params;
        let matching = |list: &'_ [String]| {
            let list = list.to_vec();
            cx.model
                .call_index
                .iter()
                .filter(move |c| c.canonical.as_deref().is_some_and(|n| any_matches(n, &list)))
        };
        if matching(&params.ml22_independent_metrics).next().is_some() {
            return;
        }
        for call in matching(&params.ml22_dependent_metrics) {
            let api = call.canonical.as_deref().map(last_segment).unwrap_or("metric");
            out.push(cx.diag(
                &ML22,
                call.span,
                format!("only threshold-dependent {api}() is reported; add a threshold-independent metric such as roc_auc_score()"),
            ));
        }
    }
}
