//! ML10-ML20.

use std::collections::BTreeMap;

use crate::engine::catalog::*;
use crate::engine::facts::{RandomLib, Site};
use crate::engine::params::{any_matches, name_matches};
use crate::engine::{diag_at, Diagnostic, FileContext, ProjectFacts, Rule, RuleDescriptor, RunConfig};
use crate::frontend::ast::{Expr, ExprKind, StmtKind};
use crate::semantic::{CallSite, ScopeKind, Tag};

use super::{is_constructor, is_literal_bool, last_segment, model_like, optimizer_like, parts, CallParts};

const PIPELINES: &[&str] = &["sklearn.pipeline.Pipeline", "sklearn.pipeline.make_pipeline"];

pub struct Ml10;

impl Ml10 {
    fn is_scaler(call: &CallSite, scalers: &[String]) -> bool {
        (call.result.is(Tag::Scaler) && is_constructor(call))
            || call.canonical.as_deref().is_some_and(|c| any_matches(c, scalers))
    }
}

impl Rule for Ml10 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML10
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let params = &cx.config.params;
        for call in &cx.model.call_index {
            if !(call.is_method("fit") || call.is_method("fit_transform")) || !call.receiver.is(Tag::Estimator) {
                continue;
            }
            let Some(api) = call.receiver.api.as_deref() else {
                continue;
            };
            if !any_matches(api, &params.ml10_sensitive_estimators) {
                continue;
            }
            let scaled_before = cx
                .model
                .calls_in_scope(call.scope)
                .any(|c| c.node < call.node && Self::is_scaler(c, &params.ml10_scalers));
            let in_scaled_pipeline = cx
                .model
                .pipeline_member_of
                .get(&call.receiver.origin)
                .is_some_and(|&i| cx.model.pipelines[i].has(Tag::Scaler));
            if !scaled_before && !in_scaled_pipeline {
                out.push(cx.diag(
                    &ML10,
                    call.span,
                    format!("{} fitted without prior feature scaling", last_segment(api)),
                ));
            }
        }
    }
}

pub struct Ml11;

impl Rule for Ml11 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML11
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let params = &cx.config.params;
        for call in &cx.model.call_index {
            let tag = call.result.tag;
            if !matches!(tag, Tag::Estimator | Tag::Optimizer) || !is_constructor(call) {
                continue;
            }
            let Some(api) = call.canonical.as_deref() else { continue };
            if PIPELINES.contains(&api) {
                continue;
            }
            let Some(c) = parts(cx, call) else { continue };
            if c.has_splat() {
                continue;
            }
            let short = last_segment(api);
            let named = c.keywords.len();
            if tag == Tag::Estimator && c.args.is_empty() && named == 0 {
                out.push(cx.diag(
                    &ML11,
                    call.span,
                    format!("{short}() relies entirely on default hyperparameters"),
                ));
                continue;
            }
            if tag == Tag::Optimizer {
                // torch optimizers take the parameters first.
                let hyper_positional = if api.starts_with("torch.") {
                    c.args.len().saturating_sub(1)
                } else {
                    c.args.len()
                };
                if named + hyper_positional < params.ml11_optimizer_min_keywords {
                    out.push(cx.diag(
                        &ML11,
                        call.span,
                        format!("{short}() without an explicit learning rate or other hyperparameter"),
                    ));
                    continue;
                }
            }
            for (name, required) in &params.ml11_required_keywords {
                if !name_matches(api, name) {
                    continue;
                }
                let missing: Vec<&str> = required
                    .iter()
                    .filter(|k| !c.has_keyword(k))
                    .map(String::as_str)
                    .collect();
                if !missing.is_empty() {
                    out.push(cx.diag(
                        &ML11,
                        call.span,
                        format!("{short}() without {}", missing.join(", ")),
                    ));
                }
                break;
            }
        }
    }
}

pub struct Ml12;

impl Ml12 {
    fn loss_call(cx: &FileContext, e: &Expr, names: &[String]) -> bool {
        let Some(c) = CallParts::of(e) else { return false };
        if cx.model.tag_of(c.func.id) == Tag::MetricFn {
            return true;
        }
        if let Some(call) = cx.model.call_by_node(e.id) {
            if let Some(api) = call.canonical.as_deref() {
                if api.starts_with("torch.nn.functional.") || api.starts_with("tensorflow.keras.losses.") {
                    let last = last_segment(api);
                    if last.ends_with("loss") || last.contains("entropy") {
                        return true;
                    }
                }
            }
        }
        c.func
            .dotted_path()
            .is_some_and(|p| names.iter().any(|n| n == last_segment(&p)))
    }

    /// Appended value still holds the autograd graph of a loss.
    fn retains_loss(cx: &FileContext, arg: &Expr, names: &[String], tensor_lib: bool) -> bool {
        if Self::loss_call(cx, arg, names) {
            return true;
        }
        let Some(name) = arg.as_name() else { return false };
        let p = cx.model.provenance(arg.id);
        if p.is(Tag::Tensor) {
            let from_loss = cx
                .model
                .call_index
                .iter()
                .find(|c| c.span == p.origin)
                .and_then(|c| cx.expr(c.node))
                .is_some_and(|e| Self::loss_call(cx, e, names));
            return from_loss || names.iter().any(|n| n == name);
        }
        p.is_unknown() && tensor_lib && names.iter().any(|n| n == name)
    }
}

impl Rule for Ml12 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML12
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let names = &cx.config.params.ml12_loss_names;
        let tensor_lib = cx.model.aliases.imports_library("torch") || cx.model.aliases.imports_library("tensorflow");
        for call in &cx.model.call_index {
            let Some(&innermost) = call.loops.last() else { continue };
            // Keras model built inside a loop.
            if call.result.is(Tag::Model)
                && is_constructor(call)
                && call.canonical.as_deref().is_some_and(|c| c.starts_with("tensorflow."))
            {
                let cleared = cx.model.call_index.iter().any(|c| {
                    c.loops.contains(&innermost)
                        && (c.is_method("clear_session")
                            || c.canonical.as_deref().is_some_and(|n| n.ends_with(".clear_session")))
                });
                if !cleared {
                    out.push(cx.diag(
                        &ML12,
                        call.span,
                        "model created in a loop without clear_session()",
                    ));
                }
                continue;
            }
            if call.is_method("append") {
                let Some(c) = parts(cx, call) else { continue };
                if let [arg] = c.args {
                    if Self::retains_loss(cx, arg, names, tensor_lib) {
                        out.push(cx.diag(
                            &ML12,
                            call.span,
                            "loss tensor appended in a loop keeps its graph alive; append loss.item() or loss.detach()",
                        ));
                    }
                }
            }
        }
    }
}

pub struct Ml13;

impl Rule for Ml13 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML13
    }

    fn check_project(&self, facts: &ProjectFacts, _config: &RunConfig, out: &mut Vec<Diagnostic>) {
        if !facts.torch_imported || facts.deterministic_option_present {
            return;
        }
        for site in &facts.torch_imports {
            out.push(diag_at(
                &ML13,
                site,
                "torch imported but torch.use_deterministic_algorithms(True) is never called",
            ));
        }
    }
}

pub struct Ml14;

impl Rule for Ml14 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML14
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for call in &cx.model.call_index {
            let Some(api) = call.canonical.as_deref() else { continue };
            let always = cx.sigs.random_state_always.contains(api);
            let when_shuffled = cx.sigs.random_state_when_shuffled.contains(api);
            if !always && !when_shuffled {
                continue;
            }
            let Some(c) = parts(cx, call) else { continue };
            if c.has_splat() || c.has_keyword("random_state") {
                continue;
            }
            let shuffle = c.keyword("shuffle").map(|k| &k.value);
            let shuffled = if always {
                !shuffle.is_some_and(|v| is_literal_bool(v, false))
            } else {
                shuffle.is_some_and(|v| !is_literal_bool(v, false))
            };
            if shuffled {
                out.push(cx.diag(
                    &ML14,
                    call.span,
                    format!("{}() without random_state", last_segment(api)),
                ));
            }
        }
    }

    fn check_project(&self, facts: &ProjectFacts, _config: &RunConfig, out: &mut Vec<Diagnostic>) {
        // First unseeded use per (library, file).
        let mut first: BTreeMap<(RandomLib, &str), (&Site, &str)> = BTreeMap::new();
        for u in &facts.randomness_use_sites {
            if facts.seeded(u.library) {
                continue;
            }
            first
                .entry((u.library, u.site.path.as_str()))
                .and_modify(|cur| {
                    if (u.site.line, u.site.column) < (cur.0.line, cur.0.column) {
                        *cur = (&u.site, &u.api);
                    }
                })
                .or_insert((&u.site, &u.api));
        }
        for ((lib, _), (site, api)) in first {
            out.push(diag_at(
                &ML14,
                site,
                format!(
                    "{api}() draws random numbers but {} is never called in the project",
                    lib.seed_call()
                ),
            ));
        }
    }
}

pub struct Ml15;

impl Ml15 {
    fn is_clip(cx: &FileContext, e: &Expr, clips: &[String]) -> bool {
        let Some(call) = cx.model.call_by_node(e.id) else { return false };
        if call.canonical.as_deref().is_some_and(|c| any_matches(c, clips)) {
            return true;
        }
        // Method call on an untyped receiver, e.g. `x.clamp(min=eps)`.
        call.receiver.is_unknown()
            && call.method.as_deref().is_some_and(|m| {
                clips
                    .iter()
                    .any(|c| c.contains('.') && Tag::from_name(c.split('.').next().unwrap_or("")).is_some() && last_segment(c) == m)
            })
    }
}

impl Rule for Ml15 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML15
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let params = &cx.config.params;
        for call in &cx.model.call_index {
            let Some(api) = call.canonical.as_deref() else { continue };
            if !any_matches(api, &params.ml15_log_apis) {
                continue;
            }
            let Some(c) = parts(cx, call) else { continue };
            let method_style = Tag::from_name(api.split('.').next().unwrap_or("")).is_some();
            let arg = if method_style {
                c.receiver()
            } else {
                c.arg(0, "x").or_else(|| c.arg(0, "input"))
            };
            let Some(arg) = arg else { continue };
            if matches!(arg.kind, ExprKind::Starred(_)) || Self::is_clip(cx, arg, &params.ml15_clip_apis) {
                continue;
            }
            if arg.as_literal().and_then(|l| l.as_f64()).is_some_and(|v| v > 0.0) {
                continue;
            }
            out.push(cx.diag(
                &ML15,
                call.span,
                format!("{api}() argument is not clipped away from zero"),
            ));
        }
    }
}

pub struct Ml16;

const TILES: &[&str] = &[
    "tensorflow.tile",
    "numpy.tile",
    "torch.tile",
    "Tensor.repeat",
    "Tensor.tile",
];

impl Ml16 {
    fn tile_call<'a>(cx: &'a FileContext, e: &Expr) -> Option<&'a CallSite> {
        cx.model
            .call_by_node(e.id)
            .filter(|c| c.canonical.as_deref().is_some_and(|n| TILES.contains(&n)))
    }

    /// The tile call behind `e`: the call itself, or a name assigned exactly
    /// once in this scope from a tile call before `stmt`.
    fn resolve<'a>(cx: &'a FileContext, e: &Expr, stmt: usize) -> Option<&'a CallSite> {
        if let Some(c) = Self::tile_call(cx, e) {
            return Some(c);
        }
        let name = e.as_name()?;
        let scope = cx.model.stmts[stmt].scope;
        let mut defs = cx
            .model
            .assignments
            .iter()
            .filter(|a| a.scope == scope && a.target == name);
        let def = defs.next()?;
        if defs.next().is_some() || def.stmt >= stmt {
            return None;
        }
        Self::tile_call(cx, cx.expr(def.value)?)
    }
}

impl Rule for Ml16 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML16
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let mut pairs: Vec<(&Expr, &Expr, usize)> = Vec::new();
        for e in cx.exprs() {
            if let ExprKind::BinOp { left, op, right } = &e.kind {
                if op.is_elementwise_arith() {
                    if let Some(s) = cx.stmt_of(e.id) {
                        pairs.push((left, right, s));
                    }
                }
            }
        }
        for (i, s) in cx.stmts.iter().enumerate() {
            if let StmtKind::AugAssign { target, op, value } = &s.kind {
                if op.is_elementwise_arith() {
                    pairs.push((target, value, i));
                }
            }
        }
        for (l, r, stmt) in pairs {
            for (tiled, other) in [(l, r), (r, l)] {
                let Some(tile) = Self::resolve(cx, tiled, stmt) else { continue };
                if cx.model.tag_of(other.id).is_array_like() {
                    out.push(cx.diag(
                        &ML16,
                        tile.span,
                        "tiled copy used in elementwise arithmetic; rely on broadcasting instead",
                    ));
                }
            }
        }
    }
}

pub struct Ml17;

const GROW: &[&str] = &["tensorflow.concat", "tensorflow.stack"];

impl Rule for Ml17 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML17
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for init in &cx.model.assignments {
            let Some(value) = cx.expr(init.value) else { continue };
            if !cx.model.call_by_node(value.id).is_some_and(|c| c.is("tensorflow.constant")) {
                continue;
            }
            let grown = cx.model.assignments.iter().find(|a| {
                if a.scope != init.scope || a.target != init.target || a.stmt <= init.stmt {
                    return false;
                }
                let info = &cx.model.stmts[a.stmt];
                if !info.loops.iter().any(|&l| l > init.stmt) {
                    return false;
                }
                let Some(call) = cx.model.call_by_node(a.value).filter(|c| {
                    c.canonical.as_deref().is_some_and(|n| GROW.contains(&n))
                }) else {
                    return false;
                };
                parts(cx, call).is_some_and(|c| {
                    c.args
                        .iter()
                        .chain(c.keywords.iter().map(|k| &k.value))
                        .any(|arg| arg.any(&mut |n| n.as_name() == Some(init.target.as_str())))
                })
            });
            if let Some(g) = grown {
                let (line, _) = cx.unit.span_to_location(cx.model.stmts[g.stmt].span);
                out.push(cx.diag(
                    &ML17,
                    value.span,
                    format!(
                        "tensor {} is grown in a loop at line {line}; use tf.TensorArray",
                        init.target
                    ),
                ));
            }
        }
    }
}

pub struct Ml18;

fn is_training_step(c: &CallSite) -> bool {
    c.is_method("backward") || (c.is_method("step") && optimizer_like(c))
}

fn restores_training(c: &CallSite, cx: &FileContext, receiver: &Option<String>) -> bool {
    if !c.is_method("train") || c.receiver_path != *receiver {
        return false;
    }
    // `train(False)` is another way of saying eval().
    !parts(cx, c)
        .and_then(|p| p.arg(0, "mode"))
        .is_some_and(|a| is_literal_bool(a, false))
}

impl Rule for Ml18 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML18
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for (_, calls) in cx.model.statement_order_facts() {
            for (i, ev) in calls.iter().enumerate() {
                if !ev.is_method("eval") || !model_like(ev) {
                    continue;
                }
                if parts(cx, ev).is_some_and(|p| !p.args.is_empty()) {
                    continue;
                }
                let later = &calls[i + 1..];
                let stale = later
                    .iter()
                    .take_while(|c| !restores_training(c, cx, &ev.receiver_path))
                    .any(|c| is_training_step(c));
                // Next iteration of an enclosing loop trains again.
                let loop_carried = ev.loops.iter().any(|l| {
                    let in_loop = calls.iter().filter(|c| c.loops.contains(l));
                    let mut trains = false;
                    let mut restores = false;
                    for c in in_loop {
                        trains |= is_training_step(c);
                        restores |= restores_training(c, cx, &ev.receiver_path);
                    }
                    trains && !restores
                });
                if stale || loop_carried {
                    out.push(cx.diag(
                        &ML18,
                        ev.span,
                        "eval() is not followed by train() before the next training step",
                    ));
                }
            }
        }
    }
}

pub struct Ml19;

impl Ml19 {
    /// `super().forward(...)` inside `forward` of a module subclass.
    fn delegates_to_super(cx: &FileContext, call: &CallSite, c: &CallParts) -> bool {
        let Some(recv) = c.receiver() else { return false };
        let ExprKind::Call { func, .. } = &recv.kind else { return false };
        if func.as_name() != Some("super") {
            return false;
        }
        let scope = cx.model.scope(call.scope);
        if scope.kind != ScopeKind::Function || scope.name != "forward" {
            return false;
        }
        // The outer module call already ran the hooks, whatever the base.
        cx.model.enclosing_class(call.scope).is_some()
    }
}

impl Rule for Ml19 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML19
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        let torch = cx.model.aliases.imports_library("torch");
        for call in &cx.model.call_index {
            if !call.is_method("forward") || !(torch || call.receiver.is(Tag::Model)) {
                continue;
            }
            let Some(c) = parts(cx, call) else { continue };
            if Self::delegates_to_super(cx, call, &c) {
                continue;
            }
            let target = call.receiver_path.as_deref().unwrap_or("module");
            out.push(cx.diag(
                &ML19,
                call.span,
                format!("{target}.forward() bypasses module hooks; call {target}(...) instead"),
            ));
        }
    }
}

pub struct Ml20;

impl Rule for Ml20 {
    fn descriptor(&self) -> &'static RuleDescriptor {
        &ML20
    }

    fn check_file(&self, cx: &FileContext, out: &mut Vec<Diagnostic>) {
        for (_, calls) in cx.model.statement_order_facts() {
            for b in calls.iter().filter(|c| c.is_method("backward")) {
                let Some(&l) = b.loops.last() else { continue };
                let in_loop = || calls.iter().filter(move |c| c.loops.contains(&l));
                if !in_loop().any(|c| c.is_method("step") && optimizer_like(c)) {
                    continue;
                }
                let cleared = in_loop().any(|c| c.is_method("zero_grad") && c.stmt < b.stmt);
                if !cleared {
                    out.push(cx.diag(
                        &ML20,
                        b.span,
                        "backward() in a training loop without zero_grad() before it",
                    ));
                }
            }
        }
    }
}
