//! Flow-sensitive, intraprocedural provenance inference.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::frontend::ast::*;

use super::signatures::{ApiSignatureTable, RankRule};
use super::*;

pub(super) fn infer(module: &Module, aliases: AliasTable, sigs: &ApiSignatureTable) -> SemanticModel {
    let model_classes = model_classes(module, &aliases, sigs);
    let mut cx = Infer {
        aliases: &aliases,
        sigs,
        model_classes: &model_classes,
        out: Out::default(),
        scope: ScopeId(0),
        loops: Vec::new(),
        stmt: 0,
    };
    cx.out.scopes.push(ScopeInfo {
        id: ScopeId(0),
        kind: ScopeKind::Module,
        name: "<module>".into(),
        parent: None,
        def_stmt: None,
    });
    let mut env = Env::new();
    cx.body(&module.body, &mut env);
    let mut out = cx.out;
    out.calls.sort_by_key(|c| c.node);
    SemanticModel {
        aliases,
        expr_provenance: out.exprs,
        env_after: out.env_after,
        stmts: out.stmts,
        scopes: out.scopes,
        call_index: out.calls,
        def_index: out.defs,
        model_classes,
        pipelines: out.pipelines,
        pipeline_member_of: out.member_of,
        assignments: out.assigns,
    }
}

/// Classes deriving directly from a model base, or from another such class
/// in the same file.
fn model_classes(module: &Module, aliases: &AliasTable, sigs: &ApiSignatureTable) -> BTreeSet<String> {
    let mut classes: Vec<(String, Vec<String>)> = Vec::new();
    module.walk_stmts(&mut |s| {
        if let StmtKind::ClassDef { name, bases, .. } = &s.kind {
            let bases = bases
                .iter()
                .filter_map(|b| b.dotted_path())
                .map(|p| aliases.canonical(&p).unwrap_or(p))
                .collect();
            classes.push((name.clone(), bases));
        }
    });
    let mut found = BTreeSet::new();
    loop {
        let before = found.len();
        for (name, bases) in &classes {
            if bases
                .iter()
                .any(|b| sigs.model_bases.contains(b) || found.contains(b))
            {
                found.insert(name.clone());
            }
        }
        if found.len() == before {
            return found;
        }
    }
}

#[derive(Default)]
struct Out {
    exprs: HashMap<NodeId, Provenance>,
    env_after: Vec<Arc<Env>>,
    stmts: Vec<StmtInfo>,
    scopes: Vec<ScopeInfo>,
    calls: Vec<CallSite>,
    defs: Vec<DefInfo>,
    pipelines: Vec<PipelineInfo>,
    member_of: BTreeMap<Span, usize>,
    assigns: Vec<AssignFact>,
}

struct Infer<'a> {
    aliases: &'a AliasTable,
    sigs: &'a ApiSignatureTable,
    model_classes: &'a BTreeSet<String>,
    out: Out,
    scope: ScopeId,
    loops: Vec<usize>,
    /// Flat index of the statement being processed.
    stmt: usize,
}

const PIPELINE_CTORS: &[&str] = &["sklearn.pipeline.Pipeline", "sklearn.pipeline.make_pipeline"];

/// Type annotations that establish provenance for parameters.
fn annotation_tag(canonical: &str) -> Tag {
    match canonical {
        "pandas.DataFrame" => Tag::DataFrame,
        "pandas.Series" => Tag::Series,
        "numpy.ndarray" | "numpy.typing.NDArray" => Tag::NdArray,
        "torch.Tensor" | "tensorflow.Tensor" => Tag::Tensor,
        "torch.nn.Module" | "tensorflow.keras.Model" => Tag::Model,
        "torch.optim.Optimizer" => Tag::Optimizer,
        "torch.utils.data.DataLoader" => Tag::DataLoader,
        _ => Tag::Unknown,
    }
}

/// Entries present on both sides survive; explicit Unknown entries mark
/// local names that shadow an import alias.
fn join_env(a: &Env, b: &Env) -> Env {
    let mut out = Env::new();
    for (k, va) in a {
        if let Some(vb) = b.get(k) {
            let j = va.join(vb);
            if !j.is_unknown() || va.is_unknown() || vb.is_unknown() {
                out.insert(k.clone(), j);
            }
        }
    }
    out
}

fn set_var(env: &mut Env, name: &str, p: Provenance) {
    // Rebinding `x` invalidates anything recorded for `x.attr`.
    let prefix = format!("{name}.");
    env.retain(|k, _| !k.starts_with(&prefix));
    if p.is_unknown() {
        env.remove(name);
    } else {
        env.insert(name.to_string(), p);
    }
}

/// Rank from a literal shape: `f((2, 3))`, `f([2, 3])` or `f(2, 3)`.
fn shape_rank(args: &[Expr]) -> Option<u32> {
    let first = args.first()?;
    match &first.kind {
        ExprKind::Tuple(items) | ExprKind::List(items) => Some(items.len() as u32),
        _ if args
            .iter()
            .all(|a| matches!(a.kind, ExprKind::Constant(Literal::Int(_)))) =>
        {
            Some(args.len() as u32)
        }
        _ => None,
    }
}

/// Rank from a literal nested list: `[[1, 2], [3, 4]]` is 2.
fn nesting_rank(e: &Expr) -> Option<u32> {
    match &e.kind {
        ExprKind::List(items) | ExprKind::Tuple(items) => match items.first() {
            None => Some(1),
            Some(first) => Some(1 + nesting_rank(first)?),
        },
        ExprKind::Constant(Literal::Int(_) | Literal::Float(_) | Literal::Bool(_)) => Some(0),
        ExprKind::UnaryOp { operand, .. } => nesting_rank(operand),
        _ => None,
    }
}

fn is_builtin_call(func: &Expr, name: &str, aliases: &AliasTable, env: &Env) -> bool {
    func.as_name() == Some(name) && aliases.lookup(name).is_none() && !env.contains_key(name)
}

impl<'a> Infer<'a> {
    fn record(&mut self, e: &Expr, p: &Provenance) {
        if !p.is_unknown() {
            self.out.exprs.insert(e.id, p.clone());
        }
    }

    fn body(&mut self, stmts: &[Stmt], env: &mut Env) {
        for s in stmts {
            self.stmt(s, env);
        }
    }

    fn stmt(&mut self, s: &Stmt, env: &mut Env) {
        let idx = self.out.stmts.len();
        self.out.stmts.push(StmtInfo {
            node: s.id,
            span: s.span,
            scope: self.scope,
            loops: self.loops.clone(),
        });
        self.out.env_after.push(Arc::new(Env::new()));
        let saved = self.stmt;
        self.stmt = idx;
        self.stmt_kind(s, idx, env);
        self.stmt = saved;
        self.out.env_after[idx] = Arc::new(env.clone());
    }

    fn stmt_kind(&mut self, s: &Stmt, idx: usize, env: &mut Env) {
        match &s.kind {
            StmtKind::Import { names } | StmtKind::ImportFrom { names, .. } => {
                for n in names {
                    let local = n
                        .asname
                        .clone()
                        .unwrap_or_else(|| n.name.split('.').next().unwrap_or("").to_string());
                    set_var(env, &local, Provenance::unknown());
                }
            }
            StmtKind::Assign { targets, value } => {
                if let [t] = targets.as_slice() {
                    if let (
                        ExprKind::Tuple(ts) | ExprKind::List(ts),
                        ExprKind::Tuple(vs) | ExprKind::List(vs),
                    ) = (&t.kind, &value.kind)
                    {
                        if ts.len() == vs.len() {
                            let ps: Vec<_> = vs.iter().map(|v| self.eval(v, env)).collect();
                            for (t, p) in ts.iter().zip(ps) {
                                self.bind(t, p, env);
                            }
                            return;
                        }
                    }
                }
                let p = self.eval(value, env);
                for t in targets {
                    if let Some(name) = t.dotted_path() {
                        self.out.assigns.push(AssignFact {
                            stmt: idx,
                            scope: self.scope,
                            target: name,
                            value: value.id,
                        });
                    }
                    self.bind(t, p.clone(), env);
                }
            }
            StmtKind::AugAssign { target, op, value } => {
                let cur = self.eval(target, env);
                let rhs = self.eval(value, env);
                let p = self.binop_result(s.span, &cur, *op, &rhs);
                self.rebind(target, p, env);
            }
            StmtKind::AnnAssign {
                target,
                annotation,
                value,
            } => {
                let p = match value {
                    Some(v) => {
                        if let Some(name) = target.dotted_path() {
                            self.out.assigns.push(AssignFact {
                                stmt: idx,
                                scope: self.scope,
                                target: name,
                                value: v.id,
                            });
                        }
                        self.eval(v, env)
                    }
                    None => self.annotation(annotation, target.span),
                };
                self.eval(annotation, env);
                self.bind(target, p, env);
            }
            StmtKind::Expr(e) => {
                self.eval(e, env);
            }
            StmtKind::For {
                target,
                iter,
                body,
                orelse,
                ..
            } => {
                let elem = self.iter_element(iter, env);
                let mut inner = env.clone();
                self.bind_loop_target(target, iter, elem, &mut inner);
                self.loops.push(idx);
                self.body(body, &mut inner);
                self.loops.pop();
                *env = join_env(env, &inner);
                self.body(orelse, env);
            }
            StmtKind::While { test, body, orelse } => {
                self.eval(test, env);
                let mut inner = env.clone();
                self.loops.push(idx);
                self.body(body, &mut inner);
                self.loops.pop();
                *env = join_env(env, &inner);
                self.body(orelse, env);
            }
            StmtKind::If { test, body, orelse } => {
                self.eval(test, env);
                let mut then_env = env.clone();
                self.body(body, &mut then_env);
                let mut else_env = env.clone();
                self.body(orelse, &mut else_env);
                *env = join_env(&then_env, &else_env);
            }
            StmtKind::With { items, body, .. } => {
                for item in items {
                    self.eval(&item.context, env);
                    if let Some(t) = &item.target {
                        self.bind(t, Provenance::unknown(), env);
                    }
                }
                self.body(body, env);
            }
            StmtKind::Try {
                body,
                handlers,
                orelse,
                finalbody,
            } => {
                let start = env.clone();
                self.body(body, env);
                let mut joined = env.clone();
                for h in handlers {
                    if let Some(t) = &h.type_ {
                        self.eval(t, env);
                    }
                    let mut henv = join_env(&start, env);
                    if let Some(n) = &h.name {
                        set_var(&mut henv, n, Provenance::unknown());
                    }
                    self.body(&h.body, &mut henv);
                    joined = join_env(&joined, &henv);
                }
                self.body(orelse, env);
                if !handlers.is_empty() {
                    *env = join_env(env, &joined);
                }
                self.body(finalbody, env);
            }
            StmtKind::FunctionDef {
                name,
                params,
                decorators,
                returns,
                body,
                ..
            } => {
                for d in decorators {
                    self.eval(d, env);
                }
                for p in params {
                    if let Some(d) = &p.default {
                        self.eval(d, env);
                    }
                    if let Some(a) = &p.annotation {
                        self.eval(a, env);
                    }
                }
                if let Some(r) = returns {
                    self.eval(r, env);
                }
                let mut fenv = env.clone();
                for p in params {
                    let prov = match &p.annotation {
                        Some(a) => self.annotation(a, p.span),
                        None => Provenance::unknown(),
                    };
                    set_var(&mut fenv, &p.name, prov);
                }
                set_var(env, name, Provenance::unknown());
                self.nested_scope(ScopeKind::Function, name, idx, s.span, Vec::new(), body, fenv);
            }
            StmtKind::ClassDef {
                name,
                bases,
                keywords,
                decorators,
                body,
            } => {
                for e in decorators.iter().chain(bases.iter()) {
                    self.eval(e, env);
                }
                for k in keywords {
                    self.eval(&k.value, env);
                }
                let canon_bases = bases
                    .iter()
                    .filter_map(|b| b.dotted_path())
                    .map(|p| self.aliases.canonical(&p).unwrap_or(p))
                    .collect();
                let cenv = env.clone();
                set_var(env, name, Provenance::unknown());
                self.nested_scope(ScopeKind::Class, name, idx, s.span, canon_bases, body, cenv);
            }
            StmtKind::Return(v) => {
                if let Some(v) = v {
                    self.eval(v, env);
                }
            }
            StmtKind::Pass | StmtKind::Break | StmtKind::Continue => {}
            StmtKind::Opaque { exprs, bodies, .. } => {
                for e in exprs {
                    self.eval(e, env);
                }
                if bodies.is_empty() {
                    return;
                }
                let start = env.clone();
                let mut joined: Option<Env> = None;
                for b in bodies {
                    let mut benv = start.clone();
                    self.body(b, &mut benv);
                    joined = Some(match joined {
                        None => benv,
                        Some(j) => join_env(&j, &benv),
                    });
                }
                *env = join_env(&start, &joined.unwrap_or_default());
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn nested_scope(
        &mut self,
        kind: ScopeKind,
        name: &str,
        idx: usize,
        span: Span,
        bases: Vec<String>,
        body: &[Stmt],
        mut env: Env,
    ) {
        let id = ScopeId(self.out.scopes.len() as u32);
        self.out.scopes.push(ScopeInfo {
            id,
            kind,
            name: name.to_string(),
            parent: Some(self.scope),
            def_stmt: Some(idx),
        });
        self.out.defs.push(DefInfo {
            name: name.to_string(),
            kind: match kind {
                ScopeKind::Class => DefKind::Class,
                _ => DefKind::Function,
            },
            span,
            stmt: idx,
            scope: id,
            bases,
        });
        let saved_scope = std::mem::replace(&mut self.scope, id);
        let saved_loops = std::mem::take(&mut self.loops);
        self.body(body, &mut env);
        self.scope = saved_scope;
        self.loops = saved_loops;
    }

    fn annotation(&self, a: &Expr, origin: Span) -> Provenance {
        let Some(path) = a.dotted_path() else {
            return Provenance::unknown();
        };
        let canon = self.aliases.canonical(&path).unwrap_or(path);
        if self.model_classes.contains(&canon) {
            return Provenance::new(Tag::Model, origin);
        }
        Provenance::new(annotation_tag(&canon), origin)
    }

    /// Provenance of the elements produced by iterating `iter`.
    fn iter_element(&mut self, iter: &Expr, env: &Env) -> Provenance {
        let p = self.eval(iter, env);
        Self::element_of(&p, iter.span)
    }

    fn element_of(p: &Provenance, span: Span) -> Provenance {
        match p.tag {
            Tag::DataLoader | Tag::Tensor => Provenance::new(Tag::Tensor, span),
            Tag::NdArray => Provenance {
                rank: p.rank.and_then(|r| r.checked_sub(1)),
                ..Provenance::new(Tag::NdArray, span)
            },
            _ => Provenance::unknown(),
        }
    }

    fn bind_loop_target(&mut self, target: &Expr, iter: &Expr, elem: Provenance, env: &mut Env) {
        // `for i, batch in enumerate(loader)`
        if let ExprKind::Call { func, args, .. } = &iter.kind {
            if is_builtin_call(func, "enumerate", self.aliases, env) {
                if let (ExprKind::Tuple(ts), Some(arg)) = (&target.kind, args.first()) {
                    if ts.len() == 2 {
                        let inner = Self::element_of(&self.lookup_recorded(arg), arg.span);
                        self.bind(&ts[0], Provenance::unknown(), env);
                        self.bind_all(&ts[1], &inner, env);
                        return;
                    }
                }
            }
        }
        self.bind_all(target, &elem, env);
    }

    fn lookup_recorded(&self, e: &Expr) -> Provenance {
        self.out
            .exprs
            .get(&e.id)
            .cloned()
            .unwrap_or_else(Provenance::unknown)
    }

    /// Binds every name in a (possibly nested) target to the same provenance.
    fn bind_all(&mut self, target: &Expr, p: &Provenance, env: &mut Env) {
        match &target.kind {
            ExprKind::Tuple(ts) | ExprKind::List(ts) => {
                for t in ts {
                    self.bind_all(t, p, env);
                }
            }
            _ => self.bind(target, p.clone(), env),
        }
    }

    /// Assigns `p` to a store target, evaluating any loads it contains.
    fn bind(&mut self, target: &Expr, p: Provenance, env: &mut Env) {
        match &target.kind {
            ExprKind::Name(n) => {
                self.record(target, &p);
                let shadows = p.is_unknown() && self.aliases.lookup(n).is_some();
                set_var(env, n, p);
                if shadows {
                    env.insert(n.clone(), Provenance::unknown());
                }
            }
            ExprKind::Attribute { value, .. } => {
                self.eval(value, env);
                if let Some(path) = target.dotted_path() {
                    self.record(target, &p);
                    set_var(env, &path, p);
                }
            }
            ExprKind::Tuple(ts) | ExprKind::List(ts) => {
                for t in ts {
                    self.bind(t, Provenance::unknown(), env);
                }
            }
            ExprKind::Starred(inner) => self.bind(inner, Provenance::unknown(), env),
            ExprKind::Subscript { value, index } => {
                self.eval(value, env);
                self.eval(index, env);
            }
            _ => {
                self.eval(target, env);
            }
        }
    }

    /// Like [`bind`](Self::bind) but for a target that was already evaluated
    /// as a load (augmented assignment).
    fn rebind(&mut self, target: &Expr, p: Provenance, env: &mut Env) {
        if let Some(path) = target.dotted_path() {
            set_var(env, &path, p);
        }
    }

    fn binop_result(&self, span: Span, l: &Provenance, _op: BinOpKind, r: &Provenance) -> Provenance {
        for tag in [Tag::Tensor, Tag::NdArray, Tag::DataFrame, Tag::Series] {
            if l.tag == tag || r.tag == tag {
                return Provenance::new(tag, span);
            }
        }
        Provenance::unknown()
    }

    fn eval(&mut self, e: &Expr, env: &Env) -> Provenance {
        let p = self.eval_kind(e, env);
        self.record(e, &p);
        p
    }

    fn resolves_to_library(&self, path: &str, env: &Env) -> Option<String> {
        let root = path.split('.').next().unwrap_or(path);
        if env.contains_key(root) {
            return None;
        }
        self.aliases.canonical(path)
    }

    fn eval_kind(&mut self, e: &Expr, env: &Env) -> Provenance {
        match &e.kind {
            ExprKind::Name(n) => env.get(n).cloned().unwrap_or_else(Provenance::unknown),
            ExprKind::Attribute { value, attr } => {
                if let Some(path) = e.dotted_path() {
                    if let Some(p) = env.get(&path) {
                        self.eval(value, env);
                        return p.clone();
                    }
                    if self.resolves_to_library(&path, env).is_some() {
                        return Provenance::unknown();
                    }
                }
                let recv = self.eval(value, env);
                match self.sigs.attribute_result(recv.tag, attr) {
                    Some(t) => Provenance::new(t, e.span),
                    None => Provenance::unknown(),
                }
            }
            ExprKind::Call {
                func,
                args,
                keywords,
            } => self.eval_call(e, func, args, keywords, env),
            ExprKind::Subscript { value, index } => {
                let v = self.eval(value, env);
                self.eval(index, env);
                match v.tag {
                    Tag::DataFrame => {
                        if matches!(index.kind, ExprKind::Constant(Literal::Str(_))) {
                            Provenance::new(Tag::Series, e.span)
                        } else {
                            Provenance::new(Tag::DataFrame, e.span)
                        }
                    }
                    Tag::NdArray | Tag::Tensor => Provenance::new(v.tag, e.span),
                    _ => Provenance::unknown(),
                }
            }
            ExprKind::BinOp { left, op, right } => {
                let l = self.eval(left, env);
                let r = self.eval(right, env);
                self.binop_result(e.span, &l, *op, &r)
            }
            ExprKind::UnaryOp { op, operand } => {
                let p = self.eval(operand, env);
                if *op == UnaryOpKind::Not {
                    Provenance::unknown()
                } else {
                    p
                }
            }
            ExprKind::IfExp { test, body, orelse } => {
                self.eval(test, env);
                let a = self.eval(body, env);
                let b = self.eval(orelse, env);
                a.join(&b)
            }
            ExprKind::NamedExpr { target, value } => {
                let p = self.eval(value, env);
                self.record(target, &p);
                p
            }
            _ => {
                for c in e.children() {
                    self.eval(c, env);
                }
                Provenance::unknown()
            }
        }
    }

    fn eval_call(
        &mut self,
        call: &Expr,
        func: &Expr,
        args: &[Expr],
        keywords: &[Keyword],
        env: &Env,
    ) -> Provenance {
        let mut canonical = None;
        let mut method = None;
        let mut receiver_path = None;
        let mut receiver = Provenance::unknown();
        let mut result = Provenance::unknown();
        let mut ctor = None;

        let library = func
            .dotted_path()
            .and_then(|p| self.resolves_to_library(&p, env));
        if let ExprKind::Attribute { value, attr } = &func.kind {
            method = Some(attr.clone());
            receiver_path = value.dotted_path();
        }
        if let Some(name) = library {
            ctor = self.sigs.constructor(&name);
            canonical = Some(name);
        } else {
            let callee = self.eval(func, env);
            if let ExprKind::Attribute { value, attr } = &func.kind {
                receiver = self.lookup_recorded(value);
                if !receiver.is_unknown() {
                    canonical = Some(format!("{}.{attr}", receiver.tag.name()));
                    if let Some(t) = self.sigs.method_result(receiver.tag, attr) {
                        result = if t == receiver.tag {
                            // Methods returning the same kind keep identity
                            // (e.g. `PCA().fit(X)` is still that PCA).
                            Provenance {
                                origin: receiver.origin,
                                ..receiver.clone()
                            }
                        } else {
                            Provenance::new(t, call.span)
                        };
                        if t.is_array_like() && t == receiver.tag {
                            result.rank = None;
                        }
                    }
                }
            }
            if matches!(callee.tag, Tag::Model | Tag::MetricFn) {
                result = Provenance::new(Tag::Tensor, call.span);
            } else if let Some(n) = func.as_name() {
                if self.model_classes.contains(n) && !env.contains_key(n) {
                    result = Provenance {
                        api: Some(n.to_string()),
                        ..Provenance::new(Tag::Model, call.span)
                    };
                }
            }
        }

        for a in args {
            self.eval(a, env);
        }
        for k in keywords {
            self.eval(&k.value, env);
        }

        if let Some(sig) = ctor {
            result = Provenance {
                rank: match sig.rank {
                    Some(RankRule::Shape) => shape_rank(args),
                    Some(RankRule::Nesting) => args.first().and_then(nesting_rank),
                    Some(RankRule::Fixed(n)) => Some(n),
                    None => None,
                },
                api: canonical.clone(),
                ..Provenance::new(sig.tag, call.span)
            };
            if result.is_unknown() {
                result = Provenance::unknown();
            }
        }

        if let Some(name) = &canonical {
            if PIPELINE_CTORS.contains(&name.as_str()) {
                self.record_pipeline(call, args, keywords);
            }
        }

        self.out.calls.push(CallSite {
            node: call.id,
            span: call.span,
            canonical,
            method,
            receiver_path,
            receiver,
            result: result.clone(),
            scope: self.scope,
            stmt: self.stmt,
            loops: self.loops.clone(),
        });
        result
    }

    fn record_pipeline(&mut self, call: &Expr, args: &[Expr], keywords: &[Keyword]) {
        let mut members = Vec::new();
        let mut visit = |e: &Expr| {
            if matches!(e.kind, ExprKind::Call { .. }) {
                if let Some(p) = self.out.exprs.get(&e.id) {
                    if let Some(api) = &p.api {
                        members.push((e.span, p.tag, api.clone()));
                    }
                }
            }
        };
        for a in args {
            a.walk(&mut visit);
        }
        for k in keywords {
            k.value.walk(&mut visit);
        }
        let idx = self.out.pipelines.len();
        for (span, _, _) in &members {
            self.out.member_of.insert(*span, idx);
        }
        self.out.pipelines.push(PipelineInfo {
            span: call.span,
            members,
        });
    }
}
