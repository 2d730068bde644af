use std::collections::BTreeMap;

use crate::frontend::ast::{Module, Span, StmtKind};

/// One `import` binding as written in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportRecord {
    /// Local name bound by the import.
    pub local: String,
    /// Fully qualified target, normalized.
    pub target: String,
    pub span: Span,
    pub is_from: bool,
}

/// Local names bound by imports, mapped to canonical qualified paths.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasTable {
    pub module_aliases: BTreeMap<String, String>,
    pub symbol_aliases: BTreeMap<String, String>,
    /// Every import binding in source order.
    pub imports: Vec<ImportRecord>,
}

/// Rewrites library paths that have more than one spelling to a single form.
pub fn normalize(path: &str) -> String {
    const RULES: &[(&str, &str)] = &[
        ("tensorflow.compat.v1", "tensorflow"),
        ("tensorflow.compat.v2", "tensorflow"),
        ("tensorflow.python.keras", "tensorflow.keras"),
        ("keras", "tensorflow.keras"),
        ("tf_keras", "tensorflow.keras"),
    ];
    for (from, to) in RULES {
        if path == *from {
            return to.to_string();
        }
        if let Some(rest) = path.strip_prefix(from).and_then(|r| r.strip_prefix('.')) {
            return format!("{to}.{rest}");
        }
    }
    path.to_string()
}

impl AliasTable {
    /// Folds every import statement, at any depth, in source order. Later
    /// bindings of a local name replace earlier ones.
    pub fn resolve(module: &Module) -> Self {
        let mut table = AliasTable::default();
        module.walk_stmts(&mut |s| match &s.kind {
            StmtKind::Import { names } => {
                for n in names {
                    let (local, target) = match &n.asname {
                        Some(a) => (a.clone(), n.name.clone()),
                        // `import a.b` binds `a`.
                        None => {
                            let root = n.name.split('.').next().unwrap_or(&n.name);
                            (root.to_string(), root.to_string())
                        }
                    };
                    table.bind(local, normalize(&target), n.span, false);
                }
            }
            StmtKind::ImportFrom {
                module: Some(m),
                level: 0,
                names,
            } => {
                for n in names {
                    if n.name == "*" {
                        continue;
                    }
                    let local = n.asname.clone().unwrap_or_else(|| n.name.clone());
                    table.bind(local, normalize(&format!("{m}.{}", n.name)), n.span, true);
                }
            }
            _ => {}
        });
        table
    }

    fn bind(&mut self, local: String, target: String, span: Span, is_from: bool) {
        self.imports.push(ImportRecord {
            local: local.clone(),
            target: target.clone(),
            span,
            is_from,
        });
        if is_from {
            self.module_aliases.remove(&local);
            self.symbol_aliases.insert(local, target);
        } else {
            self.symbol_aliases.remove(&local);
            self.module_aliases.insert(local, target);
        }
    }

    pub fn lookup(&self, local: &str) -> Option<&str> {
        self.module_aliases
            .get(local)
            .or_else(|| self.symbol_aliases.get(local))
            .map(String::as_str)
    }

    /// Canonical name for a dotted path such as `np.random.seed`, or `None`
    /// if its root is not an imported name.
    pub fn canonical(&self, dotted: &str) -> Option<String> {
        let (root, rest) = match dotted.split_once('.') {
            Some((r, rest)) => (r, Some(rest)),
            None => (dotted, None),
        };
        let base = self.lookup(root)?;
        Some(match rest {
            Some(rest) => normalize(&format!("{base}.{rest}")),
            None => base.to_string(),
        })
    }

    /// True if any import in the file targets `top` or one of its submodules.
    pub fn imports_library(&self, top: &str) -> bool {
        self.imports.iter().any(|r| {
            r.target == top
                || r
                    .target
                    .strip_prefix(top)
                    .is_some_and(|rest| rest.starts_with('.'))
        })
    }

    /// First import record targeting `top` or a submodule, in source order.
    pub fn first_import_of(&self, top: &str) -> Option<&ImportRecord> {
        self.imports.iter().find(|r| {
            r.target == top
                || r
                    .target
                    .strip_prefix(top)
                    .is_some_and(|rest| rest.starts_with('.'))
        })
    }
}
