//! Cross-file aggregates consumed by project-level rules.

use std::collections::BTreeSet;

use crate::frontend::ast::{ExprKind, Literal, Span};

use super::FileContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RandomLib {
    Python,
    NumPy,
    Torch,
    TensorFlow,
}

impl RandomLib {
    pub const ALL: [RandomLib; 4] = [
        RandomLib::Python,
        RandomLib::NumPy,
        RandomLib::Torch,
        RandomLib::TensorFlow,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RandomLib::Python => "random",
            RandomLib::NumPy => "numpy",
            RandomLib::Torch => "torch",
            RandomLib::TensorFlow => "tensorflow",
        }
    }

    pub fn seed_call(self) -> &'static str {
        match self {
            RandomLib::Python => "random.seed()",
            RandomLib::NumPy => "numpy.random.seed()",
            RandomLib::Torch => "torch.manual_seed()",
            RandomLib::TensorFlow => "tf.random.set_seed()",
        }
    }
}

/// A source position in some file of the run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub path: String,
    pub line: u32,
    pub column: u32,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RandomUse {
    pub library: RandomLib,
    pub site: Site,
    pub api: String,
}

/// Facts merged across every parsed file. All fields are sets or flags, so
/// merging is commutative, associative and idempotent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectFacts {
    pub seed_call_present: BTreeSet<RandomLib>,
    pub deterministic_option_present: bool,
    pub randomness_use_sites: BTreeSet<RandomUse>,
    /// First torch import of each file.
    pub torch_imports: BTreeSet<Site>,
    pub torch_imported: bool,
    pub tf_imported: bool,
}

impl ProjectFacts {
    pub fn merge(&mut self, other: &ProjectFacts) {
        self.seed_call_present
            .extend(other.seed_call_present.iter().copied());
        self.deterministic_option_present |= other.deterministic_option_present;
        self.randomness_use_sites
            .extend(other.randomness_use_sites.iter().cloned());
        self.torch_imports.extend(other.torch_imports.iter().cloned());
        self.torch_imported |= other.torch_imported;
        self.tf_imported |= other.tf_imported;
    }

    pub fn seeded(&self, lib: RandomLib) -> bool {
        self.seed_call_present.contains(&lib)
    }
}

/// Calls that seed every framework at once.
const SEED_ALL: &[&str] = &[
    "tensorflow.keras.utils.set_random_seed",
    "pytorch_lightning.seed_everything",
    "lightning.seed_everything",
    "lightning.pytorch.seed_everything",
    "transformers.set_seed",
];

fn seed_of(api: &str) -> Option<RandomLib> {
    Some(match api {
        "random.seed" => RandomLib::Python,
        "numpy.random.seed" => RandomLib::NumPy,
        "torch.manual_seed" => RandomLib::Torch,
        "tensorflow.random.set_seed" | "tensorflow.set_random_seed" => RandomLib::TensorFlow,
        _ => return None,
    })
}

const PY_RANDOM: &[&str] = &[
    "random", "randint", "randrange", "choice", "choices", "shuffle", "sample", "uniform",
    "gauss", "normalvariate", "getrandbits", "triangular", "betavariate", "expovariate",
];

const TORCH_RANDOM: &[&str] = &[
    "torch.rand",
    "torch.randn",
    "torch.randint",
    "torch.randperm",
    "torch.rand_like",
    "torch.randn_like",
    "torch.randint_like",
    "torch.bernoulli",
    "torch.multinomial",
    "torch.normal",
    "torch.poisson",
    "torch.utils.data.random_split",
];

/// numpy.random members that do not draw from the global generator.
const NUMPY_NOT_RANDOM: &[&str] = &["seed", "RandomState", "Generator", "SeedSequence", "get_state", "set_state"];

const TF_RANDOM: &[&str] = &[
    "tensorflow.random.normal",
    "tensorflow.random.uniform",
    "tensorflow.random.truncated_normal",
    "tensorflow.random.shuffle",
    "tensorflow.random.categorical",
    "tensorflow.random.gamma",
    "tensorflow.random.poisson",
    "tensorflow.random_normal",
    "tensorflow.random_uniform",
    "tensorflow.random_shuffle",
    "tensorflow.truncated_normal",
];

fn random_use(api: &str, cx: &FileContext, call: &crate::semantic::CallSite) -> Option<RandomLib> {
    if let Some(member) = api.strip_prefix("random.") {
        return PY_RANDOM.contains(&member).then_some(RandomLib::Python);
    }
    if let Some(member) = api.strip_prefix("numpy.random.") {
        if member == "default_rng" {
            // Seeded when given an argument.
            let has_arg = match cx.call_expr(call) {
                Some(ExprKind::Call { args, keywords, .. }) => !args.is_empty() || !keywords.is_empty(),
                _ => true,
            };
            return (!has_arg).then_some(RandomLib::NumPy);
        }
        return (!member.contains('.') && !NUMPY_NOT_RANDOM.contains(&member)).then_some(RandomLib::NumPy);
    }
    if TORCH_RANDOM.contains(&api) {
        return Some(RandomLib::Torch);
    }
    if api == "torch.utils.data.DataLoader" {
        let shuffled = match cx.call_expr(call) {
            Some(ExprKind::Call { keywords, .. }) => keywords.iter().any(|k| {
                k.arg.as_deref() == Some("shuffle")
                    && !matches!(k.value.kind, ExprKind::Constant(Literal::Bool(false)))
            }),
            _ => false,
        };
        return shuffled.then_some(RandomLib::Torch);
    }
    if TF_RANDOM.contains(&api) {
        return Some(RandomLib::TensorFlow);
    }
    None
}

fn deterministic_option(cx: &FileContext, call: &crate::semantic::CallSite) -> bool {
    let Some(ExprKind::Call { args, keywords, .. }) = cx.call_expr(call) else {
        return false;
    };
    let flag = args
        .first()
        .or_else(|| keywords.iter().find(|k| k.arg.as_deref() == Some("mode")).map(|k| &k.value));
    matches!(flag.map(|e| &e.kind), Some(ExprKind::Constant(Literal::Bool(true))))
}

/// Contribution of one parsed file.
pub fn extract(cx: &FileContext) -> ProjectFacts {
    let mut facts = ProjectFacts::default();
    let aliases = &cx.model.aliases;
    if let Some(rec) = aliases.first_import_of("torch") {
        facts.torch_imported = true;
        facts.torch_imports.insert(cx.site(rec.span));
    }
    facts.tf_imported = aliases.imports_library("tensorflow");
    for call in &cx.model.call_index {
        let Some(api) = call.canonical.as_deref() else {
            continue;
        };
        if SEED_ALL.contains(&api) {
            facts.seed_call_present.extend(RandomLib::ALL);
            continue;
        }
        if let Some(lib) = seed_of(api) {
            facts.seed_call_present.insert(lib);
            continue;
        }
        if api == "torch.use_deterministic_algorithms" && deterministic_option(cx, call) {
            facts.deterministic_option_present = true;
            continue;
        }
        if let Some(lib) = random_use(api, cx, call) {
            facts.randomness_use_sites.insert(RandomUse {
                library: lib,
                site: cx.site(call.span),
                api: api.to_string(),
            });
        }
    }
    facts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn site(path: &str, line: u32) -> Site {
        Site {
            path: path.into(),
            line,
            column: 1,
            span: Span::new(0, 1),
        }
    }

    fn arb_facts() -> impl Strategy<Value = ProjectFacts> {
        (
            proptest::collection::btree_set(0usize..4, 0..4),
            any::<bool>(),
            proptest::collection::btree_set((0usize..4, "[ab]", 1u32..5), 0..5),
            proptest::collection::btree_set(("[ab]", 1u32..5), 0..3),
            any::<bool>(),
            any::<bool>(),
        )
            .prop_map(|(seeds, det, uses, imports, t, tf)| ProjectFacts {
                seed_call_present: seeds.into_iter().map(|i| RandomLib::ALL[i]).collect(),
                deterministic_option_present: det,
                randomness_use_sites: uses
                    .into_iter()
                    .map(|(l, p, line)| RandomUse {
                        library: RandomLib::ALL[l],
                        site: site(&p, line),
                        api: "x".into(),
                    })
                    .collect(),
                torch_imports: imports.into_iter().map(|(p, l)| site(&p, l)).collect(),
                torch_imported: t,
                tf_imported: tf,
            })
    }

    fn merged(a: &ProjectFacts, b: &ProjectFacts) -> ProjectFacts {
        let mut m = a.clone();
        m.merge(b);
        m
    }

    proptest! {
        #[test]
        fn merge_is_commutative(a in arb_facts(), b in arb_facts()) {
            prop_assert_eq!(merged(&a, &b), merged(&b, &a));
        }

        #[test]
        fn merge_is_associative(a in arb_facts(), b in arb_facts(), c in arb_facts()) {
            prop_assert_eq!(merged(&merged(&a, &b), &c), merged(&a, &merged(&b, &c)));
        }

        #[test]
        fn merge_is_idempotent(a in arb_facts()) {
            prop_assert_eq!(merged(&a, &a), a);
        }
    }
}
