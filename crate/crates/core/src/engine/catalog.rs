//! Static metadata for the 22 rules.

use super::descriptor::*;

use Effect::*;
use Stage::*;

const fn d(
    id: &'static str,
    name: &'static str,
    stages: &'static [Stage],
    effects: &'static [Effect],
    kind: RuleKind,
) -> RuleDescriptor {
    RuleDescriptor {
        id,
        name,
        stages,
        effects,
        kind,
        scope: RuleScope::PerFile,
        mode_gate: ModeGate::Always,
        severity: Severity::Warning,
        description: "",
        advice: "",
    }
}

const GENERIC: RuleKind = RuleKind::Generic;
const PANDAS: RuleKind = RuleKind::ApiSpecific(Library::Pandas);
const NUMPY: RuleKind = RuleKind::ApiSpecific(Library::NumPy);
const TF2: RuleKind = RuleKind::ApiSpecific(Library::TensorFlow2);
const TORCH: RuleKind = RuleKind::ApiSpecific(Library::PyTorch);

pub static ML01: RuleDescriptor = RuleDescriptor {
    description: "Python-level loops over dataframe rows or tensor slices run element by element \
        and are far slower than the equivalent vectorized library operation.",
    advice: "Replace the loop with a vectorized operation on the whole dataframe or tensor \
        (for example df.add(1) instead of appending row[0] + 1 per row).",
    ..d("ML01", "Unnecessary Iteration", &[DataCleaning], &[Efficiency], GENERIC)
};

pub static ML02: RuleDescriptor = RuleDescriptor {
    description: "NaN never compares equal to anything, itself included, so == or != against \
        NaN is constant and silently wrong.",
    advice: "Test for missing values with isna()/notna() or numpy.isnan() instead of comparing \
        against NaN.",
    ..d("ML02", "NaN Equivalence Comparison Misused", &[DataCleaning], &[ErrorProne], GENERIC)
};

pub static ML03: RuleDescriptor = RuleDescriptor {
    description: "Indexing a dataframe twice in a row (df[a][b]) may operate on a temporary \
        copy; it is slower and writes through it can be lost.",
    advice: "Use a single indexer call such as df.loc[row, col] or df.loc[:, (a, b)].",
    ..d("ML03", "Chain Indexing", &[DataCleaning], &[ErrorProne, Efficiency], PANDAS)
};

pub static ML04: RuleDescriptor = RuleDescriptor {
    description: "Reading data without choosing columns and declaring their types loads \
        everything and leaves dtype inference to chance, which hides schema drift.",
    advice: "Pass usecols= (or columns=) and dtype= to the reader so the expected schema is \
        written down.",
    severity: Severity::Info,
    ..d("ML04", "Columns and DataType Not Explicitly Set", &[DataCleaning], &[Readability], GENERIC)
};

pub static ML05: RuleDescriptor = RuleDescriptor {
    description: "Filling a new column with 0 or an empty string makes placeholder rows \
        indistinguishable from real values and breaks missing-value handling.",
    advice: "Initialize empty columns with numpy.nan so later missing-value methods still \
        work.",
    ..d("ML05", "Empty Column Misinitialization", &[DataCleaning], &[Robustness], GENERIC)
};

pub static ML06: RuleDescriptor = RuleDescriptor {
    description: "A merge without explicit join keys, join type and cardinality check relies \
        on defaults that can silently produce wrong or duplicated rows when the data changes.",
    advice: "Spell out on= (or left_on=/right_on=), how= and validate= on every merge.",
    severity: Severity::Info,
    ..d("ML06", "Merge API Parameter Not Explicitly Set", &[DataCleaning], &[Readability, ErrorProne], GENERIC)
};

pub static ML07: RuleDescriptor = RuleDescriptor {
    description: "Many dataframe and array operations return a modified copy; calling one as \
        a bare statement discards the result and leaves the original untouched.",
    advice: "Assign the result back (df = df.dropna()) or, where the API supports it, pass \
        inplace=True.",
    ..d("ML07", "In-Place APIs Misused", &[DataCleaning], &[ErrorProne], GENERIC)
};

pub static ML08: RuleDescriptor = RuleDescriptor {
    description: "The .values attribute of a dataframe may return an array or an extension \
        array depending on the column types, so its result is inconsistent.",
    advice: "Use df.to_numpy() to convert a dataframe to a NumPy array.",
    severity: Severity::Info,
    ..d("ML08", "Dataframe Conversion API Misused", &[DataCleaning], &[ErrorProne], PANDAS)
};

pub static ML09: RuleDescriptor = RuleDescriptor {
    description: "numpy.dot on two matrices performs matrix multiplication, but its name and \
        its behaviour for other ranks hide that intent.",
    advice: "Use numpy.matmul() or the @ operator for matrix multiplication.",
    severity: Severity::Info,
    ..d("ML09", "Matrix Multiplication API Misused", &[DataCleaning], &[Readability], NUMPY)
};

pub static ML10: RuleDescriptor = RuleDescriptor {
    description: "Scale-sensitive estimators such as PCA, SVMs, SGD models and MLPs give \
        distorted results when features are on different scales.",
    advice: "Scale the features first, ideally with a Pipeline that starts with a scaler such \
        as StandardScaler.",
    ..d("ML10", "No Scaling before Scaling-Sensitive Operation", &[FeatureEngineering], &[ErrorProne], GENERIC)
};

pub static ML11: RuleDescriptor = RuleDescriptor {
    description: "Relying on library defaults for hyperparameters ties results to library \
        versions and rarely gives a good model.",
    advice: "Set the important hyperparameters explicitly, e.g. n_clusters for KMeans or lr for \
        an optimizer.",
    ..d("ML11", "Hyperparameter Not Explicitly Set", &[ModelTraining], &[ErrorProne, Reproducibility], GENERIC)
};

pub static ML12: RuleDescriptor = RuleDescriptor {
    description: "Models built repeatedly in a loop, or loss tensors kept across iterations, \
        keep memory alive and can exhaust it.",
    advice: "Call clear_session() when building models in a loop, and store loss.item() or \
        loss.detach() instead of the tensor.",
    ..d("ML12", "Memory Not Freed", &[ModelTraining], &[MemoryIssue], GENERIC)
};

pub static ML13: RuleDescriptor = RuleDescriptor {
    description: "Without deterministic algorithms, repeated PyTorch runs can differ even with \
        fixed seeds, which makes debugging hard.",
    advice: "Call torch.use_deterministic_algorithms(True) while developing and debugging; \
        leave it off in deployment for speed.",
    scope: RuleScope::ProjectLevel,
    mode_gate: ModeGate::DevelopmentOnly,
    ..d("ML13", "Deterministic Algorithm Option Not Used", &[ModelTraining], &[Reproducibility], GENERIC)
};

pub static ML14: RuleDescriptor = RuleDescriptor {
    description: "Random number generators used without a fixed seed, including data splits \
        and estimators without random_state, make results impossible to reproduce.",
    advice: "Seed every random library in use (random.seed, numpy.random.seed, \
        torch.manual_seed, tf.random.set_seed) and pass random_state= to scikit-learn.",
    scope: RuleScope::ProjectLevel,
    mode_gate: ModeGate::DevelopmentOnly,
    ..d("ML14", "Randomness Uncontrolled", &[ModelTraining, ModelEvaluation], &[Reproducibility], GENERIC)
};

pub static ML15: RuleDescriptor = RuleDescriptor {
    description: "A logarithm of a value that can reach zero or go negative produces -inf or \
        NaN, which then spreads through training.",
    advice: "Clip the argument into a safe range first, e.g. \
        tf.math.log(tf.clip_by_value(x, 1e-10, 1.0)).",
    ..d("ML15", "Missing the Mask of Invalid Value", &[ModelTraining], &[ErrorProne], GENERIC)
};

pub static ML16: RuleDescriptor = RuleDescriptor {
    description: "Tiling a tensor just to match another operand's shape materializes a large \
        copy that broadcasting would avoid.",
    advice: "Drop the tile/repeat call and let broadcasting expand the smaller operand.",
    severity: Severity::Info,
    ..d("ML16", "Broadcasting Feature Not Used", &[ModelTraining], &[Efficiency], GENERIC)
};

pub static ML17: RuleDescriptor = RuleDescriptor {
    description: "Growing a constant tensor by concatenation inside a loop copies it every \
        iteration and breaks inside tf.function graphs.",
    advice: "Collect per-iteration values in a tf.TensorArray and stack them once.",
    ..d("ML17", "TensorArray Not Used", &[ModelTraining], &[Efficiency, ErrorProne], TF2)
};

pub static ML18: RuleDescriptor = RuleDescriptor {
    description: "A model left in evaluation mode keeps dropout and batch-norm layers frozen \
        during later training steps.",
    advice: "Call model.train() after evaluation and before the next backward pass or \
        optimizer step.",
    ..d("ML18", "Training / Evaluation Mode Improper Toggling", &[ModelTraining], &[ErrorProne], GENERIC)
};

pub static ML19: RuleDescriptor = RuleDescriptor {
    description: "Calling module.forward() directly skips the hooks that module.__call__ runs \
        around it.",
    advice: "Call the module itself, e.g. self.net(x), instead of self.net.forward(x).",
    ..d("ML19", "Pytorch Call Method Misused", &[ModelTraining], &[Robustness], TORCH)
};

pub static ML20: RuleDescriptor = RuleDescriptor {
    description: "PyTorch accumulates gradients across backward() calls; without zero_grad() \
        each step uses the sum of all previous gradients.",
    advice: "Call optimizer.zero_grad() before loss.backward() and optimizer.step() in every \
        iteration.",
    ..d("ML20", "Gradients Not Cleared before Backward Propagation", &[ModelTraining], &[ErrorProne], TORCH)
};

pub static ML21: RuleDescriptor = RuleDescriptor {
    description: "Fitting a scaler or transformer on the full dataset before splitting or \
        cross-validating leaks test-set statistics into training.",
    advice: "Split first and fit preprocessing on the training part only, or wrap \
        preprocessing and model in a Pipeline.",
    ..d("ML21", "Data Leakage", &[ModelEvaluation], &[ErrorProne], GENERIC)
};

pub static ML22: RuleDescriptor = RuleDescriptor {
    description: "Metrics such as F1, precision or accuracy depend on one decision threshold \
        and can swing with it, especially on imbalanced data.",
    advice: "Report a threshold-independent metric such as ROC AUC or average precision \
        alongside or instead.",
    severity: Severity::Info,
    ..d("ML22", "Threshold-Dependent Validation", &[ModelEvaluation], &[Robustness], GENERIC)
};

pub static CATALOG: [&RuleDescriptor; 22] = [
    &ML01, &ML02, &ML03, &ML04, &ML05, &ML06, &ML07, &ML08, &ML09, &ML10, &ML11, &ML12, &ML13,
    &ML14, &ML15, &ML16, &ML17, &ML18, &ML19, &ML20, &ML21, &ML22,
];

pub fn descriptor(id: &str) -> Option<&'static RuleDescriptor> {
    CATALOG.iter().copied().find(|d| d.id == id)
}

pub fn is_rule_id(id: &str) -> bool {
    descriptor(id).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn ids_unique_and_dense() {
        let ids: Vec<_> = CATALOG.iter().map(|d| d.id).collect();
        let expect: Vec<_> = (1..=22).map(|i| format!("ML{i:02}")).collect();
        assert_eq!(ids, expect);
        assert_eq!(ids.iter().collect::<BTreeSet<_>>().len(), 22);
    }

    #[test]
    fn every_rule_has_text() {
        for d in CATALOG {
            assert!(!d.description.is_empty(), "{}", d.id);
            assert!(!d.advice.is_empty(), "{}", d.id);
        }
    }

    #[test]
    fn severity_policy() {
        let info: Vec<_> = CATALOG
            .iter()
            .filter(|d| d.severity == Severity::Info)
            .map(|d| d.id)
            .collect();
        assert_eq!(info, ["ML04", "ML06", "ML08", "ML09", "ML16", "ML22"]);
    }

    #[test]
    fn gates_and_scopes() {
        for d in CATALOG {
            let special = d.id == "ML13" || d.id == "ML14";
            assert_eq!(d.mode_gate == ModeGate::DevelopmentOnly, special, "{}", d.id);
            assert_eq!(d.scope == RuleScope::ProjectLevel, special, "{}", d.id);
        }
    }
}
