//! Per-rule parameters and their `[rules.MLxx]` config tables.

use std::collections::BTreeMap;

use serde::Deserialize;

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// True when canonical name `api` is named by `entry`. Entries without a dot
/// match the last path segment, so `PCA` covers `sklearn.decomposition.PCA`.
pub fn name_matches(api: &str, entry: &str) -> bool {
    if entry.contains('.') {
        api == entry
    } else {
        api.rsplit('.').next() == Some(entry)
    }
}

pub fn any_matches(api: &str, entries: &[String]) -> bool {
    entries.iter().any(|e| name_matches(api, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleParams {
    pub ml04_readers: Vec<String>,
    pub ml07_apis: Vec<String>,
    /// `None` means the mode default.
    pub ml09_unknown_rank_info: Option<bool>,
    pub ml10_sensitive_estimators: Vec<String>,
    pub ml10_scalers: Vec<String>,
    pub ml11_optimizer_min_keywords: usize,
    pub ml11_required_keywords: BTreeMap<String, Vec<String>>,
    pub ml12_loss_names: Vec<String>,
    pub ml15_log_apis: Vec<String>,
    pub ml15_clip_apis: Vec<String>,
    pub ml22_dependent_metrics: Vec<String>,
    pub ml22_independent_metrics: Vec<String>,
}

impl Default for RuleParams {
    fn default() -> Self {
        RuleParams {
            ml04_readers: strings(&[
                "pandas.read_csv",
                "pandas.read_table",
                "pandas.read_excel",
                "pandas.read_json",
            ]),
            ml07_apis: strings(&[
                "DataFrame.dropna",
                "DataFrame.fillna",
                "DataFrame.sort_values",
                "DataFrame.drop",
                "DataFrame.reset_index",
                "DataFrame.replace",
                "Series.dropna",
                "Series.fillna",
                "Series.sort_values",
                "Series.drop",
                "Series.reset_index",
                "Series.replace",
                "numpy.clip",
            ]),
            ml09_unknown_rank_info: None,
            ml10_sensitive_estimators: strings(&[
                "PCA",
                "KernelPCA",
                "SVC",
                "SVR",
                "LinearSVC",
                "LinearSVR",
                "SGDClassifier",
                "SGDRegressor",
                "MLPClassifier",
                "MLPRegressor",
                "KMeans",
                "KNeighborsClassifier",
                "KNeighborsRegressor",
            ]),
            ml10_scalers: strings(&[
                "StandardScaler",
                "MinMaxScaler",
                "MaxAbsScaler",
                "RobustScaler",
                "Normalizer",
                "QuantileTransformer",
                "PowerTransformer",
            ]),
            ml11_optimizer_min_keywords: 1,
            ml11_required_keywords: BTreeMap::new(),
            ml12_loss_names: strings(&["loss", "criterion", "loss_fn", "loss_func", "criterion_fn"]),
            ml15_log_apis: strings(&[
                "tensorflow.log",
                "tensorflow.math.log",
                "torch.log",
                "numpy.log",
                "Tensor.log",
            ]),
            ml15_clip_apis: strings(&[
                "tensorflow.clip_by_value",
                "tensorflow.clip_by_norm",
                "torch.clamp",
                "torch.clip",
                "numpy.clip",
                "Tensor.clamp",
                "Tensor.clip",
                "NdArray.clip",
            ]),
            ml22_dependent_metrics: strings(&[
                "sklearn.metrics.f1_score",
                "sklearn.metrics.precision_score",
                "sklearn.metrics.recall_score",
                "sklearn.metrics.accuracy_score",
                "sklearn.metrics.fbeta_score",
            ]),
            ml22_independent_metrics: strings(&[
                "sklearn.metrics.roc_auc_score",
                "sklearn.metrics.average_precision_score",
                "sklearn.metrics.roc_curve",
                "sklearn.metrics.precision_recall_curve",
            ]),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ml04 {
    readers: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ml07 {
    apis: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ml09 {
    unknown_rank_info: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ml10 {
    sensitive_estimators: Option<Vec<String>>,
    scalers: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ml11 {
    optimizer_min_keywords: Option<usize>,
    required_keywords: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ml12 {
    loss_names: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ml15 {
    log_apis: Option<Vec<String>>,
    clip_apis: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ml22 {
    dependent_metrics: Option<Vec<String>>,
    independent_metrics: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl RuleParams {
    /// Overlays one `[rules.<id>]` table. Rules without parameters accept
    /// only an empty table.
    pub fn apply_table(&mut self, id: &str, table: toml::Table) -> Result<(), String> {
        let value = toml::Value::Table(table);
        let err = |e: toml::de::Error| format!("[rules.{id}]: {}", e.message());
        match id {
            "ML04" => {
                let t: Ml04 = value.try_into().map_err(err)?;
                set(&mut self.ml04_readers, t.readers);
            }
            "ML07" => {
                let t: Ml07 = value.try_into().map_err(err)?;
                set(&mut self.ml07_apis, t.apis);
            }
            "ML09" => {
                let t: Ml09 = value.try_into().map_err(err)?;
                if t.unknown_rank_info.is_some() {
                    self.ml09_unknown_rank_info = t.unknown_rank_info;
                }
            }
            "ML10" => {
                let t: Ml10 = value.try_into().map_err(err)?;
                set(&mut self.ml10_sensitive_estimators, t.sensitive_estimators);
                set(&mut self.ml10_scalers, t.scalers);
            }
            "ML11" => {
                let t: Ml11 = value.try_into().map_err(err)?;
                set(&mut self.ml11_optimizer_min_keywords, t.optimizer_min_keywords);
                set(&mut self.ml11_required_keywords, t.required_keywords);
            }
            "ML12" => {
                let t: Ml12 = value.try_into().map_err(err)?;
                set(&mut self.ml12_loss_names, t.loss_names);
            }
            "ML15" => {
                let t: Ml15 = value.try_into().map_err(err)?;
                set(&mut self.ml15_log_apis, t.log_apis);
                set(&mut self.ml15_clip_apis, t.clip_apis);
            }
            "ML22" => {
                let t: Ml22 = value.try_into().map_err(err)?;
                set(&mut self.ml22_dependent_metrics, t.dependent_metrics);
                set(&mut self.ml22_independent_metrics, t.independent_metrics);
            }
            _ => {
                let _: Empty = value.try_into().map_err(err)?;
            }
        }
        Ok(())
    }
}
