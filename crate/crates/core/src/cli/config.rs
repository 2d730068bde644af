//! `mlint.toml` loading.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use crate::engine::catalog;
use crate::engine::{Mode, RunConfig};

pub const DEFAULT_CONFIG: &str = "mlint.toml";
pub const CONFIG_ENV: &str = "MLINT_CONFIG";

/// Settings read from a config file, before command-line flags apply.
#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    pub run: RunConfig,
    pub exclude: Vec<String>,
    /// Ids listed under `[rules] select`, if that key was present.
    pub select: Option<Vec<&'static str>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    mode: Option<Spanned<String>>,
    exclude: Option<Vec<String>>,
    signatures: Option<PathBuf>,
    rules: Option<BTreeMap<Spanned<String>, Spanned<toml::Value>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub line: Option<u32>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.path, l, self.message),
            None => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

fn line_of(text: &str, offset: usize) -> u32 {
    text[..offset.min(text.len())].matches('\n').count() as u32 + 1
}

/// Picks the config file: the explicit path, then `$MLINT_CONFIG`, then
/// `mlint.toml` in `cwd` if it exists. An explicit path must exist.
pub fn locate(explicit: Option<&Path>, env: Option<&Path>, cwd: &Path) -> Option<PathBuf> {
    if let Some(p) = explicit.or(env) {
        return Some(p.to_path_buf());
    }
    let default = cwd.join(DEFAULT_CONFIG);
    default.is_file().then_some(default)
}

pub fn load(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        path: path.display().to_string(),
        line: None,
        message: format!("cannot read config: {e}"),
    })?;
    parse(&path.display().to_string(), &text)
}

pub fn parse(path: &str, text: &str) -> Result<FileConfig, ConfigError> {
    let err = |offset: Option<usize>, message: String| ConfigError {
        path: path.to_string(),
        line: offset.map(|o| line_of(text, o)),
        message,
    };
    let raw: Raw = toml::from_str(text)
        .map_err(|e| err(e.span().map(|s| s.start), e.message().to_string()))?;

    let mut out = FileConfig::default();
    if let Some(mode) = raw.mode {
        out.run.mode = mode
            .get_ref()
            .parse::<Mode>()
            .map_err(|m| err(Some(mode.span().start), m))?;
    }
    out.exclude = raw.exclude.unwrap_or_default();
    out.run.signatures = raw.signatures;

    for (key, value) in raw.rules.unwrap_or_default() {
        let at = Some(key.span().start);
        let name = key.get_ref().as_str();
        match name {
            "select" | "ignore" => {
                let ids = id_list(value.get_ref())
                    .map_err(|m| err(Some(value.span().start), format!("[rules] {name}: {m}")))?;
                if name == "select" {
                    out.select = Some(ids);
                } else {
                    out.run.ignored.extend(ids);
                }
            }
            _ => {
                let Some(d) = catalog::descriptor(name) else {
                    return Err(err(at, format!("unknown key or rule id {name:?} in [rules]")));
                };
                let toml::Value::Table(table) = value.get_ref().clone() else {
                    return Err(err(at, format!("[rules.{name}] must be a table")));
                };
                out.run
                    .params
                    .apply_table(d.id, table)
                    .map_err(|m| err(at, m))?;
            }
        }
    }
    if let Some(select) = &out.select {
        out.run.selected = select.iter().copied().collect();
    }
    out.run.normalize();
    Ok(out)
}

fn id_list(value: &toml::Value) -> Result<Vec<&'static str>, String> {
    let toml::Value::Array(items) = value else {
        return Err("expected a list of rule ids".into());
    };
    items
        .iter()
        .map(|v| match v.as_str() {
            Some(s) => parse_id(s),
            None => Err("expected a list of rule ids".into()),
        })
        .collect()
}

pub fn parse_id(s: &str) -> Result<&'static str, String> {
    catalog::descriptor(s.trim())
        .map(|d| d.id)
        .ok_or_else(|| format!("unknown rule id {:?}", s.trim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_enables_everything() {
        let c = parse("mlint.toml", "").unwrap();
        assert_eq!(c.run.selected.len(), 22);
        assert_eq!(c.run.mode, Mode::Development);
        assert!(c.select.is_none());
    }

    #[test]
    fn mode_select_ignore_and_tables() {
        let c = parse(
            "mlint.toml",
            "mode = \"production\"\nexclude = [\"build\"]\n[rules]\nselect = [\"ML03\", \"ML07\", \"ML22\"]\nignore = [\"ML22\"]\n[rules.ML07]\napis = [\"numpy.clip\"]\n",
        )
        .unwrap();
        assert_eq!(c.run.mode, Mode::Production);
        assert_eq!(c.exclude, vec!["build"]);
        assert_eq!(c.run.selected.iter().copied().collect::<Vec<_>>(), ["ML03", "ML07"]);
        assert_eq!(c.run.params.ml07_apis, vec!["numpy.clip"]);
    }

    #[test]
    fn unknown_rule_id_reports_line() {
        let e = parse("m.toml", "mode = \"development\"\n\n[rules.ML99]\nx = 1\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.message.contains("ML99"));
        let e = parse("m.toml", "[rules]\nignore = [\"ML01\", \"MLX\"]\n").unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn bad_values_report_line() {
        let e = parse("m.toml", "\nmode = \"staging\"\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = parse("m.toml", "colour = 1\n").unwrap_err();
        assert_eq!(e.line, Some(1));
        let e = parse("m.toml", "[rules.ML04]\nreaderz = []\n").unwrap_err();
        assert_eq!(e.line, Some(1));
        assert!(e.message.contains("readerz"), "{}", e.message);
        let e = parse("m.toml", "x = 1\nmode = [1,\n").unwrap_err();
        assert!(e.line >= Some(2), "{e}");
        assert_eq!(e.to_string().split(':').next(), Some("m.toml"));
    }

    #[test]
    fn explicit_path_beats_env_and_default() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(locate(None, None, dir.path()), None);
        std::fs::write(dir.path().join(DEFAULT_CONFIG), "").unwrap();
        assert_eq!(locate(None, None, dir.path()), Some(dir.path().join(DEFAULT_CONFIG)));
        let env = Path::new("env.toml");
        assert_eq!(locate(None, Some(env), dir.path()).as_deref(), Some(env));
        let flag = Path::new("flag.toml");
        assert_eq!(locate(Some(flag), Some(env), dir.path()).as_deref(), Some(flag));
    }
}
