//! Versioned data file describing which library calls produce which kinds of
//! values.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use super::Tag;

pub const FORMAT: &str = "mlint-signatures";
pub const SUPPORTED_VERSION: u32 = 1;

const BUNDLED: &str = include_str!("../../data/signatures.toml");

#[derive(Debug, thiserror::Error)]
pub enum SignatureError {
    #[error("cannot read signature file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed signature file: {0}")]
    Syntax(String),
    #[error("signature file has format {found:?}, expected {FORMAT:?}")]
    Format { found: String },
    #[error("signature file version {found} is not supported (expected {SUPPORTED_VERSION})")]
    Version { found: u32 },
    #[error("signature file: unknown tag {0:?}")]
    UnknownTag(String),
    #[error("signature file: bad rank rule {0:?}")]
    BadRank(String),
}

/// How the rank of a constructed array is derived from the call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankRule {
    Shape,
    Nesting,
    Fixed(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CtorSig {
    pub tag: Tag,
    pub rank: Option<RankRule>,
}

#[derive(Debug, Clone, Default)]
pub struct ApiSignatureTable {
    pub version: u32,
    exact: BTreeMap<String, CtorSig>,
    /// Prefix (without the trailing `.*`) to signature.
    wildcard: BTreeMap<String, CtorSig>,
    methods: BTreeMap<(Tag, String), Tag>,
    attributes: BTreeMap<(Tag, String), Tag>,
    pub model_bases: BTreeSet<String>,
    pub random_state_always: BTreeSet<String>,
    pub random_state_when_shuffled: BTreeSet<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    meta: RawMeta,
    #[serde(default)]
    constructor: Vec<RawCtor>,
    #[serde(default)]
    method: Vec<RawMember>,
    #[serde(default)]
    attribute: Vec<RawMember>,
    #[serde(default)]
    classes: RawClasses,
    #[serde(default)]
    random_state: RawRandomState,
}

#[derive(Deserialize)]
struct RawMeta {
    format: String,
    version: u32,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRank {
    Fixed(u32),
    Named(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCtor {
    tag: String,
    #[serde(default)]
    rank: Option<RawRank>,
    names: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMember {
    receiver: String,
    result: String,
    names: Vec<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawClasses {
    #[serde(default)]
    model_bases: Vec<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawRandomState {
    #[serde(default)]
    always: Vec<String>,
    #[serde(default)]
    when_shuffled: Vec<String>,
}

fn tag(s: &str) -> Result<Tag, SignatureError> {
    Tag::from_name(s).ok_or_else(|| SignatureError::UnknownTag(s.to_string()))
}

impl ApiSignatureTable {
    /// The table shipped with the tool.
    pub fn bundled() -> Self {
        Self::from_toml(BUNDLED).expect("bundled signature table is valid")
    }

    pub fn load(path: &Path) -> Result<Self, SignatureError> {
        let text = std::fs::read_to_string(path).map_err(|source| SignatureError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, SignatureError> {
        let raw: RawFile =
            toml::from_str(text).map_err(|e| SignatureError::Syntax(e.to_string()))?;
        if raw.meta.format != FORMAT {
            return Err(SignatureError::Format {
                found: raw.meta.format,
            });
        }
        if raw.meta.version != SUPPORTED_VERSION {
            return Err(SignatureError::Version {
                found: raw.meta.version,
            });
        }
        let mut t = ApiSignatureTable {
            version: raw.meta.version,
            ..Default::default()
        };
        for c in raw.constructor {
            let sig = CtorSig {
                tag: tag(&c.tag)?,
                rank: match c.rank {
                    None => None,
                    Some(RawRank::Fixed(n)) => Some(RankRule::Fixed(n)),
                    Some(RawRank::Named(s)) => Some(match s.as_str() {
                        "shape" => RankRule::Shape,
                        "nesting" => RankRule::Nesting,
                        _ => return Err(SignatureError::BadRank(s)),
                    }),
                },
            };
            for n in c.names {
                match n.strip_suffix(".*") {
                    Some(prefix) => t.wildcard.insert(prefix.to_string(), sig),
                    None => t.exact.insert(n, sig),
                };
            }
        }
        for (raw_list, map) in [(raw.method, &mut t.methods), (raw.attribute, &mut t.attributes)] {
            for m in raw_list {
                let recv = tag(&m.receiver)?;
                let res = tag(&m.result)?;
                for n in m.names {
                    map.insert((recv, n), res);
                }
            }
        }
        t.model_bases = raw.classes.model_bases.into_iter().collect();
        t.random_state_always = raw.random_state.always.into_iter().collect();
        t.random_state_when_shuffled = raw.random_state.when_shuffled.into_iter().collect();
        Ok(t)
    }

    /// Signature of a call to the canonical name `name`, if known. An entry
    /// tagged `Unknown` is returned as such so callers can tell "known to
    /// produce nothing interesting" from "not in the table".
    pub fn constructor(&self, name: &str) -> Option<CtorSig> {
        if let Some(sig) = self.exact.get(name) {
            return Some(*sig);
        }
        let (prefix, last) = name.rsplit_once('.')?;
        if last.is_empty() {
            return None;
        }
        self.wildcard.get(prefix).copied()
    }

    pub fn is_constructor_of(&self, name: &str, want: Tag) -> bool {
        self.constructor(name).is_some_and(|s| s.tag == want)
    }

    pub fn method_result(&self, receiver: Tag, method: &str) -> Option<Tag> {
        self.methods
            .get(&(receiver, method.to_string()))
            .or_else(|| self.methods.get(&(receiver, "*".to_string())))
            .copied()
    }

    pub fn attribute_result(&self, receiver: Tag, attr: &str) -> Option<Tag> {
        self.attributes.get(&(receiver, attr.to_string())).copied()
    }

    /// All exact constructor names with the given tag, sorted.
    pub fn constructors_with_tag(&self, want: Tag) -> Vec<&str> {
        self.exact
            .iter()
            .filter(|(_, s)| s.tag == want)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}
