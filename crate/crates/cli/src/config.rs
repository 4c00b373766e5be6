//! Instance and run configuration: a TOML file with `[instance]` and `[run]`
//! sections, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::InputError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleSpec {
    #[default]
    Trivial,
    Adjoint,
}

impl std::str::FromStr for ModuleSpec {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, InputError> {
        match s.trim() {
            "trivial" => Ok(ModuleSpec::Trivial),
            "adjoint" => Ok(ModuleSpec::Adjoint),
            other => Err(InputError::Value(format!("module must be `trivial` or `adjoint`, not `{other}`"))),
        }
    }
}

/// Either a preset root system with a parabolic and a support, or a custom
/// structure-constant file with `k`, the ideal and the module.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Levi simple roots, 1-based.
    #[serde(default)]
    pub levi: Vec<usize>,
    /// Support positions, 1-based among the non-Levi simple roots.
    #[serde(default)]
    pub t_support: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub k: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ideal: Vec<String>,
    #[serde(default)]
    pub module: ModuleSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    /// Per-cell cap for sampled checks.
    pub sample_limit: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub instance: InstanceConfig,
    #[serde(default)]
    pub run: RunConfig,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(path.display().to_string(), e.to_string()))?;
        let mut cfg: ConfigFile = toml::from_str(&text).map_err(|e| InputError::Config {
            path: path.display().to_string(),
            msg: e.message().to_string(),
            line: e.span().map(|s| text[..s.start].lines().count().max(1)),
        })?;
        // Relative algebra paths are taken from the config's directory.
        if let (Some(c), Some(dir)) = (&cfg.instance.custom, path.parent()) {
            if c.is_relative() {
                cfg.instance.custom = Some(dir.join(c));
            }
        }
        Ok(cfg)
    }
}

impl InstanceConfig {
    pub fn validate(&self) -> Result<(), InputError> {
        match (&self.preset, &self.custom) {
            (Some(_), Some(_)) => Err(InputError::Value("give either a preset or a custom algebra, not both".into())),
            (None, None) => Err(InputError::Value("no instance: pass --preset or --custom".into())),
            (Some(_), None) if !self.k.is_empty() || !self.ideal.is_empty() => {
                Err(InputError::Value("k and ideal apply only to custom algebras".into()))
            }
            (None, Some(_)) if !self.levi.is_empty() || !self.t_support.is_empty() => {
                Err(InputError::Value("levi and t-support apply only to presets".into()))
            }
            _ => {
                if self.levi.iter().chain(&self.t_support).any(|&i| i == 0) {
                    return Err(InputError::Value("index sets are 1-based".into()));
                }
                Ok(())
            }
        }
    }
}

/// Parses `""`, `"1,3"`, `"1 3"` or `"{1, 3}"` into a sorted, deduplicated set.
pub fn parse_index_set(s: &str) -> Result<Vec<usize>, InputError> {
    let body = s.trim().trim_start_matches('{').trim_end_matches('}');
    let mut out = Vec::new();
    for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let i: usize = tok.parse().map_err(|_| InputError::Value(format!("`{tok}` in `{s}` is not an index")))?;
        if i == 0 {
            return Err(InputError::Value(format!("index sets are 1-based; got 0 in `{s}`")));
        }
        out.push(i);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Comma-separated vector specs; commas inside a spec are not allowed.
pub fn parse_spec_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::to_string).collect()
}
