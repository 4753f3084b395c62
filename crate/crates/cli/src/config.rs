//! Flat key/value configuration for `fatoulab verify`.
//!
//! The file is TOML restricted to top-level keys: every value is a scalar or an array of
//! scalars, and tables are rejected. Unknown keys are errors. Flags given on the command line
//! override file values.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: key `{key}` must be a scalar or an array of scalars")]
    NotFlat { key: String, line: usize },
    #[error("line {line}: key `{key}`: {message}")]
    BadValue { key: String, line: usize, message: String },
    #[error("key `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Sections in the order the verification suite runs them.
pub const ALL_SECTIONS: [&str; 9] = [
    "cf_roundtrip",
    "brjuno_equivalence",
    "semiconjugacy",
    "near_translation",
    "abel",
    "sector_count",
    "rotation",
    "return_window",
    "gate",
];

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub precision_bits: u32,
    pub sections: Vec<String>,
    pub seed: u64,

    pub cf_samples: usize,
    pub cf_depth: usize,
    pub cf_bits: u32,
    /// The round-trip error must not exceed `2^cf_error_log2`.
    pub cf_error_log2: i32,

    pub brjuno_product_depth: usize,
    pub brjuno_partial_depth: usize,
    pub brjuno_product_threshold: f64,
    pub brjuno_sum_threshold: f64,

    pub semiconjugacy_alphas: Vec<f64>,
    pub semiconjugacy_maps: Vec<String>,
    pub semiconjugacy_grid: usize,
    /// Radius of the disks around the poles left out of the grid.
    pub semiconjugacy_pole_radius: f64,

    pub near_translation_alphas: Vec<f64>,
    pub near_translation_maps: Vec<String>,
    pub near_translation_max_radius: f64,
    pub near_translation_stability: f64,

    pub abel_alpha: f64,
    pub abel_maps: Vec<String>,
    pub abel_points: usize,
    pub abel_tolerance: f64,

    pub sector_triples: usize,
    pub sector_pell_levels: usize,

    pub rotation_alphas: Vec<f64>,
    pub rotation_map: String,
    pub rotation_radius: f64,
    pub rotation_steps: usize,
    pub rotation_tolerance: f64,
    pub secant_tolerance: f64,
    pub secant_angles: usize,

    pub window_alpha: f64,
    pub window_map: String,
    pub window_rotation_tolerance: f64,

    pub gate_budgets: Vec<u64>,
    pub gate_ratio: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: 128,
            sections: ALL_SECTIONS.iter().map(|s| s.to_string()).collect(),
            seed: 7,
            cf_samples: 100,
            cf_depth: 30,
            cf_bits: 256,
            cf_error_log2: -29,
            brjuno_product_depth: 30,
            brjuno_partial_depth: 25,
            brjuno_product_threshold: 1e-2,
            brjuno_sum_threshold: 1e2,
            semiconjugacy_alphas: vec![0.2, 0.05, 0.01, 0.002],
            semiconjugacy_maps: vec!["quadratic".into(), "cubic".into()],
            semiconjugacy_grid: 100,
            semiconjugacy_pole_radius: 2.0,
            near_translation_alphas: vec![0.01, 0.005],
            near_translation_maps: vec!["quadratic".into(), "cubic".into()],
            near_translation_max_radius: 1e3,
            near_translation_stability: 0.1,
            abel_alpha: 0.01,
            abel_maps: vec!["quadratic".into()],
            abel_points: 1000,
            abel_tolerance: 1e-15,
            sector_triples: 1000,
            sector_pell_levels: 20,
            rotation_alphas: vec![std::f64::consts::SQRT_2 - 1.0, 0.208, 0.24],
            rotation_map: "quadratic".into(),
            rotation_radius: 1e-3,
            rotation_steps: 100,
            rotation_tolerance: 1e-2,
            secant_tolerance: 1e-2,
            secant_angles: 16,
            window_alpha: 1.0 / 20.3,
            window_map: "cubic".into(),
            window_rotation_tolerance: 1e-3,
            gate_budgets: vec![100_000, 1_000_000, 10_000_000],
            gate_ratio: 10.0,
        }
    }
}

fn line_of(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            let t = l.trim_start();
            t.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
                || t.strip_prefix('[').and_then(|r| r.strip_prefix(key)).is_some_and(|rest| rest.trim_start().starts_with(']'))
        })
        .map(|i| i + 1)
        .unwrap_or(0)
}

fn span_line(text: &str, span: Option<std::ops::Range<usize>>) -> usize {
    span.map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1).unwrap_or(0)
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Config, ConfigError> {
        let table: toml::Table =
            toml::from_str(text).map_err(|e| ConfigError::Syntax { line: span_line(text, e.span()), message: e.message().to_string() })?;
        let known: BTreeMap<String, toml::Value> = match toml::Value::try_from(Config::default()) {
            Ok(toml::Value::Table(t)) => t.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        for (key, value) in &table {
            let line = line_of(text, key);
            let flat = match value {
                toml::Value::Table(_) => false,
                toml::Value::Array(items) => items.iter().all(|v| !matches!(v, toml::Value::Table(_) | toml::Value::Array(_))),
                _ => true,
            };
            if !flat {
                return Err(ConfigError::NotFlat { key: key.clone(), line });
            }
            if !known.contains_key(key) {
                return Err(ConfigError::UnknownKey { key: key.clone(), line });
            }
            // Type errors are reported per key.
            let mut probe = toml::Table::new();
            probe.insert(key.clone(), value.clone());
            if let Err(e) = probe.try_into::<Config>() {
                return Err(ConfigError::BadValue { key: key.clone(), line, message: e.message().to_string() });
            }
        }
        let cfg: Config = table
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Syntax { line: 0, message: e.message().to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Config::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, message: String| Err(ConfigError::Invalid { key: key.into(), message });
        for s in &self.sections {
            if !ALL_SECTIONS.contains(&s.as_str()) {
                return bad("sections", format!("unknown section `{s}`"));
            }
        }
        if !(32..=1 << 16).contains(&self.precision_bits) {
            return bad("precision_bits", format!("{} outside 32..=65536", self.precision_bits));
        }
        for (key, maps) in [
            ("semiconjugacy_maps", &self.semiconjugacy_maps),
            ("near_translation_maps", &self.near_translation_maps),
            ("abel_maps", &self.abel_maps),
        ] {
            for m in maps {
                if parse_map_name(m).is_none() {
                    return bad(key, format!("unknown map `{m}`"));
                }
            }
        }
        for (key, m) in [("rotation_map", &self.rotation_map), ("window_map", &self.window_map)] {
            if parse_map_name(m).is_none() {
                return bad(key, format!("unknown map `{m}`"));
            }
        }
        if self.gate_budgets.windows(2).any(|w| w[1] < w[0]) {
            return bad("gate_budgets", "budgets must be ascending".into());
        }
        if self.gate_budgets.iter().any(|&b| b > 100_000_000) {
            return bad("gate_budgets", "budgets are capped at 10^8".into());
        }
        Ok(())
    }

    /// Sorted `key=value` lines, with values in compact JSON.
    pub fn canonical_pairs(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let map: BTreeMap<String, serde_json::Value> = match value {
            serde_json::Value::Object(m) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        map.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// SHA-256 of [`Config::canonical_pairs`], in lowercase hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical_pairs().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// `quadratic` or `cubic`; `true` for the cubic model.
pub fn parse_map_name(name: &str) -> Option<bool> {
    match name {
        "quadratic" => Some(false),
        "cubic" => Some(true),
        _ => None,
    }
}
