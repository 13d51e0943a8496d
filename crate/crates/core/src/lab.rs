//! Run configuration and the shared numerical context built from it.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::quadrature::{DiskRule, QuadError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for {key}: {value:?}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    /// Truncation degree for series.
    #[serde(rename = "N")]
    pub degree: usize,
    /// Radial Gauss nodes of the disk rule.
    #[serde(rename = "R")]
    pub radial: usize,
    /// Angular nodes of the disk rule and samples for circle means.
    #[serde(rename = "M")]
    pub angular: usize,
    pub sup_grid: usize,
    pub a_radii: Vec<f64>,
    pub a_angles: usize,
    pub bloch_radii: Vec<f64>,
    pub seed: u64,
    pub corpus: usize,
    pub search_iters: usize,
    pub search_evals: usize,
    pub ig_constant: f64,
    pub cphi_constant: f64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            degree: 64,
            radial: 128,
            angular: 256,
            sup_grid: 2048,
            a_radii: vec![0.0, 0.3, 0.6, 0.8, 0.9, 0.95, 0.99],
            a_angles: 16,
            bloch_radii: vec![0.99, 0.999],
            seed: 1,
            corpus: 60,
            search_iters: 20,
            search_evals: 1500,
            ig_constant: 4.0,
            cphi_constant: PI,
            tolerances: BTreeMap::new(),
        }
    }
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(|s| parse_value(line, key, s.trim()))
        .collect()
}

impl Config {
    /// Parses `key=value` lines; blank lines and `#` comments are ignored.
    /// Keys not listed here are rejected.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: raw.to_string(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "N" => cfg.degree = parse_value(line, key, value)?,
                "R" => cfg.radial = parse_value(line, key, value)?,
                "M" => cfg.angular = parse_value(line, key, value)?,
                "sup_grid" => cfg.sup_grid = parse_value(line, key, value)?,
                "a_radii" => cfg.a_radii = parse_list(line, key, value)?,
                "a_angles" => cfg.a_angles = parse_value(line, key, value)?,
                "bloch_radii" => cfg.bloch_radii = parse_list(line, key, value)?,
                "seed" => cfg.seed = parse_value(line, key, value)?,
                "corpus" => cfg.corpus = parse_value(line, key, value)?,
                "search_iters" => cfg.search_iters = parse_value(line, key, value)?,
                "search_evals" => cfg.search_evals = parse_value(line, key, value)?,
                "ig_constant" => cfg.ig_constant = parse_value(line, key, value)?,
                "cphi_constant" => cfg.cphi_constant = parse_value(line, key, value)?,
                _ => match key.strip_prefix("tol.") {
                    Some(id) if !id.is_empty() => {
                        let tol: f64 = parse_value(line, key, value)?;
                        cfg.tolerances.insert(id.to_string(), tol);
                    }
                    _ => {
                        return Err(ConfigError::UnknownKey {
                            line,
                            key: key.to_string(),
                        })
                    }
                },
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: &str| Err(ConfigError::Invalid(msg.to_string()));
        if self.degree == 0 {
            return bad("N must be positive");
        }
        if self.radial == 0 || self.angular == 0 || self.sup_grid < 3 {
            return bad("R, M must be positive and sup_grid at least 3");
        }
        if self.a_radii.is_empty() || self.a_radii.iter().any(|r| !(0.0..1.0).contains(r)) {
            return bad("a_radii must be a nonempty list in [0, 1)");
        }
        if self.a_angles == 0 {
            return bad("a_angles must be positive");
        }
        if self.bloch_radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return bad("bloch_radii must lie in (0, 1)");
        }
        if self.corpus == 0 || self.search_iters == 0 || self.search_evals == 0 {
            return bad("corpus, search_iters and search_evals must be positive");
        }
        if !(self.ig_constant > 0.0 && self.cphi_constant > 0.0) {
            return bad("declared constants must be positive");
        }
        if self.tolerances.values().any(|t| !(*t >= 0.0)) {
            return bad("tolerances must be nonnegative");
        }
        Ok(())
    }

    /// Tolerance for a check, falling back to `default`.
    pub fn tolerance(&self, id: &str, default: f64) -> f64 {
        self.tolerances.get(id).copied().unwrap_or(default)
    }
}

/// Quadrature rules and grids shared by every norm computation.
#[derive(Debug, Clone)]
pub struct Lab {
    pub config: Config,
    /// Main disk rule `(R, M)` with its `(2R, 2M)` refinement.
    pub rule: DiskRule,
    /// Coarse rule for inner loops of the constant search.
    pub search_rule: DiskRule,
    a_grid: Vec<C64>,
}

impl Lab {
    pub fn new(config: Config) -> Result<Self, ConfigError> {
        config.validate()?;
        let rule = DiskRule::new(config.radial, config.angular)?;
        let search_rule = DiskRule::single(32, 64)?;
        let mut a_grid = Vec::new();
        for &r in &config.a_radii {
            if r == 0.0 {
                if !a_grid.contains(&C64::new(0.0, 0.0)) {
                    a_grid.push(C64::new(0.0, 0.0));
                }
                continue;
            }
            for k in 0..config.a_angles {
                let t = 2.0 * PI * k as f64 / config.a_angles as f64;
                a_grid.push(C64::from_polar(r, t));
            }
        }
        Ok(Lab {
            config,
            rule,
            search_rule,
            a_grid,
        })
    }

    pub fn with_defaults() -> Self {
        Lab::new(Config::default()).expect("default configuration is valid")
    }

    /// Points `a` over which `sup_{a∈𝔻}` is sampled.
    pub fn a_grid(&self) -> &[C64] {
        &self.a_grid
    }

    pub fn degree(&self) -> usize {
        self.config.degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_tolerances() {
        let cfg = Config::parse("# run\nN = 32\na_radii=0,0.5\ntol.lemma1=1e-7\n\nseed=9").unwrap();
        assert_eq!(cfg.degree, 32);
        assert_eq!(cfg.a_radii, vec![0.0, 0.5]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.tolerance("lemma1", 1.0), 1e-7);
        assert_eq!(cfg.tolerance("lemma2", 1.0), 1.0);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(matches!(Config::parse("bogus=1"), Err(ConfigError::UnknownKey { line: 1, .. })));
        assert!(matches!(Config::parse("N"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(Config::parse("N=x"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(Config::parse("a_radii=0,1.2"), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn a_grid_counts_origin_once() {
        let lab = Lab::with_defaults();
        assert_eq!(lab.a_grid().len(), 1 + 6 * 16);
    }
}
