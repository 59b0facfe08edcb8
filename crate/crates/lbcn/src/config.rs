//! Named parameter sets loaded from a flat key-value TOML file.

use std::collections::BTreeMap;
use std::path::Path;

use lbcn_core::params::{validate_params, NoiseBudgetReport, SystemParams};
use lbcn_core::proof::sigma::BACKEND_ID;
use serde::Deserialize;

/// The parameter file shipped with the binary.
pub const SHIPPED: &str = include_str!("params.toml");

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unknown parameter set {0:?}")]
    UnknownSet(String),
    #[error("unknown proof backend {0:?}")]
    UnknownBackend(String),
    #[error("parameter set {name:?}: {source}")]
    Invalid { name: String, source: lbcn_core::Error },
    #[error("parameter set {name:?} fails the noise budget: bound {bound:.1} >= p/2 = {budget:.1}")]
    Budget { name: String, bound: f64, budget: f64 },
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSet {
    pub p: u64,
    pub u: usize,
    pub v: usize,
    pub alpha_q: f64,
    pub r_enc: f64,
    pub lambda: u32,
    pub rep: usize,
    #[serde(default = "default_backend")]
    pub backend: String,
}

fn default_backend() -> String {
    BACKEND_ID.to_string()
}

impl ParamSet {
    /// The full parameter set for a committee of `n` with threshold `t`.
    pub fn system(&self, n: usize, t: usize) -> Result<SystemParams, lbcn_core::Error> {
        SystemParams::new(self.p, self.u, self.v, self.alpha_q, self.r_enc, n, t, self.lambda, self.rep)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamConfig {
    pub sets: BTreeMap<String, ParamSet>,
}

impl ParamConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let sets: BTreeMap<String, ParamSet> = toml::from_str(text)?;
        for set in sets.values() {
            if set.backend != BACKEND_ID {
                return Err(ConfigError::UnknownBackend(set.backend.clone()));
            }
        }
        Ok(Self { sets })
    }

    pub fn shipped() -> Self {
        Self::parse(SHIPPED).expect("shipped parameter file parses")
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn get(&self, name: &str) -> Result<&ParamSet, ConfigError> {
        self.sets.get(name).ok_or_else(|| ConfigError::UnknownSet(name.to_string()))
    }

    /// Resolves a set for `(n, t)`, refusing sets that fail the noise budget
    /// unless `allow_invalid` is set.
    pub fn resolve(&self, name: &str, n: usize, t: usize, allow_invalid: bool) -> Result<SystemParams, ConfigError> {
        let sp = self.get(name)?.system(n, t).map_err(|source| ConfigError::Invalid {
            name: name.to_string(),
            source,
        })?;
        let report = validate_params(&sp);
        if !report.pass && !allow_invalid {
            return Err(ConfigError::Budget {
                name: name.to_string(),
                bound: report.noise_bound,
                budget: report.budget,
            });
        }
        Ok(sp)
    }

    /// Noise-budget reports for every set, evaluated at a minimal committee.
    pub fn reports(&self) -> Result<Vec<(String, NoiseBudgetReport)>, ConfigError> {
        self.sets
            .iter()
            .map(|(name, set)| {
                let sp = set.system(1, 0).map_err(|source| ConfigError::Invalid {
                    name: name.clone(),
                    source,
                })?;
                Ok((name.clone(), validate_params(&sp)))
            })
            .collect()
    }
}
