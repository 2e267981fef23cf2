//! Config file handling. The file format is a flat list of
//! `key = value` lines mirroring the [`ExperimentConfig`] field names,
//! with `#` comments and blank lines ignored:
//!
//! ```text
//! # Noisy sparse sweep
//! experiment = NoisySparse
//! n = 40
//! k = 4
//! basis = RandomFrame
//! m_grid = 20,24,28,32,36
//! input_snr_db = 3.0
//! trials = 50
//! seed = 1234
//! epsilon = 0.5778
//! algorithms = EMP,OMP,CoSaMP,ROMP
//! ```
//!
//! Every key is also a command-line flag; flag values override file
//! values. Within a file the last occurrence of a key wins.

use std::fs;
use std::path::Path;

use crate::experiment::{Algorithm, BasisKind, ExperimentConfig, ExperimentKind, PowerLaw};
use crate::{BenchError, Result};

/// A config in the making: every field optional so that a file and a set
/// of command-line flags can each fill in what they know before
/// [`PartialConfig::build`] checks completeness.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub experiment: Option<ExperimentKind>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub basis: Option<BasisKind>,
    pub m_grid: Option<Vec<usize>>,
    pub input_snr_db: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub epsilon: Option<f64>,
    pub gamma_override: Option<f64>,
    pub algorithms: Option<Vec<Algorithm>>,
    pub power_law: Option<PowerLaw>,
}

fn bad_value(key: &str, err: impl std::fmt::Display) -> BenchError {
    BenchError::Config(format!("{key}: {err}"))
}

pub fn parse_m_grid(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| bad_value("m_grid", e)))
        .collect()
}

pub fn parse_algorithms(s: &str) -> Result<Vec<Algorithm>> {
    s.split(',')
        .map(|p| p.trim().parse::<Algorithm>().map_err(|e| bad_value("algorithms", e)))
        .collect()
}

/// Parses `"p,r"`, e.g. `1.0,1.5`.
pub fn parse_power_law(s: &str) -> Result<PowerLaw> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(bad_value("power_law", "expected two comma-separated numbers 'p,r'"));
    }
    let p = parts[0].parse::<f64>().map_err(|e| bad_value("power_law", e))?;
    let r = parts[1].parse::<f64>().map_err(|e| bad_value("power_law", e))?;
    Ok(PowerLaw { p, r })
}

impl PartialConfig {
    /// Parses config-file text. Unknown keys are rejected so typos fail
    /// loudly instead of silently falling back to defaults.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = PartialConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let Some((key, value)) = line.split_once('=') else {
                return Err(BenchError::Config(format!(
                    "line {lineno}: expected 'key = value', got '{line}'"
                )));
            };
            let key = key.trim();
            let value = value.trim();
            match key {
                "experiment" => cfg.experiment = Some(value.parse().map_err(|e| bad_value(key, e))?),
                "n" => cfg.n = Some(value.parse().map_err(|e| bad_value(key, e))?),
                "k" => cfg.k = Some(value.parse().map_err(|e| bad_value(key, e))?),
                "basis" => cfg.basis = Some(value.parse().map_err(|e| bad_value(key, e))?),
                "m_grid" => cfg.m_grid = Some(parse_m_grid(value)?),
                "input_snr_db" => {
                    cfg.input_snr_db = Some(value.parse().map_err(|e| bad_value(key, e))?)
                }
                "trials" => cfg.trials = Some(value.parse().map_err(|e| bad_value(key, e))?),
                "seed" => cfg.seed = Some(value.parse().map_err(|e| bad_value(key, e))?),
                "epsilon" => cfg.epsilon = Some(value.parse().map_err(|e| bad_value(key, e))?),
                "gamma_override" => {
                    cfg.gamma_override = Some(value.parse().map_err(|e| bad_value(key, e))?)
                }
                "algorithms" => cfg.algorithms = Some(parse_algorithms(value)?),
                "power_law" => cfg.power_law = Some(parse_power_law(value)?),
                _ => {
                    return Err(BenchError::Config(format!("line {lineno}: unknown key '{key}'")))
                }
            }
        }
        Ok(cfg)
    }

    /// Reads and parses a config file.
    pub fn load_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_str(&text)
    }

    /// Overlays `overrides` on `self`: any field the override sets wins.
    pub fn merged(self, overrides: PartialConfig) -> PartialConfig {
        PartialConfig {
            experiment: overrides.experiment.or(self.experiment),
            n: overrides.n.or(self.n),
            k: overrides.k.or(self.k),
            basis: overrides.basis.or(self.basis),
            m_grid: overrides.m_grid.or(self.m_grid),
            input_snr_db: overrides.input_snr_db.or(self.input_snr_db),
            trials: overrides.trials.or(self.trials),
            seed: overrides.seed.or(self.seed),
            epsilon: overrides.epsilon.or(self.epsilon),
            gamma_override: overrides.gamma_override.or(self.gamma_override),
            algorithms: overrides.algorithms.or(self.algorithms),
            power_law: overrides.power_law.or(self.power_law),
        }
    }

    /// Finishes the config. The scientific parameters (experiment, n,
    /// m_grid, epsilon) must be set explicitly; the bookkeeping ones
    /// default to a random orthonormal basis, 50 trials, seed 0, and all
    /// five algorithms.
    pub fn build(self) -> Result<ExperimentConfig> {
        let require = |name: &str| {
            BenchError::Config(format!(
                "missing required setting '{name}' (set it in the config file or by flag)"
            ))
        };
        let cfg = ExperimentConfig {
            experiment: self.experiment.ok_or_else(|| require("experiment"))?,
            n: self.n.ok_or_else(|| require("n"))?,
            k: self.k,
            basis: self.basis.unwrap_or(BasisKind::RandomFrame),
            m_grid: self.m_grid.ok_or_else(|| require("m_grid"))?,
            input_snr_db: self.input_snr_db,
            trials: self.trials.unwrap_or(50),
            seed: self.seed.unwrap_or(0),
            epsilon: self.epsilon.ok_or_else(|| require("epsilon"))?,
            gamma_override: self.gamma_override,
            algorithms: self.algorithms.unwrap_or_else(|| {
                vec![
                    Algorithm::Mp,
                    Algorithm::Omp,
                    Algorithm::Cosamp,
                    Algorithm::Romp,
                    Algorithm::Emp,
                ]
            }),
            power_law: self.power_law,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
