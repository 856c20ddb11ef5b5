//! Shared JSON configuration schema for the batch front end.
//!
//! One config file drives every subcommand; each command reads the sections
//! it needs and validates them up front, so a malformed file fails before
//! any output is produced.  Unknown fields are rejected (typo safety) and
//! parse errors carry serde's line/column information.

use crate::asymptotics::DEFAULT_TAU_MAX;
use crate::scattering::{InitialData, ScatteringError, SpectralData, SyntheticProfile};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error in {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("config error: {0}")]
    Invalid(String),
    #[error("initial data rejected: {0}")]
    Data(#[from] ScatteringError),
}

/// Initial-condition family; `u1` is specified through an envelope whose
/// x-derivative is taken, so the zero-mass constraint holds by construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "family")]
pub enum DataSpec {
    Zero,
    Gaussian {
        amplitude: f64,
        #[serde(default)]
        u1_amplitude: f64,
        width: f64,
        #[serde(default)]
        center: f64,
    },
    Sech2 {
        amplitude: f64,
        #[serde(default)]
        u1_amplitude: f64,
        width: f64,
        #[serde(default)]
        center: f64,
    },
    CustomTable {
        xs: Vec<f64>,
        u0: Vec<f64>,
        u1: Vec<f64>,
    },
}

impl DataSpec {
    pub fn build(&self) -> Result<InitialData, ConfigError> {
        let data = match self {
            DataSpec::Zero => InitialData::zero(),
            DataSpec::Gaussian { amplitude, u1_amplitude, width, center } => {
                if *width <= 0.0 {
                    return Err(ConfigError::Invalid(format!(
                        "initial_data.width must be positive, got {width}"
                    )));
                }
                InitialData::gaussian(*amplitude, *u1_amplitude, *width, *center)
            }
            DataSpec::Sech2 { amplitude, u1_amplitude, width, center } => {
                if *width <= 0.0 {
                    return Err(ConfigError::Invalid(format!(
                        "initial_data.width must be positive, got {width}"
                    )));
                }
                InitialData::sech2(*amplitude, *u1_amplitude, *width, *center)
            }
            DataSpec::CustomTable { xs, u0, u1 } => {
                InitialData::from_table(xs.clone(), u0.clone(), u1.clone())?
            }
        };
        Ok(data)
    }
}

/// Parameters of the closed-form synthetic reflection profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub amplitude: f64,
    pub sharpness: f64,
    #[serde(default)]
    pub phase0: f64,
    #[serde(default)]
    pub phase1: f64,
}

impl SyntheticSpec {
    pub fn profile(&self) -> SyntheticProfile {
        SyntheticProfile {
            amplitude: self.amplitude,
            sharpness: self.sharpness,
            phase0: self.phase0,
            phase1: self.phase1,
        }
    }
}

/// Per-identity tolerance overrides; anything left `None` falls back to the
/// crate-wide defaults in [`crate::tol`].
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub circle_relation: Option<f64>,
    pub conjugation: Option<f64>,
    pub endpoint_limit: Option<f64>,
    pub delta_jump: Option<f64>,
    pub d0_modulus: Option<f64>,
    pub d0_arg_routes: Option<f64>,
    pub model_jump: Option<f64>,
    pub factorization: Option<f64>,
    pub symmetry: Option<f64>,
    pub pde_dispersion: Option<f64>,
    pub pde_reversal: Option<f64>,
}

/// PDE-oracle section.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_xi_max")]
    pub xi_max: f64,
    /// Extra snapshot times written as additional CSV blocks.
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

fn default_t_end() -> f64 {
    1.0
}
fn default_dt() -> f64 {
    crate::pde::DEFAULT_DT
}
fn default_xi_max() -> f64 {
    crate::pde::DEFAULT_XI_MAX
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection {
            t_end: default_t_end(),
            dt: default_dt(),
            xi_max: default_xi_max(),
            snapshot_times: Vec::new(),
        }
    }
}

/// The shared experiment description.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Closed-form or tabulated initial condition (scatter / oracle, and
    /// asymptote when the spectral data is to be computed on the fly).
    pub initial_data: Option<DataSpec>,
    /// Path to a spectral CSV produced by `scatter` (asymptote input).
    pub spectral_input: Option<String>,
    /// Closed-form synthetic reflection data (asymptote input in the
    /// all-order-vanishing regime).
    pub synthetic: Option<SyntheticSpec>,
    #[serde(default)]
    pub tau_grid: Vec<f64>,
    #[serde(default)]
    pub x_grid: Vec<f64>,
    /// Arc sample count for spectral grids (≥ 32).
    pub arc_points: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub oracle: Option<OracleSection>,
    /// Default output path when `--out` is not given.
    pub output: Option<String>,
}

impl RunConfig {
    pub fn from_path(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_string(),
            source,
        })?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
                path: path.to_string(),
                source,
            })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(n) = self.arc_points {
            if n < 32 {
                return Err(ConfigError::Invalid(format!(
                    "arc_points must be at least 32, got {n}"
                )));
            }
        }
        for &tau in &self.tau_grid {
            if !(0.0..=DEFAULT_TAU_MAX).contains(&tau) {
                return Err(ConfigError::Invalid(format!(
                    "tau_grid entry {tau} outside [0, {DEFAULT_TAU_MAX}]"
                )));
            }
        }
        for &x in &self.x_grid {
            if x < 2.0 {
                return Err(ConfigError::Invalid(format!(
                    "x_grid entry {x} below the minimum 2"
                )));
            }
        }
        if let Some(o) = &self.oracle {
            if o.dt <= 0.0 {
                return Err(ConfigError::Invalid(format!(
                    "oracle.dt must be positive, got {}",
                    o.dt
                )));
            }
        }
        Ok(())
    }

    pub fn arc_points(&self) -> usize {
        self.arc_points.unwrap_or(crate::scattering::DEFAULT_ARC_POINTS)
    }

    /// Resolve the spectral-data source for the asymptotics pipeline.
    /// Priority: explicit CSV input, then synthetic profile, then initial
    /// data (computed on the fly).
    pub fn spectral_data(&self) -> Result<SpectralData, ConfigError> {
        if let Some(path) = &self.spectral_input {
            return crate::io::read_spectral_csv(path)
                .map_err(|e| ConfigError::Invalid(e.to_string()));
        }
        if let Some(syn) = &self.synthetic {
            return SpectralData::synthetic(syn.profile(), self.arc_points())
                .map_err(ConfigError::Data);
        }
        if let Some(spec) = &self.initial_data {
            let data = spec.build()?;
            return SpectralData::compute(&data, self.arc_points()).map_err(ConfigError::Data);
        }
        Err(ConfigError::Invalid(
            "need one of spectral_input, synthetic, or initial_data".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_gaussian_config_parses_and_builds() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{
                "initial_data": {"family": "gaussian", "amplitude": 0.3,
                                  "u1_amplitude": 0.2, "width": 1.0},
                "tau_grid": [0.0, 0.1, 0.2],
                "x_grid": [100.0, 1000.0]
            }"#,
        )
        .unwrap();
        cfg.validate().unwrap();
        let data = cfg.initial_data.as_ref().unwrap().build().unwrap();
        assert!(data.u0.iter().any(|&v| v != 0.0));
        assert_eq!(cfg.arc_points(), crate::scattering::DEFAULT_ARC_POINTS);
    }

    #[test]
    fn unknown_fields_and_bad_ranges_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"no_such_key": 1}"#).is_err());
        let cfg: RunConfig =
            serde_json::from_str(r#"{"arc_points": 8}"#).unwrap();
        assert!(matches!(cfg.validate(), Err(ConfigError::Invalid(_))));
        let cfg: RunConfig =
            serde_json::from_str(r#"{"tau_grid": [0.9]}"#).unwrap();
        assert!(cfg.validate().is_err());
        let cfg: RunConfig = serde_json::from_str(r#"{"x_grid": [1.0]}"#).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn spectral_source_priority_is_csv_then_synthetic_then_data() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"synthetic": {"amplitude": 0.5, "sharpness": 0.1}}"#,
        )
        .unwrap();
        let spec = cfg.spectral_data().unwrap();
        assert!(spec.r1.iter().any(|v| v.norm() > 0.0));
        let empty = RunConfig::default();
        assert!(empty.spectral_data().is_err());
    }
}
