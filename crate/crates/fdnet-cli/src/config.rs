//! TOML experiment specifications: network, duplex mix, self-interference,
//! sweep grid, and optional Monte Carlo settings. All dB↔linear conversions
//! happen here, at the boundary; the library below works in linear units.

use crate::error::CliError;
use fdnet::model::{DuplexMix, NetworkConfig, SelfInterferenceModel};
use fdnet::simulator::SimConfig;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Propagation-constant preset: −34 dB (antenna gains of 2 at 2.4 GHz).
pub const K_PRESET_DB: f64 = -34.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub output: PathBuf,
    pub network: NetworkSection,
    pub mix: MixSection,
    #[serde(default)]
    pub si: SiSection,
    pub sweep: SweepSection,
    pub sim: Option<SimSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub lambda: f64,
    pub theta_db: f64,
    pub link_distance: f64,
    pub alpha: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixSection {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiSection {
    /// Cancellation in dB (β = 10^(−x/10)) or the string "perfect".
    /// Omitted means perfect.
    pub cancellation: Option<Cancellation>,
    /// Propagation constant in dB; defaults to the −34 dB preset.
    pub k_db: Option<f64>,
    /// Alternative to k_db: derive K from antenna gains and carrier.
    pub antenna: Option<AntennaSection>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Cancellation {
    Keyword(String),
    Db(f64),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaSection {
    pub gain_tx: f64,
    pub gain_rx: f64,
    pub carrier_hz: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: String,
}

fn default_spacing() -> String {
    "linear".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub trials: u64,
    pub seed: u64,
    pub truncation_epsilon: Option<f64>,
    pub confidence_level: Option<f64>,
}

/// Which model parameter a sweep varies at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    ThetaDb,
    Lambda,
    LinkDistance,
    Alpha,
    BetaDb,
    P1,
    P2,
}

impl SweepVariable {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        Ok(match name {
            "theta_db" => Self::ThetaDb,
            "lambda" => Self::Lambda,
            "R" => Self::LinkDistance,
            "alpha" => Self::Alpha,
            "beta_db" => Self::BetaDb,
            "p1" => Self::P1,
            "p2" => Self::P2,
            other => {
                return Err(CliError::Config(format!(
                    "sweep.variable: \"{other}\" is not one of \
                     theta_db, lambda, R, alpha, beta_db, p1, p2"
                )))
            }
        })
    }

    /// Canonical column name for the swept variable.
    pub fn name(&self) -> &'static str {
        match self {
            Self::ThetaDb => "theta_db",
            Self::Lambda => "lambda",
            Self::LinkDistance => "R",
            Self::Alpha => "alpha",
            Self::BetaDb => "beta_db",
            Self::P1 => "p1",
            Self::P2 => "p2",
        }
    }
}

/// A fully resolved experiment: linear units, validated grid, ready to run.
#[derive(Debug)]
pub struct Experiment {
    pub network: NetworkConfig,
    pub mix: DuplexMix,
    pub si: SelfInterferenceModel,
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub sim: Option<SimConfig>,
    pub output: PathBuf,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn resolve(self) -> Result<Experiment, CliError> {
        let network = NetworkConfig::new(
            self.network.lambda,
            db_to_linear(self.network.theta_db),
            self.network.link_distance,
            self.network.alpha,
        )?;
        let mix = DuplexMix::new(self.mix.p0, self.mix.p1, self.mix.p2)?;
        let si = self.si.resolve()?;

        let variable = SweepVariable::parse(&self.sweep.variable)?;
        if self.sweep.count < 2 {
            return Err(CliError::Config(format!(
                "sweep.count: {} is below the minimum of 2",
                self.sweep.count
            )));
        }
        let log = match self.sweep.spacing.as_str() {
            "linear" => false,
            "log" => true,
            other => {
                return Err(CliError::Config(format!(
                    "sweep.spacing: \"{other}\" must be \"linear\" or \"log\""
                )))
            }
        };
        if log && !(self.sweep.start > 0.0 && self.sweep.stop > 0.0) {
            return Err(CliError::Config(
                "sweep.start/sweep.stop: log spacing requires positive endpoints".to_string(),
            ));
        }
        let grid = make_grid(self.sweep.start, self.sweep.stop, self.sweep.count, log);

        let sim = match self.sim {
            None => None,
            Some(s) => {
                let mut cfg = SimConfig::new(s.trials, s.seed)?;
                if let Some(eps) = s.truncation_epsilon {
                    cfg = cfg.with_truncation_epsilon(eps)?;
                }
                if let Some(conf) = s.confidence_level {
                    cfg = cfg.with_confidence_level(conf)?;
                }
                Some(cfg)
            }
        };

        Ok(Experiment {
            network,
            mix,
            si,
            variable,
            grid,
            sim,
            output: self.output,
        })
    }
}

impl SiSection {
    pub fn resolve(&self) -> Result<SelfInterferenceModel, CliError> {
        let beta = match &self.cancellation {
            None => 0.0,
            Some(Cancellation::Keyword(word)) if word == "perfect" => 0.0,
            Some(Cancellation::Keyword(word)) => {
                return Err(CliError::Config(format!(
                    "si.cancellation: \"{word}\" must be \"perfect\" or a dB value"
                )))
            }
            Some(Cancellation::Db(db)) => {
                if !db.is_finite() {
                    return Err(CliError::Config(
                        "si.cancellation: dB value must be finite".to_string(),
                    ));
                }
                db_to_linear(-db)
            }
        };
        match (&self.antenna, self.k_db) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "si: specify either k_db or antenna, not both".to_string(),
            )),
            (Some(a), None) => Ok(SelfInterferenceModel::from_antenna(
                beta,
                a.gain_tx,
                a.gain_rx,
                a.carrier_hz,
            )?),
            (None, k_db) => Ok(SelfInterferenceModel::new(
                beta,
                db_to_linear(k_db.unwrap_or(K_PRESET_DB)),
            )?),
        }
    }
}

/// Evenly spaced grid, linearly or in log space.
pub fn make_grid(start: f64, stop: f64, count: usize, log: bool) -> Vec<f64> {
    let (lo, hi) = if log {
        (start.ln(), stop.ln())
    } else {
        (start, stop)
    };
    (0..count)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (count - 1) as f64;
            if log {
                t.exp()
            } else {
                t
            }
        })
        .collect()
}

/// Instantiates the model at one grid point of the swept variable.
pub fn at_grid_point(
    exp: &Experiment,
    value: f64,
) -> Result<(NetworkConfig, DuplexMix, SelfInterferenceModel), CliError> {
    let n = &exp.network;
    let (network, mix, si) = match exp.variable {
        SweepVariable::ThetaDb => (n.with_theta(db_to_linear(value))?, exp.mix, exp.si),
        SweepVariable::Lambda => (
            NetworkConfig::new(value, n.theta, n.link_distance, n.alpha)?,
            exp.mix,
            exp.si,
        ),
        SweepVariable::LinkDistance => (
            NetworkConfig::new(n.lambda, n.theta, value, n.alpha)?,
            exp.mix,
            exp.si,
        ),
        SweepVariable::Alpha => (
            NetworkConfig::new(n.lambda, n.theta, n.link_distance, value)?,
            exp.mix,
            exp.si,
        ),
        SweepVariable::BetaDb => (
            *n,
            exp.mix,
            SelfInterferenceModel::new(db_to_linear(value), exp.si.k)?,
        ),
        SweepVariable::P1 => (
            *n,
            DuplexMix::new(1.0 - value - exp.mix.p2, value, exp.mix.p2)?,
            exp.si,
        ),
        SweepVariable::P2 => (
            *n,
            DuplexMix::new(1.0 - exp.mix.p1 - value, exp.mix.p1, value)?,
            exp.si,
        ),
    };
    Ok((network, mix, si))
}
