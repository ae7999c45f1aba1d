//! JSON experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis::LocalSpin;
use crate::dynamics::{InitialState, Schedule};
use crate::error::{Error, Result};
use crate::hamiltonian::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Dynamics,
    DecayTimes,
    LevelRatio,
    Pairing,
    #[serde(rename = "pairing-vs-l")]
    PairingVsL,
    Correlations,
    ImbalanceDist,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Dynamics,
        Experiment::DecayTimes,
        Experiment::LevelRatio,
        Experiment::Pairing,
        Experiment::PairingVsL,
        Experiment::Correlations,
        Experiment::ImbalanceDist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Dynamics => "dynamics",
            Experiment::DecayTimes => "decay-times",
            Experiment::LevelRatio => "level-ratio",
            Experiment::Pairing => "pairing",
            Experiment::PairingVsL => "pairing-vs-l",
            Experiment::Correlations => "correlations",
            Experiment::ImbalanceDist => "imbalance-dist",
        }
    }

    /// Realizations per point when `n_disorder` is not given.
    pub fn default_n_disorder(self, length: usize) -> usize {
        let base = match self {
            Experiment::Correlations => 5120.0,
            _ => 20480.0,
        };
        let n = base * 2f64.powf(1.0 - length as f64 / 2.0);
        (n.round() as usize).max(1)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment {s:?}")))
    }
}

/// Sampling plan for `dynamics`; the horizon comes from the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScheduleConfig {
    Hybrid { dense: u64, per_decade: u32 },
    Strided { stride: u64 },
    Explicit { times: Vec<u64> },
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig::Hybrid { dense: 100, per_decade: 20 }
    }
}

impl ScheduleConfig {
    pub fn schedule(&self, horizon: u64) -> Schedule {
        match self {
            ScheduleConfig::Hybrid { dense, per_decade } => {
                Schedule::Hybrid { dense: *dense, per_decade: *per_decade, horizon }
            }
            ScheduleConfig::Strided { stride } => Schedule::Strided { stride: *stride, horizon },
            ScheduleConfig::Explicit { times } => Schedule::Explicit(times.clone()),
        }
    }
}

/// `hybrid:<dense>:<per_decade>`, `strided:<n>` or `explicit:<t0>,<t1>,...`.
impl FromStr for ScheduleConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse schedule {s:?}"));
        let mut parts = s.split(':');
        let kind = parts.next().ok_or_else(bad)?;
        let rest: Vec<&str> = parts.collect();
        match (kind, rest.as_slice()) {
            ("hybrid", [d, p]) => Ok(ScheduleConfig::Hybrid {
                dense: d.parse().map_err(|_| bad())?,
                per_decade: p.parse().map_err(|_| bad())?,
            }),
            ("strided", [n]) => Ok(ScheduleConfig::Strided { stride: n.parse().map_err(|_| bad())? }),
            ("explicit", [list]) => Ok(ScheduleConfig::Explicit {
                times: list.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?,
            }),
            _ => Err(bad()),
        }
    }
}

fn default_spin() -> LocalSpin {
    LocalSpin::Half
}
fn default_j() -> Vec<f64> {
    vec![0.1]
}
fn default_epsilon() -> Vec<f64> {
    vec![0.0]
}
fn default_alpha() -> Vec<f64> {
    vec![0.5]
}
fn default_v() -> f64 {
    ModelParams::DEFAULT_V
}
fn default_h() -> f64 {
    ModelParams::DEFAULT_H
}
fn default_initial_state() -> String {
    "neel".into()
}
fn default_horizon() -> u64 {
    10_000_000
}
fn default_output() -> PathBuf {
    PathBuf::from("results")
}
fn default_dim_cap() -> usize {
    16_000
}
fn default_local_dims() -> Vec<u32> {
    vec![2, 3, 4]
}
fn default_pilot() -> usize {
    16
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default = "default_spin")]
    pub spin: LocalSpin,
    pub lengths: Vec<usize>,
    #[serde(default = "default_j")]
    pub j: Vec<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: Vec<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default = "default_v")]
    pub v: f64,
    #[serde(default = "default_h")]
    pub h: f64,
    /// Realizations per grid point; `None` applies the size-dependent default.
    #[serde(default)]
    pub n_disorder: Option<usize>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_initial_state")]
    pub initial_state: String,
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    /// Decay-time stride; `None` picks it from a stride-1 pilot.
    #[serde(default)]
    pub stride: Option<u64>,
    /// Realizations used by the stride pilot.
    #[serde(default = "default_pilot")]
    pub pilot: usize,
    #[serde(default)]
    pub mutual_information: bool,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default = "default_dim_cap")]
    pub dim_cap: usize,
    /// Local dimensions for `imbalance-dist`.
    #[serde(default = "default_local_dims")]
    pub local_dims: Vec<u32>,
}

impl ExperimentConfig {
    /// A config with every optional key at its default.
    pub fn new(experiment: Experiment, lengths: Vec<usize>) -> Self {
        ExperimentConfig {
            experiment,
            spin: default_spin(),
            lengths,
            j: default_j(),
            epsilon: default_epsilon(),
            alpha: default_alpha(),
            v: default_v(),
            h: default_h(),
            n_disorder: None,
            master_seed: 0,
            initial_state: default_initial_state(),
            horizon: default_horizon(),
            schedule: ScheduleConfig::default(),
            stride: None,
            pilot: default_pilot(),
            mutual_information: false,
            output: default_output(),
            dim_cap: default_dim_cap(),
            local_dims: default_local_dims(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn n_disorder_for(&self, length: usize) -> usize {
        self.n_disorder.unwrap_or_else(|| self.experiment.default_n_disorder(length))
    }

    pub fn initial(&self) -> Result<InitialState> {
        self.initial_state.parse()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.lengths.is_empty() {
            return fail("lengths must not be empty".into());
        }
        if let Some(&l) = self.lengths.iter().find(|&&l| l < 2 || l % 2 != 0) {
            return fail(format!("length {l} is not an even integer >= 2"));
        }
        for (name, list) in [("j", &self.j), ("epsilon", &self.epsilon), ("alpha", &self.alpha)] {
            if list.is_empty() {
                return fail(format!("{name} must not be empty"));
            }
            if list.iter().any(|x| !x.is_finite()) {
                return fail(format!("{name} contains a non-finite value"));
            }
        }
        if self.n_disorder == Some(0) {
            return fail("n_disorder must be positive".into());
        }
        if self.experiment == Experiment::ImbalanceDist && self.local_dims.iter().any(|&d| d < 2) {
            return fail("local dimensions must be >= 2".into());
        }
        if self.experiment == Experiment::DecayTimes && (self.stride == Some(0) || self.pilot == 0) {
            return fail("stride and pilot must be positive".into());
        }
        if matches!(self.experiment, Experiment::Dynamics | Experiment::DecayTimes) {
            self.initial()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_size_rule() {
        assert_eq!(Experiment::LevelRatio.default_n_disorder(2), 20480);
        assert_eq!(Experiment::DecayTimes.default_n_disorder(12), 640);
        assert_eq!(Experiment::Correlations.default_n_disorder(10), 320);
        assert_eq!(Experiment::Dynamics.default_n_disorder(40), 1);
    }

    #[test]
    fn parse_minimal_and_reject_unknown() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "pairing-vs-l", "lengths": [6, 8]}"#).unwrap();
        assert_eq!(c.experiment, Experiment::PairingVsL);
        assert_eq!(c.v, 3.0);
        assert_eq!(c.n_disorder_for(8), 2560);
        assert!(ExperimentConfig::from_json(r#"{"experiment": "dynamics", "lengths": [6], "jj": [1]}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"experiment": "dynamics", "lengths": [5]}"#).is_err());
        let s = ExperimentConfig::from_json(r#"{"experiment": "dynamics", "lengths": [4], "spin": "1",
            "schedule": {"kind": "strided", "stride": 5}}"#)
        .unwrap();
        assert_eq!(s.spin, LocalSpin::One);
        assert_eq!(s.schedule, ScheduleConfig::Strided { stride: 5 });
    }

    #[test]
    fn round_trip() {
        let c = ExperimentConfig::new(Experiment::Correlations, vec![6]);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn schedule_strings() {
        assert_eq!("hybrid:10:5".parse::<ScheduleConfig>().unwrap(), ScheduleConfig::Hybrid { dense: 10, per_decade: 5 });
        assert_eq!("explicit:0,3,9".parse::<ScheduleConfig>().unwrap(), ScheduleConfig::Explicit { times: vec![0, 3, 9] });
        assert!("strided".parse::<ScheduleConfig>().is_err());
    }
}
