use std::path::Path;

use hnf_core::normalform::{NetworkSystem, SystemConfig};
use hnf_core::phasered::MeanFieldSpec;
use hnf_core::presets;
use hnf_core::simkit::{IfConfig, TongueSweep};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Derive,
    Simulate,
    Recover,
    Report,
}

pub const PIPELINE: [Stage; 4] = [
    Stage::Derive,
    Stage::Simulate,
    Stage::Recover,
    Stage::Report,
];

/// Integration settings; unset fields fall back to the preset defaults.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSettings {
    pub t_end: Option<f64>,
    pub transient: Option<f64>,
    pub dt: Option<f64>,
    pub stride: Option<usize>,
    /// Independent runs with consecutive seeds.
    pub runs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Stlsq,
    Lasso,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverySettings {
    /// Slow phases to fit; by default the phase combinations of the derived
    /// hyperedges.
    pub slow_phases: Option<Vec<Vec<i64>>>,
    pub method: Option<Method>,
    /// STLSQ threshold or LASSO penalty.
    pub threshold: Option<f64>,
    /// Sample spacing used for the slow-phase fit.
    pub fit_dt: Option<f64>,
    /// Fit and simulate the slow-phase vector field against the first run.
    pub predict: Option<bool>,
}

/// Contents of a `--config` file.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub preset: Option<String>,
    /// A custom oscillator network, used when no preset is given.
    pub system: Option<SystemConfig>,
    pub stages: Option<Vec<Stage>>,
    pub eps_res: Option<f64>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub simulation: SimulationSettings,
    #[serde(default)]
    pub recovery: RecoverySettings,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Missing(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Input(format!("config {}: {e}", path.display())))
    }

    /// Stages to run, checked to be a prefix of derive, simulate, recover, report.
    pub fn stages(&self) -> Result<Vec<Stage>, Failure> {
        let Some(stages) = &self.stages else {
            return Ok(PIPELINE.to_vec());
        };
        if stages.is_empty()
            || stages.len() > PIPELINE.len()
            || stages[..] != PIPELINE[..stages.len()]
        {
            return Err(Failure::Input(format!(
                "stages {stages:?} are not a prefix of derive, simulate, recover, report"
            )));
        }
        Ok(stages.clone())
    }
}

/// What a preset or config describes.
#[derive(Clone, Debug)]
pub enum Target {
    Network { name: String, system: NetworkSystem },
    Tongue(TongueSweep),
    MeanField(MeanFieldSpec),
    IfRing(IfConfig),
}

impl Target {
    pub fn resolve(cfg: &PipelineConfig, full_scale: bool) -> Result<Self, Failure> {
        match (cfg.preset.as_deref(), &cfg.system) {
            (Some(_), Some(_)) => Err(Failure::Input(
                "give either a preset or a system, not both".into(),
            )),
            (None, Some(sc)) => Ok(Target::Network {
                name: "custom".into(),
                system: NetworkSystem::from_config(sc)?,
            }),
            (Some("tongue"), None) => Ok(Target::Tongue(if full_scale {
                TongueSweep::full_scale()
            } else {
                TongueSweep::desk()
            })),
            (Some("meanfield"), None) => Ok(Target::MeanField(MeanFieldSpec::reference())),
            (Some("if-ring"), None) => Ok(Target::IfRing(IfConfig::reference())),
            (Some(name), None) => Ok(Target::Network {
                name: name.to_string(),
                system: presets::network(name)?,
            }),
            (None, None) => Err(Failure::Input(format!(
                "no system given: use --preset ({}) or --config",
                presets::NAMES.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Target::Network { name, .. } => name,
            Target::Tongue(_) => "tongue",
            Target::MeanField(_) => "meanfield",
            Target::IfRing(_) => "if-ring",
        }
    }

    /// The polynomial network behind the target, if it has one. The tongue
    /// sweep is represented by one cell of its grid.
    pub fn network(&self) -> Result<Option<NetworkSystem>, Failure> {
        Ok(match self {
            Target::Network { system, .. } => Some(system.clone()),
            Target::Tongue(_) => Some(presets::network("tongue")?),
            Target::MeanField(spec) => Some(spec.build()?),
            Target::IfRing(_) => None,
        })
    }
}

/// Integration settings after defaults have been applied.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Simulation {
    pub t_end: f64,
    pub transient: f64,
    pub dt: f64,
    pub stride: usize,
    pub runs: usize,
}

impl Simulation {
    pub fn resolve(target: &Target, s: &SimulationSettings, full_scale: bool) -> Self {
        let base = match target {
            Target::Network { .. } if full_scale => (20000.0, 10000.0, 0.01, 10, 1),
            Target::Network { .. } => (10000.0, 5000.0, 0.01, 10, 1),
            Target::Tongue(sw) => (sw.t_end, sw.transient, sw.dt, sw.stride, 1),
            Target::MeanField(_) => (25000.0, 5000.0, 0.01, 10, 5),
            Target::IfRing(_) => (20000.0, 0.0, 0.01, 5, 1),
        };
        Self {
            t_end: s.t_end.unwrap_or(base.0),
            transient: s.transient.unwrap_or(base.1),
            dt: s.dt.unwrap_or(base.2),
            stride: s.stride.unwrap_or(base.3),
            runs: s.runs.unwrap_or(base.4).max(1),
        }
    }
}

/// Recovery settings after defaults have been applied.
#[derive(Clone, Debug, Serialize)]
pub struct Recovery {
    pub slow_phases: Option<Vec<Vec<i64>>>,
    pub method: Method,
    pub threshold: f64,
    pub fit_dt: f64,
    pub predict: bool,
}

impl Recovery {
    pub fn resolve(target: &Target, r: &RecoverySettings) -> Self {
        let (method, threshold) = match target {
            Target::MeanField(_) => (Method::Lasso, 5e-3),
            _ => (Method::Stlsq, 1e-4),
        };
        Self {
            slow_phases: r.slow_phases.clone(),
            method: r.method.unwrap_or(method),
            threshold: r.threshold.unwrap_or(threshold),
            fit_dt: r.fit_dt.unwrap_or(1.0),
            // the two mean-field slow phases drift at almost the same rate,
            // which leaves their joint least-squares fit ill-conditioned
            predict: r.predict.unwrap_or(!matches!(target, Target::MeanField(_))),
        }
    }
}
