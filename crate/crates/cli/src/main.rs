//! `hnf`: derive the hypernetwork normal form of an oscillator network,
//! simulate it and recover the emergent phase equations from the data.

mod config;
mod stages;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hnf_core::Error;
use log::{error, info};
use serde::Serialize;

use config::{PipelineConfig, Recovery, Simulation, Stage, Target};
use stages::{Context, StageOutput};

#[derive(Parser)]
#[command(
    name = "hnf",
    version,
    about = "Hypernetwork normal forms of coupled oscillator networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON pipeline configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for all artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Reference system: ring4, chain3, sixring, tongue, meanfield or if-ring.
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Seed for initial conditions.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Long-run protocol instead of the desk-scale defaults.
    #[arg(long, global = true)]
    full_scale: bool,

    /// Resonance tolerance for the normal form.
    #[arg(long, global = true)]
    eps_res: Option<f64>,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Non-resonance check, transformations, hyperedges and phase model.
    Derive,
    /// Integrate the network (or tongue sweep, ensemble, IF ring).
    Simulate,
    /// Recover phase equations from a previous simulation.
    Recover,
    /// Run the configured stages in order and write index.json.
    Pipeline,
    /// Figures and tables from the artifacts in --out.
    Report,
}

/// Command failure, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Resonance(String),
    Missing(String),
    Input(String),
    Numerical(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Resonance(_) => 2,
            Failure::Missing(_) | Failure::Input(_) => 3,
            Failure::Numerical(_) => 4,
            Failure::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Resonance(m)
            | Failure::Missing(m)
            | Failure::Input(m)
            | Failure::Numerical(m)
            | Failure::Other(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::ResonantTerm { .. } => Failure::Resonance(msg),
            Error::Divergence { .. } | Error::StepUnderflow { .. } => Failure::Numerical(msg),
            Error::Io(io) => io.into(),
            Error::Config(_)
            | Error::Dimension { .. }
            | Error::NoLimitCycle { .. }
            | Error::Subcritical { .. }
            | Error::Index { .. }
            | Error::Json(_) => Failure::Input(msg),
            _ => Failure::Other(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::NotFound {
            Failure::Missing(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => io.into(),
            kind => Failure::Input(format!("{kind:?}")),
        }
    }
}

#[derive(Serialize)]
struct StageRecord {
    stage: Stage,
    #[serde(flatten)]
    output: StageOutput,
}

#[derive(Serialize)]
struct Index<'a> {
    target: &'a str,
    seed: u64,
    full_scale: bool,
    simulation: &'a Simulation,
    recovery: &'a Recovery,
    stages: &'a [StageRecord],
}

#[derive(Serialize)]
struct Status<'a> {
    ok: bool,
    completed: Vec<Stage>,
    failed_stage: Option<Stage>,
    exit_code: u8,
    error: Option<&'a str>,
}

fn context(cli: &Cli) -> Result<(Context, PipelineConfig, bool), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(p) = &cli.preset {
        cfg.preset = Some(p.clone());
        cfg.system = None;
    }
    let target = Target::resolve(&cfg, cli.full_scale)?;
    let simulation = Simulation::resolve(&target, &cfg.simulation, cli.full_scale);
    if !(simulation.dt > 0.0
        && simulation.t_end > simulation.transient
        && simulation.transient >= 0.0)
    {
        return Err(Failure::Input(format!(
            "need dt > 0 and 0 <= transient < t_end, got {simulation:?}"
        )));
    }
    let recovery = Recovery::resolve(&target, &cfg.recovery);
    let ctx = Context {
        target,
        out: cli.out.clone(),
        seed: cli.seed.or(cfg.seed).unwrap_or(1),
        eps_res: cli.eps_res.or(cfg.eps_res),
        simulation,
        recovery,
    };
    Ok((ctx, cfg, cli.full_scale))
}

fn run_stage(ctx: &Context, stage: Stage) -> Result<StageOutput, Failure> {
    info!("{stage:?} {}", ctx.target.name());
    match stage {
        Stage::Derive => stages::derive(ctx),
        Stage::Simulate => stages::simulate(ctx),
        Stage::Recover => stages::recover(ctx),
        Stage::Report => stages::report(&ctx.out),
    }
}

fn pipeline(ctx: &Context, cfg: &PipelineConfig, full_scale: bool) -> Result<(), Failure> {
    let plan = cfg.stages()?;
    let mut records = Vec::new();
    let mut failure = None;
    for &stage in &plan {
        match run_stage(ctx, stage) {
            Ok(output) => records.push(StageRecord { stage, output }),
            Err(f) => {
                failure = Some((stage, f));
                break;
            }
        }
    }
    let index = Index {
        target: ctx.target.name(),
        seed: ctx.seed,
        full_scale,
        simulation: &ctx.simulation,
        recovery: &ctx.recovery,
        stages: &records,
    };
    stages::write_json(&ctx.out.join("index.json"), &index)?;
    let status = Status {
        ok: failure.is_none(),
        completed: records.iter().map(|r| r.stage).collect(),
        failed_stage: failure.as_ref().map(|f| f.0),
        exit_code: failure.as_ref().map_or(0, |f| f.1.code()),
        error: failure.as_ref().map(|f| f.1.message()),
    };
    stages::write_json(&ctx.out.join("status.json"), &status)?;
    match failure {
        Some((_, f)) => Err(f),
        None => Ok(()),
    }
}

fn prepare(out: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(out)
        .map_err(|e| Failure::Other(format!("cannot create {}: {e}", out.display())))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.command == Command::Report {
        let output = stages::report(&cli.out)?;
        for a in &output.artifacts {
            println!("{}", cli.out.join(a).display());
        }
        return Ok(());
    }
    let (ctx, cfg, full_scale) = context(cli)?;
    prepare(&ctx.out)?;
    let stage = match cli.command {
        Command::Derive => Stage::Derive,
        Command::Simulate => Stage::Simulate,
        Command::Recover => Stage::Recover,
        Command::Pipeline => return pipeline(&ctx, &cfg, full_scale),
        Command::Report => unreachable!(),
    };
    let output = run_stage(&ctx, stage)?;
    for m in &output.metrics {
        println!("{:<32} {:>14.6e}  ({})", m.name, m.value, m.source);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            error!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
