use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use hnf_core::normalform::{
    algorithm1, cancellation_check, check_nonresonance, NetworkSystem, TransformSeries,
};
use hnf_core::phasered::polar_reduce;
use hnf_core::recover::{
    build_library, central_difference, extract_phase_peaks, extract_phase_polar, fit_slopes,
    fit_slow_phase, lasso, lasso_auto, per_cycle_error, savitzky_golay, stlsq, triplet_amplitude,
    window_samples, BasisLibrary, FitResult, LassoOptions, PhaseSeries, SlowFitOptions,
};
use hnf_core::simkit::{
    fit_sqrt_law, initial_order, integrate_if_ring, integrate_network, locking_boundary,
    sweep_sync_tongue, ComplexTrajectory, RealTrajectory, TongueCell, TongueSweep,
};
use log::info;
use serde::{Deserialize, Serialize};

use crate::config::{Method, Recovery, Simulation, Target};
use crate::svg;
use crate::Failure;

/// Everything a stage needs to know.
pub struct Context {
    pub target: Target,
    pub out: PathBuf,
    pub seed: u64,
    pub eps_res: Option<f64>,
    pub simulation: Simulation,
    pub recovery: Recovery,
}

/// A number reported by a stage and the file it can be checked against.
#[derive(Clone, Debug, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub source: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StageOutput {
    pub artifacts: Vec<String>,
    pub metrics: Vec<Metric>,
}

impl StageOutput {
    fn metric(&mut self, name: impl Into<String>, value: f64, source: &str) {
        self.metrics.push(Metric {
            name: name.into(),
            value,
            source: source.into(),
        });
    }
}

impl Context {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write_json<T: Serialize>(
        &self,
        out: &mut StageOutput,
        name: &str,
        value: &T,
    ) -> Result<(), Failure> {
        write_json(&self.path(name), value)?;
        out.artifacts.push(name.into());
        Ok(())
    }

    fn write_text(&self, out: &mut StageOutput, name: &str, text: &str) -> Result<(), Failure> {
        std::fs::write(self.path(name), text)?;
        out.artifacts.push(name.into());
        Ok(())
    }

    fn system(&self) -> Result<Option<NetworkSystem>, Failure> {
        Ok(self.target.network()?.map(|mut sys| {
            if let Some(eps) = self.eps_res {
                sys.eps_res = eps;
            }
            sys
        }))
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Other(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| missing(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| missing(path, e))
}

fn missing(path: &Path, e: std::io::Error) -> Failure {
    if e.kind() == std::io::ErrorKind::NotFound {
        Failure::Missing(format!(
            "{} not found; run the previous stage first",
            path.display()
        ))
    } else {
        Failure::Other(format!("{}: {e}", path.display()))
    }
}

fn canonical(m: &[i64]) -> Vec<i64> {
    let s = m.iter().find(|&&x| x != 0).map_or(1, |&x| x.signum());
    m.iter().map(|x| x * s).collect()
}

fn fmt_combo(m: &[i64]) -> String {
    hnf_core::recover::Feature::Sin(m.to_vec())
        .to_string()
        .trim_start_matches("sin(")
        .trim_end_matches(')')
        .to_string()
}

// ---------------------------------------------------------------- derive

#[derive(Serialize)]
struct Transforms {
    truncation_degree: u32,
    p: Vec<String>,
    q: Vec<String>,
}

pub fn derive(ctx: &Context) -> Result<StageOutput, Failure> {
    let mut out = StageOutput::default();
    let Some(sys) = ctx.system()? else {
        info!(
            "{} has no polynomial network; nothing to derive",
            ctx.target.name()
        );
        return Ok(out);
    };
    let eps = sys.eps_res;
    ctx.write_json(&mut out, "system.json", &sys.to_config())?;

    let report = check_nonresonance(&sys, eps);
    ctx.write_json(&mut out, "nonresonance.json", &report)?;
    if !report.passed() {
        let list: Vec<String> = report
            .failures()
            .map(|c| {
                format!(
                    "  {} on edge {} <- {}: {:+.4} (eps_res {eps})",
                    c.monomial,
                    c.k + 1,
                    c.l + 1,
                    c.value
                )
            })
            .collect();
        return Err(Failure::Resonance(format!(
            "pairwise resonance, the near-identity transform does not exist:\n{}",
            list.join("\n")
        )));
    }
    out.metric("nonresonance_margin", report.margin(), "nonresonance.json");

    let hn = algorithm1(&sys, eps)?;
    ctx.write_json(&mut out, "hypernetwork.json", &hn)?;
    out.metric(
        "hyperedges",
        hn.hyperedges.len() as f64,
        "hypernetwork.json",
    );

    let ts = TransformSeries::derive(&sys, eps)?;
    let transforms = Transforms {
        truncation_degree: ts.truncation_degree,
        p: ts.p.iter().map(|p| p.to_string()).collect(),
        q: ts.q.iter().map(|q| q.to_string()).collect(),
    };
    ctx.write_json(&mut out, "transforms.json", &transforms)?;

    let cancel = cancellation_check(&sys, eps, 5)?;
    ctx.write_json(&mut out, "cancellation.json", &cancel)?;
    out.metric(
        "homological_residual_p",
        cancel.p_residual,
        "cancellation.json",
    );
    out.metric(
        "homological_residual_q",
        cancel.q_residual,
        "cancellation.json",
    );
    out.metric(
        "order1_residual",
        cancel.order1_residual,
        "cancellation.json",
    );

    let pm = polar_reduce(&hn, &sys)?;
    ctx.write_json(&mut out, "phase_model.json", &pm)?;

    let mut text = String::new();
    let _ = writeln!(
        text,
        "{}: {} nodes, alpha = {}, eps_res = {eps}",
        ctx.target.name(),
        sys.n(),
        sys.alpha
    );
    let _ = writeln!(
        text,
        "\nHyperedges (du_k/dt contains alpha^2 * coefficient * monomial)"
    );
    let _ = writeln!(
        text,
        "{:>4}  {:<20} {:>12} {:>12} {:>10}  phase",
        "node", "monomial", "re", "im", "detuning"
    );
    for e in hn.hyperedges.iter().chain(&hn.neutral) {
        let _ = writeln!(
            text,
            "{:>4}  {:<20} {:>12.5e} {:>12.5e} {:>10.4}  {}",
            e.target + 1,
            e.label,
            e.field_coefficient.re,
            e.field_coefficient.im,
            e.detuning,
            fmt_combo(&e.phase)
        );
    }
    let _ = writeln!(
        text,
        "\nPhase model (theta_dot_k = omega_k + shift_k + terms)"
    );
    for k in 0..pm.n {
        let _ = writeln!(
            text,
            "  node {}: omega {:.6} shift {:+.6e}",
            k + 1,
            pm.omega[k],
            pm.shift[k]
        );
        for t in pm.terms_of(k) {
            let phase = fmt_combo(&t.combo);
            let _ = writeln!(
                text,
                "    {:+.6e} sin({phase}) {:+.6e} cos({phase})",
                t.sin, t.cos
            );
        }
    }
    ctx.write_text(&mut out, "derivation.txt", &text)?;
    Ok(out)
}

// ---------------------------------------------------------------- simulate

#[derive(Serialize, Deserialize)]
struct RunRecord {
    file: String,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct SimulationRecord {
    target: String,
    t_end: f64,
    transient: f64,
    dt: f64,
    stride: usize,
    runs: Vec<RunRecord>,
}

pub fn simulate(ctx: &Context) -> Result<StageOutput, Failure> {
    let mut out = StageOutput::default();
    let s = ctx.simulation;
    let mut runs = Vec::new();
    match &ctx.target {
        Target::Tongue(base) => {
            let sweep = TongueSweep {
                t_end: s.t_end,
                transient: s.transient,
                dt: s.dt,
                stride: s.stride,
                ..base.clone()
            };
            info!(
                "sweeping {} tongue cells",
                sweep.deltas.len() * sweep.alphas.len()
            );
            let cells = sweep_sync_tongue(&sweep)?;
            let mut w = csv::Writer::from_path(ctx.path("tongue.csv"))?;
            for c in &cells {
                w.serialize(c)?;
            }
            w.flush()?;
            out.artifacts.push("tongue.csv".into());
            out.metric(
                "locked_cells",
                cells.iter().filter(|c| c.locked).count() as f64,
                "tongue.csv",
            );
        }
        Target::IfRing(cfg) => {
            let tr = integrate_if_ring(cfg, s.t_end, s.dt, s.stride)?;
            tr.write_csv(BufWriter::new(File::create(ctx.path("v.csv"))?))?;
            out.artifacts.push("v.csv".into());
            runs.push(RunRecord {
                file: "v.csv".into(),
                seed: ctx.seed,
            });
        }
        Target::Network { .. } | Target::MeanField(_) => {
            let sys = ctx.system()?.expect("network target");
            let n = sys.n();
            let radii = match &ctx.target {
                Target::MeanField(_) => vec![0.3; n],
                _ => (0..n)
                    .map(|k| sys.limit_cycle_radius(k))
                    .collect::<Result<_, _>>()?,
            };
            for r in 0..s.runs {
                let seed = ctx.seed + r as u64;
                let z0: Vec<_> = initial_order(seed, n, 1.0)
                    .iter()
                    .zip(&radii)
                    .map(|(z, a)| z * a)
                    .collect();
                info!("run {} of {}: {} time units", r + 1, s.runs, s.t_end);
                let tr = integrate_network(&sys, &z0, s.t_end, s.dt, s.stride)?;
                let file = format!("trajectory-{r}.csv");
                tr.write_csv(BufWriter::new(File::create(ctx.path(&file))?))?;
                let settled = tr.after(s.transient);
                for k in 0..n {
                    let mean = settled.samples.iter().map(|z| z[k].norm()).sum::<f64>()
                        / settled.len().max(1) as f64;
                    out.metric(format!("run{r}_mean_amplitude_{}", k + 1), mean, &file);
                }
                out.artifacts.push(file.clone());
                runs.push(RunRecord { file, seed });
            }
        }
    }
    let record = SimulationRecord {
        target: ctx.target.name().into(),
        t_end: s.t_end,
        transient: s.transient,
        dt: s.dt,
        stride: s.stride,
        runs,
    };
    ctx.write_json(&mut out, "simulation.json", &record)?;
    Ok(out)
}

// ---------------------------------------------------------------- recover

#[derive(Serialize)]
struct Term {
    feature: String,
    coefficient: f64,
}

#[derive(Serialize)]
struct NodeEquation {
    node: usize,
    mse: f64,
    terms: Vec<Term>,
}

#[derive(Serialize)]
struct Equations {
    method: String,
    penalty: f64,
    slow_phases: Vec<String>,
    nodes: Vec<NodeEquation>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    amplitudes: BTreeMap<String, f64>,
}

fn node_equation(k: usize, fit: &FitResult) -> NodeEquation {
    NodeEquation {
        node: k + 1,
        mse: fit.mse,
        terms: fit
            .support
            .iter()
            .map(|&j| Term {
                feature: fit.features[j].to_string(),
                coefficient: fit.coefficients[j],
            })
            .collect(),
    }
}

fn slow_combos(ctx: &Context, sys: &NetworkSystem) -> Result<Vec<Vec<i64>>, Failure> {
    if let Some(c) = &ctx.recovery.slow_phases {
        return Ok(c.clone());
    }
    let hn = algorithm1(sys, sys.eps_res)?;
    let mut combos: Vec<Vec<i64>> = Vec::new();
    for e in &hn.hyperedges {
        let c = canonical(&e.phase);
        if !combos.contains(&c) {
            combos.push(c);
        }
    }
    if combos.is_empty() {
        return Err(Failure::Other(
            "the derived normal form has no slow phases to recover".into(),
        ));
    }
    Ok(combos)
}

pub fn recover(ctx: &Context) -> Result<StageOutput, Failure> {
    match &ctx.target {
        Target::Tongue(_) => recover_tongue(ctx),
        Target::IfRing(_) => recover_if(ctx),
        _ => recover_network(ctx),
    }
}

fn recover_tongue(ctx: &Context) -> Result<StageOutput, Failure> {
    let mut out = StageOutput::default();
    let cells = read_tongue(&ctx.path("tongue.csv"))?;
    let boundary = locking_boundary(&cells);
    if boundary.len() < 2 {
        return Err(Failure::Other(format!(
            "only {} detunings lock inside the alpha grid",
            boundary.len()
        )));
    }
    let (c, r2) = fit_sqrt_law(&boundary);
    #[derive(Serialize)]
    struct TongueFit {
        boundary: Vec<(f64, f64)>,
        c: f64,
        r_squared: f64,
    }
    ctx.write_json(
        &mut out,
        "tongue_fit.json",
        &TongueFit {
            boundary,
            c,
            r_squared: r2,
        },
    )?;
    out.metric("sqrt_law_c", c, "tongue_fit.json");
    out.metric("sqrt_law_r_squared", r2, "tongue_fit.json");
    Ok(out)
}

fn read_tongue(path: &Path) -> Result<Vec<TongueCell>, Failure> {
    let mut r = csv::Reader::from_reader(open(path)?);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

fn load_runs(ctx: &Context) -> Result<SimulationRecord, Failure> {
    let record: SimulationRecord = read_json(&ctx.path("simulation.json"))?;
    if record.target != ctx.target.name() {
        return Err(Failure::Input(format!(
            "{} holds a {} simulation, not {}",
            ctx.path("simulation.json").display(),
            record.target,
            ctx.target.name()
        )));
    }
    if record.runs.is_empty() {
        return Err(Failure::Missing("simulation.json lists no runs".into()));
    }
    Ok(record)
}

fn fit_node(ctx: &Context, lib: &BasisLibrary, target: &[f64]) -> Result<FitResult, Failure> {
    let r = &ctx.recovery;
    Ok(match r.method {
        Method::Stlsq => stlsq(lib, target, r.threshold)?,
        Method::Lasso => lasso(
            lib,
            target,
            r.threshold,
            &LassoOptions {
                standardize: false,
                ..LassoOptions::default()
            },
        )?,
    })
}

fn recover_network(ctx: &Context) -> Result<StageOutput, Failure> {
    let mut out = StageOutput::default();
    let sys = ctx.system()?.expect("network target");
    let record = load_runs(ctx)?;
    let combos = slow_combos(ctx, &sys)?;
    let n = sys.n();

    let mut series: Vec<PhaseSeries> = Vec::new();
    for run in &record.runs {
        let tr = ComplexTrajectory::read_csv(open(&ctx.path(&run.file))?)?;
        series.push(extract_phase_polar(&tr)?.after(record.transient));
    }

    // per-node phase equations on the pooled runs
    let mut libs = Vec::new();
    let mut targets = vec![Vec::new(); n];
    for ps in &series {
        libs.push(build_library(ps, &combos, 0)?);
        for (k, t) in targets.iter_mut().enumerate() {
            t.extend(central_difference(&ps.phases[k], ps.dt));
        }
    }
    let lib = BasisLibrary::stack(&libs)?;
    let mut nodes = Vec::new();
    for (k, target) in targets.iter().enumerate() {
        let fit = fit_node(ctx, &lib, target)?;
        out.metric(
            format!("support_size_{}", k + 1),
            fit.support.len() as f64,
            "equations.json",
        );
        nodes.push(node_equation(k, &fit));
    }
    let equations = Equations {
        method: format!("{:?}", ctx.recovery.method).to_lowercase(),
        penalty: ctx.recovery.threshold,
        slow_phases: combos.iter().map(|m| fmt_combo(m)).collect(),
        nodes,
        amplitudes: BTreeMap::new(),
    };
    ctx.write_json(&mut out, "equations.json", &equations)?;
    if !ctx.recovery.predict {
        return Ok(out);
    }

    // slow-phase vector field and its reproduction of the first run
    let ps = &series[0];
    let factor = ((ctx.recovery.fit_dt / ps.dt).round() as usize).max(1);
    let phases: Vec<Vec<f64>> = ps
        .phases
        .iter()
        .map(|p| p.iter().step_by(factor).copied().collect())
        .collect();
    let coarse = PhaseSeries {
        dt: ps.dt * factor as f64,
        phases,
        ..ps.clone()
    };
    let phis: Vec<Vec<f64>> = combos
        .iter()
        .map(|m| coarse.combination(m))
        .collect::<Result<_, _>>()?;
    let fit = fit_slow_phase(&phis, coarse.dt, &combos, &SlowFitOptions::default())?;
    let errors: Vec<Vec<f64>> = phis
        .iter()
        .zip(&fit.predicted)
        .map(|(d, p)| per_cycle_error(d, p))
        .collect();
    #[derive(Serialize)]
    struct SlowFitRecord<'a> {
        slow_phases: Vec<String>,
        combos: &'a [Vec<i64>],
        dt: f64,
        fit: &'a hnf_core::recover::SlowPhaseFit,
        per_cycle_error: &'a [Vec<f64>],
    }
    let mut lean = fit.clone();
    lean.predicted.clear();
    ctx.write_json(
        &mut out,
        "slow_fit.json",
        &SlowFitRecord {
            slow_phases: equations.slow_phases.clone(),
            combos: &combos,
            dt: coarse.dt,
            fit: &lean,
            per_cycle_error: &errors,
        },
    )?;
    for (j, e) in errors.iter().enumerate() {
        out.metric(
            format!("max_per_cycle_error_phi{}", j + 1),
            e.iter().copied().fold(0.0, f64::max),
            "slow_fit.json",
        );
        let cycles = (phis[j][phis[j].len() - 1] - phis[j][0]).abs() / TAU;
        out.metric(format!("cycles_phi{}", j + 1), cycles, "prediction.csv");
    }

    let mut w = csv::Writer::from_path(ctx.path("prediction.csv"))?;
    let mut header = vec!["t".to_string()];
    for j in 0..combos.len() {
        header.push(format!("phi{}", j + 1));
        header.push(format!("phi{}_pred", j + 1));
    }
    w.write_record(&header)?;
    for i in 0..coarse.len() {
        let mut row = vec![coarse.time(i).to_string()];
        for j in 0..combos.len() {
            row.push(phis[j][i].to_string());
            row.push(fit.predicted[j][i].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    out.artifacts.push("prediction.csv".into());
    Ok(out)
}

fn recover_if(ctx: &Context) -> Result<StageOutput, Failure> {
    let mut out = StageOutput::default();
    let record = load_runs(ctx)?;
    let tr = RealTrajectory::read_csv(open(&ctx.path(&record.runs[0].file))?)?;
    let ps = extract_phase_peaks(&tr.after(record.transient))?;
    let base = ctx
        .recovery
        .slow_phases
        .clone()
        .unwrap_or_else(|| vec![vec![1, -1, 1, 0], vec![1, 0, 1, -1]]);
    let mut combos = base.clone();
    combos.extend(
        base.iter()
            .map(|m| m.iter().map(|x| 2 * x).collect::<Vec<_>>()),
    );

    let span = (ps.len().max(2) - 1) as f64 * ps.dt;
    for (j, m) in base.iter().enumerate() {
        let p = ps.combination(m)?;
        let slips = (p[p.len() - 1] - p[0]).abs() / TAU / span * 500.0;
        out.metric(format!("slips_per_500_phi{}", j + 1), slips, "phases.csv");
    }
    let freq = fit_slopes(&ps);
    for (k, f) in freq.iter().enumerate() {
        out.metric(
            format!("frequency_ratio_{}", k + 1),
            f / freq[0],
            "phases.csv",
        );
    }

    let lib = build_library(&ps, &combos, 2)?;
    let window = window_samples(125.0, ps.dt);
    let mut nodes = Vec::new();
    let mut amplitudes = BTreeMap::new();
    for k in 0..ps.n() {
        let v = savitzky_golay(&central_difference(&ps.phases[k], ps.dt), window, 1)?;
        let fit = lasso_auto(&lib, &v, 1.4, &LassoOptions::default())?;
        for (j, m) in base.iter().enumerate() {
            let h =
                triplet_amplitude(&fit, m).hypot(triplet_amplitude(&fit, &combos[base.len() + j]));
            let name = format!("H_{}^{}", j + 1, k + 1);
            out.metric(name.clone(), h, "equations.json");
            amplitudes.insert(name, h);
        }
        nodes.push(node_equation(k, &fit));
    }
    let equations = Equations {
        method: "lasso-auto".into(),
        penalty: 1.4,
        slow_phases: base.iter().map(|m| fmt_combo(m)).collect(),
        nodes,
        amplitudes,
    };
    ctx.write_json(&mut out, "equations.json", &equations)?;

    let mut w = csv::Writer::from_path(ctx.path("phases.csv"))?;
    let mut header = vec!["t".to_string()];
    header.extend((1..=ps.n()).map(|k| format!("theta{k}")));
    w.write_record(&header)?;
    for i in 0..ps.len() {
        let mut row = vec![ps.time(i).to_string()];
        row.extend(ps.phases.iter().map(|p| p[i].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    out.artifacts.push("phases.csv".into());
    Ok(out)
}

// ---------------------------------------------------------------- report

#[derive(Deserialize)]
struct EquationsIn {
    nodes: Vec<NodeIn>,
}

#[derive(Deserialize)]
struct NodeIn {
    node: usize,
    terms: Vec<TermIn>,
}

#[derive(Deserialize)]
struct TermIn {
    feature: String,
    coefficient: f64,
}

/// Figures and tables from whatever artifacts exist in `dir`.
pub fn report(dir: &Path) -> Result<StageOutput, Failure> {
    let mut out = StageOutput::default();
    let mut found = false;

    let prediction = dir.join("prediction.csv");
    if prediction.exists() {
        found = true;
        let mut r = csv::Reader::from_reader(open(&prediction)?);
        let headers: Vec<String> = r.headers()?.iter().map(String::from).collect();
        let mut cols = vec![Vec::new(); headers.len()];
        for row in r.records() {
            for (c, v) in cols.iter_mut().zip(row?.iter()) {
                c.push(
                    v.parse::<f64>()
                        .map_err(|e| Failure::Input(format!("prediction.csv: {e}")))?,
                );
            }
        }
        let series: Vec<svg::Series> = (1..headers.len())
            .map(|j| svg::Series {
                label: headers[j].clone(),
                x: cols[0].clone(),
                y: cols[j].clone(),
                dashed: headers[j].ends_with("_pred"),
                color: (j - 1) / 2,
            })
            .collect();
        std::fs::write(
            dir.join("slow_phases.svg"),
            svg::lines(
                "Slow phases: data (solid) and fitted model (dashed)",
                "t",
                "phase",
                &series,
            ),
        )?;
        out.artifacts.push("slow_phases.svg".into());
    }

    let tongue = dir.join("tongue.csv");
    if tongue.exists() {
        found = true;
        let cells = read_tongue(&tongue)?;
        let mut w = csv::Writer::from_path(dir.join("tongue_heatmap.csv"))?;
        w.write_record(["delta", "alpha", "error"])?;
        for c in &cells {
            w.write_record([
                c.delta.to_string(),
                c.alpha.to_string(),
                c.error.to_string(),
            ])?;
        }
        w.flush()?;
        let grid: Vec<(f64, f64, f64)> =
            cells.iter().map(|c| (c.delta, c.alpha, c.error)).collect();
        std::fs::write(
            dir.join("tongue.svg"),
            svg::heatmap(
                "Phase-locking error (dark = locked)",
                "delta",
                "alpha",
                &grid,
            ),
        )?;
        out.artifacts.push("tongue_heatmap.csv".into());
        out.artifacts.push("tongue.svg".into());
    }

    let equations = dir.join("equations.json");
    if equations.exists() {
        found = true;
        let eq: EquationsIn = read_json(&equations)?;
        let mut w = csv::Writer::from_path(dir.join("coefficients.csv"))?;
        w.write_record(["node", "feature", "coefficient"])?;
        let mut bars = Vec::new();
        for node in &eq.nodes {
            for t in &node.terms {
                w.write_record([
                    node.node.to_string(),
                    t.feature.clone(),
                    t.coefficient.to_string(),
                ])?;
                if t.feature != "1" && !t.feature.starts_with("t^") {
                    bars.push((format!("node {}: {}", node.node, t.feature), t.coefficient));
                }
            }
        }
        w.flush()?;
        std::fs::write(
            dir.join("coefficients.svg"),
            svg::bars("Recovered coupling coefficients", &bars),
        )?;
        out.artifacts.push("coefficients.csv".into());
        out.artifacts.push("coefficients.svg".into());
    }

    if !found {
        return Err(Failure::Missing(format!(
            "{} holds no prediction.csv, tongue.csv or equations.json to report on",
            dir.display()
        )));
    }
    Ok(out)
}
