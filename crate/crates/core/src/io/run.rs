use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

use super::config::{Config, ConfigError};
use super::emit::{scene, write_csv, write_json};
use crate::curve::MarkedCurve;
use crate::floer::{check_stability, class_connector, jordan_holder, LagClass, StabilityReport};
use crate::flow::{formula_disagreement, run_observed, FlowReport, FlowState, Verdict};
use crate::geometry::{period_and_phase, phase_profile, weighted_volume, PeriodPhase};
use crate::numerics::Numerics;
use crate::polynomial::{ComplexPoly, C};
use crate::slag::{local_model_curve, slag_atlas, slag_connect, slag_shoot, Connector};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("writing outputs: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Compute(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 4,
            RunError::Io(_) | RunError::Compute(_) => 3,
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Compute(e.to_string())
}

fn problem(cfg: &Config) -> Result<(ComplexPoly, MarkedCurve), RunError> {
    let invalid = |message: String| RunError::Config(ConfigError::Invalid { path: "config".into(), message });
    let p = cfg.poly().map_err(|e| invalid(format!("polynomial: {e}")))?;
    let c = cfg.curve(&p).map_err(|e| invalid(format!("initial_curve: {e}")))?;
    Ok((p, c))
}

/// Phase data of one final curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalPiece {
    pub left_root: Option<usize>,
    pub right_root: Option<usize>,
    pub phase: Option<PeriodPhase>,
    pub sup_theta: f64,
    pub inf_theta: f64,
    pub weighted_volume: f64,
}

impl FinalPiece {
    pub fn of(curve: &MarkedCurve, p: &ComplexPoly, n: usize) -> Result<FinalPiece, RunError> {
        let prof = phase_profile(curve, p, n).map_err(compute)?;
        let pinned = curve.left_root.is_some() && curve.right_root.is_some();
        Ok(FinalPiece {
            left_root: curve.left_root,
            right_root: curve.right_root,
            phase: if pinned { period_and_phase(curve, p, n).ok() } else { None },
            sup_theta: prof.sup,
            inf_theta: prof.inf,
            weighted_volume: weighted_volume(curve, p, n),
        })
    }
}

/// Contents of `report.json` for a flow run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRunReport {
    pub config: Config,
    pub verdict: Verdict,
    pub finals: Vec<FinalPiece>,
    /// Stability of the initial curve; `None` when it could not be evaluated.
    pub stability: Option<StabilityReport>,
    pub flow: FlowReport,
}

impl FlowRunReport {
    /// 0 when every leaf converged or ran out of time, 2 after a surgery,
    /// 3 when any leaf failed to step.
    pub fn exit_code(&self) -> i32 {
        if self.flow.leaf_verdicts().contains(&Verdict::StepFailure) {
            3
        } else if matches!(self.verdict, Verdict::SplitAt { .. }) {
            2
        } else {
            0
        }
    }
}

/// Constant-phase connectors of the chord classes between all root pairs.
pub fn reference_connectors(p: &ComplexPoly, n: usize, num: &Numerics) -> Vec<Connector> {
    let mut out = Vec::new();
    for a in 0..p.degree() {
        for b in a + 1..p.degree() {
            if let Some(c) = LagClass::chord(p, n, a, b).ok().and_then(|cl| class_connector(&cl, p, num)) {
                out.push(c);
            }
        }
    }
    out
}

/// Runs the flow and writes `report.json`, `timeseries.csv`,
/// `timeseries_piece_%d.csv`, `snap_%06d.svg` and `final_curve_%d.json`.
pub fn flow_command(cfg: &Config, out: &Path) -> Result<FlowRunReport, RunError> {
    let (p, curve) = problem(cfg)?;
    let n = cfg.dimension;
    std::fs::create_dir_all(out)?;
    let refs = if cfg.output.reference_connectors { reference_connectors(&p, n, &cfg.numerics) } else { Vec::new() };
    let ref_pts: Vec<&[C]> = refs.iter().map(|c| c.curve.points.as_slice()).collect();
    let every = cfg.output.snapshot_every;
    let mut steps = 0usize;
    let mut last_snap = None;
    let mut io_error = None;
    let mut snap = |state: &FlowState, _dt: f64| {
        steps += 1;
        if every > 0 && steps % every == 0 && io_error.is_none() {
            let caption = format!("tau = {:.6}", state.curve.time);
            let svg = scene(p.roots(), &[&state.curve.points], &ref_pts, &caption);
            if let Err(e) = std::fs::write(out.join(format!("snap_{steps:06}.svg")), svg) {
                io_error = Some(e);
            }
            last_snap = Some(steps);
        }
    };
    let (report, finals) = run_observed(&curve, &p, n, &cfg.numerics, &mut snap).map_err(compute)?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    if every > 0 && steps > 0 && last_snap != Some(steps) {
        let pts: Vec<&[C]> = finals.iter().map(|c| c.points.as_slice()).collect();
        let caption = format!("final, tau = {:.6}", finals.iter().map(|c| c.time).fold(0.0, f64::max));
        std::fs::write(out.join(format!("snap_{steps:06}.svg")), scene(p.roots(), &pts, &ref_pts, &caption))?;
    }
    write_csv(&out.join("timeseries.csv"), &report.series)?;
    for (i, piece) in report.pieces.iter().enumerate() {
        write_csv(&out.join(format!("timeseries_piece_{i}.csv")), &piece.series)?;
    }
    for (i, c) in finals.iter().enumerate() {
        write_json(&out.join(format!("final_curve_{i}.json")), c)?;
    }
    let stability = check_stability(&curve, &p, n, cfg.numerics.winding_bound, &cfg.numerics).ok();
    let finals = finals.iter().map(|c| FinalPiece::of(c, &p, n)).collect::<Result<_, _>>()?;
    let run = FlowRunReport { config: cfg.clone(), verdict: report.verdict, finals, stability, flow: report };
    write_json(&out.join("report.json"), &run)?;
    Ok(run)
}

/// JSON emitted by the `slag` subcommands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlagOutput {
    pub curve: MarkedCurve,
    pub phi_star: f64,
    pub branch: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub captured: Option<usize>,
}

/// Shoots from `slag.root` at phase `slag.phi`; writes `shoot.json` and
/// `shoot.svg`.
pub fn shoot_command(cfg: &Config, out: &Path) -> Result<SlagOutput, RunError> {
    let (p, _) = problem(cfg)?;
    let s = &cfg.slag;
    let max_length = s.max_length.unwrap_or_else(|| 4.0 * diameter(&p));
    let shot = slag_shoot(&p, cfg.dimension, s.root, s.phi, s.branch, max_length, &cfg.numerics).map_err(compute)?;
    std::fs::create_dir_all(out)?;
    let caption = format!("phi = {:.6}, branch {}", shot.phi, shot.branch);
    std::fs::write(out.join("shoot.svg"), scene(p.roots(), &[&shot.curve.points], &[], &caption))?;
    let o = SlagOutput { curve: shot.curve, phi_star: shot.phi, branch: shot.branch, captured: shot.captured };
    write_json(&out.join("shoot.json"), &o)?;
    Ok(o)
}

fn diameter(p: &ComplexPoly) -> f64 {
    let r = p.roots();
    let mut d: f64 = 1.0;
    for a in r {
        for b in r {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Connects `slag.root` to `slag.target` within `slag.window`; writes
/// `connector.json`, plus `atlas.json` and `atlas.svg` with every connector
/// found over the phase grid.
pub fn connect_command(cfg: &Config, out: &Path) -> Result<SlagOutput, RunError> {
    let (p, _) = problem(cfg)?;
    let s = &cfg.slag;
    let n = cfg.dimension;
    let conn = slag_connect(&p, n, s.root, s.target, s.window, s.branch, &cfg.numerics).map_err(compute)?;
    std::fs::create_dir_all(out)?;
    let atlas: Vec<SlagOutput> = slag_atlas(&p, n, s.atlas_grid, &cfg.numerics)
        .into_iter()
        .map(|c| SlagOutput { curve: c.curve, phi_star: c.phi_star, branch: c.branch, captured: None })
        .collect();
    let pts: Vec<&[C]> = atlas.iter().map(|c| c.curve.points.as_slice()).collect();
    let caption = format!("n = {n}, {} connectors", atlas.len());
    std::fs::write(out.join("atlas.svg"), scene(p.roots(), &pts, &[], &caption))?;
    write_json(&out.join("atlas.json"), &atlas)?;
    let o = SlagOutput { curve: conn.curve, phi_star: conn.phi_star, branch: conn.branch, captured: None };
    write_json(&out.join("connector.json"), &o)?;
    Ok(o)
}

/// Stability of the initial curve; writes `stability.json`.
pub fn stability_command(cfg: &Config, out: &Path) -> Result<StabilityReport, RunError> {
    let (p, curve) = problem(cfg)?;
    let r = check_stability(&curve, &p, cfg.dimension, cfg.numerics.winding_bound, &cfg.numerics).map_err(compute)?;
    std::fs::create_dir_all(out)?;
    write_json(&out.join("stability.json"), &r)?;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub class: LagClass,
    pub winding_bound: usize,
    /// Graded pieces in filtration order.
    pub pieces: Vec<LagClass>,
}

/// Jordan–Hölder decomposition of the initial curve's class; writes
/// `decompose.json`.
pub fn decompose_command(cfg: &Config, out: &Path) -> Result<Decomposition, RunError> {
    let (p, curve) = problem(cfg)?;
    let class = LagClass::of_curve(&curve, &p, cfg.dimension).map_err(compute)?;
    let bound = cfg.numerics.winding_bound;
    let pieces = jordan_holder(&class, &p, bound, &cfg.numerics).map_err(compute)?;
    std::fs::create_dir_all(out)?;
    let d = Decomposition { class, winding_bound: bound, pieces };
    write_json(&out.join("decompose.json"), &d)?;
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckSample {
    pub dimension: usize,
    pub roots: Vec<C>,
    pub control: [C; 4],
    pub disagreement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub seed: u64,
    pub max_relative_disagreement: f64,
    pub samples: Vec<CrosscheckSample>,
}

/// A random polynomial of degree 2 to 5 and a cubic Bezier curve staying at
/// least `clearance` from every root.
pub fn random_sample(rng: &mut StdRng, points: usize, clearance: f64) -> (ComplexPoly, MarkedCurve, [C; 4]) {
    let num = Numerics::default();
    loop {
        let degree = rng.gen_range(2..=5);
        let mut z = || C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let roots: Vec<C> = (0..degree).map(|_| z()).collect();
        let control = [z(), z(), z(), z()];
        let Ok(p) = ComplexPoly::from_roots(&roots, C::new(1.0, 0.0), &num) else {
            continue;
        };
        let curve = MarkedCurve::bezier(control, points);
        let near = curve.points.iter().any(|&w| p.nearest_root(w).0 < clearance);
        let spacing_ok = curve.points.windows(2).all(|w| (w[1] - w[0]).norm() > 1e-4);
        if !near && spacing_ok {
            return (p, curve, control);
        }
    }
}

/// Agreement of the three velocity formulas on random curves; writes
/// `crosscheck.json`.
pub fn crosscheck_command(cfg: &Config, seed: u64, out: &Path) -> Result<CrosscheckReport, RunError> {
    let spec = &cfg.crosscheck;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(spec.samples);
    for i in 0..spec.samples {
        let n = spec.dimensions[i % spec.dimensions.len().max(1)];
        let (p, curve, control) = random_sample(&mut rng, spec.points, spec.clearance);
        let disagreement = formula_disagreement(&curve, &p, n).map_err(compute)?;
        samples.push(CrosscheckSample { dimension: n, roots: p.roots().to_vec(), control, disagreement });
    }
    let worst = samples.iter().map(|s| s.disagreement).fold(0.0, f64::max);
    std::fs::create_dir_all(out)?;
    let r = CrosscheckReport { seed, max_relative_disagreement: worst, samples };
    write_json(&out.join("crosscheck.json"), &r)?;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalModelEntry {
    pub c: f64,
    pub max_abs_phase: f64,
    pub points: Vec<C>,
}

/// Local-model curves for each configured `c`; writes `localmodel.json` and
/// `localmodel.svg`.
pub fn localmodel_command(cfg: &Config, out: &Path) -> Result<Vec<LocalModelEntry>, RunError> {
    let spec = &cfg.localmodel;
    let entries: Vec<LocalModelEntry> = spec
        .c
        .iter()
        .map(|&c| {
            let m = local_model_curve(cfg.dimension, c, spec.samples);
            let max_abs_phase = m.phase.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            LocalModelEntry { c, max_abs_phase, points: m.points }
        })
        .collect();
    std::fs::create_dir_all(out)?;
    let pts: Vec<&[C]> = entries.iter().map(|e| e.points.as_slice()).collect();
    let origin = [C::new(0.0, 0.0)];
    std::fs::write(out.join("localmodel.svg"), scene(&origin, &pts, &[], &format!("n = {}", cfg.dimension)))?;
    write_json(&out.join("localmodel.json"), &entries)?;
    Ok(entries)
}
