//! Experiment harness: level-set sweeps, sampling efficiency and planning
//! efficiency, written as CSV files with companion plot scripts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::informed::{estimate_volume_ratio, CostModel, InformedProblem};
use crate::planner::{plan, Circle, PlanResult, PlannerConfig, World};
use crate::samplers::{
    hrs_sample_until, rejection_sample_until, ChainState, SamplerConfig, SamplerKind,
    informed_sample_until,
};
use crate::state::{Deadline, JointLimits, KinodynamicLimits, RandomSource, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    LevelsetSweep,
    SamplingEfficiency,
    PlanningEfficiency,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::LevelsetSweep => "levelset_sweep",
            Experiment::SamplingEfficiency => "sampling_efficiency",
            Experiment::PlanningEfficiency => "planning_efficiency",
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "levelset_sweep" => Ok(Experiment::LevelsetSweep),
            "sampling_efficiency" => Ok(Experiment::SamplingEfficiency),
            "planning_efficiency" => Ok(Experiment::PlanningEfficiency),
            _ => Err(Error::validation("experiment", format!("unknown experiment `{s}`"))),
        }
    }
}

/// One benchmark definition. `joints` lists the synthetic fixture sizes for
/// the sampling experiments and `problems` the planning fixtures.
#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub experiment: Experiment,
    pub joints: Vec<usize>,
    pub problems: Vec<String>,
    pub samplers: Vec<SamplerKind>,
    pub samples_per_point: usize,
    pub trials: usize,
    pub seed: u64,
    /// `c_best / c*` values, in the order rows are produced.
    pub c_ratios: Vec<f64>,
    pub volume_draws: u64,
    /// Per sampling cell, or per planning run.
    pub wall_time: Duration,
    pub max_iterations: usize,
    pub sampler: SamplerConfig,
    pub out_dir: PathBuf,
}

impl BenchSpec {
    pub fn new(experiment: Experiment) -> Self {
        let c_ratios = match experiment {
            Experiment::LevelsetSweep => geometric_ladder(2.0, 1.02, 12),
            _ => vec![3.0, 2.0, 1.5, 1.3, 1.2, 1.1, 1.05],
        };
        BenchSpec {
            experiment,
            joints: vec![2, 6],
            problems: PLANNING_PROBLEMS.iter().map(|s| s.to_string()).collect(),
            samplers: SamplerKind::ALL.to_vec(),
            samples_per_point: 5000,
            trials: 1,
            seed: 0,
            c_ratios,
            volume_draws: 100_000,
            wall_time: Duration::from_secs(60),
            max_iterations: usize::MAX,
            sampler: SamplerConfig::default(),
            out_dir: PathBuf::from("bench_out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_per_point == 0 {
            return Err(Error::validation("samples_per_point", "must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::validation("trials", "must be at least 1"));
        }
        if self.samplers.is_empty() {
            return Err(Error::validation("samplers", "at least one sampler is required"));
        }
        if self.c_ratios.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::validation("c_ratios", "ratios must be positive"));
        }
        self.sampler.validate()
    }

    fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}

/// `n` ratios decreasing geometrically from `hi` to `lo`.
pub fn geometric_ladder(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    let step = (lo / hi).ln() / (n - 1) as f64;
    (0..n).map(|i| hi * (step * i as f64).exp()).collect()
}

/// Joint templates repeated to build matched synthetic problems; every
/// replica has identical limits and endpoints, so `c*` is the same at any
/// size.
const SYNTHETIC_TEMPLATES: [((f64, f64), (f64, f64)); 2] =
    [((-1.0, 0.0), (1.0, 0.0)), ((0.5, 0.3), (-0.5, -0.2))];

/// Synthetic MTDI problem with `joints` joints (state dimension
/// `2 * joints`) and `c_best = inf`.
pub fn synthetic_problem(joints: usize) -> Result<InformedProblem> {
    if joints == 0 {
        return Err(Error::validation("joints", "at least one joint is required"));
    }
    let lim = JointLimits::new(-std::f64::consts::PI, std::f64::consts::PI, 1.0, 1.0)?;
    let limits = KinodynamicLimits::uniform(joints, lim)?;
    let (mut q0, mut v0, mut q1, mut v1) = (vec![], vec![], vec![], vec![]);
    for j in 0..joints {
        let ((a, b), (c, d)) = SYNTHETIC_TEMPLATES[j % SYNTHETIC_TEMPLATES.len()];
        q0.push(a);
        v0.push(b);
        q1.push(c);
        v1.push(d);
    }
    InformedProblem::new(
        State::from_qv(&q0, &v0)?,
        State::from_qv(&q1, &v1)?,
        limits,
        CostModel::MinTime,
        f64::INFINITY,
    )
}

pub const PLANNING_PROBLEMS: [&str; 3] = ["arm3", "snake6", "herb7"];

/// A planning benchmark problem with `c_best = inf`.
#[derive(Debug, Clone)]
pub struct PlanningFixture {
    pub name: String,
    pub problem: InformedProblem,
    pub world: World,
}

/// Planar-chain stand-ins for the three planning problems:
/// * `arm3`: 3-link arm, rest to rest around an obstacle (6-D).
/// * `snake6`: 6-link chain striking a wall with nonzero tip speed (12-D).
/// * `herb7`: 7-link chain with 7-joint arm limits sweeping past a post
///   and ending in motion (14-D).
pub fn planning_fixture(name: &str) -> Result<PlanningFixture> {
    let pi = std::f64::consts::PI;
    let (limits, start, goal, world) = match name {
        "arm3" => {
            let limits = KinodynamicLimits::uniform(3, JointLimits::new(-pi, pi, 1.5, 1.0)?)?;
            let start = State::from_qv(&[0.0, 0.0, 0.0], &[0.0; 3])?;
            let goal = State::from_qv(&[1.6, -0.4, -0.4], &[0.0; 3])?;
            let world = World::planar_arm(
                vec![1.0, 0.8, 0.6],
                vec![Circle::new(1.6, 1.3, 0.35)?, Circle::new(-0.6, 1.6, 0.3)?],
            )?;
            (limits, start, goal, world)
        }
        "snake6" => {
            let limits = KinodynamicLimits::uniform(6, JointLimits::new(-pi, pi, 1.0, 1.0)?)?;
            let start = State::from_qv(&[0.0; 6], &[0.0; 6])?;
            let goal = State::from_qv(
                &[2.0, 0.2, 0.2, 0.1, 0.1, 0.0],
                &[0.5, 0.2, 0.2, 0.1, 0.1, 0.1],
            )?;
            // A post in the middle of the sweep; the goal puts the tip 0.15
            // short of a wall while still moving toward it.
            let world = World::planar_arm(
                vec![0.5; 6],
                vec![Circle::new(1.45, 2.45, 0.2)?, Circle::new(-5.87, 5.55, 5.0)?],
            )?;
            (limits, start, goal, world)
        }
        "herb7" => {
            let q = [
                (0.54, 5.74),
                (-2.0, 2.0),
                (-2.8, 2.8),
                (-0.9, 3.1),
                (-4.76, 1.24),
                (-1.6, 1.6),
                (-3.0, 3.0),
            ];
            let v = [0.75, 0.75, 2.0, 2.5, 2.5, 2.5, 2.0];
            let limits = KinodynamicLimits::new(
                q.iter()
                    .zip(v)
                    .map(|(&(lo, hi), vm)| JointLimits::new(lo, hi, vm, 1.0))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let start = State::from_qv(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], &[0.0; 7])?;
            let goal = State::from_qv(
                &[2.4, 0.3, -0.3, 0.4, -0.3, 0.2, 0.3],
                &[0.3, 0.2, 0.5, 0.5, 0.4, 0.3, 0.5],
            )?;
            // The swept chain passes a cup near its tip and ends moving
            // toward a table edge.
            let world = World::planar_arm(
                vec![0.6, 0.5, 0.4, 0.3, 0.25, 0.2, 0.15],
                vec![Circle::new(-0.41, 2.26, 0.15)?, Circle::new(-6.42, 3.98, 5.0)?],
            )?;
            (limits, start, goal, world)
        }
        _ => {
            return Err(Error::validation(
                "problem",
                format!("unknown planning problem `{name}`"),
            ))
        }
    };
    Ok(PlanningFixture {
        name: name.to_string(),
        problem: InformedProblem::new(start, goal, limits, CostModel::MinTime, f64::INFINITY)?,
        world,
    })
}

/// A CSV table with leading `#` comment lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Csv {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    fn new(header: &[&str]) -> Self {
        Csv {
            comments: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }

    /// Rendering with the named columns dropped; used to compare runs whose
    /// timing columns legitimately differ.
    pub fn render_without(&self, columns: &[&str]) -> String {
        let keep: Vec<usize> = (0..self.header.len())
            .filter(|&i| !columns.contains(&self.header[i].as_str()))
            .collect();
        let pick = |r: &[String]| keep.iter().map(|&i| r[i].clone()).collect::<Vec<_>>().join(",");
        let mut s = pick(&self.header);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&pick(r));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(path, self.render()).map_err(|e| Error::io(path, e))
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x}")
    }
}

/// CPU model and logical core count, for CSV headers.
pub fn hardware_description() -> String {
    let model = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| {
            s.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|m| m.trim().to_string())
        })
        .unwrap_or_else(|| std::env::consts::ARCH.to_string());
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!("{model}; {cores} logical cores")
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelsetRow {
    pub trial: usize,
    pub dimension: usize,
    pub c_ratio: f64,
    pub c_best: f64,
    pub estimate: crate::informed::VolumeEstimate,
}

/// Volume ratio along the `c_best` ladder. Each rung of a trial reuses the
/// same draws, so ratios are monotone in `c_best` within a trial.
pub fn run_levelset_sweep(spec: &BenchSpec) -> Result<Vec<LevelsetRow>> {
    spec.validate()?;
    let mut cells = Vec::new();
    for trial in 0..spec.trials {
        for (di, &joints) in spec.joints.iter().enumerate() {
            cells.push((trial, di, joints));
        }
    }
    let rows: Vec<Vec<LevelsetRow>> = cells
        .into_par_iter()
        .map(|(trial, di, joints)| {
            let base = synthetic_problem(joints)?;
            let c_star = base.direct_cost();
            Ok(spec
                .c_ratios
                .iter()
                .map(|&r| {
                    let p = base.with_c_best(r * c_star);
                    let mut rng = RandomSource::new(spec.trial_seed(trial)).fork(di as u64);
                    LevelsetRow {
                        trial,
                        dimension: 2 * joints,
                        c_ratio: r,
                        c_best: r * c_star,
                        estimate: estimate_volume_ratio(&p, spec.volume_draws, &mut rng),
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn levelset_csv(rows: &[LevelsetRow]) -> Csv {
    let mut csv = Csv::new(&[
        "trial", "dimension", "c_ratio", "c_best", "volume_ratio", "stderr", "accepted", "draws",
    ]);
    csv.comments.push(format!("hardware: {}", hardware_description()));
    for r in rows {
        csv.rows.push(vec![
            r.trial.to_string(),
            r.dimension.to_string(),
            fmt_f64(r.c_ratio),
            fmt_f64(r.c_best),
            fmt_f64(r.estimate.ratio),
            fmt_f64(r.estimate.std_error),
            r.estimate.accepted.to_string(),
            r.estimate.draws.to_string(),
        ]);
    }
    csv
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingRow {
    pub trial: usize,
    pub sampler: SamplerKind,
    pub dimension: usize,
    pub c_ratio: f64,
    /// Acceptance rate of the cell's rejection sampler, or a separate
    /// estimate when RS is not part of the run.
    pub volume_ratio: f64,
    pub mean_ns: f64,
    pub std_ns: f64,
    pub samples: usize,
    pub complete: bool,
}

struct CellTiming {
    samples: usize,
    attempts: u64,
    mean_ns: f64,
    std_ns: f64,
    complete: bool,
}

/// Times each sampler call individually; chain restarts are part of the
/// call that triggers them.
fn time_sampler(
    p: &InformedProblem,
    cfg: &SamplerConfig,
    n: usize,
    rng: &mut RandomSource,
    budget: Duration,
) -> CellTiming {
    let deadline = Deadline::at(Instant::now() + budget);
    let mut chain = ChainState::new();
    let mut times = Vec::with_capacity(n);
    let mut attempts = 0u64;
    let mut complete = true;
    for _ in 0..n {
        let t = Instant::now();
        let r = match cfg.kind {
            SamplerKind::Rs => rejection_sample_until(p, rng, deadline).map(|(_, a)| attempts += a),
            SamplerKind::Hrs => hrs_sample_until(p, rng, deadline).map(|_| ()),
            _ => informed_sample_until(&mut chain, p, cfg, rng, deadline).map(|_| ()),
        };
        let ns = t.elapsed().as_nanos() as f64;
        if r.is_err() {
            complete = false;
            break;
        }
        times.push(ns);
    }
    let k = times.len().max(1) as f64;
    // An empty f64 sum is -0.0.
    let mean = if times.is_empty() { 0.0 } else { times.iter().sum::<f64>() / k };
    let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / k;
    CellTiming {
        samples: times.len(),
        attempts,
        mean_ns: mean,
        std_ns: var.sqrt(),
        complete,
    }
}

/// Mean time per informed sample for every (dimension, `c_best`, sampler)
/// cell. Cells run one at a time so their timings do not contend.
pub fn run_sampling_efficiency(spec: &BenchSpec) -> Result<Vec<SamplingRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for trial in 0..spec.trials {
        for (di, &joints) in spec.joints.iter().enumerate() {
            let base = synthetic_problem(joints)?;
            let c_star = base.direct_cost();
            for (ri, &r) in spec.c_ratios.iter().enumerate() {
                let p = base.with_c_best(r * c_star);
                let cell = RandomSource::new(spec.trial_seed(trial))
                    .fork((di * spec.c_ratios.len() + ri) as u64);
                let mut order = spec.samplers.clone();
                order.sort();
                let mut volume = None;
                let mut cell_rows = Vec::new();
                for (si, &kind) in order.iter().enumerate() {
                    let cfg = SamplerConfig {
                        kind,
                        ..spec.sampler.clone()
                    };
                    let mut rng = cell.fork(si as u64 + 1);
                    let t = time_sampler(&p, &cfg, spec.samples_per_point, &mut rng, spec.wall_time);
                    if kind == SamplerKind::Rs && t.attempts > 0 {
                        volume = Some(t.samples as f64 / t.attempts as f64);
                    }
                    cell_rows.push((kind, t));
                }
                let volume = match volume {
                    Some(v) => v,
                    None => {
                        let mut rng = cell.fork(0);
                        estimate_volume_ratio(&p, spec.volume_draws, &mut rng).ratio
                    }
                };
                for (kind, t) in cell_rows {
                    rows.push(SamplingRow {
                        trial,
                        sampler: kind,
                        dimension: 2 * joints,
                        c_ratio: r,
                        volume_ratio: volume,
                        mean_ns: t.mean_ns,
                        std_ns: t.std_ns,
                        samples: t.samples,
                        complete: t.complete,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn sampling_csv(rows: &[SamplingRow]) -> Csv {
    let mut csv = Csv::new(&[
        "trial", "sampler", "dimension", "c_ratio", "volume_ratio", "mean_ns", "std_ns", "samples",
        "complete",
    ]);
    csv.comments.push(format!("hardware: {}", hardware_description()));
    csv.comments
        .push("timings include chain restarts triggered inside a sampler call".into());
    for r in rows {
        csv.rows.push(vec![
            r.trial.to_string(),
            r.sampler.name().to_string(),
            r.dimension.to_string(),
            fmt_f64(r.c_ratio),
            fmt_f64(r.volume_ratio),
            format!("{}", r.mean_ns.round() as u64),
            format!("{}", r.std_ns.round() as u64),
            r.samples.to_string(),
            r.complete.to_string(),
        ]);
    }
    csv
}

#[derive(Debug, Clone)]
pub struct PlanningRun {
    pub problem: String,
    pub sampler: SamplerKind,
    pub seed: u64,
    pub result: PlanResult,
}

impl PlanningRun {
    pub fn final_cost(&self) -> f64 {
        self.result.best_cost().unwrap_or(f64::INFINITY)
    }

    /// First wall time at which `c_best <= ratio * c_ref`.
    pub fn time_to_ratio(&self, c_ref: f64, ratio: f64) -> Option<f64> {
        self.result
            .timeline
            .iter()
            .find(|e| e.c_best <= ratio * c_ref)
            .map(|e| e.wall_time_s)
    }
}

#[derive(Debug, Clone)]
pub struct PlanningReport {
    pub runs: Vec<PlanningRun>,
    /// Best cost over every run of each problem.
    pub c_star_ref: BTreeMap<String, f64>,
}

impl PlanningReport {
    pub fn runs_for<'a>(
        &'a self,
        problem: &'a str,
        sampler: SamplerKind,
    ) -> impl Iterator<Item = &'a PlanningRun> + 'a {
        self.runs
            .iter()
            .filter(move |r| r.problem == problem && r.sampler == sampler)
    }
}

/// One planner run per (problem, sampler, trial). Runs are sequential so
/// wall-clock budgets are not shared between them.
pub fn run_planning_efficiency(spec: &BenchSpec) -> Result<PlanningReport> {
    spec.validate()?;
    let mut runs = Vec::new();
    for (pi, name) in spec.problems.iter().enumerate() {
        let fx = planning_fixture(name)?;
        for &kind in &spec.samplers {
            for trial in 0..spec.trials {
                let seed = spec.trial_seed(trial);
                let cfg = PlannerConfig {
                    max_iterations: spec.max_iterations,
                    max_wall_time: Some(spec.wall_time),
                    sampler: SamplerConfig {
                        kind,
                        ..spec.sampler.clone()
                    },
                    ..PlannerConfig::default()
                };
                let mut rng = RandomSource::new(seed).fork(pi as u64);
                let result = plan(&fx.problem, &fx.world, &cfg, &mut rng);
                runs.push(PlanningRun {
                    problem: name.clone(),
                    sampler: kind,
                    seed,
                    result,
                });
            }
        }
    }
    let mut c_star_ref = BTreeMap::new();
    for r in &runs {
        let e = c_star_ref.entry(r.problem.clone()).or_insert(f64::INFINITY);
        *e = e.min(r.final_cost());
    }
    Ok(PlanningReport { runs, c_star_ref })
}

pub fn planning_csv(report: &PlanningReport) -> Csv {
    let mut csv = Csv::new(&[
        "problem", "sampler", "seed", "iteration", "wall_time_s", "c_best", "ratio",
    ]);
    csv.comments.push(format!("hardware: {}", hardware_description()));
    csv.comments.push(
        "ratio normalizer: best cost found by any run of the problem, standing in for the unknown optimum"
            .into(),
    );
    for (p, c) in &report.c_star_ref {
        csv.comments.push(format!("c_star_ref {p} {}", fmt_f64(*c)));
    }
    for r in &report.runs {
        let c_ref = report.c_star_ref[&r.problem];
        let prefix = [r.problem.clone(), r.sampler.name().to_string(), r.seed.to_string()];
        if r.result.timeline.is_empty() {
            let mut row = prefix.to_vec();
            row.extend([r.result.iterations.to_string(), "inf".into(), "inf".into(), "inf".into()]);
            csv.rows.push(row);
        }
        for e in &r.result.timeline {
            let mut row = prefix.to_vec();
            row.extend([
                e.iteration.to_string(),
                format!("{:.6}", e.wall_time_s),
                fmt_f64(e.c_best),
                fmt_f64(e.c_best / c_ref),
            ]);
            csv.rows.push(row);
        }
    }
    csv
}

/// Writes a standalone matplotlib script that plots the given CSVs.
pub fn emit_plot_script(csvs: &[PathBuf], experiment: Experiment, out: &Path) -> Result<()> {
    for c in csvs {
        if !c.is_file() {
            return Err(Error::Io {
                path: c.display().to_string(),
                reason: "input CSV not found".into(),
            });
        }
    }
    let inputs = csvs
        .iter()
        .map(|c| format!("    {:?},", c.display().to_string()))
        .collect::<Vec<_>>()
        .join("\n");
    let body = match experiment {
        Experiment::LevelsetSweep => PLOT_LEVELSET,
        Experiment::SamplingEfficiency => PLOT_SAMPLING,
        Experiment::PlanningEfficiency => PLOT_PLANNING,
    };
    let png = out.with_extension("png");
    let script = format!(
        "{PLOT_PRELUDE}\nINPUTS = [\n{inputs}\n]\nOUTPUT = {:?}\n\n{body}",
        png.display().to_string()
    );
    if let Some(dir) = out.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(out, script).map_err(|e| Error::io(out, e))
}

const PLOT_PRELUDE: &str = r##"#!/usr/bin/env python3
import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path):
    with open(path, newline="") as f:
        lines = [l for l in f if not l.startswith("#")]
    return list(csv.DictReader(lines))


def all_rows():
    rows = []
    for p in INPUTS:
        rows.extend(read_rows(p))
    return rows
"##;

const PLOT_LEVELSET: &str = r##"rows = all_rows()
fig, ax = plt.subplots()
for dim in sorted({int(r["dimension"]) for r in rows}):
    pts = sorted((float(r["c_ratio"]), float(r["volume_ratio"]))
                 for r in rows if int(r["dimension"]) == dim and float(r["volume_ratio"]) > 0)
    if pts:
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=f"{dim}-D")
ax.set_yscale("log")
ax.set_xlabel("c_best / c*")
ax.set_ylabel("informed set volume ratio")
if rows:
    ax.legend()
fig.savefig(OUTPUT, dpi=150)
"##;

const PLOT_SAMPLING: &str = r##"rows = all_rows()
dims = sorted({int(r["dimension"]) for r in rows}) or [0]
fig, axes = plt.subplots(1, len(dims), squeeze=False, figsize=(5 * len(dims), 4))
for ax, dim in zip(axes[0], dims):
    for s in ["RS", "HRS", "MH", "HNR"]:
        pts = sorted((float(r["volume_ratio"]), float(r["mean_ns"]) * 1e-9)
                     for r in rows if int(r["dimension"]) == dim and r["sampler"] == s
                     and float(r["volume_ratio"]) > 0 and r["complete"] == "true")
        if pts:
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=s)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("informed set volume ratio")
    ax.set_ylabel("mean time per sample (s)")
    ax.set_title(f"{dim}-D state space")
    if ax.lines:
        ax.legend()
fig.tight_layout()
fig.savefig(OUTPUT, dpi=150)
"##;

const PLOT_PLANNING: &str = r##"rows = [r for r in all_rows() if r["ratio"] != "inf"]
problems = sorted({r["problem"] for r in rows}) or [""]
fig, axes = plt.subplots(1, len(problems), squeeze=False, figsize=(5 * len(problems), 4))
for ax, prob in zip(axes[0], problems):
    for s in ["RS", "HRS", "MH", "HNR"]:
        runs = {}
        for r in rows:
            if r["problem"] == prob and r["sampler"] == s:
                runs.setdefault(r["seed"], []).append((float(r["wall_time_s"]), float(r["ratio"])))
        for i, pts in enumerate(sorted(runs.values())):
            ax.step([p[0] for p in pts], [p[1] for p in pts], where="post", alpha=0.5,
                    color={"RS": "C0", "HRS": "C1", "MH": "C2", "HNR": "C3"}[s],
                    label=s if i == 0 else None)
    ax.set_xscale("log")
    ax.set_xlabel("wall time (s)")
    ax.set_ylabel("c_best / c*_ref")
    ax.set_title(prob)
    if ax.lines:
        ax.legend()
fig.tight_layout()
fig.savefig(OUTPUT, dpi=150)
"##;
