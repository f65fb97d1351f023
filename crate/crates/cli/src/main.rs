use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use informed_mcmc::bench::{
    emit_plot_script, levelset_csv, planning_csv, planning_fixture, run_levelset_sweep,
    run_planning_efficiency, run_sampling_efficiency, sampling_csv, BenchSpec, Experiment,
    PlanningFixture,
};
use informed_mcmc::config::{load_config, load_experiment, ExperimentConfig};
use informed_mcmc::informed::estimate_volume_ratio;
use informed_mcmc::mtdi::{joint_feasible_times, mtdi_steer};
use informed_mcmc::planner::{plan, PlannerConfig, World};
use informed_mcmc::samplers::{SamplerConfig, SamplerKind};
use informed_mcmc::{InformedProblem, RandomSource};

/// Informed sampling and kinodynamic informed RRT* under minimum-time
/// double-integrator dynamics.
#[derive(Parser)]
#[command(name = "informed-mcmc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Overrides the configuration's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSVs and plot scripts.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    /// Budget per sampling cell or planning run.
    #[arg(long = "wall-time-s")]
    wall_time_s: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the minimum time and acceleration profile between `start` and
    /// `goal`.
    Steer { cfg: PathBuf },
    /// Estimate the informed-set volume ratio (`draws`, default 100000).
    Volume {
        cfg: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Level-set sweep and per-sampler timing on synthetic problems.
    SampleBench {
        cfg: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// One planner run on a configured or built-in problem.
    Plan {
        cfg: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Planner runs over problems, samplers and seeds.
    PlanBench {
        cfg: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Steer { cfg } => steer(&cfg),
        Command::Volume { cfg, common } => volume(&cfg, &common),
        Command::SampleBench { cfg, common } => sample_bench(&cfg, &common),
        Command::Plan { cfg, common } => plan_one(&cfg, &common),
        Command::PlanBench { cfg, common } => plan_bench(&cfg, &common),
    }
}

fn load_problem(path: &Path) -> Result<(InformedProblem, ExperimentConfig)> {
    let (limits, exp) = load_config(path)?;
    let (Some(start), Some(goal)) = (exp.start.clone(), exp.goal.clone()) else {
        bail!("{}: `start_q` and `goal_q` are required", path.display());
    };
    let c_best = exp.c_best.unwrap_or(f64::INFINITY);
    let p = InformedProblem::new(start, goal, limits, exp.cost_model, c_best)?;
    Ok((p, exp))
}

fn steer(cfg: &Path) -> Result<()> {
    let (p, _) = load_problem(cfg)?;
    let traj = mtdi_steer(p.start(), p.goal(), p.limits());
    println!("min_time {}", traj.duration);
    for (j, lim) in p.limits().joints().iter().enumerate() {
        let f = joint_feasible_times(p.start().joint(j), p.goal().joint(j), lim.v_max, lim.a_max);
        match f.excluded {
            Some((lo, hi)) => println!("joint {j} t_min {} excluded ({lo}, {hi})", f.t_min),
            None => println!("joint {j} t_min {}", f.t_min),
        }
    }
    println!("segment,duration,accel");
    for (i, s) in traj.profile.segments.iter().enumerate() {
        let a: Vec<String> = s.accel.iter().map(|a| a.to_string()).collect();
        println!("{i},{},{}", s.duration, a.join(" "));
    }
    Ok(())
}

fn volume(cfg: &Path, common: &Common) -> Result<()> {
    let (p, exp) = load_problem(cfg)?;
    let draws = exp.usize("draws")?.unwrap_or(100_000) as u64;
    let seed = common.seed.or(exp.seed).unwrap_or(0);
    let est = estimate_volume_ratio(&p, draws.max(1), &mut RandomSource::new(seed));
    println!("direct_cost {}", p.direct_cost());
    println!("c_best {}", p.c_best());
    println!("volume_ratio {} stderr {} ({} of {})", est.ratio, est.std_error, est.accepted, est.draws);
    Ok(())
}

fn sampler_config(exp: &ExperimentConfig, kind: SamplerKind) -> Result<SamplerConfig> {
    let mut cfg = SamplerConfig::with_kind(kind);
    if let Some(s) = exp.f64("mh_sigma")? {
        cfg.mh_sigma = s;
    }
    if let Some(t) = exp.f64("hnr_lambda_tol")? {
        cfg.hnr_lambda_tol = t;
    }
    if let Some(n) = exp.usize("hnr_max_iters")? {
        cfg.hnr_max_iters = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn bench_spec(exp: &ExperimentConfig, common: &Common, experiment: Experiment) -> Result<BenchSpec> {
    let mut spec = BenchSpec::new(experiment);
    if let Some(j) = exp.usize_array("joints_list")? {
        spec.joints = j;
    }
    if let Some(p) = exp.str_array("problems")? {
        spec.problems = p;
    }
    if let Some(s) = exp.str_array("samplers")? {
        spec.samplers = s.iter().map(|k| k.parse()).collect::<Result<_, _>>()?;
    }
    if let Some(n) = exp.usize("samples_per_point")? {
        spec.samples_per_point = n;
    }
    let ratio_key = match experiment {
        Experiment::LevelsetSweep => "levelset_ratios",
        _ => "c_ratios",
    };
    if let Some(r) = exp.f64_array(ratio_key)? {
        spec.c_ratios = r;
    }
    if let Some(n) = exp.usize("volume_draws")? {
        spec.volume_draws = n as u64;
    }
    if let Some(n) = exp.usize("max_iterations")? {
        spec.max_iterations = n;
    }
    spec.trials = common.trials.or(exp.usize("trials")?).unwrap_or(1);
    spec.seed = common.seed.or(exp.seed).unwrap_or(0);
    if let Some(w) = common.wall_time_s.or(exp.f64("wall_time_s")?) {
        spec.wall_time = Duration::from_secs_f64(w);
    }
    spec.sampler = sampler_config(exp, SamplerKind::Hnr)?;
    spec.out_dir = common.out.clone().unwrap_or_else(|| PathBuf::from("bench_out"));
    spec.validate()?;
    Ok(spec)
}

fn sample_bench(cfg: &Path, common: &Common) -> Result<()> {
    let exp = load_experiment(cfg)?;
    let spec = bench_spec(&exp, common, Experiment::LevelsetSweep)?;
    let rows = run_levelset_sweep(&spec)?;
    let level = spec.out_dir.join("levelset_sweep.csv");
    levelset_csv(&rows).write(&level)?;
    emit_plot_script(&[level.clone()], Experiment::LevelsetSweep, &spec.out_dir.join("plot_levelset.py"))?;
    println!("wrote {}", level.display());

    let spec = bench_spec(&exp, common, Experiment::SamplingEfficiency)?;
    let rows = run_sampling_efficiency(&spec)?;
    let eff = spec.out_dir.join("sampling_efficiency.csv");
    sampling_csv(&rows).write(&eff)?;
    emit_plot_script(&[eff.clone()], Experiment::SamplingEfficiency, &spec.out_dir.join("plot_sampling.py"))?;
    println!("wrote {}", eff.display());
    for r in &rows {
        println!(
            "{:>3} {:>2}-D c/c*={:<5} ratio={:<10.3e} mean={:>12.0} ns {}",
            r.sampler.name(),
            r.dimension,
            r.c_ratio,
            r.volume_ratio,
            r.mean_ns,
            if r.complete { "" } else { "(incomplete)" }
        );
    }
    Ok(())
}

/// A built-in fixture (`problem = "..."`) or limits, endpoints and world
/// read from the file.
fn planning_problem(cfg: &Path) -> Result<(PlanningFixture, ExperimentConfig)> {
    let exp = load_experiment(cfg)?;
    if let Some(name) = exp.str("problem")? {
        return Ok((planning_fixture(name)?, exp));
    }
    let (p, exp) = load_problem(cfg)?;
    let world = World::from_config(&exp, p.limits().joint_count())?;
    let fx = PlanningFixture {
        name: cfg.file_stem().map_or("problem".into(), |s| s.to_string_lossy().into_owned()),
        problem: p,
        world,
    };
    Ok((fx, exp))
}

fn plan_one(cfg: &Path, common: &Common) -> Result<()> {
    let (fx, exp) = planning_problem(cfg)?;
    let kind: SamplerKind = exp.str("sampler")?.unwrap_or("HNR").parse()?;
    let mut pc = PlannerConfig {
        sampler: sampler_config(&exp, kind)?,
        ..PlannerConfig::default()
    };
    if let Some(n) = exp.usize("max_iterations")? {
        pc.max_iterations = n;
    }
    if let Some(dt) = exp.f64("collision_dt")? {
        pc.collision_dt = dt;
    }
    if let Some(k) = exp.f64("rewire_k_factor")? {
        pc.rewire_k_factor = k;
    }
    if let Some(w) = common.wall_time_s.or(exp.f64("wall_time_s")?) {
        pc.max_wall_time = Some(Duration::from_secs_f64(w));
    }
    pc.validate()?;
    let seed = common.seed.or(exp.seed).unwrap_or(0);
    let r = plan(&fx.problem, &fx.world, &pc, &mut RandomSource::new(seed));
    println!("problem {} sampler {} seed {seed}", fx.name, kind.name());
    println!("direct_cost {}", fx.problem.direct_cost());
    println!("iterations {} tree_nodes {} samples {}", r.iterations, r.tree.len(), r.samples);
    println!("iteration,wall_time_s,c_best");
    for e in &r.timeline {
        println!("{},{:.6},{}", e.iteration, e.wall_time_s, e.c_best);
    }
    match r.best_cost() {
        Ok(c) => println!("best_cost {c} edges {}", r.solution.len()),
        Err(e) => println!("{e}"),
    }
    if let Some(out) = &common.out {
        let report = informed_mcmc::bench::PlanningReport {
            c_star_ref: [(fx.name.clone(), r.best_cost().unwrap_or(f64::INFINITY))].into(),
            runs: vec![informed_mcmc::bench::PlanningRun {
                problem: fx.name.clone(),
                sampler: kind,
                seed,
                result: r,
            }],
        };
        let path = out.join("plan.csv");
        planning_csv(&report).write(&path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn plan_bench(cfg: &Path, common: &Common) -> Result<()> {
    let exp = load_experiment(cfg)?;
    let spec = bench_spec(&exp, common, Experiment::PlanningEfficiency)?;
    let report = run_planning_efficiency(&spec)?;
    let path = spec.out_dir.join("planning_efficiency.csv");
    planning_csv(&report).write(&path).context("writing planning CSV")?;
    emit_plot_script(&[path.clone()], Experiment::PlanningEfficiency, &spec.out_dir.join("plot_planning.py"))?;
    println!("wrote {}", path.display());
    for (problem, c_ref) in &report.c_star_ref {
        for &kind in &spec.samplers {
            let finals: Vec<f64> = report.runs_for(problem, kind).map(|r| r.final_cost() / c_ref).collect();
            println!("{problem} {:>3} final ratios {:?}", kind.name(), finals);
        }
    }
    Ok(())
}
