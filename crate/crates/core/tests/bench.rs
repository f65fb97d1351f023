use std::time::Duration;

use informed_mcmc::bench::{
    levelset_csv, planning_csv, run_levelset_sweep, run_planning_efficiency,
    run_sampling_efficiency, sampling_csv, BenchSpec, Csv, Experiment,
};
use informed_mcmc::samplers::SamplerKind;

/// Wall-clock columns vary between identical runs; everything else must not.
const TIMING_COLUMNS: [&str; 3] = ["mean_ns", "std_ns", "wall_time_s"];

fn stable(csv: &Csv) -> String {
    csv.render_without(&TIMING_COLUMNS)
}

#[test]
fn levelset_csv_is_reproducible() {
    let spec = BenchSpec {
        volume_draws: 20_000,
        trials: 2,
        seed: 7,
        ..BenchSpec::new(Experiment::LevelsetSweep)
    };
    let a = levelset_csv(&run_levelset_sweep(&spec).unwrap()).render();
    let b = levelset_csv(&run_levelset_sweep(&spec).unwrap()).render();
    assert_eq!(a, b);
}

#[test]
fn sampling_csv_is_reproducible_apart_from_timings() {
    let spec = BenchSpec {
        joints: vec![2],
        samples_per_point: 200,
        c_ratios: vec![2.0, 1.3],
        wall_time: Duration::from_secs(600),
        ..BenchSpec::new(Experiment::SamplingEfficiency)
    };
    let a = sampling_csv(&run_sampling_efficiency(&spec).unwrap());
    let b = sampling_csv(&run_sampling_efficiency(&spec).unwrap());
    assert_eq!(stable(&a), stable(&b));
    assert_eq!(a.rows.len(), 2 * 4);
}

#[test]
fn planning_csv_is_reproducible_under_iteration_budgets() {
    let spec = BenchSpec {
        problems: vec!["arm3".into()],
        samplers: vec![SamplerKind::Hnr, SamplerKind::Rs],
        trials: 2,
        max_iterations: 600,
        wall_time: Duration::from_secs(600),
        ..BenchSpec::new(Experiment::PlanningEfficiency)
    };
    let a = planning_csv(&run_planning_efficiency(&spec).unwrap());
    let b = planning_csv(&run_planning_efficiency(&spec).unwrap());
    assert_eq!(stable(&a), stable(&b));
    assert!(!a.rows.is_empty());
}

#[test]
fn written_csv_round_trips_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let spec = BenchSpec {
        joints: vec![2],
        volume_draws: 5_000,
        c_ratios: vec![2.0, 1.5],
        ..BenchSpec::new(Experiment::LevelsetSweep)
    };
    let csv = levelset_csv(&run_levelset_sweep(&spec).unwrap());
    let path = dir.path().join("nested").join("levelset.csv");
    csv.write(&path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), csv.render());
}
