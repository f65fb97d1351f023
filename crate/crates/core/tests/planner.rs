mod common;

use common::{free_fixture, median};
use informed_mcmc::bench::planning_fixture;
use informed_mcmc::informed::in_informed_set;
use informed_mcmc::mtdi::EPS_END;
use informed_mcmc::planner::{
    collision_free_trajectory, plan, PlanResult, PlannerConfig, PositionBox, World,
};
use informed_mcmc::samplers::{SamplerConfig, SamplerKind};
use informed_mcmc::RandomSource;

fn config(kind: SamplerKind, iterations: usize) -> PlannerConfig {
    PlannerConfig {
        max_iterations: iterations,
        sampler: SamplerConfig::with_kind(kind),
        ..PlannerConfig::default()
    }
}

/// Cost after the first `n` iterations of a run with a larger budget; runs
/// with iteration budgets share their prefix, so this equals a run of `n`.
fn cost_after(r: &PlanResult, n: usize) -> f64 {
    r.timeline
        .iter()
        .take_while(|e| e.iteration <= n)
        .last()
        .map_or(f64::INFINITY, |e| e.c_best)
}

#[test]
fn solutions_are_collision_free_and_connected() {
    let fx = planning_fixture("arm3").unwrap();
    let cfg = config(SamplerKind::Hnr, 1500);
    let r = plan(&fx.problem, &fx.world, &cfg, &mut RandomSource::new(1));
    let cost = r.best_cost().expect("arm3 is solvable in 1500 iterations");
    assert!(r.solution.first().unwrap().start.max_abs_diff(fx.problem.start()) < EPS_END);
    assert!(r.solution.last().unwrap().end.max_abs_diff(fx.problem.goal()) < EPS_END);
    for w in r.solution.windows(2) {
        assert!(w[0].end.max_abs_diff(&w[1].start) < EPS_END);
    }
    for e in &r.solution {
        assert!(collision_free_trajectory(&fx.world, e, cfg.collision_dt));
    }
    let total: f64 = r.solution.iter().map(|e| e.duration).sum();
    assert!((total - cost).abs() < 1e-9 * cost.max(1.0));
}

#[test]
fn node_costs_equal_summed_edge_durations() {
    let fx = planning_fixture("arm3").unwrap();
    let r = plan(&fx.problem, &fx.world, &config(SamplerKind::Mh, 1500), &mut RandomSource::new(2));
    for node in &r.tree {
        let (mut sum, mut cur) = (0.0, node);
        while let Some(pi) = cur.parent {
            sum += cur.edge.as_ref().unwrap().duration;
            cur = &r.tree[pi];
        }
        assert!((sum - node.cost_from_start).abs() < 1e-9 * sum.max(1.0));
    }
}

#[test]
fn post_solution_samples_are_informed_when_drawn() {
    let fx = planning_fixture("arm3").unwrap();
    for kind in SamplerKind::ALL {
        let cfg = PlannerConfig {
            record_samples: true,
            ..config(kind, 800)
        };
        let r = plan(&fx.problem, &fx.world, &cfg, &mut RandomSource::new(3));
        assert!(!r.sample_log.is_empty(), "{}", kind.name());
        for (x, c) in &r.sample_log {
            assert!(in_informed_set(x, &fx.problem.with_c_best(*c)));
        }
    }
}

#[test]
fn timelines_strictly_decrease_and_budgets_nest() {
    let fx = planning_fixture("arm3").unwrap();
    let short = plan(&fx.problem, &fx.world, &config(SamplerKind::Hnr, 400), &mut RandomSource::new(4));
    let long = plan(&fx.problem, &fx.world, &config(SamplerKind::Hnr, 1200), &mut RandomSource::new(4));
    for r in [&short, &long] {
        assert!(r.timeline.windows(2).all(|w| w[1].c_best < w[0].c_best));
    }
    assert!(long.best_cost().unwrap() <= short.best_cost().unwrap());
    assert_eq!(cost_after(&long, 400), short.best_cost().unwrap());
}

#[test]
fn free_space_ratio_improves_with_budget() {
    let p = free_fixture();
    let c_star = p.direct_cost();
    let (mut r2, mut r3, mut r4) = (Vec::new(), Vec::new(), Vec::new());
    for seed in 0..20 {
        let r = plan(&p, &World::free(), &config(SamplerKind::Hnr, 10_000), &mut RandomSource::new(seed));
        r2.push(cost_after(&r, 100) / c_star);
        r3.push(cost_after(&r, 1000) / c_star);
        r4.push(cost_after(&r, 10_000) / c_star);
    }
    let (m2, m3, m4) = (median(&mut r2), median(&mut r3), median(&mut r4));
    assert!(m2 > m3 && m3 > m4, "medians {m2} {m3} {m4}");
    assert!(m4 <= 1.05);
}

#[test]
fn unreachable_goal_yields_no_solution() {
    let fx = planning_fixture("arm3").unwrap();
    // A position box around the goal configuration only.
    let blocked = World::CSpaceBoxes(vec![PositionBox::new(
        vec![1.5, -0.5, -0.5],
        vec![1.7, -0.3, -0.3],
    )
    .unwrap()]);
    let r = plan(&fx.problem, &blocked, &config(SamplerKind::Rs, 100), &mut RandomSource::new(5));
    assert!(r.best_cost().is_err());
    assert!(r.timeline.is_empty());
}
