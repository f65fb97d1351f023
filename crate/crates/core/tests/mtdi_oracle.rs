mod common;

use common::{grid_min_time, integrate_segments};
use informed_mcmc::mtdi::{
    detect_jumps, joint_feasible_times, joint_min_time, joint_profile_for_time, mtdi_min_time,
    mtdi_steer, target_velocity_sweep,
};
use informed_mcmc::{JointLimits, JointState, KinodynamicLimits, RandomSource, State};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn oracle_matches_rest_to_rest_closed_form() {
    // Rest to rest over distance d with no cruise takes 2 sqrt(d / a).
    for d in [0.1, 0.5, 1.0, 2.0] {
        let t = grid_min_time(0.0, 0.0, d, 0.0, 10.0, 1.0, 1e-3);
        assert!((t - 2.0 * d.sqrt()).abs() < 1e-9, "{d}: {t}");
    }
    // With cruise: 1 s up, 99 s at 1 rad/s, 1 s down.
    assert!((grid_min_time(0.0, 0.0, 100.0, 0.0, 1.0, 1.0, 1e-3) - 101.0).abs() < 1e-9);
}

#[test]
fn joint_min_time_agrees_with_grid_oracle() {
    let mut rng = RandomSource::new(11);
    for _ in 0..300 {
        let vm = rng.random_range(0.5..3.0);
        let a = rng.random_range(0.5..2.0);
        let (q0, q1) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let (v0, v1) = (rng.random_range(-vm..vm), rng.random_range(-vm..vm));
        let t = joint_min_time(JointState::new(q0, v0), JointState::new(q1, v1), vm, a);
        let oracle = grid_min_time(q0, v0, q1, v1, vm, a, 1e-3);
        assert!((t - oracle).abs() < 2e-3, "({q0},{v0})->({q1},{v1}) vm {vm} a {a}: {t} vs {oracle}");
    }
}

#[test]
fn holding_velocity_band_ends_at_reversal_time() {
    // Staying at q = 0 while moving at 1 rad/s needs a full reversal.
    let f = joint_feasible_times(JointState::new(0.0, 1.0), JointState::new(0.0, 1.0), 10.0, 1.0);
    let (_, hi) = f.excluded.unwrap();
    assert!((hi - 4.0).abs() < 1e-9, "{hi}");
    assert!(!f.contains(2.0) && f.contains(4.0) && f.contains(0.0));
}

#[test]
fn velocity_sweep_has_one_jump_at_the_pure_acceleration_speed() {
    let (vs, q0, vm, a) = (0.2, 1.0, 2.0, 1.0);
    let sweep = target_velocity_sweep(JointState::new(0.0, vs), q0, vm, a, 2001);
    let vals: Vec<f64> = sweep.iter().map(|p| p.1).collect();
    let jumps = detect_jumps(&vals, 10.0);
    assert_eq!(jumps.len(), 1, "{jumps:?}");
    let v_star = (vs * vs + 2.0 * a * q0).sqrt();
    assert!((sweep[jumps[0]].0 - v_star).abs() < 4e-3, "{} vs {v_star}", sweep[jumps[0]].0);
}

fn random_limits(rng: &mut RandomSource, joints: usize) -> KinodynamicLimits {
    KinodynamicLimits::new(
        (0..joints)
            .map(|_| {
                let lo = rng.random_range(-4.0..-0.5);
                let hi = rng.random_range(0.5..4.0);
                JointLimits::new(lo, hi, rng.random_range(0.3..3.0), rng.random_range(0.3..2.0)).unwrap()
            })
            .collect(),
    )
    .unwrap()
}

fn random_state(rng: &mut RandomSource, limits: &KinodynamicLimits) -> State {
    let coords = (0..limits.dim())
        .map(|i| {
            let (lo, hi) = limits.coord_bounds(i);
            rng.random_range(lo..hi)
        })
        .collect();
    State::new(coords).unwrap()
}

#[test]
fn steered_profiles_close_and_respect_bounds() {
    let mut rng = RandomSource::new(5);
    for _ in 0..2000 {
        let joints = rng.random_range(1..=7);
        let limits = random_limits(&mut rng, joints);
        let (a, b) = (random_state(&mut rng, &limits), random_state(&mut rng, &limits));
        let traj = mtdi_steer(&a, &b, &limits);
        assert!((traj.duration - mtdi_min_time(&a, &b, &limits)).abs() < 1e-9);
        for j in 0..joints {
            let lim = limits.joint(j);
            let segs: Vec<(f64, f64)> =
                traj.profile.segments.iter().map(|s| (s.duration, s.accel[j])).collect();
            let mut v = a.joint(j).v;
            for &(dt, acc) in &segs {
                assert!(acc.abs() <= lim.a_max * (1.0 + 1e-9));
                v += acc * dt;
                assert!(v.abs() <= lim.v_max * (1.0 + 1e-9) + 1e-9, "{v} > {}", lim.v_max);
            }
            let (q, v) = integrate_segments(a.joint(j).q, a.joint(j).v, &segs);
            assert!((q - b.joint(j).q).abs() < 1e-6 && (v - b.joint(j).v).abs() < 1e-6);
        }
    }
}

#[test]
fn min_time_satisfies_the_triangle_inequality_on_a_chain_of_states() {
    let mut rng = RandomSource::new(9);
    let limits = random_limits(&mut rng, 3);
    for _ in 0..500 {
        let (a, b, c) = (
            random_state(&mut rng, &limits),
            random_state(&mut rng, &limits),
            random_state(&mut rng, &limits),
        );
        let direct = mtdi_min_time(&a, &c, &limits);
        let via = mtdi_min_time(&a, &b, &limits) + mtdi_min_time(&b, &c, &limits);
        assert!(direct <= via + 1e-9, "{direct} > {via}");
    }
}

proptest! {
    #[test]
    fn every_feasible_duration_has_a_closing_profile(
        q0 in -2.0f64..2.0, v0 in -1.0f64..1.0, q1 in -2.0f64..2.0, v1 in -1.0f64..1.0,
        stretch in 0.0f64..3.0,
    ) {
        let (s0, s1) = (JointState::new(q0, v0), JointState::new(q1, v1));
        let f = joint_feasible_times(s0, s1, 1.0, 1.0);
        let mut t = f.t_min + stretch;
        if let Some((lo, hi)) = f.excluded {
            if t > lo && t < hi {
                t = hi;
            }
        }
        let segs = joint_profile_for_time(s0, s1, t, 1.0, 1.0).unwrap();
        let flat: Vec<(f64, f64)> = segs.iter().map(|s| (s.duration, s.accel)).collect();
        let (q, v) = integrate_segments(q0, v0, &flat);
        prop_assert!((q - q1).abs() < 1e-6 && (v - v1).abs() < 1e-6);
        prop_assert!((flat.iter().map(|s| s.0).sum::<f64>() - t).abs() < 1e-9);
    }

    #[test]
    fn min_time_is_zero_only_for_identical_states(q in -2.0f64..2.0, v in -1.0f64..1.0, dq in 1e-6f64..1.0) {
        let s = JointState::new(q, v);
        prop_assert_eq!(joint_min_time(s, s, 1.0, 1.0), 0.0);
        prop_assert!(joint_min_time(s, JointState::new(q + dq, v), 1.0, 1.0) > 0.0);
    }
}
