mod common;

use common::{chi_square_p, ellipse_fixture, histogram, median, total_variation};
use informed_mcmc::informed::{
    estimate_volume_ratio, in_informed_set, phs_direct_sample, ProlateHyperspheroid,
};
use informed_mcmc::samplers::{
    hrs_sample, rejection_sample, InformedSampler, SamplerConfig, SamplerKind,
};
use informed_mcmc::state::{sample_uniform_state, Deadline};
use informed_mcmc::{CostModel, InformedProblem, JointLimits, KinodynamicLimits, RandomSource, State};

fn chain_samples(kind: SamplerKind, mh_sigma: f64, n: usize, seed: u64) -> Vec<State> {
    let p = ellipse_fixture();
    let mut s = InformedSampler::new(SamplerConfig {
        mh_sigma,
        ..SamplerConfig::with_kind(kind)
    });
    let mut rng = RandomSource::new(seed);
    (0..n).map(|_| s.sample(&p, &mut rng, Deadline::none()).unwrap()).collect()
}

fn oracle_histogram(n: usize, seed: u64) -> Vec<u64> {
    let p = ellipse_fixture();
    let mut rng = RandomSource::new(seed);
    let xs: Vec<State> = (0..n).map(|_| phs_direct_sample(&p, &mut rng).unwrap()).collect();
    histogram(&xs)
}

#[test]
fn ball_radii_follow_the_power_law() {
    // Coincident foci give a ball of radius c_best / 2; P(r < s) = s^d.
    let dim = 4;
    let c = State::new(vec![0.3; dim]).unwrap();
    let ball = ProlateHyperspheroid::new(&c, &c, 2.0).unwrap();
    let mut rng = RandomSource::new(1);
    let n = 100_000;
    let mut radii: Vec<f64> = (0..n).map(|_| ball.sample(&mut rng).distance(&c)).collect();
    radii.sort_by(f64::total_cmp);
    let ks = radii
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let cdf = r.powi(dim as i32);
            (cdf - i as f64 / n as f64).abs().max((cdf - (i + 1) as f64 / n as f64).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.01, "KS {ks}");
}

#[test]
fn inscribed_rectangle_holds_two_over_pi_of_the_ellipse() {
    // The largest axis-aligned rectangle in an ellipse has half-sides a/sqrt2
    // and b/sqrt2, so it covers 2ab / (pi ab) of the area.
    let p = ellipse_fixture();
    let (a, b) = (2.5, 1.5);
    let mut rng = RandomSource::new(2);
    let n = 100_000;
    let inside = (0..n)
        .filter(|_| {
            let x = phs_direct_sample(&p, &mut rng).unwrap();
            let c = x.coords();
            (c[0] - 2.0).abs() < a / 2f64.sqrt() && c[1].abs() < b / 2f64.sqrt()
        })
        .count();
    let frac = inside as f64 / n as f64;
    let exact = 2.0 / std::f64::consts::PI;
    assert!((frac - exact).abs() < 0.01 * exact, "{frac} vs {exact}");
}

#[test]
fn volume_ratio_matches_the_clipped_ellipse_area() {
    // Box [0, 4] x [-2, 2] cuts the ends off the ellipse (a = 2.5, b = 1.5,
    // centred at q = 2): area = 2ab (u sqrt(1 - u^2) + asin u) with u = 2 / a.
    let limits = KinodynamicLimits::new(vec![JointLimits::new(0.0, 4.0, 2.0, 1.0).unwrap()]).unwrap();
    let p = InformedProblem::new(
        State::new(vec![0.0, 0.0]).unwrap(),
        State::new(vec![4.0, 0.0]).unwrap(),
        limits,
        CostModel::Euclidean,
        5.0,
    )
    .unwrap();
    let (a, b, u) = (2.5f64, 1.5f64, 0.8f64);
    let area = 2.0 * a * b * (u * (1.0 - u * u).sqrt() + u.asin());
    let exact = area / 16.0;
    let est = estimate_volume_ratio(&p, 100_000, &mut RandomSource::new(3));
    assert!((est.ratio - exact).abs() < 3.0 * est.std_error, "{} vs {exact}", est.ratio);
}

#[test]
fn shrinking_c_best_shrinks_the_set_pointwise() {
    let p = informed_mcmc::bench::synthetic_problem(3).unwrap();
    let (hi, lo) = (p.with_c_best(1.6 * p.direct_cost()), p.with_c_best(1.3 * p.direct_cost()));
    let mut rng = RandomSource::new(4);
    for _ in 0..10_000 {
        let x = sample_uniform_state(p.limits(), &mut rng);
        assert!(!in_informed_set(&x, &lo) || in_informed_set(&x, &hi));
    }
}

#[test]
fn memoryless_samplers_match_the_oracle() {
    let p = ellipse_fixture();
    let oracle = oracle_histogram(50_000, 10);
    let mut rng = RandomSource::new(11);
    let rs: Vec<State> = (0..50_000).map(|_| rejection_sample(&p, &mut rng).0).collect();
    let hrs: Vec<State> = (0..50_000).map(|_| hrs_sample(&p, &mut rng)).collect();
    let (p_rs, p_hrs) = (chi_square_p(&histogram(&rs), &oracle), chi_square_p(&histogram(&hrs), &oracle));
    assert!(p_rs > 0.01, "RS p = {p_rs}");
    assert!(p_hrs > 0.01, "HRS p = {p_hrs}");
}

#[test]
fn chains_approach_the_oracle_as_they_grow() {
    let oracle = oracle_histogram(400_000, 20);
    for (kind, sigma) in [(SamplerKind::Hnr, 0.05), (SamplerKind::Mh, 0.1)] {
        let (mut short, mut long) = (Vec::new(), Vec::new());
        for seed in 0..10 {
            let xs = chain_samples(kind, sigma, 100_000, 100 + seed);
            short.push(total_variation(&histogram(&xs[..1000]), &oracle));
            long.push(total_variation(&histogram(&xs), &oracle));
        }
        let (s, l) = (median(&mut short), median(&mut long));
        assert!(l < s, "{}: TV {l} at 1e5 vs {s} at 1e3", kind.name());
    }
}
