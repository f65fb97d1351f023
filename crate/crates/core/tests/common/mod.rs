//! Oracles and fixtures shared by the integration and acceptance suites.
//! Nothing here calls into the closed-form solver it is used to check.
#![allow(dead_code)]

use informed_mcmc::{CostModel, InformedProblem, JointLimits, KinodynamicLimits, State};

/// Minimum time of a single joint over bang-coast-bang profiles: first
/// phase `s * a`, optional coast at `s * v_max`, last phase `-s * a`. The
/// first switch time is scanned on a grid of spacing `h`; sign changes of
/// the position residual are refined by bisection.
pub fn grid_min_time(q0: f64, v0: f64, q1: f64, v1: f64, vm: f64, a: f64, h: f64) -> f64 {
    let mut best = f64::INFINITY;
    for s in [1.0f64, -1.0] {
        // Residual of the coast-free profile switching at `t1`, and its
        // total duration. The last phase must have nonnegative length.
        let phase = |t1: f64| {
            let vp = v0 + s * a * t1;
            let t2 = s * (vp - v1) / a;
            let q = q0 + v0 * t1 + 0.5 * s * a * t1 * t1 + vp * t2 - 0.5 * s * a * t2 * t2;
            (q1 - q, t1 + t2.max(0.0))
        };
        let t_lo = (s * (v1 - v0) / a).max(0.0);
        let t_sat = (vm - s * v0) / a;
        if t_lo > t_sat {
            continue;
        }
        let n = ((t_sat - t_lo) / h).ceil().max(1.0) as usize;
        let grid = |k: usize| (t_lo + k as f64 * h).min(t_sat);
        let mut prev = phase(grid(0));
        if prev.0 == 0.0 {
            best = best.min(prev.1);
        }
        for k in 1..=n {
            let t = grid(k);
            let cur = phase(t);
            if cur.0 == 0.0 {
                best = best.min(cur.1);
            } else if prev.0.signum() != cur.0.signum() && prev.0 != 0.0 {
                let (mut lo, mut hi) = (grid(k - 1), t);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if phase(mid).0.signum() == prev.0.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                best = best.min(phase(0.5 * (lo + hi)).1);
            }
            prev = cur;
        }
        // Coast at the bound after saturating: the coast absorbs the
        // remaining distance when it has the coast's sign.
        let (r, t) = phase(t_sat);
        let tc = r / (s * vm);
        if tc >= 0.0 {
            best = best.min(t + tc);
        }
    }
    best
}

/// Exact per-joint integration of a piecewise-constant acceleration
/// profile, written independently of the library's integrator.
pub fn integrate_segments(q: f64, v: f64, segs: &[(f64, f64)]) -> (f64, f64) {
    segs.iter().fold((q, v), |(q, v), &(dt, acc)| {
        (q + v * dt + 0.5 * acc * dt * dt, v + acc * dt)
    })
}

/// The 2-D Euclidean ellipse: foci (0, 0) and (4, 0), `c_best = 5`, in a
/// box that contains the whole ellipse.
pub fn ellipse_fixture() -> InformedProblem {
    let limits = KinodynamicLimits::new(vec![JointLimits::new(-0.5, 4.5, 2.0, 1.0).unwrap()]).unwrap();
    InformedProblem::new(
        State::new(vec![0.0, 0.0]).unwrap(),
        State::new(vec![4.0, 0.0]).unwrap(),
        limits,
        CostModel::Euclidean,
        5.0,
    )
    .unwrap()
}

/// Obstacle-free single joint with a moving goal.
pub fn free_fixture() -> InformedProblem {
    let limits = KinodynamicLimits::new(vec![JointLimits::new(-2.0, 3.0, 2.0, 1.0).unwrap()]).unwrap();
    InformedProblem::new(
        State::from_qv(&[0.0], &[0.0]).unwrap(),
        State::from_qv(&[1.0], &[0.5]).unwrap(),
        limits,
        CostModel::MinTime,
        f64::INFINITY,
    )
    .unwrap()
}

pub const GRID: usize = 10;

/// Occupancy counts over a `GRID x GRID` partition of the ellipse's
/// bounding rectangle `[-0.5, 4.5] x [-1.5, 1.5]`.
pub fn histogram<'a>(xs: impl IntoIterator<Item = &'a State>) -> Vec<u64> {
    let mut h = vec![0u64; GRID * GRID];
    for x in xs {
        let c = x.coords();
        let i = (((c[0] + 0.5) / 5.0 * GRID as f64) as usize).min(GRID - 1);
        let j = (((c[1] + 1.5) / 3.0 * GRID as f64) as usize).min(GRID - 1);
        h[i * GRID + j] += 1;
    }
    h
}

pub fn total_variation(a: &[u64], b: &[u64]) -> f64 {
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    0.5 * a
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x as f64 / na as f64 - y as f64 / nb as f64).abs())
        .sum::<f64>()
}

/// Two-sample chi-square homogeneity test over shared bins; returns the
/// p-value. Bins empty in both samples carry no degrees of freedom.
pub fn chi_square_p(a: &[u64], b: &[u64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let na: f64 = a.iter().sum::<u64>() as f64;
    let nb: f64 = b.iter().sum::<u64>() as f64;
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let mut stat = 0.0;
    let mut bins = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        let d = ka * x as f64 - kb * y as f64;
        stat += d * d / (x + y) as f64;
        bins += 1;
    }
    let dof = (bins.max(2) - 1) as f64;
    1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
