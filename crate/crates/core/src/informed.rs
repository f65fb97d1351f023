//! Informed-set membership, the Euclidean prolate-hyperspheroid sampler and
//! Monte Carlo volume-ratio estimation.

use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mtdi::{cost_through, mtdi_min_time};
use crate::state::{sample_uniform_state, KinodynamicLimits, RandomSource, State};

/// Cost of a trajectory: its duration under MTDI dynamics, or the
/// straight-line length through state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostModel {
    MinTime,
    Euclidean,
}

/// Start, goal, limits and the current best cost defining `X_inf`.
#[derive(Debug, Clone)]
pub struct InformedProblem {
    start: State,
    goal: State,
    limits: KinodynamicLimits,
    cost_model: CostModel,
    c_best: f64,
    direct_cost: f64,
}

impl InformedProblem {
    pub fn new(
        start: State,
        goal: State,
        limits: KinodynamicLimits,
        cost_model: CostModel,
        c_best: f64,
    ) -> Result<Self> {
        if !(c_best > 0.0) {
            return Err(Error::validation("c_best", "must be positive or inf"));
        }
        for (name, x) in [("start", &start), ("goal", &goal)] {
            if !limits.contains(x) {
                return Err(Error::validation(name, "state lies outside the limits"));
            }
        }
        let direct_cost = match cost_model {
            CostModel::MinTime => mtdi_min_time(&start, &goal, &limits),
            CostModel::Euclidean => start.distance(&goal),
        };
        Ok(InformedProblem {
            start,
            goal,
            limits,
            cost_model,
            c_best,
            direct_cost,
        })
    }

    pub fn start(&self) -> &State {
        &self.start
    }

    pub fn goal(&self) -> &State {
        &self.goal
    }

    pub fn limits(&self) -> &KinodynamicLimits {
        &self.limits
    }

    pub fn cost_model(&self) -> CostModel {
        self.cost_model
    }

    pub fn c_best(&self) -> f64 {
        self.c_best
    }

    /// Unconstrained optimum `c(x_s -> x_g)`; the infimum of `cost_through`.
    pub fn direct_cost(&self) -> f64 {
        self.direct_cost
    }

    pub fn set_c_best(&mut self, c_best: f64) {
        debug_assert!(c_best > 0.0);
        self.c_best = c_best;
    }

    pub fn with_c_best(&self, c_best: f64) -> Self {
        let mut p = self.clone();
        p.set_c_best(c_best);
        p
    }

    /// `X_inf` is empty unless `c_best` exceeds the direct cost.
    pub fn informed_set_nonempty(&self) -> bool {
        self.c_best > self.direct_cost
    }
}

pub fn in_informed_set(x: &State, p: &InformedProblem) -> bool {
    if p.c_best == f64::INFINITY {
        return true;
    }
    cost_through(x, p) < p.c_best
}

/// Membership that also requires `x` to lie inside the state box.
pub fn in_informed_box(x: &State, p: &InformedProblem) -> bool {
    p.limits.contains(x) && in_informed_set(x, p)
}

/// Euclidean informed set: points whose focal-distance sum is below
/// `c_best`.
#[derive(Debug, Clone)]
pub struct ProlateHyperspheroid {
    center: Vec<f64>,
    /// Column-major orthonormal frame; column 0 is the focal axis.
    frame: Vec<Vec<f64>>,
    radii: Vec<f64>,
}

impl ProlateHyperspheroid {
    pub fn new(start: &State, goal: &State, c_best: f64) -> Result<Self> {
        let c_min = start.distance(goal);
        if !(c_best > c_min) || !c_best.is_finite() {
            return Err(Error::DegenerateEllipse { c_best, c_min });
        }
        let dim = start.dim();
        let center: Vec<f64> = start
            .coords()
            .iter()
            .zip(goal.coords())
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        let axis: Vec<f64> = if c_min > 0.0 {
            start
                .coords()
                .iter()
                .zip(goal.coords())
                .map(|(a, b)| (b - a) / c_min)
                .collect()
        } else {
            let mut e = vec![0.0; dim];
            e[0] = 1.0;
            e
        };
        let frame = complete_basis(axis);
        let minor = 0.5 * (c_best * c_best - c_min * c_min).sqrt();
        let mut radii = vec![minor; dim];
        radii[0] = 0.5 * c_best;
        Ok(ProlateHyperspheroid {
            center,
            frame,
            radii,
        })
    }

    /// Uniform sample: unit-ball draw, axis scaling, rotation, translation.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> State {
        let dim = self.center.len();
        let ball = unit_ball_sample(dim, rng);
        let mut out = self.center.clone();
        for (k, col) in self.frame.iter().enumerate() {
            let s = self.radii[k] * ball[k];
            for (o, c) in out.iter_mut().zip(col) {
                *o += c * s;
            }
        }
        State::from_coords_unchecked(out)
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.center.len()) * self.radii.iter().product::<f64>()
    }
}

/// Gram-Schmidt completion of a unit vector to an orthonormal basis.
fn complete_basis(axis: Vec<f64>) -> Vec<Vec<f64>> {
    let dim = axis.len();
    let mut basis = vec![axis];
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

pub(crate) fn unit_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn unit_ball_sample<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let r = rng.random::<f64>().powf(1.0 / dim as f64);
    unit_direction(dim, rng).into_iter().map(|x| x * r).collect()
}

fn unit_ball_volume(dim: usize) -> f64 {
    // V_d = pi^(d/2) / Gamma(d/2 + 1), by the two-step recurrence.
    let mut v = [1.0, 2.0];
    for d in 2..=dim {
        let next = v[(d - 2) % 2] * 2.0 * std::f64::consts::PI / d as f64;
        v[d % 2] = next;
    }
    v[dim % 2]
}

/// Direct uniform sample of the Euclidean informed set.
pub fn phs_direct_sample<R: Rng + ?Sized>(p: &InformedProblem, rng: &mut R) -> Result<State> {
    if p.cost_model != CostModel::Euclidean {
        return Err(Error::validation(
            "cost_model",
            "direct sampling needs the Euclidean cost model",
        ));
    }
    Ok(ProlateHyperspheroid::new(&p.start, &p.goal, p.c_best)?.sample(rng))
}

/// Acceptance fraction of uniform box draws, with its binomial standard
/// error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub accepted: u64,
    pub draws: u64,
    pub ratio: f64,
    pub std_error: f64,
}

impl VolumeEstimate {
    fn from_counts(accepted: u64, draws: u64) -> Self {
        let ratio = accepted as f64 / draws as f64;
        VolumeEstimate {
            accepted,
            draws,
            ratio,
            std_error: (ratio * (1.0 - ratio) / draws as f64).sqrt(),
        }
    }
}

const VOLUME_CHUNK: u64 = 8192;

/// Splits `n` draws into fixed chunks on forked streams, so the estimate is
/// identical for any worker count.
pub fn estimate_volume_ratio(
    p: &InformedProblem,
    n: u64,
    rng: &mut RandomSource,
) -> VolumeEstimate {
    assert!(n >= 1, "at least one draw is required");
    let base = RandomSource::new(rng.next_u64());
    let chunks = n.div_ceil(VOLUME_CHUNK);
    let accepted: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = base.fork(c);
            let count = VOLUME_CHUNK.min(n - c * VOLUME_CHUNK);
            (0..count)
                .filter(|_| in_informed_set(&sample_uniform_state(&p.limits, &mut r), p))
                .count() as u64
        })
        .sum();
    VolumeEstimate::from_counts(accepted, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::JointLimits;

    pub(crate) fn ellipse_problem(c_best: f64) -> InformedProblem {
        let limits =
            KinodynamicLimits::new(vec![JointLimits::new(0.0, 4.0, 2.0, 1.0).unwrap()]).unwrap();
        InformedProblem::new(
            State::new(vec![0.0, 0.0]).unwrap(),
            State::new(vec![4.0, 0.0]).unwrap(),
            limits,
            CostModel::Euclidean,
            c_best,
        )
        .unwrap()
    }

    #[test]
    fn start_is_informed_iff_c_best_exceeds_direct_cost() {
        let p = ellipse_problem(5.0);
        assert!(in_informed_set(p.start(), &p));
        let at = p.with_c_best(p.direct_cost());
        assert!(!in_informed_set(at.start(), &at));
    }

    #[test]
    fn minor_axis_boundary() {
        let p = ellipse_problem(5.0);
        assert!(in_informed_set(&State::new(vec![2.0, 1.5 - 1e-9]).unwrap(), &p));
        assert!(!in_informed_set(&State::new(vec![2.0, 1.5 + 1e-6]).unwrap(), &p));
    }

    #[test]
    fn degenerate_ellipse_is_an_error() {
        let p = ellipse_problem(4.0);
        assert!(matches!(
            phs_direct_sample(&p, &mut RandomSource::new(0)),
            Err(Error::DegenerateEllipse { .. })
        ));
    }

    #[test]
    fn direct_samples_are_members() {
        let p = ellipse_problem(5.0);
        let phs = ProlateHyperspheroid::new(p.start(), p.goal(), 5.0).unwrap();
        let mut rng = RandomSource::new(1);
        for _ in 0..100_000 {
            assert!(in_informed_set(&phs.sample(&mut rng), &p));
        }
    }

    #[test]
    fn ball_volume_recurrence() {
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(unit_ball_volume(1), 2.0);
    }

    #[test]
    fn basis_is_orthonormal() {
        let a = vec![0.6, 0.0, 0.8, 0.0];
        let b = complete_basis(a);
        assert_eq!(b.len(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn volume_extremes() {
        let mut rng = RandomSource::new(5);
        let p = ellipse_problem(f64::INFINITY);
        assert_eq!(estimate_volume_ratio(&p, 1000, &mut rng).ratio, 1.0);
        let p = ellipse_problem(4.0);
        assert_eq!(estimate_volume_ratio(&p, 1000, &mut rng).ratio, 0.0);
    }

    #[test]
    fn volume_estimate_is_deterministic() {
        let p = ellipse_problem(5.0);
        let a = estimate_volume_ratio(&p, 20_000, &mut RandomSource::new(9));
        let b = estimate_volume_ratio(&p, 20_000, &mut RandomSource::new(9));
        assert_eq!(a, b);
    }
}
