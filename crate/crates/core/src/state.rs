//! State-space types shared by every module: joint and full states, box
//! limits, the seeded random source and uniform state sampling.

use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Position and velocity of a single joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    pub q: f64,
    pub v: f64,
}

impl JointState {
    pub fn new(q: f64, v: f64) -> Self {
        JointState { q, v }
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.v.is_finite()
    }
}

/// Concatenated per-joint `(q, v)` pairs, stored interleaved as
/// `[q0, v0, q1, v1, ...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    coords: Vec<f64>,
}

impl State {
    /// Builds a state from interleaved coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() % 2 != 0 {
            return Err(Error::InvalidState(format!(
                "expected a positive even number of coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidState(format!("coordinate {i} is not finite")));
        }
        Ok(State { coords })
    }

    pub fn from_joints(joints: &[JointState]) -> Result<Self> {
        State::new(joints.iter().flat_map(|j| [j.q, j.v]).collect())
    }

    /// Builds a state from separate position and velocity vectors.
    pub fn from_qv(q: &[f64], v: &[f64]) -> Result<Self> {
        if q.len() != v.len() {
            return Err(Error::InvalidState(format!(
                "{} positions but {} velocities",
                q.len(),
                v.len()
            )));
        }
        State::new(q.iter().zip(v).flat_map(|(&q, &v)| [q, v]).collect())
    }

    /// Hot-path constructor; the caller guarantees the layout invariants.
    pub(crate) fn from_coords_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.len() % 2 == 0);
        State { coords }
    }

    pub fn joint_count(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn joint(&self, j: usize) -> JointState {
        JointState {
            q: self.coords[2 * j],
            v: self.coords[2 * j + 1],
        }
    }

    pub fn joints(&self) -> impl Iterator<Item = JointState> + '_ {
        self.coords
            .chunks_exact(2)
            .map(|c| JointState { q: c[0], v: c[1] })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn positions(&self) -> Vec<f64> {
        self.coords.iter().step_by(2).copied().collect()
    }

    pub fn velocities(&self) -> Vec<f64> {
        self.coords.iter().skip(1).step_by(2).copied().collect()
    }

    pub fn distance(&self, other: &State) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest per-coordinate absolute difference.
    pub fn max_abs_diff(&self, other: &State) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Box limits of one joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLimits {
    pub q_min: f64,
    pub q_max: f64,
    pub v_max: f64,
    pub a_max: f64,
}

impl JointLimits {
    pub fn new(q_min: f64, q_max: f64, v_max: f64, a_max: f64) -> Result<Self> {
        let lim = JointLimits {
            q_min,
            q_max,
            v_max,
            a_max,
        };
        lim.validate(0)?;
        Ok(lim)
    }

    fn validate(&self, j: usize) -> Result<()> {
        let finite = |key: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(
                    format!("{key}[{j}]"),
                    format!("{x} is not finite"),
                ))
            }
        };
        finite("q_min", self.q_min)?;
        finite("q_max", self.q_max)?;
        finite("v_max", self.v_max)?;
        finite("a_max", self.a_max)?;
        if self.q_min >= self.q_max {
            return Err(Error::validation(
                format!("q_min[{j}]"),
                format!("q_min {} must be below q_max {}", self.q_min, self.q_max),
            ));
        }
        if self.v_max <= 0.0 {
            return Err(Error::validation(
                format!("v_max[{j}]"),
                format!("{} must be positive", self.v_max),
            ));
        }
        if self.a_max <= 0.0 {
            return Err(Error::validation(
                format!("a_max[{j}]"),
                format!("{} must be positive", self.a_max),
            ));
        }
        Ok(())
    }

    pub fn contains(&self, s: JointState) -> bool {
        s.q >= self.q_min && s.q <= self.q_max && s.v.abs() <= self.v_max
    }
}

/// Per-joint position, velocity and acceleration bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct KinodynamicLimits {
    joints: Vec<JointLimits>,
}

impl KinodynamicLimits {
    pub fn new(joints: Vec<JointLimits>) -> Result<Self> {
        if joints.is_empty() {
            return Err(Error::validation("joints", "at least one joint is required"));
        }
        for (j, lim) in joints.iter().enumerate() {
            lim.validate(j)?;
        }
        Ok(KinodynamicLimits { joints })
    }

    /// The same limits replicated over `n` joints.
    pub fn uniform(n: usize, lim: JointLimits) -> Result<Self> {
        KinodynamicLimits::new(vec![lim; n])
    }

    pub fn joint_count(&self) -> usize {
        self.joints.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.joints.len()
    }

    pub fn joint(&self, j: usize) -> &JointLimits {
        &self.joints[j]
    }

    pub fn joints(&self) -> &[JointLimits] {
        &self.joints
    }

    /// Bounds `(lo, hi)` of coordinate `i` in the interleaved layout.
    pub fn coord_bounds(&self, i: usize) -> (f64, f64) {
        let lim = &self.joints[i / 2];
        if i % 2 == 0 {
            (lim.q_min, lim.q_max)
        } else {
            (-lim.v_max, lim.v_max)
        }
    }

    pub fn coord_range(&self, i: usize) -> f64 {
        let (lo, hi) = self.coord_bounds(i);
        hi - lo
    }

    /// Length of the longest diagonal of the state box.
    pub fn diagonal_length(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.coord_range(i).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Box volume (product of coordinate ranges).
    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.coord_range(i)).product()
    }

    pub fn contains(&self, x: &State) -> bool {
        x.joint_count() == self.joints.len()
            && self.joints.iter().zip(x.joints()).all(|(l, s)| l.contains(s))
    }

    pub fn contains_coords(&self, coords: &[f64]) -> bool {
        coords.chunks_exact(2).zip(&self.joints).all(|(c, l)| {
            c[0] >= l.q_min && c[0] <= l.q_max && c[1].abs() <= l.v_max
        })
    }
}

/// Seeded, splittable pseudo-random source.
///
/// Forks share the seed and draw from distinct ChaCha streams, so parallel
/// workers get independent yet reproducible sequences.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A fresh source on stream `stream + 1` of the same seed.
    pub fn fork(&self, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream.wrapping_add(1));
        RandomSource {
            seed: self.seed,
            rng,
        }
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Uniform draw in `[lo, hi)` from a single `f64` sample.
#[inline]
pub(crate) fn uniform_in<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Independent uniform draw of every coordinate over the state box.
pub fn sample_uniform_state<R: Rng + ?Sized>(limits: &KinodynamicLimits, rng: &mut R) -> State {
    let mut coords = Vec::with_capacity(limits.dim());
    for lim in limits.joints() {
        coords.push(uniform_in(rng, lim.q_min, lim.q_max));
        coords.push(uniform_in(rng, -lim.v_max, lim.v_max));
    }
    State::from_coords_unchecked(coords)
}

/// Optional wall-clock deadline checked by unbounded sampling loops.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn at(t: Instant) -> Self {
        Deadline(Some(t))
    }

    pub fn expired(&self) -> bool {
        matches!(self.0, Some(t) if Instant::now() >= t)
    }
}
