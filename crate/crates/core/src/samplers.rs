//! Informed samplers: rejection (RS), hierarchical rejection (HRS),
//! Metropolis-Hastings (MH) and Hit-and-Run (HNR), driven by a restartable
//! chain with pluggable seeding.

use std::collections::VecDeque;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::informed::{in_informed_box, in_informed_set, unit_direction, CostModel, InformedProblem};
use crate::mtdi::{cost_through, default_gradient_steps, joint_min_time, numeric_gradient};
use crate::state::{sample_uniform_state, uniform_in, Deadline, KinodynamicLimits, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SamplerKind {
    Rs,
    Hrs,
    Mh,
    Hnr,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 4] = [SamplerKind::Rs, SamplerKind::Hrs, SamplerKind::Mh, SamplerKind::Hnr];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Rs => "RS",
            SamplerKind::Hrs => "HRS",
            SamplerKind::Mh => "MH",
            SamplerKind::Hnr => "HNR",
        }
    }

    /// RS and HRS draw independent samples and keep no chain.
    pub fn is_memoryless(self) -> bool {
        matches!(self, SamplerKind::Rs | SamplerKind::Hrs)
    }
}

impl std::str::FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rs" => Ok(SamplerKind::Rs),
            "hrs" => Ok(SamplerKind::Hrs),
            "mh" => Ok(SamplerKind::Mh),
            "hnr" => Ok(SamplerKind::Hnr),
            _ => Err(Error::validation("sampler", format!("unknown sampler `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeedStrategy {
    StartOrGoal,
    GradientDescent,
    Pool,
    Rejection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    /// Proposal std as a fraction of each coordinate's range.
    pub mh_sigma: f64,
    /// Chord width threshold as a fraction of the box diagonal.
    pub hnr_lambda_tol: f64,
    pub hnr_max_iters: usize,
    pub seed_strategy: SeedStrategy,
    pub pool_capacity: usize,
    pub gd_max_restarts: usize,
    pub gd_max_iters: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            kind: SamplerKind::Hnr,
            mh_sigma: 0.05,
            hnr_lambda_tol: 1e-6,
            hnr_max_iters: 100,
            seed_strategy: SeedStrategy::StartOrGoal,
            pool_capacity: 1024,
            gd_max_restarts: 10,
            gd_max_iters: 100,
        }
    }
}

impl SamplerConfig {
    pub fn with_kind(kind: SamplerKind) -> Self {
        SamplerConfig {
            kind,
            ..SamplerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mh_sigma > 0.0) {
            return Err(Error::validation("mh_sigma", "must be positive"));
        }
        if !(self.hnr_lambda_tol > 0.0) {
            return Err(Error::validation("hnr_lambda_tol", "must be positive"));
        }
        if self.hnr_max_iters == 0 {
            return Err(Error::validation("hnr_max_iters", "must be at least 1"));
        }
        if self.pool_capacity == 0 {
            return Err(Error::validation("pool_capacity", "must be at least 1"));
        }
        Ok(())
    }
}

/// Markov-chain bookkeeping. `previous`, when set, is informed under
/// `c_best_at_seed`, and the chain is reseeded whenever `c_best` drops.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub previous: Option<State>,
    pub steps_taken: u64,
    pub c_best_at_seed: f64,
    pub sample_pool: VecDeque<State>,
    pub restarts: u64,
}

impl Default for ChainState {
    fn default() -> Self {
        ChainState {
            previous: None,
            steps_taken: 0,
            c_best_at_seed: f64::INFINITY,
            sample_pool: VecDeque::new(),
            restarts: 0,
        }
    }
}

impl ChainState {
    pub fn new() -> Self {
        ChainState::default()
    }

    fn push_pool(&mut self, x: &State, capacity: usize) {
        while self.sample_pool.len() >= capacity {
            self.sample_pool.pop_front();
        }
        self.sample_pool.push_back(x.clone());
    }
}

/// Counts loop iterations and polls the deadline every 256 of them.
struct Budget {
    deadline: Deadline,
    count: u32,
}

impl Budget {
    fn new(deadline: Deadline) -> Self {
        Budget { deadline, count: 0 }
    }

    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.count = self.count.wrapping_add(1);
        if self.count % 256 == 0 && self.deadline.expired() {
            return Err(Error::WallClockExceeded);
        }
        Ok(())
    }
}

fn start_or_goal<R: Rng + ?Sized>(p: &InformedProblem, rng: &mut R) -> State {
    if rng.random_bool(0.5) {
        p.start().clone()
    } else {
        p.goal().clone()
    }
}

pub fn seed_sample<R: Rng + ?Sized>(
    p: &InformedProblem,
    cfg: &SamplerConfig,
    chain: &ChainState,
    rng: &mut R,
) -> Result<State> {
    match cfg.seed_strategy {
        SeedStrategy::StartOrGoal => Ok(start_or_goal(p, rng)),
        SeedStrategy::Pool => {
            if chain.sample_pool.is_empty() {
                return Err(Error::SeedNotFound);
            }
            let x = &chain.sample_pool[rng.random_range(0..chain.sample_pool.len())];
            if in_informed_set(x, p) {
                Ok(x.clone())
            } else {
                Err(Error::SeedNotFound)
            }
        }
        SeedStrategy::Rejection => Ok(rejection_sample(p, rng).0),
        SeedStrategy::GradientDescent => {
            for _ in 0..=cfg.gd_max_restarts {
                let x0 = sample_uniform_state(p.limits(), rng);
                if let (Some(x), _) = descend_to_informed(p, x0, cfg.gd_max_iters) {
                    return Ok(x);
                }
            }
            Err(Error::SeedNotFound)
        }
    }
}

/// Newton-style root search on `cost_through` toward a level halfway
/// between the direct cost and `c_best`, with backtracking so that the
/// recorded costs strictly decrease. Returns the first informed iterate and
/// the cost trace.
pub fn descend_to_informed(
    p: &InformedProblem,
    x0: State,
    max_iters: usize,
) -> (Option<State>, Vec<f64>) {
    let limits = p.limits();
    let steps = default_gradient_steps(limits);
    let f = |x: &State| cost_through(x, p);
    let target = if p.c_best().is_finite() {
        p.direct_cost() + 0.5 * (p.c_best() - p.direct_cost())
    } else {
        p.direct_cost()
    };
    let mut x = clamp_interior(limits, x0, &steps);
    let mut fx = f(&x);
    let mut trace = vec![fx];
    for _ in 0..max_iters {
        if fx < p.c_best() {
            return (Some(x), trace);
        }
        let g = numeric_gradient(f, &x, &steps);
        let g2: f64 = g.iter().map(|v| v * v).sum();
        if !(g2 > 0.0) || !g2.is_finite() {
            break;
        }
        let scale = (fx - target) / g2;
        let mut accepted = None;
        let mut t = 1.0;
        for _ in 0..30 {
            let coords: Vec<f64> = x
                .coords()
                .iter()
                .zip(&g)
                .map(|(xi, gi)| xi - t * scale * gi)
                .collect();
            let cand = clamp_interior(limits, State::from_coords_unchecked(coords), &steps);
            let fc = f(&cand);
            if fc < fx {
                accepted = Some((cand, fc));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((cand, fc)) => {
                x = cand;
                fx = fc;
                trace.push(fx);
            }
            None => break,
        }
    }
    if fx < p.c_best() {
        (Some(x), trace)
    } else {
        (None, trace)
    }
}

fn clamp_interior(limits: &KinodynamicLimits, x: State, steps: &[f64]) -> State {
    let coords = x
        .coords()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let (lo, hi) = limits.coord_bounds(i);
            c.clamp(lo + steps[i], hi - steps[i])
        })
        .collect();
    State::from_coords_unchecked(coords)
}

/// First uniform box draw inside the informed set, with the number of
/// draws used.
pub fn rejection_sample<R: Rng + ?Sized>(p: &InformedProblem, rng: &mut R) -> (State, u64) {
    rejection_sample_until(p, rng, Deadline::none()).expect("no deadline was set")
}

pub fn rejection_sample_until<R: Rng + ?Sized>(
    p: &InformedProblem,
    rng: &mut R,
    deadline: Deadline,
) -> Result<(State, u64)> {
    let mut budget = Budget::new(deadline);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let x = sample_uniform_state(p.limits(), rng);
        if in_informed_set(&x, p) {
            return Ok((x, attempts));
        }
        budget.tick()?;
    }
}

/// Per-unit contribution to the completable-cost lower bound. A unit is a
/// joint under MTDI and a single coordinate under the Euclidean model.
#[derive(Debug, Clone, Copy)]
struct Bound {
    to: f64,
    from: f64,
}

impl Bound {
    fn merge(self, other: Bound, model: CostModel) -> Bound {
        match model {
            // Each leg's synchronized time is at least every joint's own.
            CostModel::MinTime => Bound {
                to: self.to.max(other.to),
                from: self.from.max(other.from),
            },
            CostModel::Euclidean => Bound {
                to: self.to + other.to,
                from: self.from + other.from,
            },
        }
    }

    fn value(self, model: CostModel) -> f64 {
        match model {
            CostModel::MinTime => self.to + self.from,
            CostModel::Euclidean => self.to.sqrt() + self.from.sqrt(),
        }
    }
}

struct Hrs<'a, R: ?Sized> {
    p: &'a InformedProblem,
    rng: &'a mut R,
    budget: Budget,
    coords: Vec<f64>,
}

impl<R: Rng + ?Sized> Hrs<'_, R> {
    fn unit_len(&self) -> usize {
        match self.p.cost_model() {
            CostModel::MinTime => 2,
            CostModel::Euclidean => 1,
        }
    }

    fn draw_unit(&mut self, u: usize) -> Bound {
        let limits = self.p.limits();
        let (s, g) = (self.p.start().coords(), self.p.goal().coords());
        match self.p.cost_model() {
            CostModel::MinTime => {
                let lim = limits.joint(u);
                let q = uniform_in(self.rng, lim.q_min, lim.q_max);
                let v = uniform_in(self.rng, -lim.v_max, lim.v_max);
                self.coords[2 * u] = q;
                self.coords[2 * u + 1] = v;
                let x = crate::state::JointState::new(q, v);
                Bound {
                    to: joint_min_time(self.p.start().joint(u), x, lim.v_max, lim.a_max),
                    from: joint_min_time(x, self.p.goal().joint(u), lim.v_max, lim.a_max),
                }
            }
            CostModel::Euclidean => {
                let (lo, hi) = limits.coord_bounds(u);
                let c = uniform_in(self.rng, lo, hi);
                self.coords[u] = c;
                Bound {
                    to: (c - s[u]).powi(2),
                    from: (c - g[u]).powi(2),
                }
            }
        }
    }

    /// Uniform sample of units `lo..hi` conditioned on their partial bound
    /// being below `c_best`.
    fn sample(&mut self, lo: usize, hi: usize) -> Result<Bound> {
        let model = self.p.cost_model();
        let c_best = self.p.c_best();
        loop {
            let b = if hi - lo == 1 {
                self.draw_unit(lo)
            } else {
                let mid = lo + (hi - lo) / 2;
                let left = self.sample(lo, mid)?;
                let right = self.sample(mid, hi)?;
                left.merge(right, model)
            };
            if b.value(model) < c_best {
                return Ok(b);
            }
            self.budget.tick()?;
        }
    }
}

/// Hierarchical rejection: recursive halving of the unit set with early
/// rejection of partial assignments whose admissible bound reaches
/// `c_best`, and a final full membership check.
pub fn hrs_sample<R: Rng + ?Sized>(p: &InformedProblem, rng: &mut R) -> State {
    hrs_sample_until(p, rng, Deadline::none()).expect("no deadline was set")
}

pub fn hrs_sample_until<R: Rng + ?Sized>(
    p: &InformedProblem,
    rng: &mut R,
    deadline: Deadline,
) -> Result<State> {
    let dim = p.limits().dim();
    let mut h = Hrs {
        p,
        rng,
        budget: Budget::new(deadline),
        coords: vec![0.0; dim],
    };
    let units = dim / h.unit_len();
    loop {
        h.sample(0, units)?;
        let x = State::from_coords_unchecked(h.coords.clone());
        if in_informed_set(&x, p) {
            return Ok(x);
        }
        h.budget.tick()?;
    }
}

fn mh_sigmas(limits: &KinodynamicLimits, frac: f64) -> Vec<f64> {
    (0..limits.dim()).map(|i| frac * limits.coord_range(i)).collect()
}

/// Diagonal Gaussian proposal density `q(b | a)`.
pub fn mh_proposal_density(a: &State, b: &State, sigmas: &[f64]) -> f64 {
    let mut log = 0.0;
    for ((x, y), s) in a.coords().iter().zip(b.coords()).zip(sigmas) {
        let z = (y - x) / s;
        log += -0.5 * z * z - (s * (2.0 * std::f64::consts::PI).sqrt()).ln();
    }
    log.exp()
}

/// One Metropolis-Hastings step with a symmetric Gaussian proposal and a
/// uniform target: the proposal is accepted iff it is informed and inside
/// the box. Returns the previous state on rejection.
pub fn mh_step<R: Rng + ?Sized>(
    chain: &ChainState,
    p: &InformedProblem,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> (State, bool) {
    let prev = chain.previous.as_ref().expect("chain has no previous sample");
    let sigmas = mh_sigmas(p.limits(), cfg.mh_sigma);
    let coords: Vec<f64> = prev
        .coords()
        .iter()
        .zip(&sigmas)
        .map(|(c, s)| c + s * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let cand = State::from_coords_unchecked(coords);
    let alpha = if in_informed_box(&cand, p) { 1.0 } else { 0.0 };
    let u: f64 = rng.random();
    if u < alpha {
        (cand, true)
    } else {
        (prev.clone(), false)
    }
}

/// One Hit-and-Run step. A uniform direction through `previous` defines a
/// chord; `[lambda_minus, lambda_plus]` starts at `+-l_diag` and shrinks
/// toward 0 at each rejected point.
pub fn hnr_step<R: Rng + ?Sized>(
    chain: &ChainState,
    p: &InformedProblem,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<State> {
    hnr_step_traced(chain, p, cfg, rng, None)
}

/// As [`hnr_step`], recording `(lambda_minus, lambda_plus)` before every
/// candidate draw.
pub fn hnr_step_traced<R: Rng + ?Sized>(
    chain: &ChainState,
    p: &InformedProblem,
    cfg: &SamplerConfig,
    rng: &mut R,
    mut trace: Option<&mut Vec<(f64, f64)>>,
) -> Result<State> {
    let prev = chain.previous.as_ref().expect("chain has no previous sample");
    let limits = p.limits();
    let l_diag = limits.diagonal_length();
    let tol = cfg.hnr_lambda_tol * l_diag;
    let dir = unit_direction(prev.dim(), rng);
    let (mut lo, mut hi) = (-l_diag, l_diag);
    let mut cand = prev.clone();
    for _ in 0..cfg.hnr_max_iters {
        if hi - lo < tol {
            break;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push((lo, hi));
        }
        let lambda = uniform_in(rng, lo, hi);
        for ((c, x), d) in cand.coords_mut().iter_mut().zip(prev.coords()).zip(&dir) {
            *c = x + lambda * d;
        }
        if in_informed_box(&cand, p) {
            return Ok(cand);
        }
        if lambda > 0.0 {
            hi = lambda;
        } else {
            lo = lambda;
        }
    }
    Err(Error::ChainStalled)
}

/// Resets after this many consecutive failed chain steps.
const MAX_CHAIN_RESETS: usize = 10_000;

/// One informed sample. Chains are seeded when empty or when `c_best` has
/// dropped since seeding, and reset whenever a step fails.
pub fn informed_sample<R: Rng + ?Sized>(
    chain: &mut ChainState,
    p: &InformedProblem,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<State> {
    informed_sample_until(chain, p, cfg, rng, Deadline::none())
}

pub fn informed_sample_until<R: Rng + ?Sized>(
    chain: &mut ChainState,
    p: &InformedProblem,
    cfg: &SamplerConfig,
    rng: &mut R,
    deadline: Deadline,
) -> Result<State> {
    if !p.informed_set_nonempty() {
        return Err(Error::SeedNotFound);
    }
    if p.c_best() < chain.c_best_at_seed {
        chain.sample_pool.retain(|x| in_informed_set(x, p));
        chain.previous = None;
    }
    let x = match cfg.kind {
        SamplerKind::Rs => rejection_sample_until(p, rng, deadline)?.0,
        SamplerKind::Hrs => hrs_sample_until(p, rng, deadline)?,
        SamplerKind::Mh | SamplerKind::Hnr => chain_step(chain, p, cfg, rng, deadline)?,
    };
    chain.c_best_at_seed = p.c_best();
    chain.steps_taken += 1;
    chain.push_pool(&x, cfg.pool_capacity);
    Ok(x)
}

fn chain_step<R: Rng + ?Sized>(
    chain: &mut ChainState,
    p: &InformedProblem,
    cfg: &SamplerConfig,
    rng: &mut R,
    deadline: Deadline,
) -> Result<State> {
    for attempt in 0..MAX_CHAIN_RESETS {
        if attempt > 0 && deadline.expired() {
            return Err(Error::WallClockExceeded);
        }
        if chain.previous.is_none() {
            let seed = match seed_sample(p, cfg, chain, rng) {
                Ok(x) => x,
                Err(Error::SeedNotFound) => start_or_goal(p, rng),
                Err(e) => return Err(e),
            };
            chain.previous = Some(seed);
            chain.c_best_at_seed = p.c_best();
            chain.restarts += 1;
        }
        let step = match cfg.kind {
            SamplerKind::Mh => Ok(mh_step(chain, p, cfg, rng).0),
            _ => hnr_step(chain, p, cfg, rng),
        };
        match step {
            Ok(x) if in_informed_set(&x, p) => {
                chain.previous = Some(x.clone());
                return Ok(x);
            }
            Ok(_) | Err(Error::ChainStalled) => chain.previous = None,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ChainStalled)
}

/// Draws from the informed set with whichever sampler `cfg` names,
/// holding its own chain across calls.
#[derive(Debug, Clone)]
pub struct InformedSampler {
    pub cfg: SamplerConfig,
    pub chain: ChainState,
}

impl InformedSampler {
    pub fn new(cfg: SamplerConfig) -> Self {
        InformedSampler {
            cfg,
            chain: ChainState::new(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        p: &InformedProblem,
        rng: &mut R,
        deadline: Deadline,
    ) -> Result<State> {
        informed_sample_until(&mut self.chain, p, &self.cfg, rng, deadline)
    }
}
