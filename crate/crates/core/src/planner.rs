//! Informed RRT* over position-velocity state spaces with exact MTDI
//! steering, and two collision-world families.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::informed::InformedProblem;
use crate::mtdi::{mtdi_min_time, mtdi_steer, Trajectory, EPS_END};
use crate::samplers::{InformedSampler, SamplerConfig};
use crate::state::{sample_uniform_state, Deadline, KinodynamicLimits, State};

/// Axis-aligned box in the joint-position subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionBox {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl PositionBox {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.len() != max.len() || min.is_empty() {
            return Err(Error::validation("boxes", "min and max must have equal nonzero length"));
        }
        if min.iter().zip(&max).any(|(a, b)| !(a < b)) {
            return Err(Error::validation("boxes", "min must be below max on every axis"));
        }
        Ok(PositionBox { min, max })
    }

    pub fn contains(&self, q: impl Iterator<Item = f64>) -> bool {
        q.zip(self.min.iter().zip(&self.max))
            .all(|(x, (lo, hi))| *lo <= x && x <= *hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

impl Circle {
    pub fn new(x: f64, y: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::validation("circles", "radius must be positive"));
        }
        Ok(Circle { x, y, r })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum World {
    /// Obstacles are boxes over joint positions.
    CSpaceBoxes(Vec<PositionBox>),
    /// Planar serial chain based at the origin; joint angles are relative
    /// and links are zero-width segments.
    PlanarArm { links: Vec<f64>, obstacles: Vec<Circle> },
}

impl World {
    pub fn free() -> Self {
        World::CSpaceBoxes(Vec::new())
    }

    pub fn planar_arm(links: Vec<f64>, obstacles: Vec<Circle>) -> Result<Self> {
        if links.is_empty() || links.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::validation("links", "link lengths must be positive"));
        }
        Ok(World::PlanarArm { links, obstacles })
    }

    /// Reads `world = "boxes"` with `boxes = [[min..., max...], ...]`, or
    /// `world = "arm"` with `links = [...]` and `circles = [[x, y, r], ...]`.
    /// A missing `world` key means no obstacles.
    pub fn from_config(cfg: &ExperimentConfig, joints: usize) -> Result<Self> {
        match cfg.str("world")? {
            None => Ok(World::free()),
            Some("boxes") => {
                let rows = cfg.f64_rows("boxes", 2 * joints)?.unwrap_or_default();
                rows.into_iter()
                    .map(|r| PositionBox::new(r[..joints].to_vec(), r[joints..].to_vec()))
                    .collect::<Result<Vec<_>>>()
                    .map(World::CSpaceBoxes)
            }
            Some("arm") => {
                let links = cfg
                    .f64_array("links")?
                    .ok_or_else(|| Error::validation("links", "missing"))?;
                if links.len() != joints {
                    return Err(Error::validation("links", "expected one length per joint"));
                }
                let circles = cfg
                    .f64_rows("circles", 3)?
                    .unwrap_or_default()
                    .into_iter()
                    .map(|r| Circle::new(r[0], r[1], r[2]))
                    .collect::<Result<Vec<_>>>()?;
                World::planar_arm(links, circles)
            }
            Some(other) => Err(Error::validation(
                "world",
                format!("expected \"boxes\" or \"arm\", got \"{other}\""),
            )),
        }
    }
}

/// Joint positions of a planar chain, from the base to the tip.
pub fn forward_kinematics(links: &[f64], q: impl Iterator<Item = f64>) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(links.len() + 1);
    let (mut x, mut y, mut theta) = (0.0, 0.0, 0.0);
    pts.push((x, y));
    for (l, qi) in links.iter().zip(q) {
        theta += qi;
        x += l * theta.cos();
        y += l * theta.sin();
        pts.push((x, y));
    }
    pts
}

fn segment_hits_circle(a: (f64, f64), b: (f64, f64), c: &Circle) -> bool {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((c.x - a.0) * dx + (c.y - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (px, py) = (a.0 + t * dx - c.x, a.1 + t * dy - c.y);
    px * px + py * py <= c.r * c.r
}

pub fn collision_free_state(w: &World, x: &State) -> bool {
    let q = || x.joints().map(|j| j.q);
    match w {
        World::CSpaceBoxes(boxes) => !boxes.iter().any(|b| b.contains(q())),
        World::PlanarArm { links, obstacles } => {
            if obstacles.is_empty() {
                return true;
            }
            let pts = forward_kinematics(links, q());
            !pts.windows(2)
                .any(|s| obstacles.iter().any(|c| segment_hits_circle(s[0], s[1], c)))
        }
    }
}

/// Checks the states at `0, dt, 2dt, ...` and the endpoint.
pub fn collision_free_trajectory(w: &World, traj: &Trajectory, dt: f64) -> bool {
    traj.sample_states(dt).iter().all(|x| collision_free_state(w, x))
}

/// Collision-free and within the position limits at every checked instant.
fn edge_valid(w: &World, limits: &KinodynamicLimits, traj: &Trajectory, dt: f64) -> bool {
    traj.sample_states(dt)
        .iter()
        .all(|x| limits.contains(x) && collision_free_state(w, x))
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub state: State,
    pub parent: Option<usize>,
    pub edge: Option<Trajectory>,
    pub cost_from_start: f64,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PlannerConfig {
    pub max_iterations: usize,
    pub max_wall_time: Option<Duration>,
    pub collision_dt: f64,
    pub rewire_k_factor: f64,
    /// Per-coordinate closure required of a goal connection.
    pub goal_tolerance: f64,
    pub sampler: SamplerConfig,
    /// Keeps every post-solution sample with the bound it was drawn under.
    pub record_samples: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            max_iterations: 10_000,
            max_wall_time: None,
            collision_dt: 0.01,
            rewire_k_factor: 1.0,
            goal_tolerance: EPS_END,
            sampler: SamplerConfig::default(),
            record_samples: false,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.collision_dt > 0.0) {
            return Err(Error::validation("collision_dt", "must be positive"));
        }
        if !(self.rewire_k_factor > 0.0) {
            return Err(Error::validation("rewire_k_factor", "must be positive"));
        }
        self.sampler.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimelineEvent {
    pub iteration: usize,
    pub wall_time_s: f64,
    pub c_best: f64,
}

#[derive(Debug, Clone, Default)]
pub struct PlanResult {
    /// Edges from the start to the goal.
    pub solution: Vec<Trajectory>,
    pub timeline: Vec<TimelineEvent>,
    pub iterations: usize,
    pub samples: u64,
    pub tree: Vec<TreeNode>,
    pub sampler_time_ns: u128,
    pub sampler_calls: u64,
    pub sample_log: Vec<(State, f64)>,
}

impl PlanResult {
    pub fn best_cost(&self) -> Result<f64> {
        self.timeline.last().map(|e| e.c_best).ok_or(Error::NoSolution)
    }
}

struct Tree {
    nodes: Vec<TreeNode>,
}

impl Tree {
    fn add(&mut self, state: State, parent: usize, edge: Trajectory) -> usize {
        let id = self.nodes.len();
        let cost = self.nodes[parent].cost_from_start + edge.duration;
        self.nodes[parent].children.push(id);
        self.nodes.push(TreeNode {
            state,
            parent: Some(parent),
            edge: Some(edge),
            cost_from_start: cost,
            children: Vec::new(),
        });
        id
    }

    fn reparent(&mut self, id: usize, parent: usize, edge: Trajectory) {
        if let Some(old) = self.nodes[id].parent {
            self.nodes[old].children.retain(|&c| c != id);
        }
        let new_cost = self.nodes[parent].cost_from_start + edge.duration;
        let delta = new_cost - self.nodes[id].cost_from_start;
        self.nodes[parent].children.push(id);
        let node = &mut self.nodes[id];
        node.parent = Some(parent);
        node.edge = Some(edge);
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            self.nodes[n].cost_from_start += delta;
            stack.extend(self.nodes[n].children.iter().copied());
        }
    }

    fn is_ancestor(&self, a: usize, mut b: usize) -> bool {
        loop {
            if a == b {
                return true;
            }
            match self.nodes[b].parent {
                Some(p) => b = p,
                None => return false,
            }
        }
    }
}

/// Indices of the `k` smallest values.
fn k_smallest(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_finite()).collect();
    let k = k.min(idx.len());
    if k == 0 {
        return Vec::new();
    }
    let cmp = |a: &usize, b: &usize| values[*a].total_cmp(&values[*b]).then(a.cmp(b));
    if k < idx.len() {
        idx.select_nth_unstable_by(k - 1, cmp);
        idx.truncate(k);
    }
    idx.sort_by(cmp);
    idx
}

/// Informed RRT*: uniform samples until the first solution, informed
/// samples afterwards, with every added node also steered straight to the
/// goal. `p.c_best()` seeds the bound; improvements lower it.
pub fn plan<R: Rng + ?Sized>(
    p: &InformedProblem,
    w: &World,
    cfg: &PlannerConfig,
    rng: &mut R,
) -> PlanResult {
    let t0 = Instant::now();
    let deadline = cfg
        .max_wall_time
        .map(|d| Deadline::at(t0 + d))
        .unwrap_or_default();
    let mut problem = p.clone();
    let limits = p.limits().clone();
    let goal = p.goal().clone();
    let mut sampler = InformedSampler::new(cfg.sampler.clone());
    let mut tree = Tree {
        nodes: vec![TreeNode {
            state: p.start().clone(),
            parent: None,
            edge: None,
            cost_from_start: 0.0,
            children: Vec::new(),
        }],
    };
    let mut goal_links: Vec<(usize, Trajectory)> = Vec::new();
    let mut best: Option<(usize, usize)> = None;
    let mut out = PlanResult::default();

    if !collision_free_state(w, p.start()) || !collision_free_state(w, &goal) {
        out.tree = tree.nodes;
        return out;
    }

    let mut dist = Vec::new();
    let mut last_sample: Option<State> = None;
    for it in 0..cfg.max_iterations {
        if deadline.expired() {
            break;
        }
        out.iterations = it + 1;
        let x = if best.is_none() {
            sample_uniform_state(&limits, rng)
        } else {
            let ts = Instant::now();
            let r = sampler.sample(&problem, rng, deadline);
            out.sampler_time_ns += ts.elapsed().as_nanos();
            out.sampler_calls += 1;
            match r {
                Ok(x) => {
                    if cfg.record_samples {
                        out.sample_log.push((x.clone(), problem.c_best()));
                    }
                    x
                }
                Err(_) => break,
            }
        };
        out.samples += 1;
        // A rejected MH proposal repeats the previous sample, which is
        // already in the tree or already refused.
        if last_sample.as_ref() == Some(&x) {
            continue;
        }
        last_sample = Some(x.clone());
        if !collision_free_state(w, &x) {
            continue;
        }

        let n = tree.nodes.len();
        let k = ((cfg.rewire_k_factor * std::f64::consts::E * ((n + 1) as f64).ln()).ceil()
            as usize)
            .max(1);

        dist.clear();
        dist.extend(tree.nodes.iter().map(|nd| mtdi_min_time(&nd.state, &x, &limits)));
        let mut order: Vec<(f64, usize)> = k_smallest(&dist, k)
            .into_iter()
            .map(|i| (tree.nodes[i].cost_from_start + dist[i], i))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut parent = None;
        for &(c, i) in &order {
            if c >= problem.c_best() {
                break;
            }
            let traj = mtdi_steer(&tree.nodes[i].state, &x, &limits);
            if edge_valid(w, &limits, &traj, cfg.collision_dt) {
                parent = Some((i, traj));
                break;
            }
        }
        let Some((pi, traj)) = parent else {
            continue;
        };
        let new_id = tree.add(x.clone(), pi, traj);

        let out_dist: Vec<f64> = tree.nodes[..n]
            .iter()
            .map(|nd| mtdi_min_time(&x, &nd.state, &limits))
            .collect();
        for i in k_smallest(&out_dist, k) {
            let c_new = tree.nodes[new_id].cost_from_start;
            if c_new + out_dist[i] >= tree.nodes[i].cost_from_start || tree.is_ancestor(i, new_id) {
                continue;
            }
            let traj = mtdi_steer(&x, &tree.nodes[i].state, &limits);
            if edge_valid(w, &limits, &traj, cfg.collision_dt) {
                tree.reparent(i, new_id, traj);
            }
        }

        let c_new = tree.nodes[new_id].cost_from_start;
        let to_goal = mtdi_min_time(&x, &goal, &limits);
        if c_new + to_goal < problem.c_best() {
            let traj = mtdi_steer(&x, &goal, &limits);
            let closes = traj.state_at(traj.duration).max_abs_diff(&goal) <= cfg.goal_tolerance;
            if closes && edge_valid(w, &limits, &traj, cfg.collision_dt) {
                goal_links.push((new_id, traj));
            }
        }

        let mut improved = None;
        for (gi, (node, traj)) in goal_links.iter().enumerate() {
            let c = tree.nodes[*node].cost_from_start + traj.duration;
            if c < problem.c_best() && improved.is_none_or(|(_, b)| c < b) {
                improved = Some((gi, c));
            }
        }
        if let Some((gi, c)) = improved {
            best = Some((goal_links[gi].0, gi));
            problem.set_c_best(c);
            out.timeline.push(TimelineEvent {
                iteration: it,
                wall_time_s: t0.elapsed().as_secs_f64(),
                c_best: c,
            });
        }
    }

    if let Some((_, gi)) = best {
        let (node, traj) = &goal_links[gi];
        let mut edges = vec![traj.clone()];
        let mut cur = *node;
        while let Some(parent) = tree.nodes[cur].parent {
            edges.push(tree.nodes[cur].edge.clone().expect("non-root nodes carry an edge"));
            cur = parent;
        }
        edges.reverse();
        out.solution = edges;
    }
    out.tree = tree.nodes;
    out
}
