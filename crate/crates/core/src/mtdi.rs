//! Minimum-time double integrator steering.
//!
//! Each joint obeys `q'' = u` with `|u| <= a_max` and `|q'| <= v_max`. For a
//! fixed duration `T` the positions reachable with final velocity `v1` form an
//! interval `[lower_reach(T), upper_reach(T)]` whose ends are bang-bang
//! profiles (with a cruise at the velocity bound once it saturates). The
//! feasible durations are therefore decided by the roots of
//! `upper_reach(T) = d` and `lower_reach(T) = d`; at most one open band of
//! durations is infeasible, and its upper end is a root of the
//! opposite-signed structure.

use crate::error::{Error, Result};
use crate::informed::{CostModel, InformedProblem};
use crate::state::{JointState, KinodynamicLimits, State};

/// Endpoint closure tolerance per coordinate.
pub const EPS_END: f64 = 1e-6;
/// Velocity-bound slack at segment boundaries.
pub const EPS_INT: f64 = 1e-9;

const ACCEL_SLACK: f64 = 1e-9;

/// One constant-acceleration piece of a single joint's motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSegment {
    pub duration: f64,
    pub accel: f64,
}

/// A constant-acceleration piece applied to every joint at once.
#[derive(Debug, Clone, PartialEq)]
pub struct AccelSegment {
    pub duration: f64,
    pub accel: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AccelProfile {
    pub segments: Vec<AccelSegment>,
}

impl AccelProfile {
    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }
}

/// Durations a single joint can realise: `[t_min, inf)` minus an optional
/// open band `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibleTimeSet {
    pub t_min: f64,
    pub excluded: Option<(f64, f64)>,
}

impl FeasibleTimeSet {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_min && !matches!(self.excluded, Some((lo, hi)) if t > lo && t < hi)
    }
}

/// A timed state-space path produced by [`mtdi_steer`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub start: State,
    pub end: State,
    pub profile: AccelProfile,
    pub duration: f64,
}

impl Trajectory {
    /// The state reached after `t` seconds (clamped to `[0, duration]`).
    pub fn state_at(&self, t: f64) -> State {
        let mut coords = self.start.coords().to_vec();
        let mut remaining = t.clamp(0.0, self.duration);
        for seg in &self.profile.segments {
            let dt = remaining.min(seg.duration);
            advance(&mut coords, &seg.accel, dt);
            remaining -= dt;
            if remaining <= 0.0 {
                break;
            }
        }
        State::from_coords_unchecked(coords)
    }

    /// States at `0, dt, 2dt, ...` and always the final instant.
    pub fn sample_states(&self, dt: f64) -> Vec<State> {
        let mut out = Vec::new();
        let mut coords = self.start.coords().to_vec();
        out.push(State::from_coords_unchecked(coords.clone()));
        if self.duration <= 0.0 {
            return out;
        }
        let steps = (self.duration / dt).floor() as usize;
        let mut seg_idx = 0;
        let mut seg_elapsed = 0.0;
        let mut t = 0.0;
        for k in 1..=steps {
            let target = k as f64 * dt;
            if target >= self.duration {
                break;
            }
            let mut need = target - t;
            while need > 0.0 && seg_idx < self.profile.segments.len() {
                let seg = &self.profile.segments[seg_idx];
                let left = seg.duration - seg_elapsed;
                if need < left {
                    advance(&mut coords, &seg.accel, need);
                    seg_elapsed += need;
                    need = 0.0;
                } else {
                    advance(&mut coords, &seg.accel, left);
                    need -= left;
                    seg_idx += 1;
                    seg_elapsed = 0.0;
                }
            }
            t = target;
            out.push(State::from_coords_unchecked(coords.clone()));
        }
        out.push(self.end.clone());
        out
    }
}

#[inline]
fn advance(coords: &mut [f64], accel: &[f64], dt: f64) {
    for (c, &a) in coords.chunks_exact_mut(2).zip(accel) {
        c[0] += c[1] * dt + 0.5 * a * dt * dt;
        c[1] += a * dt;
    }
}

/// Exact integration of a multi-joint profile from `start`.
pub fn integrate(start: &State, profile: &AccelProfile) -> State {
    let mut coords = start.coords().to_vec();
    for seg in &profile.segments {
        advance(&mut coords, &seg.accel, seg.duration);
    }
    State::from_coords_unchecked(coords)
}

/// Exact integration of a single-joint profile.
pub fn integrate_joint(s0: JointState, segments: &[JointSegment]) -> JointState {
    let mut s = s0;
    for seg in segments {
        s.q += s.v * seg.duration + 0.5 * seg.accel * seg.duration * seg.duration;
        s.v += seg.accel * seg.duration;
    }
    s
}

/// Largest position reachable at time `t` when ending with velocity `v1`.
fn upper_reach(t: f64, v0: f64, v1: f64, vm: f64, am: f64) -> f64 {
    let vp = 0.5 * (am * t + v0 + v1);
    if vp <= vm {
        (2.0 * vp * vp - v0 * v0 - v1 * v1) / (2.0 * am)
    } else {
        (2.0 * vm * vm - v0 * v0 - v1 * v1) / (2.0 * am) + vm * (t - (2.0 * vm - v0 - v1) / am)
    }
}

fn lower_reach(t: f64, v0: f64, v1: f64, vm: f64, am: f64) -> f64 {
    -upper_reach(t, -v0, -v1, vm, am)
}

/// Durations `t >= t0` with `upper_reach(t) = d`.
fn upper_roots(d: f64, v0: f64, v1: f64, vm: f64, am: f64, out: &mut [f64; 5], n: &mut usize) {
    let s = 0.5 * (2.0 * am * d + v0 * v0 + v1 * v1);
    if s < 0.0 {
        return;
    }
    let r = s.sqrt();
    let floor = v0.max(v1);
    if r >= floor {
        let t = if r <= vm {
            (2.0 * r - v0 - v1) / am
        } else {
            let t_cap = (2.0 * vm - v0 - v1) / am;
            t_cap + (d - (2.0 * vm * vm - v0 * v0 - v1 * v1) / (2.0 * am)) / vm
        };
        out[*n] = t;
        *n += 1;
    }
    if r > 0.0 && -r >= floor {
        out[*n] = (-2.0 * r - v0 - v1) / am;
        *n += 1;
    }
}

/// Rounding scale of the reach closed forms; relative, so tiny motions
/// are not judged against an absolute floor.
#[inline]
fn reach_tol(d: f64, t: f64, v0: f64, v1: f64, vm: f64, am: f64) -> f64 {
    1e-10 * (d.abs() + vm * t + (v0 * v0 + v1 * v1) / am)
}

fn feasible_at(t: f64, t0: f64, d: f64, v0: f64, v1: f64, vm: f64, am: f64) -> bool {
    if t < t0 * (1.0 - 1e-12) - 1e-15 {
        return false;
    }
    let tol = reach_tol(d, t, v0, v1, vm, am);
    lower_reach(t, v0, v1, vm, am) <= d + tol && d <= upper_reach(t, v0, v1, vm, am) + tol
}

/// The set of achievable durations for one joint.
pub fn joint_feasible_times(s0: JointState, s1: JointState, v_max: f64, a_max: f64) -> FeasibleTimeSet {
    let (d, v0, v1) = (s1.q - s0.q, s0.v, s1.v);
    let t0 = (v1 - v0).abs() / a_max;
    let mut cand = [0.0; 5];
    let mut n = 1;
    cand[0] = t0;
    upper_roots(d, v0, v1, v_max, a_max, &mut cand, &mut n);
    upper_roots(-d, -v0, -v1, v_max, a_max, &mut cand, &mut n);
    let cand = &mut cand[..n];
    for c in cand.iter_mut() {
        *c = c.max(t0);
    }
    cand.sort_by(|a, b| a.total_cmp(b));

    let feasible = |t: f64| feasible_at(t, t0, d, v0, v1, v_max, a_max);
    let Some(first) = cand.iter().position(|&t| feasible(t)) else {
        // Unreachable for states inside the velocity box; keep a sane answer.
        debug_assert!(false, "no feasible candidate for {s0:?} -> {s1:?}");
        return FeasibleTimeSet {
            t_min: *cand.last().unwrap(),
            excluded: None,
        };
    };
    let t_min = cand[first];
    let mut excluded = None;
    for w in cand[first..].windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= 1e-12 * (1.0 + hi) {
            continue;
        }
        if !feasible(0.5 * (lo + hi)) {
            excluded = Some((lo, hi));
            break;
        }
    }
    FeasibleTimeSet { t_min, excluded }
}

/// Minimum duration steering `s0` to `s1` under the joint's bounds.
pub fn joint_min_time(s0: JointState, s1: JointState, v_max: f64, a_max: f64) -> f64 {
    if s0 == s1 {
        return 0.0;
    }
    joint_feasible_times(s0, s1, v_max, a_max).t_min
}

/// A profile of at most three segments reaching `s1` at exactly `t`,
/// choosing the smallest peak acceleration.
pub fn joint_profile_for_time(
    s0: JointState,
    s1: JointState,
    t: f64,
    v_max: f64,
    a_max: f64,
) -> Result<Vec<JointSegment>> {
    let infeasible = Error::InfeasibleDuration { duration: t };
    if !(t >= 0.0) || !t.is_finite() {
        return Err(infeasible);
    }
    let d = s1.q - s0.q;
    if t == 0.0 {
        let scale = 1e-12 * (1.0 + s0.q.abs() + s0.v.abs());
        return if d.abs() <= scale && (s1.v - s0.v).abs() <= scale {
            Ok(Vec::new())
        } else {
            Err(infeasible)
        };
    }
    // Mirror so that the first phase accelerates upwards.
    let b = 2.0 * t * (s0.v + s1.v) - 4.0 * d;
    let sign = if b <= 0.0 { 1.0 } else { -1.0 };
    let (d, v0, v1, b) = (sign * d, sign * s0.v, sign * s1.v, -b.abs());
    let dv = v1 - v0;

    let alpha = (-b + (b * b + 4.0 * t * t * dv * dv).sqrt()) / (2.0 * t * t);
    // The closed forms are ill-conditioned when |v| >> a t, so an
    // acceleration marginally above the bound is clamped, both profile
    // shapes are tried, and a shape is judged by endpoint closure.
    let two_phase = || {
        if alpha <= f64::MIN_POSITIVE {
            return Some(vec![JointSegment {
                duration: t,
                accel: 0.0,
            }]);
        }
        let a = alpha.min(a_max);
        let ts = (0.5 * (dv / a + t)).clamp(0.0, t);
        if v0 + a * ts > v_max * (1.0 + ACCEL_SLACK) {
            return None;
        }
        Some(vec![
            JointSegment {
                duration: ts,
                accel: a,
            },
            JointSegment {
                duration: t - ts,
                accel: -a,
            },
        ])
    };
    let cruise = || {
        let gap = v_max * t - d;
        if gap <= 0.0 {
            return None;
        }
        let a = (((v_max - v0).powi(2) + (v_max - v1).powi(2)) / (2.0 * gap)).min(a_max);
        let t1 = (v_max - v0) / a;
        let t3 = (v_max - v1) / a;
        let tc = t - t1 - t3;
        if tc < -ACCEL_SLACK * (1.0 + t) {
            return None;
        }
        Some(vec![
            JointSegment {
                duration: t1,
                accel: a,
            },
            JointSegment {
                duration: tc.max(0.0),
                accel: 0.0,
            },
            JointSegment {
                duration: t3,
                accel: -a,
            },
        ])
    };
    // Closure in the mirrored frame anchored at the origin, so the check is
    // relative to the motion rather than to the absolute position.
    let tol = 1e-9 * (d.abs() + v_max * t + (v0 * v0 + v1 * v1) / a_max);
    let vtol = 1e-9 * (v0.abs() + v1.abs() + a_max * t);
    let closes = |segs: &Vec<JointSegment>| {
        let end = integrate_joint(JointState::new(0.0, v0), segs);
        (end.q - d).abs() <= tol && (end.v - v1).abs() <= vtol
    };
    let prefer_two = 0.5 * (v0 + v1 + alpha * t) <= v_max;
    let (first, second): (&dyn Fn() -> Option<Vec<JointSegment>>, &dyn Fn() -> Option<Vec<JointSegment>>) =
        if prefer_two { (&two_phase, &cruise) } else { (&cruise, &two_phase) };
    let mut segs = first()
        .filter(&closes)
        .or_else(|| second().filter(&closes))
        .ok_or(infeasible)?;
    for seg in &mut segs {
        seg.accel *= sign;
    }
    segs.retain(|s| s.duration > 0.0);
    Ok(segs)
}

/// Smallest duration feasible for every joint simultaneously.
pub fn mtdi_min_time(x0: &State, x1: &State, limits: &KinodynamicLimits) -> f64 {
    let n = limits.joint_count();
    if n == 1 {
        let l = limits.joint(0);
        return joint_min_time(x0.joint(0), x1.joint(0), l.v_max, l.a_max);
    }
    let mut sets = [FeasibleTimeSet {
        t_min: 0.0,
        excluded: None,
    }; 16];
    let mut heap = Vec::new();
    let sets: &mut [FeasibleTimeSet] = if n <= sets.len() {
        &mut sets[..n]
    } else {
        heap.resize(n, sets[0]);
        &mut heap
    };
    let mut t = 0.0f64;
    for (j, slot) in sets.iter_mut().enumerate() {
        let l = limits.joint(j);
        let (a, b) = (x0.joint(j), x1.joint(j));
        *slot = if a == b {
            joint_feasible_times_identity(a, l.v_max, l.a_max)
        } else {
            joint_feasible_times(a, b, l.v_max, l.a_max)
        };
        t = t.max(slot.t_min);
    }
    synchronize(sets, t)
}

fn joint_feasible_times_identity(s: JointState, v_max: f64, a_max: f64) -> FeasibleTimeSet {
    if s.v == 0.0 {
        FeasibleTimeSet {
            t_min: 0.0,
            excluded: None,
        }
    } else {
        joint_feasible_times(s, s, v_max, a_max)
    }
}

/// Raises `t` past every excluded band containing it. Each jump lands on a
/// band's closed upper end, so the first fixed point is the answer.
fn synchronize(sets: &[FeasibleTimeSet], mut t: f64) -> f64 {
    loop {
        let mut moved = false;
        for s in sets {
            if let Some((lo, hi)) = s.excluded {
                if t > lo && t < hi {
                    t = hi;
                    moved = true;
                }
            }
        }
        if !moved {
            return t;
        }
    }
}

/// Common feasible duration over explicit per-joint feasible sets.
pub fn common_min_time(sets: &[FeasibleTimeSet]) -> f64 {
    let t = sets.iter().map(|s| s.t_min).fold(0.0, f64::max);
    synchronize(sets, t)
}

/// Time-optimal synchronized trajectory from `x0` to `x1`.
pub fn mtdi_steer(x0: &State, x1: &State, limits: &KinodynamicLimits) -> Trajectory {
    let t = mtdi_min_time(x0, x1, limits);
    let per_joint: Vec<Vec<JointSegment>> = (0..limits.joint_count())
        .map(|j| {
            let l = limits.joint(j);
            joint_profile_for_time(x0.joint(j), x1.joint(j), t, l.v_max, l.a_max)
                .expect("synchronized duration is feasible for every joint")
        })
        .collect();
    Trajectory {
        start: x0.clone(),
        end: x1.clone(),
        profile: merge_profiles(&per_joint, t),
        duration: t,
    }
}

/// Fuses per-joint segment lists into one list of common breakpoints.
fn merge_profiles(per_joint: &[Vec<JointSegment>], total: f64) -> AccelProfile {
    if total <= 0.0 {
        return AccelProfile::default();
    }
    let mut breaks = vec![0.0, total];
    for segs in per_joint {
        let mut acc = 0.0;
        for s in segs {
            acc += s.duration;
            if acc < total {
                breaks.push(acc);
            }
        }
    }
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + total));
    if let Some(last) = breaks.last_mut() {
        *last = total;
    }
    let accel_at = |segs: &[JointSegment], t: f64| {
        let mut acc = 0.0;
        for s in segs {
            acc += s.duration;
            if t < acc {
                return s.accel;
            }
        }
        segs.last().map_or(0.0, |s| s.accel)
    };
    let segments = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            AccelSegment {
                duration: w[1] - w[0],
                accel: per_joint.iter().map(|segs| accel_at(segs, mid)).collect(),
            }
        })
        .collect();
    AccelProfile { segments }
}

/// Cost of the best start-to-goal trajectory constrained through `x`.
pub fn cost_through(x: &State, p: &InformedProblem) -> f64 {
    match p.cost_model() {
        CostModel::MinTime => {
            mtdi_min_time(p.start(), x, p.limits()) + mtdi_min_time(x, p.goal(), p.limits())
        }
        CostModel::Euclidean => p.start().distance(x) + x.distance(p.goal()),
    }
}

/// Central finite differences with per-coordinate steps.
pub fn numeric_gradient<F>(f: F, x: &State, steps: &[f64]) -> Vec<f64>
where
    F: Fn(&State) -> f64,
{
    let mut probe = x.clone();
    (0..x.dim())
        .map(|i| {
            let h = steps[i];
            let c = x.coords()[i];
            probe.coords_mut()[i] = c + h;
            let up = f(&probe);
            probe.coords_mut()[i] = c - h;
            let down = f(&probe);
            probe.coords_mut()[i] = c;
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Scale-aware steps: `1e-5` of each coordinate's range.
pub fn default_gradient_steps(limits: &KinodynamicLimits) -> Vec<f64> {
    (0..limits.dim()).map(|i| 1e-5 * limits.coord_range(i)).collect()
}

/// Minimum time from `start` to `(q_target, v)` for `n` evenly spaced
/// target velocities spanning `[-v_max, v_max]`.
pub fn target_velocity_sweep(
    start: JointState,
    q_target: f64,
    v_max: f64,
    a_max: f64,
    n: usize,
) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let v = -v_max + 2.0 * v_max * i as f64 / (n - 1) as f64;
            (v, joint_min_time(start, JointState::new(q_target, v), v_max, a_max))
        })
        .collect()
}

/// Indices `i` where the gap `|f[i+1] - f[i]|` exceeds `ratio` times the
/// local gap scale on the smoother side (the larger of the two adjacent
/// gaps on each side, then the smaller side). A jump spanning adjacent
/// gaps is reported once, at its first index.
pub fn detect_jumps(values: &[f64], ratio: f64) -> Vec<usize> {
    let gaps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mut out = Vec::new();
    if gaps.len() < 5 {
        return out;
    }
    for i in 2..gaps.len() - 2 {
        let left = gaps[i - 1].max(gaps[i - 2]);
        let right = gaps[i + 1].max(gaps[i + 2]);
        let local = left.min(right);
        if gaps[i] > ratio * local && gaps[i] > 1e-12 && out.last() != Some(&(i - 1)) {
            out.push(i);
        }
    }
    out
}
