//! Adaptive Dormand–Prince 5(4) integration of the piecewise system with
//! event location on the quorum manifold.
//!
//! Each accepted step is scanned for a sign change of `H = a + l + c − Θ`
//! on the dense-output polynomial. When one is found the crossing time is
//! bracketed to `event_tol`, the state is advanced to the crossing, the
//! branch flips and the method restarts from there. The manifold has no
//! sliding region, so every crossing is transversal and the restart
//! immediately leaves it.

use serde::{Deserialize, Serialize};

use crate::equilibria::{boundary_point, interior_point, EquilibriumKind};
use crate::error::{Error, Result};
use crate::model::{
    self, full_rhs, normal_speed_with_searchers, reduced_rhs, select_branch, ActiveState, BranchId,
    FullState,
};
use crate::params::{ColonyConfig, RateParams};

/// Components in `[-CLAMP_TOL, 0)` are reset to zero after each accepted step.
pub const CLAMP_TOL: f64 = 1e-9;

/// A piecewise-smooth system split by a scalar switching function.
pub trait PiecewiseSystem<const D: usize>: Sync {
    fn rhs(&self, branch: BranchId, y: &[f64; D]) -> [f64; D];

    /// Switching function; negative selects S1, positive S2.
    fn switching(&self, y: &[f64; D]) -> f64;

    /// Time derivative of the switching function (same on both branches).
    fn normal_speed(&self, y: &[f64; D]) -> f64;

    /// Active coordinates and conserved active mass of a state.
    fn active_view(&self, y: &[f64; D]) -> (ActiveState, f64);

    /// Removes round-off negatives.
    fn clamp(&self, y: &mut [f64; D]);

    fn rates(&self) -> &RateParams;

    fn theta(&self) -> f64;
}

/// Reduced (a, l, c) system with searchers implied by a fixed active mass.
#[derive(Debug, Clone, Copy)]
pub struct ReducedSystem {
    pub params: RateParams,
    pub active_mass: f64,
    pub theta: f64,
}

impl ReducedSystem {
    pub fn new(params: &RateParams, cfg: &ColonyConfig) -> Self {
        Self {
            params: *params,
            active_mass: cfg.active_mass(),
            theta: cfg.theta,
        }
    }
}

impl PiecewiseSystem<3> for ReducedSystem {
    fn rhs(&self, branch: BranchId, y: &[f64; 3]) -> [f64; 3] {
        reduced_rhs(branch, y, &self.params, self.active_mass)
    }

    fn switching(&self, y: &[f64; 3]) -> f64 {
        y[0] + y[1] + y[2] - self.theta
    }

    fn normal_speed(&self, y: &[f64; 3]) -> f64 {
        let s = self.active_mass - y[0] - y[1] - y[2];
        normal_speed_with_searchers(&self.params, s, y[0], y[1], y[2])
    }

    fn active_view(&self, y: &[f64; 3]) -> (ActiveState, f64) {
        (ActiveState::from_array(*y), self.active_mass)
    }

    fn clamp(&self, y: &mut [f64; 3]) {
        for v in y.iter_mut() {
            if *v < 0.0 && *v >= -CLAMP_TOL {
                *v = 0.0;
            }
        }
    }

    fn rates(&self) -> &RateParams {
        &self.params
    }

    fn theta(&self) -> f64 {
        self.theta
    }
}

/// Full (s, a, l, c, p) system. The active total is whatever the initial
/// state carries, so searchers can be set independently of `rho N`.
#[derive(Debug, Clone, Copy)]
pub struct FullSystem {
    pub params: RateParams,
    pub theta: f64,
    pub passive_cap: f64,
}

impl FullSystem {
    pub fn new(params: &RateParams, cfg: &ColonyConfig) -> Self {
        Self {
            params: *params,
            theta: cfg.theta,
            passive_cap: cfg.passive_mass(),
        }
    }
}

impl PiecewiseSystem<5> for FullSystem {
    fn rhs(&self, branch: BranchId, y: &[f64; 5]) -> [f64; 5] {
        full_rhs(branch, y, &self.params, self.passive_cap)
    }

    fn switching(&self, y: &[f64; 5]) -> f64 {
        y[1] + y[2] + y[3] - self.theta
    }

    fn normal_speed(&self, y: &[f64; 5]) -> f64 {
        normal_speed_with_searchers(&self.params, y[0], y[1], y[2], y[3])
    }

    fn active_view(&self, y: &[f64; 5]) -> (ActiveState, f64) {
        (ActiveState::new(y[1], y[2], y[3]), y[0] + y[1] + y[2] + y[3])
    }

    fn clamp(&self, y: &mut [f64; 5]) {
        // a, l, c round-off is moved into s so the active total is unchanged
        for i in 1..4 {
            if y[i] < 0.0 && y[i] >= -CLAMP_TOL {
                y[0] += y[i];
                y[i] = 0.0;
            }
        }
        for i in [0, 4] {
            if y[i] < 0.0 && y[i] >= -CLAMP_TOL {
                y[i] = 0.0;
            }
        }
    }

    fn rates(&self) -> &RateParams {
        &self.params
    }

    fn theta(&self) -> f64 {
        self.theta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Integration horizon in minutes.
    pub t_max: f64,
    pub max_steps: usize,
    /// Time tolerance on located crossings.
    pub event_tol: f64,
    /// Crossings closer than this are treated as one grazing contact.
    pub min_event_gap: f64,
    /// Upper bound on the step size.
    pub h_max: f64,
    /// Stop early once the active vector field norm drops below this value.
    pub steady_tol: Option<f64>,
    /// Keep every accepted step in the trajectory (otherwise only the end
    /// state and crossings are kept).
    pub record_samples: bool,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            t_max: 1e4,
            max_steps: 10_000_000,
            event_tol: 1e-10,
            min_event_gap: 1e-9,
            h_max: 1.0,
            steady_tol: None,
            record_samples: true,
        }
    }
}

impl IntegrationConfig {
    pub fn with_t_max(self, t_max: f64) -> Self {
        Self { t_max, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("t_max", self.t_max),
            ("event_tol", self.event_tol),
            ("min_event_gap", self.min_event_gap),
            ("h_max", self.h_max),
        ];
        for (name, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidSpec("max_steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossingDirection {
    S1ToS2,
    S2ToS1,
}

impl CrossingDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossingDirection::S1ToS2 => "S1->S2",
            CrossingDirection::S2ToS1 => "S2->S1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub time: f64,
    pub direction: CrossingDirection,
    /// Switching value at the located state.
    pub switching: f64,
    /// Normal speed g at the located state.
    pub normal_speed: f64,
}

/// How the branch is chosen during integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchMode {
    Switching,
    Fixed(BranchId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const D: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; D]>,
    /// Branch in force from each sample onward.
    pub branches: Vec<BranchId>,
    pub crossings: Vec<Crossing>,
    pub final_time: f64,
    pub final_state: [f64; D],
    pub final_branch: BranchId,
    /// The run stopped before `t_max` because the field fell below `steady_tol`.
    pub reached_steady: bool,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl<const D: usize> Trajectory<D> {
    /// Crossings at or after time `t`.
    pub fn crossings_after(&self, t: f64) -> impl Iterator<Item = &Crossing> {
        self.crossings.iter().filter(move |c| c.time >= t)
    }
}

// Dormand–Prince 5(4) tableau with Hairer's dense-output coefficients.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const DENSE: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
/// Interior points of each step where the switching function is sampled.
const EVENT_PROBES: usize = 4;

/// Continuous extension of one accepted step.
struct DenseStep<const D: usize> {
    t0: f64,
    h: f64,
    cont: [[f64; D]; 5],
}

impl<const D: usize> DenseStep<D> {
    fn eval(&self, theta: f64) -> [f64; D] {
        let s1 = 1.0 - theta;
        let c = &self.cont;
        std::array::from_fn(|i| {
            c[0][i] + theta * (c[1][i] + s1 * (c[2][i] + theta * (c[3][i] + s1 * c[4][i])))
        })
    }
}

fn on_far_side(branch: BranchId, h: f64) -> bool {
    match branch {
        BranchId::S1 => h > 0.0,
        BranchId::S2 => h < 0.0,
    }
}

/// Locates the first crossing inside a step. Returns the step fraction just
/// past the crossing together with the state there.
fn locate_event<S: PiecewiseSystem<D>, const D: usize>(
    system: &S,
    dense: &DenseStep<D>,
    branch: BranchId,
    y_end: &[f64; D],
    event_tol: f64,
) -> Option<(f64, [f64; D])> {
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=EVENT_PROBES {
        let theta = k as f64 / EVENT_PROBES as f64;
        let y = if k == EVENT_PROBES { *y_end } else { dense.eval(theta) };
        if on_far_side(branch, system.switching(&y)) {
            hi = Some(theta);
            break;
        }
        lo = theta;
    }
    let mut hi = hi?;
    let mut h_lo = system.switching(&dense.eval(lo));
    let mut h_hi = system.switching(&dense.eval(hi));
    // Illinois false position on the bracket [lo, hi]
    let mut side = 0i8;
    for _ in 0..200 {
        if (hi - lo) * dense.h <= event_tol {
            break;
        }
        let mut mid = hi - h_hi * (hi - lo) / (h_hi - h_lo);
        if !(mid > lo && mid < hi) {
            mid = 0.5 * (lo + hi);
        }
        let h_mid = system.switching(&dense.eval(mid));
        if on_far_side(branch, h_mid) {
            hi = mid;
            h_hi = h_mid;
            if side == 1 {
                h_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = mid;
            h_lo = h_mid;
            if side == -1 {
                h_hi *= 0.5;
            }
            side = -1;
        }
    }
    let y = if hi == 1.0 { *y_end } else { dense.eval(hi) };
    Some((hi, y))
}

fn error_norm<const D: usize>(err: &[f64; D], y0: &[f64; D], y1: &[f64; D], icfg: &IntegrationConfig) -> f64 {
    let sum: f64 = (0..D)
        .map(|i| {
            let sc = icfg.abs_tol + icfg.rel_tol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / D as f64).sqrt()
}

fn max_abs<const D: usize>(v: &[f64; D]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn initial_step<const D: usize>(y: &[f64; D], f: &[f64; D], icfg: &IntegrationConfig) -> f64 {
    let scale: [f64; D] = std::array::from_fn(|i| icfg.abs_tol + icfg.rel_tol * y[i].abs());
    let d0 = (0..D).map(|i| (y[i] / scale[i]).powi(2)).sum::<f64>().sqrt();
    let d1 = (0..D).map(|i| (f[i] / scale[i]).powi(2)).sum::<f64>().sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(icfg.h_max).min(icfg.t_max)
}

/// Active-component magnitude of the vector field, used for steady state.
pub fn active_field_norm<S: PiecewiseSystem<D>, const D: usize>(
    system: &S,
    branch: BranchId,
    y: &[f64; D],
) -> f64 {
    let (active, m) = system.active_view(y);
    let f = reduced_rhs(branch, &active.to_array(), system.rates(), m);
    max_abs(&f)
}

/// Integrates `system` from `y0` over `[0, t_max]`.
pub fn integrate<S: PiecewiseSystem<D>, const D: usize>(
    system: &S,
    y0: [f64; D],
    icfg: &IntegrationConfig,
    mode: SwitchMode,
) -> Result<Trajectory<D>> {
    icfg.validate()?;
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidState("non-finite initial state".into()));
    }
    let mut t = 0.0;
    let mut y = y0;
    system.clamp(&mut y);
    let mut branch = match mode {
        SwitchMode::Fixed(b) => b,
        SwitchMode::Switching => select_branch(system.switching(&y), system.normal_speed(&y)),
    };
    let mut f = system.rhs(branch, &y);
    let mut h = initial_step(&y, &f, icfg);

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        branches: Vec::new(),
        crossings: Vec::new(),
        final_time: 0.0,
        final_state: y,
        final_branch: branch,
        reached_steady: false,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    if icfg.record_samples {
        traj.times.push(t);
        traj.states.push(y);
        traj.branches.push(branch);
    }

    let mut steps = 0usize;
    let mut k = [[0.0; D]; 7];
    while t < icfg.t_max {
        if steps >= icfg.max_steps {
            return Err(Error::StepBudgetExhausted {
                max_steps: icfg.max_steps,
                t,
            });
        }
        steps += 1;
        let remaining = icfg.t_max - t;
        let last = h >= remaining;
        if last {
            h = remaining;
        }

        k[0] = f;
        for s in 1..7 {
            let ys: [f64; D] = std::array::from_fn(|i| {
                y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>()
            });
            k[s] = system.rhs(branch, &ys);
            let _ = C[s];
        }
        // 7th stage input is the fifth-order solution (FSAL)
        let y_new: [f64; D] =
            std::array::from_fn(|i| y[i] + h * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>());
        let err: [f64; D] = std::array::from_fn(|i| h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>());
        let err_norm = error_norm(&err, &y, &y_new, icfg);

        if !(err_norm <= 1.0) {
            traj.rejected_steps += 1;
            let fac = if err_norm.is_finite() {
                (SAFETY * err_norm.powf(-0.2)).max(FAC_MIN)
            } else {
                FAC_MIN
            };
            h *= fac;
            if h < 1e-14 * t.max(1.0) {
                return Err(Error::StepUnderflow {
                    t,
                    h,
                    state: y.to_vec(),
                });
            }
            continue;
        }

        traj.accepted_steps += 1;
        let fac = (SAFETY * err_norm.max(1e-10).powf(-0.2)).clamp(FAC_MIN, FAC_MAX);
        let h_next = (h * fac).min(icfg.h_max);

        let mut t_next = t + h;
        let mut y_next = y_new;
        let mut flipped = false;
        if mode == SwitchMode::Switching {
            let ydiff: [f64; D] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [f64; D] = std::array::from_fn(|i| h * k[0][i] - ydiff[i]);
            let dense = DenseStep {
                t0: t,
                h,
                cont: [
                    y,
                    ydiff,
                    bspl,
                    std::array::from_fn(|i| ydiff[i] - h * k[6][i] - bspl[i]),
                    std::array::from_fn(|i| h * (0..7).map(|j| DENSE[j] * k[j][i]).sum::<f64>()),
                ],
            };
            if let Some((theta, y_cross)) = locate_event(system, &dense, branch, &y_new, icfg.event_tol) {
                t_next = if theta == 1.0 { t + h } else { dense.t0 + theta * dense.h };
                y_next = y_cross;
                flipped = true;
            }
        }

        t = if last && !flipped { icfg.t_max } else { t_next };
        y = y_next;
        system.clamp(&mut y);
        if flipped {
            let direction = match branch {
                BranchId::S1 => CrossingDirection::S1ToS2,
                BranchId::S2 => CrossingDirection::S2ToS1,
            };
            branch = branch.flip();
            let crossing = Crossing {
                time: t,
                direction,
                switching: system.switching(&y),
                normal_speed: system.normal_speed(&y),
            };
            match traj.crossings.last() {
                // a return within min_event_gap is a grazing contact: the pair cancels
                Some(prev) if t - prev.time < icfg.min_event_gap && prev.direction != direction => {
                    traj.crossings.pop();
                }
                _ => traj.crossings.push(crossing),
            }
        }
        f = system.rhs(branch, &y);
        h = h_next;

        if icfg.record_samples {
            traj.times.push(t);
            traj.states.push(y);
            traj.branches.push(branch);
        }
        if let Some(tol) = icfg.steady_tol {
            if active_field_norm(system, branch, &y) < tol {
                traj.reached_steady = true;
                break;
            }
        }
    }
    traj.final_time = t;
    traj.final_state = y;
    traj.final_branch = branch;
    Ok(traj)
}

/// Integrates the reduced system from an active state.
pub fn integrate_active(
    initial: ActiveState,
    params: &RateParams,
    cfg: &ColonyConfig,
    icfg: &IntegrationConfig,
) -> Result<Trajectory<3>> {
    params.validate()?;
    cfg.validate()?;
    initial.validate(cfg.active_mass())?;
    integrate(&ReducedSystem::new(params, cfg), initial.to_array(), icfg, SwitchMode::Switching)
}

/// Integrates the full five-component system.
pub fn integrate_full(
    initial: FullState,
    params: &RateParams,
    cfg: &ColonyConfig,
    icfg: &IntegrationConfig,
) -> Result<Trajectory<5>> {
    params.validate()?;
    cfg.validate()?;
    initial.validate(cfg)?;
    integrate(&FullSystem::new(params, cfg), initial.to_array(), icfg, SwitchMode::Switching)
}

/// Integrates one smooth branch with switching disabled.
pub fn integrate_branch(
    initial: ActiveState,
    branch: BranchId,
    params: &RateParams,
    cfg: &ColonyConfig,
    icfg: &IntegrationConfig,
) -> Result<Trajectory<3>> {
    params.validate()?;
    cfg.validate()?;
    initial.validate(cfg.active_mass())?;
    integrate(&ReducedSystem::new(params, cfg), initial.to_array(), icfg, SwitchMode::Fixed(branch))
}

/// Thresholds of the long-run classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictThresholds {
    /// Maximum active field norm at the final state.
    pub derivative_tol: f64,
    /// Maximum distance to the closed-form equilibrium, relative to the active mass.
    pub distance_rtol: f64,
    /// Minimum number of crossings in the tail half.
    pub min_crossings: usize,
    /// Maximum coefficient of variation of the oscillation period.
    pub max_period_cv: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        Self {
            derivative_tol: 1e-8,
            distance_rtol: 1e-5,
            min_crossings: 20,
            max_period_cv: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LongRunVerdict {
    ConvergedTo(EquilibriumKind),
    PeriodicOscillation { period: f64, crossings: usize },
    Undetermined,
}

impl LongRunVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            LongRunVerdict::ConvergedTo(EquilibriumKind::BoundaryEf) => "ConvergedToEf",
            LongRunVerdict::ConvergedTo(EquilibriumKind::InteriorEs) => "ConvergedToEs",
            LongRunVerdict::PeriodicOscillation { .. } => "PeriodicOscillation",
            LongRunVerdict::Undetermined => "Undetermined",
        }
    }
}

fn distance(a: &ActiveState, b: &ActiveState) -> f64 {
    ((a.a - b.a).powi(2) + (a.l - b.l).powi(2) + (a.c - b.c).powi(2)).sqrt()
}

/// Classifies the end of a trajectory.
///
/// Convergence is judged at the final state against the closed-form
/// equilibria for the trajectory's own active mass. Oscillation uses the
/// crossings in the tail half: the period is measured between successive
/// crossings in the same direction, since time spent above and below quorum
/// generally differs.
pub fn classify_trajectory<S: PiecewiseSystem<D>, const D: usize>(
    system: &S,
    traj: &Trajectory<D>,
    thresholds: &VerdictThresholds,
) -> LongRunVerdict {
    let (active, m) = system.active_view(&traj.final_state);
    let params = system.rates();
    let norm = active_field_norm(system, traj.final_branch, &traj.final_state);
    if norm < thresholds.derivative_tol {
        let candidates = [
            (EquilibriumKind::BoundaryEf, boundary_point(params, m)),
            (EquilibriumKind::InteriorEs, interior_point(params, m)),
        ];
        let (kind, dist) = candidates
            .iter()
            .map(|(k, e)| (*k, distance(&active, e)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if dist < thresholds.distance_rtol * m.max(f64::MIN_POSITIVE) || dist == 0.0 {
            return LongRunVerdict::ConvergedTo(kind);
        }
    }

    let tail: Vec<&Crossing> = traj.crossings_after(traj.final_time / 2.0).collect();
    if tail.len() >= thresholds.min_crossings {
        let mut periods = Vec::new();
        for dir in [CrossingDirection::S1ToS2, CrossingDirection::S2ToS1] {
            let times: Vec<f64> = tail.iter().filter(|c| c.direction == dir).map(|c| c.time).collect();
            periods.extend(times.windows(2).map(|w| w[1] - w[0]));
        }
        if periods.len() >= 2 {
            let n = periods.len() as f64;
            let mean = periods.iter().sum::<f64>() / n;
            let var = periods.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / n;
            if mean > 0.0 && var.sqrt() / mean < thresholds.max_period_cv {
                return LongRunVerdict::PeriodicOscillation {
                    period: mean,
                    crossings: tail.len(),
                };
            }
        }
    }
    LongRunVerdict::Undetermined
}

/// Long-run verdict for a reduced trajectory at `cfg`.
pub fn long_run_verdict(traj: &Trajectory<3>, params: &RateParams, cfg: &ColonyConfig) -> LongRunVerdict {
    classify_trajectory(&ReducedSystem::new(params, cfg), traj, &VerdictThresholds::default())
}

/// Long-run verdict for a full-system trajectory at `cfg`.
pub fn long_run_verdict_full(traj: &Trajectory<5>, params: &RateParams, cfg: &ColonyConfig) -> LongRunVerdict {
    classify_trajectory(&FullSystem::new(params, cfg), traj, &VerdictThresholds::default())
}

/// Branch recomputed from a reduced state, for consistency checks.
pub fn expected_branch(y: &[f64; 3], params: &RateParams, cfg: &ColonyConfig) -> BranchId {
    model::branch_at(&ActiveState::from_array(*y), params, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::presets;

    #[test]
    fn exponential_decay_matches_closed_form() {
        // below quorum with a = l = 0 and no searchers: c' = −alpha_cs c exactly
        struct Decay;
        impl PiecewiseSystem<1> for Decay {
            fn rhs(&self, _: BranchId, y: &[f64; 1]) -> [f64; 1] {
                [-0.5 * y[0]]
            }
            fn switching(&self, _: &[f64; 1]) -> f64 {
                -1.0
            }
            fn normal_speed(&self, _: &[f64; 1]) -> f64 {
                0.0
            }
            fn active_view(&self, y: &[f64; 1]) -> (ActiveState, f64) {
                (ActiveState::new(0.0, 0.0, y[0]), y[0])
            }
            fn clamp(&self, _: &mut [f64; 1]) {}
            fn rates(&self) -> &RateParams {
                unimplemented!()
            }
            fn theta(&self) -> f64 {
                1.0
            }
        }
        let icfg = IntegrationConfig::default().with_t_max(10.0);
        let traj = integrate(&Decay, [2.0], &icfg, SwitchMode::Switching).unwrap();
        assert_eq!(traj.final_time, 10.0);
        assert!((traj.final_state[0] - 2.0 * (-5.0f64).exp()).abs() < 1e-9);
        assert!(traj.crossings.is_empty());
    }

    #[test]
    fn rejects_invalid_config() {
        let p = presets::sm9_rates();
        let cfg = presets::colony(100.0, 30.0);
        let icfg = IntegrationConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate_active(ActiveState::default(), &p, &cfg, &icfg).is_err());
    }

    #[test]
    fn step_budget_exhaustion_is_reported() {
        let p = presets::sm9_rates();
        let cfg = presets::colony(100.0, 30.0);
        let icfg = IntegrationConfig {
            max_steps: 5,
            ..Default::default()
        };
        assert!(matches!(
            integrate_active(ActiveState::default(), &p, &cfg, &icfg),
            Err(Error::StepBudgetExhausted { max_steps: 5, .. })
        ));
    }

    #[test]
    fn dense_output_hits_step_endpoints() {
        let dense = DenseStep {
            t0: 0.0,
            h: 1.0,
            cont: [[1.0], [2.0], [0.3], [0.1], [0.05]],
        };
        assert_eq!(dense.eval(0.0), [1.0]);
        assert!((dense.eval(1.0)[0] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn full_clamp_preserves_active_total() {
        let sys = FullSystem::new(&presets::sm9_rates(), &presets::colony(100.0, 30.0));
        let mut y = [10.0, 5.0, -5e-10, -1e-10, 0.0];
        let before: f64 = y[..4].iter().sum();
        sys.clamp(&mut y);
        assert_eq!(y[2], 0.0);
        assert_eq!(y[3], 0.0);
        assert!((y[..4].iter().sum::<f64>() - before).abs() < 1e-15);
        let mut y = [10.0, -1e-6, 0.0, 0.0, 0.0];
        sys.clamp(&mut y);
        assert_eq!(y[1], -1e-6);
    }
}
