//! Population states, the two smooth vector fields of the quorum-switched
//! system, the switching function and the persistence bounds.
//!
//! The reduced system tracks assessors `a`, leaders `l` and carriers `c`
//! with searchers implied by `s = M - a - l - c`, where `M` is the active
//! mass. Below quorum (`a + l + c < Θ`) leaders never turn into carriers;
//! above it they do at rate `alpha_lc`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ColonyConfig, RateParams};

/// Slack allowed on state constraints before a state is rejected.
pub const STATE_TOL: f64 = 1e-9;

/// Which smooth vector field is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchId {
    /// Below quorum (Q1 = 0): failed-emigration branch.
    S1,
    /// Above quorum (Q1 = 1): successful-emigration branch.
    S2,
}

impl BranchId {
    pub fn flip(self) -> Self {
        match self {
            BranchId::S1 => BranchId::S2,
            BranchId::S2 => BranchId::S1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BranchId::S1 => "S1",
            BranchId::S2 => "S2",
        }
    }

    /// Quorum indicator Q1 of the branch.
    pub fn quorum(self) -> f64 {
        match self {
            BranchId::S1 => 0.0,
            BranchId::S2 => 1.0,
        }
    }
}

impl std::fmt::Display for BranchId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Assessors, leaders and carriers of the reduced system.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ActiveState {
    pub a: f64,
    pub l: f64,
    pub c: f64,
}

impl ActiveState {
    pub fn new(a: f64, l: f64, c: f64) -> Self {
        Self { a, l, c }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a, self.l, self.c]
    }

    pub fn from_array(y: [f64; 3]) -> Self {
        Self::new(y[0], y[1], y[2])
    }

    /// Active workers at the new site, a + l + c.
    pub fn at_site(&self) -> f64 {
        self.a + self.l + self.c
    }

    /// Checks nonnegativity and `a + l + c <= M` up to a relative slack.
    pub fn validate(&self, active_mass: f64) -> Result<()> {
        let tol = STATE_TOL * active_mass.max(1.0);
        for (name, v) in [("a", self.a), ("l", self.l), ("c", self.c)] {
            if !v.is_finite() || v < -tol {
                return Err(Error::InvalidState(format!("{name} = {v} is negative or non-finite")));
            }
        }
        if self.at_site() > active_mass + tol {
            return Err(Error::InvalidState(format!(
                "a + l + c = {} exceeds active mass {active_mass}",
                self.at_site()
            )));
        }
        Ok(())
    }
}

/// Full state: searchers, assessors, leaders, carriers and passive
/// workers already moved to the new site.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FullState {
    pub s: f64,
    pub a: f64,
    pub l: f64,
    pub c: f64,
    pub p: f64,
}

impl FullState {
    pub fn new(s: f64, a: f64, l: f64, c: f64, p: f64) -> Self {
        Self { s, a, l, c, p }
    }

    /// Lifts a reduced state, with searchers taking the remaining mass.
    pub fn from_active(state: ActiveState, active_mass: f64, p: f64) -> Self {
        Self::new(active_mass - state.at_site(), state.a, state.l, state.c, p)
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.s, self.a, self.l, self.c, self.p]
    }

    pub fn from_array(y: [f64; 5]) -> Self {
        Self::new(y[0], y[1], y[2], y[3], y[4])
    }

    pub fn active(&self) -> ActiveState {
        ActiveState::new(self.a, self.l, self.c)
    }

    /// Conserved active total s + a + l + c.
    pub fn active_total(&self) -> f64 {
        self.s + self.a + self.l + self.c
    }

    pub fn validate(&self, cfg: &ColonyConfig) -> Result<()> {
        let scale = self.active_total().abs().max(cfg.n_total).max(1.0);
        let tol = STATE_TOL * scale;
        for (name, v) in [
            ("s", self.s),
            ("a", self.a),
            ("l", self.l),
            ("c", self.c),
            ("p", self.p),
        ] {
            if !v.is_finite() || v < -tol {
                return Err(Error::InvalidState(format!("{name} = {v} is negative or non-finite")));
            }
        }
        if self.p > cfg.passive_mass() + tol {
            return Err(Error::InvalidState(format!(
                "p = {} exceeds passive population {}",
                self.p,
                cfg.passive_mass()
            )));
        }
        Ok(())
    }
}

/// Rate of change of the switching function, `d(a+l+c)/dt`, given the
/// explicit searcher count. Identical on both branches.
#[inline]
pub fn normal_speed_with_searchers(params: &RateParams, s: f64, a: f64, l: f64, c: f64) -> f64 {
    (params.alpha_sa + params.beta_ls * l + params.beta_cs * c) * s
        - params.alpha_as * a
        - params.alpha_ls * l
        - params.alpha_cs * c
}

/// Reduced vector field for active mass `m`, without validation.
#[inline]
pub fn reduced_rhs(branch: BranchId, y: &[f64; 3], params: &RateParams, m: f64) -> [f64; 3] {
    let [a, l, c] = *y;
    let q = branch.quorum();
    let s = m - a - l - c;
    let inflow = (params.alpha_sa + params.beta_ls * l + params.beta_cs * c) * s;
    [
        inflow - (params.alpha_as + params.alpha_al) * a,
        params.alpha_al * a - (q * params.alpha_lc + params.alpha_ls) * l,
        q * params.alpha_lc * l - params.alpha_cs * c,
    ]
}

/// Full five-component vector field, without validation. `passive_cap`
/// is (1 - rho) N.
#[inline]
pub fn full_rhs(branch: BranchId, y: &[f64; 5], params: &RateParams, passive_cap: f64) -> [f64; 5] {
    let [s, a, l, c, p] = *y;
    let q = branch.quorum();
    let recruit = (params.alpha_sa + params.beta_ls * l + params.beta_cs * c) * s;
    let returning = params.alpha_as * a + params.alpha_ls * l + params.alpha_cs * c;
    let to_carrier = q * params.alpha_lc * l;
    [
        returning - recruit,
        recruit - (params.alpha_as + params.alpha_al) * a,
        params.alpha_al * a - to_carrier - params.alpha_ls * l,
        to_carrier - params.alpha_cs * c,
        params.beta_cs * c * (passive_cap - p),
    ]
}

/// Branch selection from the switching value `h` and the normal speed `g`.
/// Off the manifold the sign of `h` decides; exactly on it both fields push
/// the same way, so the sign of `g` decides (S2 when `g = 0`).
pub fn select_branch(h: f64, g: f64) -> BranchId {
    if h > 0.0 {
        BranchId::S2
    } else if h < 0.0 {
        BranchId::S1
    } else if g >= 0.0 {
        BranchId::S2
    } else {
        BranchId::S1
    }
}

/// Reduced vector field on a given branch.
pub fn vector_field(
    branch: BranchId,
    state: &ActiveState,
    params: &RateParams,
    cfg: &ColonyConfig,
) -> Result<[f64; 3]> {
    state.validate(cfg.active_mass())?;
    Ok(reduced_rhs(branch, &state.to_array(), params, cfg.active_mass()))
}

/// Branch in force at a reduced state.
pub fn branch_at(state: &ActiveState, params: &RateParams, cfg: &ColonyConfig) -> BranchId {
    select_branch(switching_value(state, cfg), normal_speed(state, params, cfg))
}

/// Branch in force at a full state.
pub fn branch_at_full(state: &FullState, params: &RateParams, cfg: &ColonyConfig) -> BranchId {
    let h = state.a + state.l + state.c - cfg.theta;
    let g = normal_speed_with_searchers(params, state.s, state.a, state.l, state.c);
    select_branch(h, g)
}

/// Full vector field with Q1 chosen from the state.
pub fn full_vector_field(
    state: &FullState,
    params: &RateParams,
    cfg: &ColonyConfig,
) -> Result<[f64; 5]> {
    state.validate(cfg)?;
    let branch = branch_at_full(state, params, cfg);
    Ok(full_rhs(branch, &state.to_array(), params, cfg.passive_mass()))
}

/// H(Z) = a + l + c - Θ. Negative in S1, positive in S2.
pub fn switching_value(state: &ActiveState, cfg: &ColonyConfig) -> f64 {
    state.at_site() - cfg.theta
}

/// Normal speed g(Z) of the reduced system across the switching manifold.
pub fn normal_speed(state: &ActiveState, params: &RateParams, cfg: &ColonyConfig) -> f64 {
    let s = cfg.active_mass() - state.at_site();
    normal_speed_with_searchers(params, s, state.a, state.l, state.c)
}

/// Crossing indicator γ(Z) = ⟨∇H, F_S1⟩⟨∇H, F_S2⟩ = g(Z)², nonnegative
/// everywhere, so the manifold has no sliding region.
pub fn crossing_indicator(state: &ActiveState, params: &RateParams, cfg: &ColonyConfig) -> f64 {
    let g = normal_speed(state, params, cfg);
    g * g
}

/// Long-run lower bounds for searchers, assessors and leaders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistenceBounds {
    pub epsilon: f64,
    pub epsilon_a: f64,
    pub epsilon_l: f64,
}

pub fn persistence_bounds(params: &RateParams, cfg: &ColonyConfig) -> PersistenceBounds {
    persistence_bounds_for_mass(params, cfg.active_mass())
}

/// Persistence bounds for an arbitrary conserved active mass `m`.
pub fn persistence_bounds_for_mass(params: &RateParams, m: f64) -> PersistenceBounds {
    let sigma = params.sigma_min();
    let beta = params.beta_max();
    let epsilon = m / (params.alpha_sa / sigma + 1.0 + beta * m / sigma);
    let epsilon_a = params.alpha_sa * epsilon / (params.alpha_as + params.alpha_al);
    let epsilon_l = params.alpha_al * epsilon_a / (params.alpha_lc + params.alpha_ls);
    PersistenceBounds {
        epsilon,
        epsilon_a,
        epsilon_l,
    }
}
