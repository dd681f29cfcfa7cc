//! Closed-form branch equilibria, regular/virtual classification, critical
//! colony sizes and the analytic regime map.
//!
//! Both equilibria reduce to a quadratic in the number of active workers
//! at the new site, `X = a + l + c`:
//!
//! ```text
//! ξ X² − (M ξ − 1 − η) X − M = 0
//! ```
//!
//! with (η₁, ξ₁) for the below-quorum branch and (η₂, ξ₂) above it. Setting
//! `X = Θ` and solving for `N = M / ρ` gives the critical colony sizes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ActiveState;
use crate::params::{ColonyConfig, RateParams};
use crate::stability::{self, StabilityVerdict};

/// Relative tolerance used for regular/virtual and regime boundaries.
pub const BOUNDARY_RTOL: f64 = 1e-9;

/// Recruitment-efficiency (η) and input–output (ξ) ratios of both branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateCoefficients {
    pub eta_1: f64,
    pub xi_1: f64,
    pub eta_2: f64,
    pub xi_2: f64,
}

pub fn aggregate_coefficients(params: &RateParams) -> AggregateCoefficients {
    let p = params;
    let exit_a = p.alpha_as + p.alpha_al;
    let denom_1 = p.alpha_sa / exit_a * (1.0 + p.alpha_al / p.alpha_ls);
    let eta_1 = 1.0 / denom_1;
    let xi_1 = (p.alpha_al * p.beta_ls / (p.alpha_ls * exit_a)) / denom_1;

    let leave_l = p.alpha_ls + p.alpha_lc;
    let bracket = 1.0 + p.alpha_al / leave_l + p.alpha_al * p.alpha_lc / (leave_l * p.alpha_cs);
    let eta_2 = 1.0 / (p.alpha_sa / exit_a * bracket);
    let xi_2 = (p.beta_ls * p.alpha_al / leave_l
        + p.beta_cs * p.alpha_al * p.alpha_lc / (p.alpha_cs * leave_l))
        / (p.alpha_sa * bracket);

    AggregateCoefficients {
        eta_1,
        xi_1,
        eta_2,
        xi_2,
    }
}

/// Positive root of `ξ X² − (M ξ − 1 − η) X − M = 0`, evaluated without
/// cancellation for either sign of the linear coefficient.
pub fn site_total(eta: f64, xi: f64, m: f64) -> f64 {
    let b = m * xi - 1.0 - eta;
    let disc = (b * b + 4.0 * xi * m).sqrt();
    if b >= 0.0 {
        (b + disc) / (2.0 * xi)
    } else {
        // product of roots is −M/ξ
        2.0 * m / (disc - b)
    }
}

/// `1 + alpha_ls/alpha_al`: ratio (a + l) / l on the below-quorum equilibrium.
pub fn boundary_scale(params: &RateParams) -> f64 {
    1.0 + params.alpha_ls / params.alpha_al
}

/// Ratio (a + l + c) / c on the above-quorum equilibrium.
pub fn interior_scale(params: &RateParams) -> f64 {
    let p = params;
    1.0 + p.alpha_cs / p.alpha_lc + p.alpha_cs * (p.alpha_lc + p.alpha_ls) / (p.alpha_al * p.alpha_lc)
}

/// Below-quorum equilibrium E^f for active mass `m`.
pub fn boundary_point(params: &RateParams, m: f64) -> ActiveState {
    let k = aggregate_coefficients(params);
    let total = site_total(k.eta_1, k.xi_1, m);
    let l = total / boundary_scale(params);
    ActiveState::new(params.alpha_ls / params.alpha_al * l, l, 0.0)
}

/// Above-quorum equilibrium E^s for active mass `m`.
pub fn interior_point(params: &RateParams, m: f64) -> ActiveState {
    let k = aggregate_coefficients(params);
    let total = site_total(k.eta_2, k.xi_2, m);
    let c = total / interior_scale(params);
    let l = params.alpha_cs / params.alpha_lc * c;
    let a = (params.alpha_lc + params.alpha_ls) / params.alpha_al * l;
    ActiveState::new(a, l, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquilibriumKind {
    /// E^f, carriers absent.
    BoundaryEf,
    /// E^s, all classes present.
    InteriorEs,
}

impl EquilibriumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumKind::BoundaryEf => "BoundaryEf",
            EquilibriumKind::InteriorEs => "InteriorEs",
        }
    }
}

/// Whether a branch equilibrium lies in its own region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regularity {
    Regular,
    Virtual,
    /// On the switching manifold within tolerance.
    OnManifold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub coords: ActiveState,
    pub kind: EquilibriumKind,
    pub regularity: Regularity,
    pub stability: StabilityVerdict,
}

fn regularity_of(site_total: f64, theta: f64, inside_when_below: bool) -> Regularity {
    let tol = BOUNDARY_RTOL * site_total.max(theta);
    let diff = site_total - theta;
    if diff.abs() <= tol {
        Regularity::OnManifold
    } else if (diff < 0.0) == inside_when_below {
        Regularity::Regular
    } else {
        Regularity::Virtual
    }
}

pub fn boundary_equilibrium(params: &RateParams, cfg: &ColonyConfig) -> EquilibriumReport {
    boundary_equilibrium_for_mass(params, cfg.active_mass(), cfg.theta)
}

pub fn boundary_equilibrium_for_mass(params: &RateParams, m: f64, theta: f64) -> EquilibriumReport {
    let coords = boundary_point(params, m);
    let poly = stability::characteristic_poly2_for_mass(params, m);
    EquilibriumReport {
        coords,
        kind: EquilibriumKind::BoundaryEf,
        regularity: regularity_of(coords.at_site(), theta, true),
        stability: stability::verdict_poly2(&poly, params),
    }
}

pub fn interior_equilibrium(params: &RateParams, cfg: &ColonyConfig) -> EquilibriumReport {
    interior_equilibrium_for_mass(params, cfg.active_mass(), cfg.theta)
}

pub fn interior_equilibrium_for_mass(params: &RateParams, m: f64, theta: f64) -> EquilibriumReport {
    let coords = interior_point(params, m);
    let poly = stability::characteristic_poly3_for_mass(params, m);
    EquilibriumReport {
        coords,
        kind: EquilibriumKind::InteriorEs,
        regularity: regularity_of(coords.at_site(), theta, false),
        stability: stability::verdict_poly3(&poly),
    }
}

/// Critical colony sizes 𝒩₁, 𝒩₂ at the configured quorum, and the critical
/// quorum Θ_c where the two curves cross (absent when they never do).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalSizes {
    pub n1: f64,
    pub n2: f64,
    pub theta_c: Option<f64>,
}

/// Colony size at which an equilibrium with coefficients (η, ξ) sits
/// exactly on the manifold `X = Θ`.
pub fn critical_size(eta: f64, xi: f64, theta: f64, rho: f64) -> f64 {
    theta / rho + theta * eta / (rho * (1.0 + xi * theta))
}

/// Quorum at which 𝒩₁(Θ) = 𝒩₂(Θ), if positive.
pub fn critical_quorum(params: &RateParams) -> Option<f64> {
    let r = params.return_ratio();
    let q = params.recruit_ratio();
    let u = 1.0 - r;
    let v = r - q;
    if u == 0.0 || v == 0.0 || (u > 0.0) != (v > 0.0) {
        return None;
    }
    Some(params.alpha_sa * u / (params.beta_ls * v))
}

pub fn critical_sizes(params: &RateParams, cfg: &ColonyConfig) -> CriticalSizes {
    let k = aggregate_coefficients(params);
    CriticalSizes {
        n1: critical_size(k.eta_1, k.xi_1, cfg.theta, cfg.rho),
        n2: critical_size(k.eta_2, k.xi_2, cfg.theta, cfg.rho),
        theta_c: critical_quorum(params),
    }
}

/// Long-run regime predicted by the position of N relative to 𝒩₁, 𝒩₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeClass {
    /// Only E^f is regular.
    FailedEmigration,
    /// Only E^s is regular.
    SuccessfulEmigration,
    /// Neither equilibrium is regular; the system oscillates across quorum.
    Undecided,
    /// Both equilibria are regular and locally stable.
    Bistable,
    /// N sits on 𝒩₁ or 𝒩₂ within tolerance.
    Boundary,
}

impl RegimeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeClass::FailedEmigration => "FailedEmigration",
            RegimeClass::SuccessfulEmigration => "SuccessfulEmigration",
            RegimeClass::Undecided => "Undecided",
            RegimeClass::Bistable => "Bistable",
            RegimeClass::Boundary => "Boundary",
        }
    }
}

impl std::fmt::Display for RegimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Regime from colony size and the two critical sizes.
pub fn regime_from_sizes(n: f64, n1: f64, n2: f64) -> RegimeClass {
    let tol = BOUNDARY_RTOL * n1.max(n2);
    if (n - n1).abs() <= tol || (n - n2).abs() <= tol {
        return RegimeClass::Boundary;
    }
    let lo = n1.min(n2);
    let hi = n1.max(n2);
    if n < lo {
        RegimeClass::FailedEmigration
    } else if n > hi {
        RegimeClass::SuccessfulEmigration
    } else if n1 < n2 {
        RegimeClass::Undecided
    } else {
        RegimeClass::Bistable
    }
}

pub fn classify_regime(params: &RateParams, cfg: &ColonyConfig) -> RegimeClass {
    let sizes = critical_sizes(params, cfg);
    regime_from_sizes(cfg.n_total, sizes.n1, sizes.n2)
}

/// Which of the four orderings of 𝒩₁(Θ) and 𝒩₂(Θ) the rates produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderingCase {
    /// `alpha_cs/alpha_ls < min(1, beta_cs/beta_ls)`: 𝒩₁ > 𝒩₂ for all Θ > 0.
    A,
    /// `alpha_cs/alpha_ls > max(1, beta_cs/beta_ls)`: 𝒩₁ < 𝒩₂ for all Θ > 0.
    B,
    /// `1 < alpha_cs/alpha_ls < beta_cs/beta_ls`: 𝒩₁ < 𝒩₂ below Θ_c, > above.
    C,
    /// `beta_cs/beta_ls < alpha_cs/alpha_ls < 1`: 𝒩₁ > 𝒩₂ below Θ_c, < above.
    D,
}

impl OrderingCase {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderingCase::A => "A",
            OrderingCase::B => "B",
            OrderingCase::C => "C",
            OrderingCase::D => "D",
        }
    }
}

/// Tolerance on the ratio comparisons that decide the ordering case.
pub const CASE_TOL: f64 = 1e-12;

pub fn ordering_case(params: &RateParams) -> Result<OrderingCase> {
    let r = params.return_ratio();
    let q = params.recruit_ratio();
    if (r - 1.0).abs() <= CASE_TOL {
        return Err(Error::DegenerateCase("alpha_cs/alpha_ls equals 1"));
    }
    if (r - q).abs() <= CASE_TOL {
        return Err(Error::DegenerateCase("alpha_cs/alpha_ls equals beta_cs/beta_ls"));
    }
    Ok(match (r < 1.0, r < q) {
        (true, true) => OrderingCase::A,
        (false, false) => OrderingCase::B,
        (false, true) => OrderingCase::C,
        (true, false) => OrderingCase::D,
    })
}
