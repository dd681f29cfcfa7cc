//! Jacobians of both branch fields, closed-form characteristic polynomials
//! at the branch equilibria, and Routh–Hurwitz verdicts.

use nalgebra::{Complex, Matrix3};
use serde::{Deserialize, Serialize};

use crate::equilibria::{
    self, boundary_point, boundary_scale, interior_point, interior_scale, EquilibriumKind,
    EquilibriumReport,
};
use crate::model::{ActiveState, BranchId};
use crate::params::{ColonyConfig, RateParams};

/// Absolute margin below which a Routh–Hurwitz quantity is treated as zero.
pub const RH_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilityVerdict {
    LocallyStable,
    Unstable,
    Indeterminate,
}

impl StabilityVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            StabilityVerdict::LocallyStable => "LocallyStable",
            StabilityVerdict::Unstable => "Unstable",
            StabilityVerdict::Indeterminate => "Indeterminate",
        }
    }
}

/// `λ² + a1 λ + a0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharPoly2 {
    pub a1: f64,
    pub a0: f64,
}

/// `λ³ + b2 λ² + b1 λ + b0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharPoly3 {
    pub b2: f64,
    pub b1: f64,
    pub b0: f64,
}

impl CharPoly3 {
    /// Routh–Hurwitz quantities `[b2, b0, b1 b2 − b0]`.
    pub fn hurwitz_margins(&self) -> [f64; 3] {
        [self.b2, self.b0, self.b1 * self.b2 - self.b0]
    }

    pub fn eval(&self, z: Complex<f64>) -> Complex<f64> {
        ((z + self.b2) * z + self.b1) * z + self.b0
    }

    /// All three roots, from Cardano's formula polished by Newton steps.
    pub fn roots(&self) -> [Complex<f64>; 3] {
        cubic_roots(self.b2, self.b1, self.b0)
    }
}

/// Analytic Jacobian of the reduced branch field at `state`.
pub fn jacobian(
    branch: BranchId,
    state: &ActiveState,
    params: &RateParams,
    cfg: &ColonyConfig,
) -> Matrix3<f64> {
    jacobian_for_mass(branch, state, params, cfg.active_mass())
}

pub fn jacobian_for_mass(
    branch: BranchId,
    state: &ActiveState,
    params: &RateParams,
    m: f64,
) -> Matrix3<f64> {
    let p = params;
    let q = branch.quorum();
    let s = m - state.at_site();
    let r = p.alpha_sa + p.beta_ls * state.l + p.beta_cs * state.c;
    Matrix3::new(
        -r - (p.alpha_as + p.alpha_al),
        p.beta_ls * s - r,
        p.beta_cs * s - r,
        p.alpha_al,
        -(q * p.alpha_lc + p.alpha_ls),
        0.0,
        0.0,
        q * p.alpha_lc,
        -p.alpha_cs,
    )
}

/// Derivative of the below-quorum equilibrium polynomial g₁ in L.
fn g1_prime(params: &RateParams, m: f64, l: f64) -> f64 {
    let p = params;
    let k = boundary_scale(p);
    -2.0 * p.beta_ls * k * l + p.beta_ls * m - p.alpha_sa * k - (p.alpha_as + p.alpha_al) * p.alpha_ls / p.alpha_al
}

/// Derivative of the above-quorum equilibrium polynomial g₂ in C.
fn g2_prime(params: &RateParams, m: f64, c: f64) -> f64 {
    let p = params;
    let k = interior_scale(p);
    let b = p.beta_ls * p.alpha_cs / p.alpha_lc + p.beta_cs;
    let linear = p.alpha_sa * k
        + p.alpha_cs * (p.alpha_lc + p.alpha_ls) * (p.alpha_as + p.alpha_al) / (p.alpha_al * p.alpha_lc);
    -2.0 * b * k * c - linear + m * b
}

/// Characteristic polynomial of the (a, l) limit system at E^f.
pub fn characteristic_poly2(params: &RateParams, cfg: &ColonyConfig) -> CharPoly2 {
    characteristic_poly2_for_mass(params, cfg.active_mass())
}

pub fn characteristic_poly2_for_mass(params: &RateParams, m: f64) -> CharPoly2 {
    let p = params;
    let lf = boundary_point(p, m).l;
    CharPoly2 {
        a1: (p.alpha_as + p.alpha_al) + (p.alpha_sa + p.beta_ls * lf) + p.alpha_ls,
        a0: -p.alpha_al * g1_prime(p, m, lf),
    }
}

/// Characteristic polynomial of the above-quorum field at E^s.
pub fn characteristic_poly3(params: &RateParams, cfg: &ColonyConfig) -> CharPoly3 {
    characteristic_poly3_for_mass(params, cfg.active_mass())
}

pub fn characteristic_poly3_for_mass(params: &RateParams, m: f64) -> CharPoly3 {
    let p = params;
    let es = interior_point(p, m);
    let (a, l, c) = (es.a, es.l, es.c);
    let recruit = p.alpha_sa + p.beta_ls * l + p.beta_cs * c;
    let b2 = (p.alpha_cs + p.alpha_ls + p.alpha_as + p.alpha_al + p.alpha_lc + p.alpha_sa)
        + p.beta_ls * l
        + p.beta_cs * c;
    let b1 = p.alpha_cs * (p.alpha_ls + p.alpha_as + p.alpha_al + p.alpha_lc + recruit)
        + (p.alpha_al + p.alpha_lc + p.alpha_ls) * recruit
        + (p.alpha_sa + p.beta_cs * c) * (m - a - l - c) * p.alpha_al / l;
    let b0 = -p.alpha_al * p.alpha_lc * g2_prime(p, m, c);
    CharPoly3 { b2, b1, b0 }
}

fn verdict_from_margins(margins: &[f64]) -> StabilityVerdict {
    if margins.iter().any(|m| m.abs() <= RH_MARGIN || !m.is_finite()) {
        StabilityVerdict::Indeterminate
    } else if margins.iter().all(|&m| m > 0.0) {
        StabilityVerdict::LocallyStable
    } else {
        StabilityVerdict::Unstable
    }
}

/// Verdict for E^f: Routh–Hurwitz on the limit polynomial, plus the
/// decoupled carrier eigenvalue −alpha_cs.
pub fn verdict_poly2(poly: &CharPoly2, params: &RateParams) -> StabilityVerdict {
    verdict_from_margins(&[poly.a1, poly.a0, params.alpha_cs])
}

pub fn verdict_poly3(poly: &CharPoly3) -> StabilityVerdict {
    verdict_from_margins(&poly.hurwitz_margins())
}

/// Routh–Hurwitz verdict for a reported equilibrium on its owning branch.
pub fn stability_verdict(
    report: &EquilibriumReport,
    params: &RateParams,
    cfg: &ColonyConfig,
) -> StabilityVerdict {
    match report.kind {
        EquilibriumKind::BoundaryEf => verdict_poly2(&characteristic_poly2(params, cfg), params),
        EquilibriumKind::InteriorEs => verdict_poly3(&characteristic_poly3(params, cfg)),
    }
}

/// Roots of the monic cubic `z³ + b2 z² + b1 z + b0`.
pub fn cubic_roots(b2: f64, b1: f64, b0: f64) -> [Complex<f64>; 3] {
    // depressed cubic t³ + p t + q with z = t − b2/3
    let shift = b2 / 3.0;
    let p = b1 - b2 * b2 / 3.0;
    let q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    let disc = Complex::new(q * q / 4.0 + p * p * p / 27.0, 0.0).sqrt();
    let mut u3 = Complex::new(-q / 2.0, 0.0) + disc;
    if u3.norm() < Complex::new(-q / 2.0, 0.0).norm() {
        u3 = Complex::new(-q / 2.0, 0.0) - disc;
    }
    let omega = Complex::new(-0.5, 3f64.sqrt() / 2.0);
    let u = if u3.norm() == 0.0 {
        Complex::new(0.0, 0.0)
    } else {
        u3.powf(1.0 / 3.0)
    };
    let poly = CharPoly3 { b2, b1, b0 };
    let mut roots = [Complex::new(0.0, 0.0); 3];
    let mut uk = u;
    for root in roots.iter_mut() {
        let t = if uk.norm() == 0.0 {
            Complex::new(0.0, 0.0)
        } else {
            uk - p / (3.0 * uk)
        };
        let mut z = t - shift;
        for _ in 0..3 {
            let d = (3.0 * z + 2.0 * b2) * z + b1;
            if d.norm() == 0.0 {
                break;
            }
            z -= poly.eval(z) / d;
        }
        *root = z;
        uk *= omega;
    }
    roots
}

/// Routh–Hurwitz verdicts for both equilibria at a configuration.
pub fn equilibrium_verdicts(params: &RateParams, cfg: &ColonyConfig) -> [StabilityVerdict; 2] {
    [
        stability_verdict(&equilibria::boundary_equilibrium(params, cfg), params, cfg),
        stability_verdict(&equilibria::interior_equilibrium(params, cfg), params, cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{boundary_equilibrium, interior_equilibrium};
    use crate::params::presets;

    #[test]
    fn origin_entry_below_quorum() {
        let p = presets::fig2_rates();
        let cfg = presets::colony(200.0, 30.0);
        let j = jacobian(BranchId::S1, &ActiveState::default(), &p, &cfg);
        assert!((j[(0, 0)] + (p.alpha_sa + p.alpha_as + p.alpha_al)).abs() < 1e-15);
    }

    #[test]
    fn trace_identity_at_interior_equilibrium() {
        let p = presets::sm9_rates();
        let cfg = presets::colony(300.0, 30.0);
        let es = interior_equilibrium(&p, &cfg);
        let j = jacobian(BranchId::S2, &es.coords, &p, &cfg);
        let poly = characteristic_poly3(&p, &cfg);
        assert!((j.trace() + poly.b2).abs() < 1e-12);
    }

    #[test]
    fn poly2_positive_coefficients() {
        let p = presets::sm9_rates();
        for n in [10.0, 100.0, 200.0, 350.0] {
            let poly = characteristic_poly2(&p, &presets::colony(n, 30.0));
            assert!(poly.a1 > 0.0 && poly.a0 > 0.0);
        }
    }

    #[test]
    fn verdict_examples() {
        let p = presets::sm9_rates();
        let sm9 = presets::colony(100.0, 30.0);
        let sm10 = presets::colony(300.0, 30.0);
        let sm12 = presets::colony(200.0, 30.0);
        assert_eq!(boundary_equilibrium(&p, &sm9).stability, StabilityVerdict::LocallyStable);
        assert_eq!(interior_equilibrium(&p, &sm10).stability, StabilityVerdict::LocallyStable);
        assert_eq!(
            equilibrium_verdicts(&p, &sm12),
            [StabilityVerdict::LocallyStable; 2]
        );
    }

    #[test]
    fn verdict_margins() {
        assert_eq!(
            verdict_from_margins(&[1.0, 1e-11, 2.0]),
            StabilityVerdict::Indeterminate
        );
        assert_eq!(verdict_from_margins(&[1.0, -1.0, 2.0]), StabilityVerdict::Unstable);
        assert_eq!(verdict_from_margins(&[1.0, 0.5, 2.0]), StabilityVerdict::LocallyStable);
    }

    #[test]
    fn cubic_roots_known_polynomials() {
        // (z + 1)(z + 2)(z + 3)
        let mut r: Vec<f64> = cubic_roots(6.0, 11.0, 6.0).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (got, want) in r.iter().zip([-3.0, -2.0, -1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        // (z + 1)(z² + 2z + 5): roots −1, −1 ± 2i
        let roots = cubic_roots(3.0, 7.0, 5.0);
        let mut ims: Vec<f64> = roots.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 2.0).abs() < 1e-12 && ims[1].abs() < 1e-12 && (ims[2] - 2.0).abs() < 1e-12);
        assert!(roots.iter().all(|z| (z.re + 1.0).abs() < 1e-12));
        // triple root at zero
        assert!(cubic_roots(0.0, 0.0, 0.0).iter().all(|z| z.norm() < 1e-15));
    }
}
