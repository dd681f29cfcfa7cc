mod common;

use colony_core::equilibria::{
    aggregate_coefficients, boundary_point, critical_size, critical_sizes, interior_point, site_total,
};
use colony_core::model::{crossing_indicator, persistence_bounds, reduced_rhs, vector_field};
use colony_core::stability::{
    characteristic_poly2, characteristic_poly3, jacobian, verdict_poly2, verdict_poly3,
};
use colony_core::{ActiveState, BranchId, ColonyConfig, RateParams, StabilityVerdict};
use nalgebra::Matrix3;
use proptest::prelude::*;

fn rate(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn rates() -> impl Strategy<Value = RateParams> {
    (
        [rate(1e-3, 1.0), rate(1e-3, 1.0), rate(1e-3, 1.0), rate(1e-3, 1.0), rate(1e-3, 1.0), rate(1e-3, 1.0)],
        rate(1e-4, 1e-1),
        rate(1e-4, 1e-1),
    )
        .prop_map(|(a, beta_ls, beta_cs)| RateParams {
            alpha_sa: a[0],
            alpha_as: a[1],
            alpha_al: a[2],
            alpha_ls: a[3],
            alpha_lc: a[4],
            alpha_cs: a[5],
            beta_ls,
            beta_cs,
        })
}

fn colony() -> impl Strategy<Value = ColonyConfig> {
    (rate(10.0, 2000.0), 0.1..0.9f64, 0.5..100.0f64).prop_map(|(n_total, rho, theta)| ColonyConfig {
        n_total,
        rho,
        theta,
    })
}

/// A point of the simplex a + l + c <= m from three unit-interval draws.
fn simplex_point(u: [f64; 3], m: f64) -> ActiveState {
    let mut v = u;
    v.sort_by(f64::total_cmp);
    ActiveState::new(m * v[0], m * (v[1] - v[0]), m * (v[2] - v[1]))
}

fn unit3() -> impl Strategy<Value = [f64; 3]> {
    [0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64]
}

fn fd_jacobian(branch: BranchId, x: &ActiveState, p: &RateParams, m: f64) -> Matrix3<f64> {
    let y = x.to_array();
    let mut j = Matrix3::zeros();
    for k in 0..3 {
        let h = 1e-6 * y[k].abs().max(1.0);
        let mut up = y;
        let mut dn = y;
        up[k] += h;
        dn[k] -= h;
        let fu = reduced_rhs(branch, &up, p, m);
        let fd = reduced_rhs(branch, &dn, p, m);
        for i in 0..3 {
            j[(i, k)] = (fu[i] - fd[i]) / (2.0 * h);
        }
    }
    j
}

fn principal_minor_sum(j: &Matrix3<f64>) -> f64 {
    j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)] + j[(0, 0)] * j[(2, 2)] - j[(0, 2)] * j[(2, 0)]
        + j[(1, 1)] * j[(2, 2)]
        - j[(1, 2)] * j[(2, 1)]
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn normal_component_agrees_across_branches(p in rates(), cfg in colony(), u in unit3()) {
        let x = simplex_point(u, cfg.active_mass());
        let f1 = vector_field(BranchId::S1, &x, &p, &cfg).unwrap();
        let f2 = vector_field(BranchId::S2, &x, &p, &cfg).unwrap();
        let scale: f64 = f1.iter().chain(f2.iter()).map(|v| v.abs()).sum::<f64>() + 1.0;
        let n1: f64 = f1.iter().sum();
        let n2: f64 = f2.iter().sum();
        prop_assert!((n1 - n2).abs() <= 1e-12 * scale);
    }

    #[test]
    fn crossing_indicator_is_nonnegative(p in rates(), cfg in colony(), u in unit3()) {
        let x = simplex_point(u, cfg.active_mass());
        prop_assert!(crossing_indicator(&x, &p, &cfg) >= 0.0);
    }

    #[test]
    fn equilibria_zero_their_branch_fields(p in rates(), cfg in colony()) {
        let m = cfg.active_mass();
        let ef = boundary_point(&p, m);
        let es = interior_point(&p, m);
        let r1 = reduced_rhs(BranchId::S1, &ef.to_array(), &p, m);
        let r2 = reduced_rhs(BranchId::S2, &es.to_array(), &p, m);
        // residual relative to the gross fluxes through the state
        let flux = |x: &ActiveState| (p.alpha_sa + p.beta_ls * x.l + p.beta_cs * x.c) * m
            + (p.alpha_as + p.alpha_al + p.alpha_ls + p.alpha_lc + p.alpha_cs) * m;
        for v in r1 { prop_assert!(v.abs() <= 1e-11 * flux(&ef)); }
        for v in r2 { prop_assert!(v.abs() <= 1e-11 * flux(&es)); }
        prop_assert!(ef.at_site() > 0.0 && ef.at_site() < m);
        prop_assert!(es.at_site() > 0.0 && es.at_site() < m);
        prop_assert!(es.c > 0.0 && ef.c == 0.0);
    }

    #[test]
    fn site_total_matches_bisection(p in rates(), cfg in colony()) {
        let k = aggregate_coefficients(&p);
        let m = cfg.active_mass();
        for (eta, xi) in [(k.eta_1, k.xi_1), (k.eta_2, k.xi_2)] {
            let x = site_total(eta, xi, m);
            let oracle = common::site_total_by_bisection(eta, xi, m);
            prop_assert!(rel_close(x, oracle, 1e-10), "{x} vs {oracle}");
        }
    }

    #[test]
    fn threshold_identities(p in rates(), cfg in colony()) {
        let m = cfg.active_mass();
        let sizes = critical_sizes(&p, &cfg);
        let ef = boundary_point(&p, m);
        let es = interior_point(&p, m);
        let n = cfg.n_total;
        if (n - sizes.n1).abs() > 1e-9 * sizes.n1 {
            prop_assert_eq!(ef.at_site() > cfg.theta, n > sizes.n1);
        }
        if (n - sizes.n2).abs() > 1e-9 * sizes.n2 {
            prop_assert_eq!(es.at_site() > cfg.theta, n > sizes.n2);
        }
    }

    #[test]
    fn critical_sizes_increase_with_quorum(p in rates(), rho in 0.1..0.9f64, t1 in 0.0..100.0f64, dt in 1e-3..50.0f64) {
        let k = aggregate_coefficients(&p);
        for (eta, xi) in [(k.eta_1, k.xi_1), (k.eta_2, k.xi_2)] {
            prop_assert!(critical_size(eta, xi, t1 + dt, rho) > critical_size(eta, xi, t1, rho));
        }
    }

    #[test]
    fn jacobian_matches_central_differences(p in rates(), cfg in colony(), u in unit3()) {
        let m = cfg.active_mass();
        let x = simplex_point(u, m);
        for branch in [BranchId::S1, BranchId::S2] {
            let j = jacobian(branch, &x, &p, &cfg);
            let fd = fd_jacobian(branch, &x, &p, m);
            let scale = j.amax().max(f64::MIN_POSITIVE);
            prop_assert!((j - fd).amax() <= 1e-5 * scale);
        }
    }

    #[test]
    fn char_poly3_matches_jacobian_invariants(p in rates(), cfg in colony()) {
        let es = interior_point(&p, cfg.active_mass());
        let j = jacobian(BranchId::S2, &es, &p, &cfg);
        let poly = characteristic_poly3(&p, &cfg);
        prop_assert!(rel_close(poly.b2, -j.trace(), 1e-9));
        prop_assert!(rel_close(poly.b1, principal_minor_sum(&j), 1e-9), "{} vs {}", poly.b1, principal_minor_sum(&j));
        prop_assert!(rel_close(poly.b0, -j.determinant(), 1e-9), "{} vs {}", poly.b0, -j.determinant());
    }

    #[test]
    fn char_poly2_matches_limit_jacobian(p in rates(), cfg in colony()) {
        let ef = boundary_point(&p, cfg.active_mass());
        let j = jacobian(BranchId::S1, &ef, &p, &cfg);
        let poly = characteristic_poly2(&p, &cfg);
        let tr = j[(0, 0)] + j[(1, 1)];
        let det = j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)];
        prop_assert!(rel_close(poly.a1, -tr, 1e-9));
        prop_assert!(rel_close(poly.a0, det, 1e-9), "{} vs {}", poly.a0, det);
    }

    #[test]
    fn both_equilibria_satisfy_routh_hurwitz(p in rates(), cfg in colony()) {
        let poly3 = characteristic_poly3(&p, &cfg);
        prop_assert_eq!(verdict_poly3(&poly3), StabilityVerdict::LocallyStable);
        prop_assert_eq!(verdict_poly2(&characteristic_poly2(&p, &cfg), &p), StabilityVerdict::LocallyStable);
        for z in poly3.roots() {
            prop_assert!(z.re < 0.0);
        }
    }

    #[test]
    fn persistence_bounds_lie_inside_active_mass(p in rates(), cfg in colony()) {
        let b = persistence_bounds(&p, &cfg);
        let m = cfg.active_mass();
        prop_assert!(b.epsilon > 0.0 && b.epsilon < m);
        prop_assert!(b.epsilon_a > 0.0 && b.epsilon_a < m);
        prop_assert!(b.epsilon_l > 0.0 && b.epsilon_l < m);
    }
}
