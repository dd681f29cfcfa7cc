#![allow(dead_code)]

use colony_core::{ColonyConfig, RateParams};
use rand::Rng;

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Rates drawn log-uniformly over the span covered by the published sets.
pub fn random_rates<R: Rng>(rng: &mut R) -> RateParams {
    let mut a = || log_uniform(rng, 1e-3, 1.0);
    let (alpha_sa, alpha_as, alpha_al, alpha_ls, alpha_lc, alpha_cs) = (a(), a(), a(), a(), a(), a());
    RateParams {
        alpha_sa,
        alpha_as,
        alpha_al,
        alpha_ls,
        alpha_lc,
        alpha_cs,
        beta_ls: log_uniform(rng, 1e-4, 1e-1),
        beta_cs: log_uniform(rng, 1e-4, 1e-1),
    }
}

pub fn random_colony<R: Rng>(rng: &mut R) -> ColonyConfig {
    ColonyConfig {
        n_total: log_uniform(rng, 10.0, 2000.0),
        rho: rng.random_range(0.1..0.9),
        theta: rng.random_range(0.5..100.0),
    }
}

/// Bisection for the positive root of `xi X^2 - (M xi - 1 - eta) X - M` on [0, M].
pub fn site_total_by_bisection(eta: f64, xi: f64, m: f64) -> f64 {
    let f = |x: f64| xi * x * x - (m * xi - 1.0 - eta) * x - m;
    let (mut lo, mut hi) = (0.0, m);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
