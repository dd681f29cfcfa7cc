use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::verdict_integration;
use crate::equilibria::interior_point;
use crate::error::Result;
use crate::exec::Execution;
use crate::integrator::integrate_branch;
use crate::model::{ActiveState, BranchId};
use crate::params::{ColonyConfig, RateParams};

/// Outcome of integrating the above-quorum branch from random starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub samples: usize,
    /// Runs that end within `tolerance` of the interior equilibrium.
    pub converged: usize,
    /// `converged / samples`; absent when no samples were drawn.
    pub fraction: Option<f64>,
    /// Largest final distance to the interior equilibrium.
    pub worst_distance: f64,
    pub tolerance: f64,
    pub failures: usize,
}

/// Uniform draw from `{a, l, c >= 0, a + l + c <= m}`.
pub fn random_active_state<R: Rng>(rng: &mut R, m: f64) -> ActiveState {
    // normalised exponential spacings are uniform on the simplex
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let total: f64 = e.iter().sum();
    ActiveState::new(m * e[0] / total, m * e[1] / total, m * e[2] / total)
}

/// Integrates the S2 vector field (switching disabled) from `n_samples`
/// uniformly drawn states and measures convergence to the interior
/// equilibrium within `1e-5 · rho N`.
pub fn global_stability_probe(
    params: &RateParams,
    cfg: &ColonyConfig,
    n_samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<ProbeSummary> {
    params.validate()?;
    cfg.validate()?;
    let m = cfg.active_mass();
    let tolerance = 1e-5 * m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<ActiveState> = (0..n_samples).map(|_| random_active_state(&mut rng, m)).collect();
    let target = interior_point(params, m);
    let icfg = verdict_integration(2e4);
    let outcomes = exec.map(&starts, |start| {
        integrate_branch(*start, BranchId::S2, params, cfg, &icfg).ok().map(|traj| {
            let end = ActiveState::from_array(traj.final_state);
            ((end.a - target.a).powi(2) + (end.l - target.l).powi(2) + (end.c - target.c).powi(2)).sqrt()
        })
    });
    let distances: Vec<f64> = outcomes.iter().flatten().copied().collect();
    let converged = distances.iter().filter(|d| **d < tolerance).count();
    Ok(ProbeSummary {
        samples: n_samples,
        converged,
        fraction: (n_samples > 0).then(|| converged as f64 / n_samples as f64),
        worst_distance: distances.iter().copied().fold(0.0, f64::max),
        tolerance,
        failures: n_samples - distances.len(),
    })
}
