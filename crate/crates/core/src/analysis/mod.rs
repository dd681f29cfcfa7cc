//! Parameter sweeps, basin-of-attraction grids, boundary-line fits and the
//! global-stability probe.

mod basin;
mod fit;
mod probe;
mod sweep;

pub use basin::{basin_grid, BasinGrid, BasinLabel, BasinPlane, BasinSpec};
pub use fit::{boundary_points, fit_boundary_line, fit_line, BoundaryLineFit, MIN_BOUNDARY_POINTS};
pub use probe::{global_stability_probe, random_active_state, ProbeSummary};
pub use sweep::{sweep, AxisRange, SeedKind, SeedResult, SweepAxis, SweepCell, SweepLabel, SweepMode, SweepResult, SweepSpec};

use crate::integrator::IntegrationConfig;

/// Integration settings for long-run verdicts: no stored samples, early stop
/// once the field has settled well below the convergence threshold.
pub fn verdict_integration(t_max: f64) -> IntegrationConfig {
    IntegrationConfig {
        t_max,
        steady_tol: Some(1e-11),
        record_samples: false,
        ..IntegrationConfig::default()
    }
}

/// `points` evenly spaced values covering `[lo, hi]`, endpoints included.
pub(crate) fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| if i == points - 1 { hi } else { lo + step * i as f64 })
        .collect()
}
