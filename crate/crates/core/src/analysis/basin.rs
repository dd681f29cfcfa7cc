use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{linspace, verdict_integration};
use crate::equilibria::{classify_regime, EquilibriumKind, RegimeClass};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::integrator::{classify_trajectory, integrate, FullSystem, IntegrationConfig, LongRunVerdict, SwitchMode, VerdictThresholds};
use crate::model::FullState;
use crate::params::{ColonyConfig, RateParams};

/// Largest accepted points per basin axis.
pub const MAX_BASIN_RESOLUTION: usize = 200;

/// Which recruiter class varies on the third axis; the other starts at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasinPlane {
    /// Axes (S₀, A₀, L₀) with C₀ = 0.
    Leaders,
    /// Axes (S₀, A₀, C₀) with L₀ = 0.
    Carriers,
}

impl BasinPlane {
    pub fn third_axis(self) -> &'static str {
        match self {
            BasinPlane::Leaders => "l0",
            BasinPlane::Carriers => "c0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasinSpec {
    pub plane: BasinPlane,
    /// Points per axis; each axis covers `[0, rho N]`.
    pub resolution: usize,
    pub integration: IntegrationConfig,
}

impl BasinSpec {
    pub fn new(plane: BasinPlane, resolution: usize) -> Self {
        Self {
            plane,
            resolution,
            integration: verdict_integration(2e4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasinLabel {
    ToEf,
    ToEs,
    Undetermined,
}

impl BasinLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BasinLabel::ToEf => "ToEf",
            BasinLabel::ToEs => "ToEs",
            BasinLabel::Undetermined => "Undetermined",
        }
    }

    pub fn from_verdict(v: &LongRunVerdict) -> Self {
        match v {
            LongRunVerdict::ConvergedTo(EquilibriumKind::BoundaryEf) => BasinLabel::ToEf,
            LongRunVerdict::ConvergedTo(EquilibriumKind::InteriorEs) => BasinLabel::ToEs,
            _ => BasinLabel::Undetermined,
        }
    }
}

/// Labels on a cubic grid of initial states, indexed `(i_s, i_a, i_x)` with
/// the third index fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinGrid {
    pub plane: BasinPlane,
    pub resolution: usize,
    /// Shared coordinate values of every axis.
    pub axis: Vec<f64>,
    pub labels: Vec<BasinLabel>,
    /// Regime of the nominal configuration.
    pub nominal_regime: RegimeClass,
    /// Cells whose own conserved total also classifies as bistable.
    pub bistable_cells: usize,
}

impl BasinGrid {
    /// Grid with externally supplied labels.
    pub fn from_labels(plane: BasinPlane, axis: Vec<f64>, labels: Vec<BasinLabel>) -> Result<Self> {
        let r = axis.len();
        if r < 2 || labels.len() != r * r * r {
            return Err(Error::InvalidSpec(format!(
                "basin grid needs resolution >= 2 and resolution^3 labels (got {} axis points, {} labels)",
                r,
                labels.len()
            )));
        }
        Ok(Self {
            plane,
            resolution: r,
            axis,
            labels,
            nominal_regime: RegimeClass::Bistable,
            bistable_cells: 0,
        })
    }

    pub fn index(&self, i_s: usize, i_a: usize, i_x: usize) -> usize {
        (i_s * self.resolution + i_a) * self.resolution + i_x
    }

    pub fn label(&self, i_s: usize, i_a: usize, i_x: usize) -> BasinLabel {
        self.labels[self.index(i_s, i_a, i_x)]
    }

    /// Initial (S₀, A₀, X₀) of a cell.
    pub fn coordinates(&self, i_s: usize, i_a: usize, i_x: usize) -> [f64; 3] {
        [self.axis[i_s], self.axis[i_a], self.axis[i_x]]
    }

    pub fn count(&self, label: BasinLabel) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }

    pub fn undetermined_fraction(&self) -> f64 {
        self.count(BasinLabel::Undetermined) as f64 / self.labels.len() as f64
    }

    /// CSV with columns `s0,a0,l0,c0,label`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s0,a0,l0,c0,label\n");
        let r = self.resolution;
        for i_s in 0..r {
            for i_a in 0..r {
                for i_x in 0..r {
                    let [s, a, x] = self.coordinates(i_s, i_a, i_x);
                    let (l, c) = match self.plane {
                        BasinPlane::Leaders => (x, 0.0),
                        BasinPlane::Carriers => (0.0, x),
                    };
                    let _ = writeln!(out, "{s},{a},{l},{c},{}", self.label(i_s, i_a, i_x).as_str());
                }
            }
        }
        out
    }
}

/// Integrates the full system from every grid cell and labels its fate.
///
/// Each run keeps its own active total `M₀ = S₀ + A₀ + L₀ + C₀` and is
/// compared against the equilibria for that total. The nominal
/// configuration must be bistable.
pub fn basin_grid(params: &RateParams, cfg: &ColonyConfig, spec: &BasinSpec, exec: Execution) -> Result<BasinGrid> {
    params.validate()?;
    cfg.validate()?;
    spec.integration.validate()?;
    if spec.resolution < 2 || spec.resolution > MAX_BASIN_RESOLUTION {
        return Err(Error::InvalidSpec(format!(
            "basin resolution must lie in [2, {MAX_BASIN_RESOLUTION}], got {}",
            spec.resolution
        )));
    }
    let nominal_regime = classify_regime(params, cfg);
    if nominal_regime != RegimeClass::Bistable {
        return Err(Error::NotBistable(nominal_regime.to_string()));
    }

    let r = spec.resolution;
    let axis = linspace(0.0, cfg.active_mass(), r);
    let starts: Vec<FullState> = (0..r * r * r)
        .map(|idx| {
            let (i_s, i_a, i_x) = (idx / (r * r), (idx / r) % r, idx % r);
            let (l, c) = match spec.plane {
                BasinPlane::Leaders => (axis[i_x], 0.0),
                BasinPlane::Carriers => (0.0, axis[i_x]),
            };
            FullState::new(axis[i_s], axis[i_a], l, c, 0.0)
        })
        .collect();

    let system = FullSystem::new(params, cfg);
    let thresholds = VerdictThresholds::default();
    let labels = exec.map(&starts, |start| {
        match integrate(&system, start.to_array(), &spec.integration, SwitchMode::Switching) {
            Ok(traj) => BasinLabel::from_verdict(&classify_trajectory(&system, &traj, &thresholds)),
            Err(_) => BasinLabel::Undetermined,
        }
    });
    let bistable_cells = starts
        .iter()
        .filter(|s| {
            let n_eff = s.active_total() / cfg.rho;
            n_eff > 0.0 && classify_regime(params, &cfg.with_n_total(n_eff)) == RegimeClass::Bistable
        })
        .count();

    Ok(BasinGrid {
        plane: spec.plane,
        resolution: r,
        axis,
        labels,
        nominal_regime,
        bistable_cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::presets;

    #[test]
    fn requires_bistable_nominal_config() {
        let spec = BasinSpec::new(BasinPlane::Leaders, 3);
        let err = basin_grid(&presets::sm9_rates(), &presets::colony(100.0, 30.0), &spec, Execution::Sequential);
        assert!(matches!(err, Err(Error::NotBistable(_))));
    }

    #[test]
    fn rejects_bad_resolution() {
        let spec = BasinSpec::new(BasinPlane::Leaders, 1);
        let err = basin_grid(&presets::sm9_rates(), &presets::colony(200.0, 30.0), &spec, Execution::Sequential);
        assert!(matches!(err, Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn from_labels_checks_shape() {
        assert!(BasinGrid::from_labels(BasinPlane::Leaders, vec![0.0, 1.0], vec![BasinLabel::ToEf; 7]).is_err());
        let g = BasinGrid::from_labels(BasinPlane::Leaders, vec![0.0, 1.0], vec![BasinLabel::ToEf; 8]).unwrap();
        assert_eq!(g.index(1, 0, 1), 5);
        assert_eq!(g.to_csv().lines().count(), 9);
    }
}
