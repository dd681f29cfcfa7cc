use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{linspace, verdict_integration};
use crate::equilibria::{critical_sizes, interior_point, regime_from_sizes, EquilibriumKind, RegimeClass};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::integrator::{integrate_active, long_run_verdict, IntegrationConfig, LongRunVerdict};
use crate::model::ActiveState;
use crate::params::{ColonyConfig, RateParams};

/// Largest number of points accepted on one axis.
pub const MAX_AXIS_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points }
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.points)
    }

    /// Grid spacing.
    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points.max(2) - 1) as f64
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo < 0.0 || self.lo > self.hi {
            return Err(Error::InvalidSpec(format!(
                "{name} range [{}, {}] must be finite, nonnegative and ordered",
                self.lo, self.hi
            )));
        }
        if self.points < 2 || self.points > MAX_AXIS_POINTS {
            return Err(Error::InvalidSpec(format!(
                "{name} axis needs between 2 and {MAX_AXIS_POINTS} points, got {}",
                self.points
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SweepAxis {
    N(AxisRange),
    Theta(AxisRange),
    NxTheta { n: AxisRange, theta: AxisRange },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    /// Closed-form classification from the critical sizes.
    Analytic,
    /// Long-run verdicts from two seeded initial states per cell.
    Simulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    /// Supplies rho, and the fixed N or Θ of a one-axis sweep.
    pub base: ColonyConfig,
    pub mode: SweepMode,
    pub integration: IntegrationConfig,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, base: ColonyConfig, mode: SweepMode) -> Self {
        Self {
            axis,
            base,
            mode,
            integration: verdict_integration(2e4),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.base.rho.is_finite() || self.base.rho <= 0.0 || self.base.rho >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: self.base.rho,
                reason: "must lie in the open interval (0, 1)",
            });
        }
        match &self.axis {
            SweepAxis::N(r) => {
                r.validate("N")?;
                self.base.with_n_total(1.0).validate()?;
            }
            SweepAxis::Theta(r) => {
                r.validate("theta")?;
                self.base.with_theta(0.0).validate()?;
            }
            SweepAxis::NxTheta { n, theta } => {
                n.validate("N")?;
                theta.validate("theta")?;
            }
        }
        if self.mode == SweepMode::Simulated {
            self.integration.validate()?;
        }
        Ok(())
    }

    /// (N, Θ) of every cell, N-major.
    pub fn cells(&self) -> Vec<(f64, f64)> {
        match &self.axis {
            SweepAxis::N(r) => r.values().into_iter().map(|n| (n, self.base.theta)).collect(),
            SweepAxis::Theta(r) => r.values().into_iter().map(|t| (self.base.n_total, t)).collect(),
            SweepAxis::NxTheta { n, theta } => {
                let thetas = theta.values();
                n.values()
                    .into_iter()
                    .flat_map(|n| thetas.iter().map(move |&t| (n, t)))
                    .collect()
            }
        }
    }
}

/// Label of one sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepLabel {
    Regime(RegimeClass),
    /// Seeds gave no consistent long-run picture.
    Undetermined,
    /// A seed run failed or the cell configuration is invalid.
    Error,
}

impl SweepLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepLabel::Regime(r) => r.as_str(),
            SweepLabel::Undetermined => "Undetermined",
            SweepLabel::Error => "Error",
        }
    }

    pub fn regime(self) -> Option<RegimeClass> {
        match self {
            SweepLabel::Regime(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedKind {
    /// Every active worker searching (deep below quorum).
    AllSearchers,
    /// The closed-form interior equilibrium (above quorum when regular).
    Interior,
}

impl SeedKind {
    pub const ALL: [SeedKind; 2] = [SeedKind::AllSearchers, SeedKind::Interior];

    pub fn as_str(self) -> &'static str {
        match self {
            SeedKind::AllSearchers => "all_searchers",
            SeedKind::Interior => "interior",
        }
    }

    pub fn state(self, params: &RateParams, cfg: &ColonyConfig) -> ActiveState {
        match self {
            SeedKind::AllSearchers => ActiveState::default(),
            SeedKind::Interior => interior_point(params, cfg.active_mass()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    pub seed: SeedKind,
    pub verdict: Option<LongRunVerdict>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub n_total: f64,
    pub theta: f64,
    pub label: SweepLabel,
    /// Per-seed outcomes (simulated mode only).
    pub seeds: Vec<SeedResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    /// Swept coordinate of a cell for one-axis sweeps.
    fn coordinate(&self, cell: &SweepCell) -> Option<f64> {
        match self.spec.axis {
            SweepAxis::N(_) => Some(cell.n_total),
            SweepAxis::Theta(_) => Some(cell.theta),
            SweepAxis::NxTheta { .. } => None,
        }
    }

    /// Smallest and largest swept value carrying `label` (one-axis sweeps).
    pub fn band(&self, label: SweepLabel) -> Option<(f64, f64)> {
        let values: Vec<f64> = self
            .cells
            .iter()
            .filter(|c| c.label == label)
            .filter_map(|c| self.coordinate(c))
            .collect();
        let lo = values.iter().copied().reduce(f64::min)?;
        let hi = values.iter().copied().reduce(f64::max)?;
        Some((lo, hi))
    }

    pub fn count(&self, label: SweepLabel) -> usize {
        self.cells.iter().filter(|c| c.label == label).count()
    }

    /// Label grid as CSV: `n_total,theta,label` (simulated sweeps add one
    /// verdict column per seed).
    pub fn to_csv(&self) -> String {
        let simulated = self.spec.mode == SweepMode::Simulated;
        let mut out = String::from("n_total,theta,label");
        if simulated {
            for seed in SeedKind::ALL {
                let _ = write!(out, ",{}", seed.as_str());
            }
        }
        out.push('\n');
        for cell in &self.cells {
            let _ = write!(out, "{},{},{}", cell.n_total, cell.theta, cell.label.as_str());
            if simulated {
                for seed in &cell.seeds {
                    let v = seed.verdict.map_or("Error", |v| v.label());
                    let _ = write!(out, ",{v}");
                }
            }
            out.push('\n');
        }
        out
    }
}

fn combine(verdicts: &[LongRunVerdict]) -> SweepLabel {
    use EquilibriumKind::*;
    use LongRunVerdict::*;
    let ef = verdicts.iter().filter(|v| **v == ConvergedTo(BoundaryEf)).count();
    let es = verdicts.iter().filter(|v| **v == ConvergedTo(InteriorEs)).count();
    let osc = verdicts
        .iter()
        .filter(|v| matches!(v, PeriodicOscillation { .. }))
        .count();
    let n = verdicts.len();
    if ef == n {
        SweepLabel::Regime(RegimeClass::FailedEmigration)
    } else if es == n {
        SweepLabel::Regime(RegimeClass::SuccessfulEmigration)
    } else if osc == n {
        SweepLabel::Regime(RegimeClass::Undecided)
    } else if ef > 0 && es > 0 && ef + es == n {
        SweepLabel::Regime(RegimeClass::Bistable)
    } else {
        SweepLabel::Undetermined
    }
}

fn simulate_cell(params: &RateParams, cfg: &ColonyConfig, icfg: &IntegrationConfig) -> (SweepLabel, Vec<SeedResult>) {
    let seeds: Vec<SeedResult> = SeedKind::ALL
        .iter()
        .map(|&seed| {
            let run = cfg
                .validate()
                .and_then(|_| integrate_active(seed.state(params, cfg), params, cfg, icfg));
            match run {
                Ok(traj) => SeedResult {
                    seed,
                    verdict: Some(long_run_verdict(&traj, params, cfg)),
                    error: None,
                },
                Err(e) => SeedResult {
                    seed,
                    verdict: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let verdicts: Option<Vec<LongRunVerdict>> = seeds.iter().map(|s| s.verdict).collect();
    let label = verdicts.map_or(SweepLabel::Error, |v| combine(&v));
    (label, seeds)
}

/// Classifies every cell of a sweep.
///
/// Analytic cells compare N with the critical sizes directly, so N = 0 is
/// admissible there. Simulated cells run from both [`SeedKind`] starts and
/// combine the verdicts; a failed run marks only its own cell.
pub fn sweep(spec: &SweepSpec, params: &RateParams, exec: Execution) -> Result<SweepResult> {
    params.validate()?;
    spec.validate()?;
    let rho = spec.base.rho;
    let cells = exec.map(&spec.cells(), |&(n_total, theta)| {
        let cfg = ColonyConfig { n_total, rho, theta };
        let (label, seeds) = match spec.mode {
            SweepMode::Analytic => {
                let sizes = critical_sizes(params, &cfg);
                (SweepLabel::Regime(regime_from_sizes(n_total, sizes.n1, sizes.n2)), Vec::new())
            }
            SweepMode::Simulated => simulate_cell(params, &cfg, &spec.integration),
        };
        SweepCell {
            n_total,
            theta,
            label,
            seeds,
        }
    });
    Ok(SweepResult { spec: *spec, cells })
}
