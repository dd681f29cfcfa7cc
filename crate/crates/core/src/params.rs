//! Rate constants and colony configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower edge of the admissible band for every rate constant.
pub const RATE_MIN: f64 = 1e-6;
/// Upper edge of the admissible band for every rate constant.
pub const RATE_MAX: f64 = 1e3;

/// Behavioural rate constants of the migration model.
///
/// `alpha_*` are per-capita transition rates (1/min); `beta_*` are
/// recruitment rates per encounter (1/(min·ant)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParams {
    /// Searcher → assessor, independent discovery.
    pub alpha_sa: f64,
    /// Assessor → searcher.
    pub alpha_as: f64,
    /// Assessor → leader.
    pub alpha_al: f64,
    /// Leader → searcher.
    pub alpha_ls: f64,
    /// Leader → carrier (active only above quorum).
    pub alpha_lc: f64,
    /// Carrier → searcher.
    pub alpha_cs: f64,
    /// Recruitment of searchers by leaders (tandem runs).
    pub beta_ls: f64,
    /// Recruitment of searchers by carriers (transport).
    pub beta_cs: f64,
}

impl RateParams {
    pub fn fields(&self) -> [(&'static str, f64); 8] {
        [
            ("alpha_sa", self.alpha_sa),
            ("alpha_as", self.alpha_as),
            ("alpha_al", self.alpha_al),
            ("alpha_ls", self.alpha_ls),
            ("alpha_lc", self.alpha_lc),
            ("alpha_cs", self.alpha_cs),
            ("beta_ls", self.beta_ls),
            ("beta_cs", self.beta_cs),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.fields() {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and strictly positive",
                });
            }
            if !(RATE_MIN..=RATE_MAX).contains(&value) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "outside admissible band [1e-6, 1e3]",
                });
            }
        }
        Ok(())
    }

    /// Largest recruitment rate, max(beta_ls, beta_cs).
    pub fn beta_max(&self) -> f64 {
        self.beta_ls.max(self.beta_cs)
    }

    /// Smallest return-to-search rate, min(alpha_as, alpha_ls, alpha_cs).
    pub fn sigma_min(&self) -> f64 {
        self.alpha_as.min(self.alpha_ls).min(self.alpha_cs)
    }

    /// Ratio alpha_cs / alpha_ls of recruiter return rates.
    pub fn return_ratio(&self) -> f64 {
        self.alpha_cs / self.alpha_ls
    }

    /// Ratio beta_cs / beta_ls of recruitment rates.
    pub fn recruit_ratio(&self) -> f64 {
        self.beta_cs / self.beta_ls
    }
}

/// Colony size, active fraction and quorum threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColonyConfig {
    /// Total worker count N (continuous).
    pub n_total: f64,
    /// Active fraction rho in (0, 1).
    pub rho: f64,
    /// Quorum threshold Θ (workers at the new site).
    pub theta: f64,
}

impl ColonyConfig {
    pub fn new(n_total: f64, rho: f64, theta: f64) -> Result<Self> {
        let cfg = Self { n_total, rho, theta };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n_total.is_finite() || self.n_total <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "n_total",
                value: self.n_total,
                reason: "must be finite and strictly positive",
            });
        }
        if !self.rho.is_finite() || self.rho <= 0.0 || self.rho >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: self.rho,
                reason: "must lie in the open interval (0, 1)",
            });
        }
        if !self.theta.is_finite() || self.theta < 0.0 {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: self.theta,
                reason: "must be finite and nonnegative",
            });
        }
        Ok(())
    }

    /// Active population M = rho * N.
    pub fn active_mass(&self) -> f64 {
        self.rho * self.n_total
    }

    /// Passive population (1 - rho) * N.
    pub fn passive_mass(&self) -> f64 {
        (1.0 - self.rho) * self.n_total
    }

    pub fn with_n_total(self, n_total: f64) -> Self {
        Self { n_total, ..self }
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }
}

/// Parameter sets quoted in the figure captions of the original study.
pub mod presets {
    use super::{ColonyConfig, RateParams};

    /// Active fraction used by every published parameter set.
    pub const RHO: f64 = 0.25;

    /// Rates of the undecided-oscillation example (also the second
    /// bifurcation case, `alpha_cs/alpha_ls > max(1, beta_cs/beta_ls)`).
    pub fn fig2_rates() -> RateParams {
        RateParams {
            alpha_sa: 0.01,
            alpha_as: 0.24,
            alpha_al: 0.007,
            alpha_ls: 0.018,
            alpha_lc: 0.15,
            alpha_cs: 0.07,
            beta_ls: 0.049,
            beta_cs: 0.079,
        }
    }

    /// Rates shared by the single-attractor, bistable and basin examples
    /// (first bifurcation case, `alpha_cs/alpha_ls < min(1, beta_cs/beta_ls)`).
    pub fn sm9_rates() -> RateParams {
        RateParams {
            alpha_sa: 0.01,
            alpha_as: 0.24,
            alpha_al: 0.032,
            alpha_ls: 0.12,
            alpha_lc: 0.15,
            alpha_cs: 0.07,
            beta_ls: 0.033,
            beta_cs: 0.079,
        }
    }

    /// Rates of the one-parameter bifurcation diagrams
    /// (`1 < alpha_cs/alpha_ls < beta_cs/beta_ls`).
    pub fn fig5_rates() -> RateParams {
        RateParams {
            alpha_sa: 0.15,
            alpha_as: 0.5,
            alpha_al: 0.057,
            alpha_ls: 0.018,
            alpha_lc: 0.28,
            alpha_cs: 0.05,
            beta_ls: 0.004,
            beta_cs: 0.025,
        }
    }

    /// Rates of the fourth bifurcation case
    /// (`beta_cs/beta_ls < alpha_cs/alpha_ls < 1`).
    pub fn sm5_rates() -> RateParams {
        RateParams {
            alpha_sa: 0.1,
            alpha_as: 0.24,
            alpha_al: 0.2,
            alpha_ls: 0.12,
            alpha_lc: 0.28,
            alpha_cs: 0.07,
            beta_ls: 0.017,
            beta_cs: 0.0025,
        }
    }

    pub fn colony(n_total: f64, theta: f64) -> ColonyConfig {
        ColonyConfig {
            n_total,
            rho: RHO,
            theta,
        }
    }
}
