//! Quorum-switched colony migration model: vector field, closed-form
//! equilibria, local stability, event-driven integration and parameter
//! analyses.

pub mod error;
pub mod params;
pub mod model;
pub mod equilibria;
pub mod stability;
pub mod integrator;
pub mod exec;
pub mod config;
pub mod analysis;

pub use error::{Error, Result};
pub use params::{presets, ColonyConfig, RateParams};
pub use model::{ActiveState, BranchId, FullState};
pub use equilibria::{EquilibriumKind, EquilibriumReport, RegimeClass};
pub use stability::StabilityVerdict;
pub use integrator::{IntegrationConfig, LongRunVerdict, Trajectory};
pub use exec::Execution;
pub use config::ModelConfig;
