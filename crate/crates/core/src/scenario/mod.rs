//! Two-user coexistence experiments: trials, power sweeps and delay sweeps.

mod config;
mod sweep;
mod trial;

pub use config::{Scenario, ScenarioConfig, TauMode};
pub use sweep::{collect_eta, run_point, sweep_power, sweep_tau, PointResult, PowerPoint, TauPoint, User, UserPoint};
pub use trial::{run_trial, Harness, TrialResult, UserTrial};
