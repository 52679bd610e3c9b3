//! Configuration, reports and the command-line driver on top of
//! `cosmoflux-core`.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod sweep;
pub mod verify;

pub use config::{OutputFormat, RunConfig, ScenarioKind, SweepAxis, SweepConfig};
pub use cosmoflux_core as core;
pub use error::AppError;
pub use run::{run_simulation, Check, RunReport, Status};
pub use sweep::{run_sweep, SweepRow};
pub use verify::{verify_invariants, VerifyItem, VerifyReport};
