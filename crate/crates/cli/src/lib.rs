//! Scenario runner, refinement studies and entropy audits on top of [`svkin`].

pub mod config;
pub mod error;
pub mod initial;
pub mod runner;
pub mod study;
pub mod topography;

pub use config::Scenario;
pub use error::{CliError, Result};
pub use initial::InitialSpec;
pub use runner::{run, setup, AuditRecord, RunOptions, RunOutput, RunSummary};
pub use study::{
    counterexample_scan, refinement_study, CounterexampleScan, RefinementRow, RefinementStudy,
};
pub use topography::TopographySpec;
