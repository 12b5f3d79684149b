//! Config-driven experiment runner.
//!
//! A config fully determines a run: the scale source, the step law, the
//! α-sequence, simulation sizes, which checks run, and the master seed.
//! Stages execute in dependency order, each writing its artifacts into the
//! output directory; identical configs and seeds reproduce every artifact
//! byte for byte.

mod config;
mod report;
mod stages;

pub use config::{
    AlphaSpec, CheckToggles, ExperimentConfig, LawSpec, OutputSpec, ParamSpec, ScaleSpec, WalkSpec,
};
pub use report::{print_report, read_summary};
pub use stages::{RunArtifacts, StageOutcome};

/// Scale resolution for CLI subcommands that bypass the full runner.
pub fn resolve_scale_for_cli(
    config: &ExperimentConfig,
) -> Result<std::sync::Arc<crate::ladder::Scale>, ExperimentError> {
    stages::resolve_scale(config)
}

/// Superswitcher search with artifact output, for the CLI.
pub fn find_switcher_for_cli(
    model: &crate::group::GroupModel,
    z_radius: u64,
    budget: usize,
    out_dir: &std::path::Path,
) -> Result<(crate::group::GroupElement, std::path::PathBuf), ExperimentError> {
    stages::find_switcher_artifacts(model, z_radius, budget, out_dir)
}

use std::path::Path;

use thiserror::Error;

use crate::forest::ForestError;
use crate::group::GroupError;
use crate::ladder::LadderError;
use crate::records::RecordsError;
use crate::switch::SwitchError;
use crate::walk::WalkError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ladder(#[from] LadderError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Records(#[from] RecordsError),
    #[error(transparent)]
    Switch(#[from] SwitchError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

pub(crate) fn io_err(path: &Path, source: std::io::Error) -> ExperimentError {
    ExperimentError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Exit status of a run: `Ok` maps to 0, violated invariants to 1, config
/// problems to 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    InvariantFailure,
    ConfigError,
}

impl RunStatus {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunStatus::Ok => 0,
            RunStatus::InvariantFailure => 1,
            RunStatus::ConfigError => 2,
        }
    }
}

/// Executes every enabled stage in dependency order. Stage failures stop
/// their dependents but independent stages still run.
pub fn run(config: &ExperimentConfig) -> Result<(RunStatus, RunArtifacts), ExperimentError> {
    stages::run_all(config)
}
