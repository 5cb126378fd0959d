//! File formats, rendering, fixtures, randomized campaigns and the
//! command-line front end.

mod cli;
mod densify;
mod fixtures;
pub mod io;
mod render;
mod trials;

use std::path::Path;

use thiserror::Error;

use crate::body::BodyError;
use crate::packer::PackerError;
use crate::rigidity::RigidityError;
use crate::sparsity::GraphError;

pub use cli::{run_cli, Cli, Command};
pub use densify::{densify_independent, Densified, DensifyConfig};
pub use fixtures::square_counterexample;
pub use render::{render_svg, write_svg, POLYGON_VERTICES};
pub use trials::{
    env_seed, random_pins, run_control_campaign, run_theorem_trials, run_trial, sample_body,
    trial_rng, BodyFamily, ControlRecord, TrialConfig, TrialRecord, TrialReport, TrialStage,
    TrialSummary, SEED_ENV,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{stage} failed: {message}")]
    Stage { stage: String, message: String },
    #[error("gave up after {attempts} attempts; last failure: {last}")]
    RetriesExhausted { attempts: usize, last: String },
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    Packer(#[from] PackerError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}
