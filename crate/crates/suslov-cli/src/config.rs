//! JSON run configuration. Keys mirror the command-line flags; flags win.

use serde::Deserialize;
use std::path::{Path, PathBuf};
use suslov::model::InertiaTensor;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Generated,
    Fixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Angle,
    Galois,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub tensor: Option<InertiaTensor>,
    pub p: Option<f64>,
    pub d: Option<f64>,
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub samples: Option<usize>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub x0: Option<[f64; 5]>,
    pub fixture_row: Option<usize>,
    pub project: Option<bool>,
    pub f3: Option<bool>,
    pub branch: Option<BranchArg>,
    pub numeric: Option<bool>,
    pub horizon: Option<f64>,
    pub tol: Option<f64>,
    pub energy_scale: Option<f64>,
    pub which: Option<Which>,
    pub gram: Option<bool>,
    pub verify: Option<bool>,
    pub extend: Option<bool>,
    pub kind: Option<SweepKind>,
    pub p_values: Option<Vec<f64>>,
    pub d_values: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("malformed config {}: {e}", path.display())))
    }
}

pub fn read_tensor(path: &Path) -> Result<InertiaTensor, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read tensor {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("malformed tensor JSON {}: {e}", path.display())))
}
