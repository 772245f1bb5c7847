//! Experiment harness for the `qmclab` binary.
//!
//! [`run_experiment`] takes a validated [`ExperimentConfig`], runs it on the
//! current rayon pool and writes `<out>/<experiment>.csv` plus
//! `<out>/<experiment>.summary.txt`.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::Path;

pub use config::{ConfigError, Experiment, ExperimentConfig, Params};
pub use output::{Report, Summary, Table};

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code for an invalid config or command line.
pub const EXIT_CONFIG: i32 = 1;
/// Exit code for a failure while running.
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("runtime failure: {0}")]
    Runtime(#[from] qmclab_core::Error),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) | CliError::Io(_) => EXIT_RUNTIME,
        }
    }
}

/// Runs one experiment and writes its outputs under `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<Summary, CliError> {
    if config.params.experiment() != config.experiment {
        return Err(ConfigError {
            line: None,
            message: format!(
                "params belong to {}, not {}",
                config.params.experiment(),
                config.experiment
            ),
        }
        .into());
    }
    if let Err(bad) = config.params.validate() {
        return Err(ConfigError {
            line: None,
            message: format!("params.{}: {}", bad.key, bad.message),
        }
        .into());
    }
    if config.trials == 0 {
        return Err(ConfigError {
            line: None,
            message: "trials must be at least 1".into(),
        }
        .into());
    }
    let (table, report) = match &config.params {
        Params::TomographyScaling(p) => experiments::tomography_scaling(config, p)?,
        Params::Bisection(p) => experiments::bisection(config, p)?,
        Params::MleScaling(p) => experiments::mle_scaling(config, p)?,
        Params::UncertaintyCurve(p) => experiments::uncertainty_curve(config, p)?,
        Params::Verifier(p) => experiments::verifier(config, p)?,
        Params::CloneFidelity(_) => experiments::clone_fidelity(config)?,
        Params::CloneTomography(p) => experiments::clone_tomography(config, p)?,
        Params::Wigner(p) => experiments::wigner(config, p)?,
        Params::NumberPhase(p) => experiments::number_phase(config, p)?,
        Params::ComplexityProfile(p) => experiments::complexity_profile_run(config, p)?,
    };
    Ok(output::write_outputs(out_dir, config, &table, report)?)
}
