// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! `csfq` command-line interface.
//!
//! Exit codes: 0 success, 2 usage, 3 validation (including unreadable or
//! malformed input files), 4 numerical non-convergence.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use csfq_core::config::DeviceConfig;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use commands::{
    read_observations, FitArgs, ReportArgs, SpectroscopyArgs, SpectrumArgs, T1TempArgs,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Validation(_) => 3,
            Self::NonConvergence(_) => 4,
        }
    }
}

impl From<csfq_core::Error> for CliError {
    fn from(e: csfq_core::Error) -> Self {
        match e {
            csfq_core::Error::NotConverged { .. } => Self::NonConvergence(e.to_string()),
            other => Self::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Validation(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Validation(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "csfq", version, about = "Flux-qubit spectra, loss budgets and parameter fits")]
pub struct Cli {
    /// Write a JSON run record (command, config hash, seed, outputs, wall time).
    #[arg(long, global = true, value_name = "PATH")]
    pub run_record: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels at one flux or over a flux range.
    Spectrum(SpectrumArgs),
    /// Synthetic spectroscopy trace and peak table at an effective temperature.
    Spectroscopy(SpectroscopyArgs),
    /// T1 versus temperature from a calibrated quasiparticle model.
    #[command(name = "t1-temp")]
    T1Temp(T1TempArgs),
    /// Fit circuit parameters to observed transition frequencies.
    Fit(FitArgs),
    /// Before/after comparison table.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArg {
    /// Device config (JSON). Falls back to $CSFQ_CONFIG, then the built-in default.
    #[arg(long, env = "CSFQ_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,
}

/// A loaded config plus the bytes it hashes to.
pub struct LoadedConfig {
    pub config: DeviceConfig,
    pub hash: String,
}

impl ConfigArg {
    pub fn load(&self) -> CliResult<LoadedConfig> {
        let config = match &self.config {
            Some(path) => DeviceConfig::load(path)?,
            None => DeviceConfig::paper_default(),
        };
        let hash = Sha256::digest(config.to_json_string().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        Ok(LoadedConfig { config, hash })
    }
}

#[derive(Debug, Serialize)]
struct RunRecord<'a> {
    command: &'a str,
    config_hash: String,
    seed: Option<u64>,
    outputs: Vec<String>,
    wall_time_s: f64,
}

/// What a command did, for the run record.
#[derive(Debug, Default)]
pub struct Outcome {
    pub config_hash: String,
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let started = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::Spectrum(a) => ("spectrum", commands::spectrum(a, out)?),
        Command::Spectroscopy(a) => ("spectroscopy", commands::spectroscopy(a, out)?),
        Command::T1Temp(a) => ("t1-temp", commands::t1_temp(a, out)?),
        Command::Fit(a) => ("fit", commands::fit(a, out)?),
        Command::Report(a) => ("report", commands::report(a, out)?),
    };
    if let Some(path) = &cli.run_record {
        let record = RunRecord {
            command: name,
            config_hash: outcome.config_hash,
            seed: outcome.seed,
            outputs: outcome.outputs.iter().map(|p| p.display().to_string()).collect(),
            wall_time_s: started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&record).map_err(|e| CliError::Validation(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
    }
    Ok(())
}
