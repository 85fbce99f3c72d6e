//! Command-line front end: bound evaluation, dimension scans, figure data
//! for the reference parameter sets, and proof-chain verification.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 hypotheses violated,
//! 3 power iteration did not converge, 4 a verification check failed.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use tritoep::presets::reference_set;

use crate::commands::Outcome;
use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "tritoep", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Power-iteration tolerance (overrides `tol`).
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
    /// Start-vector seed (overrides `seed`).
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Also write SVG charts.
    #[arg(long, global = true)]
    pub svg: bool,
    /// Use the built-in reference set with this period (2 to 9).
    #[arg(long, global = true, value_name = "I")]
    pub preset: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the hypotheses and print theta and omega.
    Bound,
    /// sigma_n, 1/||A^-1||_F and omega for each n.
    Scan,
    /// Scan all eight reference sets.
    Figures,
    /// Evaluate every inequality of the proof chain at the largest n.
    Verify,
}

impl Cli {
    pub fn resolve_config(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(period) = self.preset {
            let preset = reference_set(period)
                .ok_or_else(|| anyhow::anyhow!("no reference set with period {period}"))?;
            cfg.use_preset(preset);
        }
        if let Some(dir) = &self.out {
            cfg.output_dir = dir.clone();
        }
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.emit_svg |= self.svg;
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let cfg = cli.resolve_config()?;
    match cli.command {
        Command::Bound => commands::cmd_bound(&cfg, out),
        Command::Scan => commands::cmd_scan(&cfg, out),
        Command::Figures => commands::cmd_figures(&cfg, out),
        Command::Verify => commands::cmd_verify(&cfg, out),
    }
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 1;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    match execute(&cli, out) {
        Ok(outcome) => outcome.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}
