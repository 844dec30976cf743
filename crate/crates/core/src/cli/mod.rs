// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Batch command line: config-driven runs writing versioned CSV/JSON.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;

pub use config::{Grid, LoadedConfig, RunConfig, SCHEMA_VERSION};
pub use output::{Artifact, Meta};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ctqsim", version, about = "Clock-transition spin qubit simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// experimental_9p1GHz or calculated_11GHz (overrides the config).
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Directory for output files; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit JSON (alongside CSV when writing to --out).
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for grid commands.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Level diagram over a field grid.
    Spectrum,
    /// Locate clock transitions.
    CtFind,
    /// Fit model parameters to clock-transition targets.
    Calibrate,
    /// T1/T2 over field and temperature, with an Arrhenius report.
    Relax,
    /// Operating-space delta f with the electrode on and off.
    Dimer,
    /// Pulse protocols on the operating space.
    Pulse,
    /// Fast invariant suite.
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::CtFind => "ct-find",
            Command::Calibrate => "calibrate",
            Command::Relax => "relax",
            Command::Dimer => "dimer",
            Command::Pulse => "pulse",
            Command::Check => "check",
        }
    }
}

/// Exit code for a library error: input problems are usage errors.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::InvalidGrid(_)
        | Error::InvalidParameter(_)
        | Error::InvalidSequence(_)
        | Error::InvalidSpin(_)
        | Error::InvalidStevens { .. }
        | Error::InvalidCalibration(_)
        | Error::OffResonant { .. }
        | Error::LevelOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::ModelMismatch(_)
        | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn execute(cli: &Cli, cfg: &LoadedConfig) -> crate::error::Result<commands::Outcome> {
    match cli.command {
        Command::Spectrum => commands::spectrum(cfg),
        Command::CtFind => commands::ct_find(cfg),
        Command::Calibrate => commands::calibrate_cmd(cfg),
        Command::Relax => commands::relax(cfg),
        Command::Dimer => commands::dimer(cfg),
        Command::Pulse => commands::pulse(cfg),
        Command::Check => commands::check(cfg),
    }
}

/// Run a parsed command line, writing results and diagnostics; returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32 {
    let fail = |stderr: &mut dyn std::io::Write, e: &Error| {
        let _ = writeln!(stderr, "error: {e}");
        exit_code(e)
    };
    if cli.threads == Some(0) {
        return fail(stderr, &Error::Config("--threads must be at least 1".into()));
    }
    let cfg = match LoadedConfig::load(cli.config.as_deref(), cli.preset.as_deref()) {
        Ok(c) => c,
        Err(e) => return fail(stderr, &e),
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli, &cfg)),
            Err(e) => Err(Error::Config(format!("thread pool: {e}"))),
        },
        None => execute(cli, &cfg),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => return fail(stderr, &e),
    };
    let meta = Meta { command: cli.command.name(), preset: cfg.preset.name(), hash: &cfg.hash };
    for w in &outcome.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    match &cli.out {
        Some(dir) => {
            if let Err(e) = std::fs::create_dir_all(dir) {
                return fail(stderr, &Error::Io(e));
            }
            for a in &outcome.artifacts {
                let ext = if a.name == "calibrated_params" { "toml" } else { "csv" };
                let mut files = vec![(dir.join(format!("{}.{ext}", a.name)), a.render_csv(&meta))];
                if cli.json {
                    files.push((dir.join(format!("{}.json", a.name)), a.render_json(&meta)));
                }
                for (path, content) in files {
                    if let Err(e) = output::write_atomic(&path, &content) {
                        return fail(stderr, &e);
                    }
                }
            }
        }
        None => {
            for a in &outcome.artifacts {
                let text = if cli.json { a.render_json(&meta) } else { a.render_csv(&meta) };
                let _ = stdout.write_all(text.as_bytes());
            }
        }
    }
    if outcome.failed {
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    }
}

/// Parse `args` (including the program name) and run; clap usage errors exit 2.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdout, stderr),
        Err(e) => {
            let _ = write!(stderr, "{e}");
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            }
        }
    }
}
