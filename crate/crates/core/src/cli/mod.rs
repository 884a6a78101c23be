//! The `zeno` command: configuration, runs, sweeps and oracle checks.
//!
//! Everything here is deterministic; identical inputs give byte-identical
//! CSV and JSON.

mod args;
mod commands;
mod config;
mod format;

pub use args::{Cli, Command, CommonArgs, OracleArgs, RunArgs, ScalesArgs, SweepArgs};
pub use commands::{
    cmd_oracle_check, cmd_run, cmd_scales, cmd_sweep, execute_run, execute_sweep, scales_summary, OracleOptions,
    RunArtifacts, RunSummary, ScalesSummary, SweepRow, SCHEMA_VERSION,
};
pub use config::{
    range_values, ConfigFile, Output, Overrides, ParamsSection, RangeSection, RunConfig, ScheduleSection, Spacing,
    SweepAxis, SweepSection, SweepSpec, DEFAULT_DELTA_T,
};

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use thiserror::Error;

use crate::error::ZenoError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error(transparent)]
    Model(#[from] ZenoError),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("tolerance exceeded: {0}")]
    Tolerance(String),
}

impl CliError {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } | CliError::Model(_) => 1,
            CliError::Tolerance(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Scales(a) => {
            let cfg = a.common.resolve()?;
            let json = cmd_scales(&cfg, a.out.as_deref())?;
            writeln!(stdout, "{json}")?;
        }
        Command::Run(a) => {
            let cfg = a.common.resolve()?;
            let summary = cmd_run(&cfg, &a.out)?;
            writeln!(stdout, "{}", format::json(&summary)?)?;
        }
        Command::Sweep(a) => {
            let spec = a.resolve()?;
            let workers = a.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let rows = cmd_sweep(&spec, &a.out, workers, a.traces)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            writeln!(stdout, "{} sweep points written to {} ({failed} failed)", rows.len(), a.out.display())?;
        }
        Command::OracleCheck(a) => {
            let cfg = a.common.resolve()?;
            let report = cmd_oracle_check(&cfg, &a.options(), a.out.as_deref())?;
            writeln!(stdout, "{}", format::json(&report)?)?;
            if !report.pass {
                return Err(CliError::Tolerance(
                    "analytic and grid results disagree beyond tolerance".to_string(),
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::validation("x", "y").exit_code(), 1);
        assert_eq!(CliError::Model(ZenoError::InvalidSchedule("s".into())).exit_code(), 1);
        assert_eq!(CliError::Tolerance("t".into()).exit_code(), 2);
        assert_eq!(CliError::Io("io".into()).exit_code(), 3);
    }

    #[test]
    fn invalid_sigma_is_a_validation_failure() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with(["zeno", "scales", "--sigma0", "0"], &mut out, &mut err);
        assert_eq!(code, 1);
        assert!(String::from_utf8(err).unwrap().contains("sigma0"));
    }

    #[test]
    fn unknown_flag_is_rejected() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(main_with(["zeno", "run", "--bogus"], &mut out, &mut err), 1);
    }
}
