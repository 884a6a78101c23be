use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cli::commands::OracleOptions;
use crate::cli::config::{
    range_values, ConfigFile, Output, Overrides, RangeSection, RunConfig, Spacing, SweepAxis, SweepSpec,
};
use crate::cli::CliError;
use crate::oracle::OracleTolerances;

#[derive(Debug, Clone, Parser)]
#[command(name = "zeno", version, about = "Free Gaussian packets under periodic projective measurement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the characteristic time scales and the regime of the interval
    Scales(ScalesArgs),
    /// Compute one measurement schedule and write trace.csv / summary.json
    Run(RunArgs),
    /// Repeat `run` along one parameter axis and write sweep.csv
    Sweep(SweepArgs),
    /// Compare the closed forms against the grid solver
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON experiment file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p0: Option<f64>,
    /// Interval between measurements
    #[arg(long, allow_hyphen_values = true)]
    pub delta_t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub total_time: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sample_dt: Option<f64>,
    /// Fit window as `lo,hi`
    #[arg(long, value_name = "LO,HI", value_parser = parse_window, allow_hyphen_values = true)]
    pub fit_window: Option<Window>,
    /// Comma-separated subset of trace,envelope,fit,delta,summary
    #[arg(long, value_delimiter = ',')]
    pub outputs: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window(pub f64, pub f64);

fn parse_window(s: &str) -> Result<Window, String> {
    let nums = parse_list(s)?;
    match nums[..] {
        [lo, hi] => Ok(Window(lo, hi)),
        _ => Err(format!("expected `lo,hi`, got `{s}`")),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
        .collect()
}

impl CommonArgs {
    fn file(&self) -> Result<ConfigFile, CliError> {
        self.config.as_deref().map_or(Ok(ConfigFile::default()), ConfigFile::load)
    }

    fn overrides(&self) -> Result<Overrides, CliError> {
        let outputs = self
            .outputs
            .as_ref()
            .map(|v| v.iter().map(|s| Output::parse(s)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        Ok(Overrides {
            hbar: self.hbar,
            mass: self.mass,
            sigma0: self.sigma0,
            x0: self.x0,
            p0: self.p0,
            delta_t: self.delta_t,
            total_time: self.total_time,
            sample_dt: self.sample_dt,
            fit_window: self.fit_window.map(|Window(lo, hi)| (lo, hi)),
            outputs,
        })
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        self.file()?.resolve(&self.overrides()?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScalesArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also write scales.json into this directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "zeno-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "zeno-sweep")]
    pub out: PathBuf,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub workers: Option<usize>,
    /// delta_t, p0 or sigma0
    #[arg(long)]
    pub axis: Option<String>,
    /// Explicit comma-separated values
    #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
    pub values: Option<String>,
    /// `lo,hi,n`
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    #[arg(long, value_parser = ["linear", "log"], default_value = "linear")]
    pub spacing: String,
    /// Write points/NNN/trace.csv and summary.json for every point
    #[arg(long)]
    pub traces: bool,
}

impl SweepArgs {
    pub fn resolve(&self) -> Result<SweepSpec, CliError> {
        let file = self.common.file()?;
        let base = file.resolve(&self.common.overrides()?)?;
        let from_flags = self.values.is_some() || self.range.is_some();
        let (axis, values) = match (&file.sweep, from_flags) {
            (_, true) => {
                let axis = self
                    .axis
                    .as_deref()
                    .ok_or_else(|| CliError::validation("axis", "required with --values/--range"))?;
                let values = match (&self.values, &self.range) {
                    (Some(v), _) => parse_list(v).map_err(|e| CliError::validation("values", e))?,
                    (None, Some(r)) => range_values(&parse_range(r, &self.spacing)?)?,
                    (None, None) => unreachable!(),
                };
                (SweepAxis::parse(axis)?, values)
            }
            (Some(section), false) => {
                let axis = match &self.axis {
                    Some(a) => SweepAxis::parse(a)?,
                    None => section.axis,
                };
                (axis, section.values()?)
            }
            (None, false) => {
                return Err(CliError::validation(
                    "sweep",
                    "give --axis with --values or --range, or a `sweep` section in the config",
                ))
            }
        };
        SweepSpec::new(axis, values, base)
    }
}

fn parse_range(s: &str, spacing: &str) -> Result<RangeSection, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::validation("range", format!("expected `lo,hi,n`, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(RangeSection {
        lo: parts[0].parse().map_err(|_| bad())?,
        hi: parts[1].parse().map_err(|_| bad())?,
        n: parts[2].parse().map_err(|_| bad())?,
        spacing: if spacing == "log" { Spacing::Log } else { Spacing::Linear },
    })
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also write oracle_report.json into this directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid points (power of two, >= 256)
    #[arg(long, default_value_t = crate::oracle::DEFAULT_POINTS)]
    pub grid_points: usize,
    /// Box width; sized automatically when omitted
    #[arg(long)]
    pub grid_width: Option<f64>,
    /// Comparison horizon (default: min(total_time, 1))
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Replace every tolerance with this value
    #[arg(long)]
    pub tolerance: Option<f64>,
}

impl OracleArgs {
    pub fn options(&self) -> OracleOptions {
        let mut opts = OracleOptions {
            grid_points: self.grid_points,
            grid_width: self.grid_width,
            horizon: self.horizon,
            ..OracleOptions::default()
        };
        if let Some(tol) = self.tolerance {
            opts.tolerances = OracleTolerances {
                correlation: tol,
                phase: tol,
                moments: tol,
                shuffle: tol,
            };
        }
        opts
    }
}
