//! Experiment configuration: one JSON document, overridable flag by flag.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cli::CliError;
use crate::params::PhysicalParams;
use crate::shuffle::{MeasurementSchedule, DEFAULT_SAMPLE_DT, DEFAULT_TOTAL_TIME};

/// Measurement interval used when neither the config nor a flag sets one.
pub const DEFAULT_DELTA_T: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Trace,
    Envelope,
    Fit,
    Delta,
    Summary,
}

impl Output {
    pub const ALL: [Output; 5] = [Output::Trace, Output::Envelope, Output::Fit, Output::Delta, Output::Summary];

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "trace" => Ok(Output::Trace),
            "envelope" => Ok(Output::Envelope),
            "fit" => Ok(Output::Fit),
            "delta" => Ok(Output::Delta),
            "summary" => Ok(Output::Summary),
            other => Err(CliError::validation(
                "outputs",
                format!("unknown output `{other}` (expected trace, envelope, fit, delta or summary)"),
            )),
        }
    }
}

/// Validated single-run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PhysicalParams,
    pub schedule: MeasurementSchedule,
    pub fit_window: (f64, f64),
    pub outputs: BTreeSet<Output>,
}

impl Default for RunConfig {
    fn default() -> Self {
        ConfigFile::default()
            .resolve(&Overrides::default())
            .expect("defaults are valid")
    }
}

/// Raw, possibly partial configuration as found in a JSON file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub params: ParamsSection,
    pub schedule: ScheduleSection,
    pub fit_window: Option<[f64; 2]>,
    pub outputs: Option<Vec<Output>>,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsSection {
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub sigma0: Option<f64>,
    pub x0: Option<f64>,
    pub p0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleSection {
    pub delta_t: Option<f64>,
    pub total_time: Option<f64>,
    pub sample_dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    DeltaT,
    P0,
    Sigma0,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::DeltaT => "delta_t",
            SweepAxis::P0 => "p0",
            SweepAxis::Sigma0 => "sigma0",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "delta_t" | "delta-t" => Ok(SweepAxis::DeltaT),
            "p0" => Ok(SweepAxis::P0),
            "sigma0" => Ok(SweepAxis::Sigma0),
            other => Err(CliError::validation(
                "axis",
                format!("unknown sweep axis `{other}` (expected delta_t, p0 or sigma0)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSection {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: SweepAxis,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub range: Option<RangeSection>,
}

/// Command-line overrides; every `Some` wins over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub sigma0: Option<f64>,
    pub x0: Option<f64>,
    pub p0: Option<f64>,
    pub delta_t: Option<f64>,
    pub total_time: Option<f64>,
    pub sample_dt: Option<f64>,
    pub fit_window: Option<(f64, f64)>,
    pub outputs: Option<Vec<Output>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::validation("config", format!("{}: {e}", path.display())))
    }

    pub fn resolve(&self, o: &Overrides) -> Result<RunConfig, CliError> {
        let base = PhysicalParams::default();
        let p = &self.params;
        let params = PhysicalParams::new(
            o.hbar.or(p.hbar).unwrap_or(base.hbar()),
            o.mass.or(p.mass).unwrap_or(base.mass()),
            o.sigma0.or(p.sigma0).unwrap_or(base.sigma0()),
            o.x0.or(p.x0).unwrap_or(base.x0()),
            o.p0.or(p.p0).unwrap_or(base.p0()),
        )?;

        let s = &self.schedule;
        let delta_t = o.delta_t.or(s.delta_t).unwrap_or(DEFAULT_DELTA_T);
        let total_time = o.total_time.or(s.total_time).unwrap_or(DEFAULT_TOTAL_TIME);
        let sample_dt = o.sample_dt.or(s.sample_dt).unwrap_or(DEFAULT_SAMPLE_DT);
        let schedule = MeasurementSchedule::with_sampling(delta_t, total_time, sample_dt)?;

        let fit_window = o
            .fit_window
            .or(self.fit_window.map(|[lo, hi]| (lo, hi)))
            .unwrap_or((0.0, total_time));
        let (lo, hi) = fit_window;
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi && hi <= total_time) {
            return Err(CliError::validation(
                "fit_window",
                format!("[{lo}, {hi}] must satisfy 0 <= lo < hi <= total_time ({total_time})"),
            ));
        }

        let outputs: BTreeSet<Output> = o
            .outputs
            .clone()
            .or_else(|| self.outputs.clone())
            .unwrap_or_else(|| Output::ALL.to_vec())
            .into_iter()
            .collect();
        if outputs.is_empty() {
            return Err(CliError::validation("outputs", "at least one output is required"));
        }

        Ok(RunConfig {
            params,
            schedule,
            fit_window,
            outputs,
        })
    }
}

/// A base configuration and the values one axis takes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub base: RunConfig,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, values: Vec<f64>, base: RunConfig) -> Result<Self, CliError> {
        if values.is_empty() {
            return Err(CliError::validation("values", "sweep needs at least one value"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::validation("values", "sweep values must be finite"));
        }
        let increasing = values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = values.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(CliError::validation("values", "sweep values must be strictly monotone"));
        }
        Ok(SweepSpec { axis, values, base })
    }

    /// Configuration of one sweep point, validated like a standalone run.
    pub fn point(&self, value: f64) -> Result<RunConfig, CliError> {
        let mut cfg = self.base.clone();
        match self.axis {
            SweepAxis::DeltaT => cfg.schedule = cfg.schedule.with_delta_t(value)?,
            SweepAxis::P0 => cfg.params = cfg.params.with_p0(value)?,
            SweepAxis::Sigma0 => cfg.params = cfg.params.with_sigma0(value)?,
        }
        Ok(cfg)
    }
}

pub fn range_values(range: &RangeSection) -> Result<Vec<f64>, CliError> {
    let RangeSection { lo, hi, n, spacing } = *range;
    if n == 0 {
        return Err(CliError::validation("range", "n must be >= 1"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let frac = |i: usize| i as f64 / (n - 1) as f64;
    match spacing {
        Spacing::Linear => Ok((0..n).map(|i| lo + (hi - lo) * frac(i)).collect()),
        Spacing::Log => {
            if !(lo > 0.0 && hi > 0.0) {
                return Err(CliError::validation("range", "log spacing needs lo > 0 and hi > 0"));
            }
            Ok((0..n).map(|i| lo * (hi / lo).powf(frac(i))).collect())
        }
    }
}

impl SweepSection {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match (&self.values, &self.range) {
            (Some(v), None) => Ok(v.clone()),
            (None, Some(r)) => range_values(r),
            _ => Err(CliError::validation("sweep", "give exactly one of `values` or `range`")),
        }
    }
}
