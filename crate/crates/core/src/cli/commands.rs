use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::overlap_condition_ok;
use crate::cli::config::{Output, RunConfig, SweepSpec};
use crate::cli::format::{csv_err, csv_writer, json, num, opt_num};
use crate::cli::CliError;
use crate::oracle::{oracle_check, GridSpec, OracleReport, OracleTolerances, DEFAULT_POINTS};
use crate::params::derive_scales;
use crate::shuffle::{classify_regime, envelope_rate, run_shuffle, unperturbed_trace};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalesSummary {
    pub schema: u32,
    pub delta_t: f64,
    pub tau: f64,
    pub tau_zeno: f64,
    pub tau_inflx: f64,
    pub p_spread: f64,
    pub e0: f64,
    pub mean_h: f64,
    pub delta_e: f64,
    pub momentum_ratio: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub regime: String,
    pub overlap_condition: bool,
}

pub fn scales_summary(cfg: &RunConfig) -> ScalesSummary {
    let s = derive_scales(&cfg.params);
    let dt = cfg.schedule.delta_t();
    let gamma = envelope_rate(&cfg.params, dt);
    ScalesSummary {
        schema: SCHEMA_VERSION,
        delta_t: dt,
        tau: s.tau,
        tau_zeno: s.tau_zeno,
        tau_inflx: s.tau_inflx,
        p_spread: s.p_spread,
        e0: s.e0,
        mean_h: s.mean_h,
        delta_e: s.delta_e,
        momentum_ratio: s.momentum_ratio,
        gamma,
        gamma_prime: 0.5 * gamma,
        regime: classify_regime(&s, dt).label.as_str().to_string(),
        overlap_condition: overlap_condition_ok(&cfg.params),
    }
}

/// Returns the JSON text; also writes `scales.json` when `out` is given.
pub fn cmd_scales(cfg: &RunConfig, out: Option<&Path>) -> Result<String, CliError> {
    let text = json(&scales_summary(cfg))?;
    if let Some(dir) = out {
        write_file(dir, "scales.json", format!("{text}\n").as_bytes())?;
    }
    Ok(text)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub schema: u32,
    pub delta_t: f64,
    pub gamma_est: f64,
    pub gamma_prime_est: f64,
    pub gamma_prime_fit: Option<f64>,
    pub max_abs_delta: Option<f64>,
    pub l2_delta: Option<f64>,
    pub crossing_time: Option<f64>,
    pub regime: String,
    pub overlap_condition: bool,
    pub fit_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub summary: RunSummary,
    /// `trace.csv` contents, when requested and some column output is enabled.
    pub csv: Option<Vec<u8>>,
}

const TRACE_HEADER: [&str; 6] = ["t", "c_unperturbed", "c_perturbed", "envelope", "fit", "delta"];

pub fn execute_run(cfg: &RunConfig, with_csv: bool) -> Result<RunArtifacts, CliError> {
    let result = run_shuffle(&cfg.params, &cfg.schedule, cfg.fit_window)?;
    let gamma_prime_fit = result.fitted_rate_amp();
    let summary = RunSummary {
        schema: SCHEMA_VERSION,
        delta_t: cfg.schedule.delta_t(),
        gamma_est: result.envelope_rate,
        gamma_prime_est: result.envelope_rate_amp,
        gamma_prime_fit,
        max_abs_delta: result.markov_distance.as_ref().map(|d| d.max_abs),
        l2_delta: result.markov_distance.as_ref().map(|d| d.l2),
        crossing_time: result.crossing_time,
        regime: result.regime.label.as_str().to_string(),
        overlap_condition: overlap_condition_ok(&cfg.params),
        fit_error: result.fit.as_ref().err().map(|e| e.to_string()),
    };

    let o = &cfg.outputs;
    let columns = [
        true,
        o.contains(&Output::Trace),
        o.contains(&Output::Trace),
        o.contains(&Output::Envelope),
        o.contains(&Output::Fit),
        o.contains(&Output::Delta),
    ];
    if !with_csv || columns[1..].iter().all(|c| !c) {
        return Ok(RunArtifacts { summary, csv: None });
    }

    let free = unperturbed_trace(&cfg.params, &cfg.schedule)?.modulus();
    let perturbed = result.trace.modulus();
    let est = result.envelope_rate_amp;
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(pick(&columns, TRACE_HEADER.map(String::from)))
            .map_err(csv_err)?;
        for (k, &t) in result.trace.times().iter().enumerate() {
            let env = (-est * t).exp();
            let fit = gamma_prime_fit.map(|g| (-g * t).exp());
            let row = [
                num(t),
                num(free[k]),
                num(perturbed[k]),
                num(env),
                opt_num(fit),
                opt_num(fit.map(|f| env - f)),
            ];
            w.write_record(pick(&columns, row)).map_err(csv_err)?;
        }
        w.flush()?;
    }
    Ok(RunArtifacts {
        summary,
        csv: Some(buf),
    })
}

fn pick<const N: usize>(mask: &[bool; N], fields: [String; N]) -> Vec<String> {
    fields.into_iter().zip(mask).filter(|(_, &m)| m).map(|(f, _)| f).collect()
}

/// Writes `trace.csv` and `summary.json` (as selected by `outputs`) into `out`.
pub fn cmd_run(cfg: &RunConfig, out: &Path) -> Result<RunSummary, CliError> {
    let artifacts = execute_run(cfg, true)?;
    write_artifacts(cfg, &artifacts, out)?;
    Ok(artifacts.summary)
}

fn write_artifacts(cfg: &RunConfig, artifacts: &RunArtifacts, out: &Path) -> Result<(), CliError> {
    if let Some(csv) = &artifacts.csv {
        write_file(out, "trace.csv", csv)?;
    }
    if cfg.outputs.contains(&Output::Summary) {
        write_file(out, "summary.json", format!("{}\n", json(&artifacts.summary)?).as_bytes())?;
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.join(name).display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join(name), bytes).map_err(io)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub config: Option<RunConfig>,
    pub summary: Option<RunSummary>,
    pub error: Option<String>,
}

/// Runs every sweep point on a pool of `workers` threads. Rows come back in
/// the order of `spec.values`, whatever the execution order was.
pub fn execute_sweep(
    spec: &SweepSpec,
    workers: usize,
    keep_traces: bool,
) -> Result<Vec<(SweepRow, Option<RunArtifacts>)>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::validation("workers", e.to_string()))?;
    Ok(pool.install(|| {
        spec.values
            .par_iter()
            .enumerate()
            .map(|(index, &value)| {
                let mut row = SweepRow {
                    index,
                    value,
                    config: None,
                    summary: None,
                    error: None,
                };
                let outcome = spec.point(value).and_then(|cfg| {
                    row.config = Some(cfg.clone());
                    execute_run(&cfg, keep_traces)
                });
                match outcome {
                    Ok(artifacts) => {
                        row.summary = Some(artifacts.summary.clone());
                        (row, Some(artifacts))
                    }
                    Err(e) => {
                        row.error = Some(e.to_string());
                        (row, None)
                    }
                }
            })
            .collect()
    }))
}

const SWEEP_HEADER: [&str; 15] = [
    "index",
    "axis",
    "value",
    "delta_t",
    "p0",
    "sigma0",
    "gamma_est",
    "gamma_prime_est",
    "gamma_prime_fit",
    "max_abs_delta",
    "l2_delta",
    "crossing_time",
    "regime",
    "overlap_condition",
    "error",
];

/// Writes `sweep.csv` (one row per value) and, with `traces`, one
/// `points/NNN/` directory per successful point.
pub fn cmd_sweep(spec: &SweepSpec, out: &Path, workers: usize, traces: bool) -> Result<Vec<SweepRow>, CliError> {
    let results = execute_sweep(spec, workers, traces)?;
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(SWEEP_HEADER).map_err(csv_err)?;
        for (row, _) in &results {
            let cfg = row.config.as_ref();
            let s = row.summary.as_ref();
            w.write_record([
                row.index.to_string(),
                spec.axis.as_str().to_string(),
                num(row.value),
                opt_num(cfg.map(|c| c.schedule.delta_t())),
                opt_num(cfg.map(|c| c.params.p0())),
                opt_num(cfg.map(|c| c.params.sigma0())),
                opt_num(s.map(|s| s.gamma_est)),
                opt_num(s.map(|s| s.gamma_prime_est)),
                opt_num(s.and_then(|s| s.gamma_prime_fit)),
                opt_num(s.and_then(|s| s.max_abs_delta)),
                opt_num(s.and_then(|s| s.l2_delta)),
                opt_num(s.and_then(|s| s.crossing_time)),
                s.map(|s| s.regime.clone()).unwrap_or_default(),
                s.map(|s| s.overlap_condition.to_string()).unwrap_or_default(),
                row.error
                    .clone()
                    .or_else(|| s.and_then(|s| s.fit_error.clone()))
                    .unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
    }
    write_file(out, "sweep.csv", &buf)?;
    if traces {
        for (row, artifacts) in &results {
            if let (Some(cfg), Some(a)) = (&row.config, artifacts) {
                write_artifacts(cfg, a, &out.join("points").join(format!("{:03}", row.index)))?;
            }
        }
    }
    Ok(results.into_iter().map(|(row, _)| row).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub grid_points: usize,
    /// Box width centred on the centroid path; automatic sizing when `None`.
    pub grid_width: Option<f64>,
    /// Defaults to `min(total_time, 1)`.
    pub horizon: Option<f64>,
    pub tolerances: OracleTolerances,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            grid_points: DEFAULT_POINTS,
            grid_width: None,
            horizon: None,
            tolerances: OracleTolerances::default(),
        }
    }
}

/// Compares closed forms and the grid solver for the configured packet and
/// interval. A failing comparison is still an `Ok` report with `pass: false`.
pub fn cmd_oracle_check(cfg: &RunConfig, opts: &OracleOptions, out: Option<&Path>) -> Result<OracleReport, CliError> {
    let p = &cfg.params;
    let horizon = opts.horizon.unwrap_or(cfg.schedule.total_time().min(1.0));
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(CliError::validation("horizon", format!("must be positive, got {horizon}")));
    }
    let spec = match opts.grid_width {
        None => GridSpec::auto(p, horizon, opts.grid_points)?,
        Some(w) => {
            let centre = p.x0() + 0.5 * p.velocity() * horizon;
            GridSpec::new(centre - 0.5 * w, centre + 0.5 * w, opts.grid_points)?
        }
    };
    let report = oracle_check(
        p,
        &spec,
        horizon,
        &[cfg.schedule.delta_t()],
        cfg.schedule.sample_dt(),
        opts.tolerances,
    )?;
    if let Some(dir) = out {
        write_file(dir, "oracle_report.json", format!("{}\n", json(&report)?).as_bytes())?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::{ConfigFile, Overrides, SweepAxis};

    fn cfg(o: Overrides) -> RunConfig {
        ConfigFile::default().resolve(&o).unwrap()
    }

    #[test]
    fn scales_for_reference_packet() {
        let s = scales_summary(&RunConfig::default());
        assert_eq!(s.tau, 0.05);
        assert!((s.tau_zeno - 0.141421).abs() < 1e-6);
        assert!((s.gamma_prime - 0.25).abs() < 1e-12);
        assert_eq!(s.regime, "Zeno");
        let s = scales_summary(&cfg(Overrides {
            delta_t: Some(1.0),
            ..Overrides::default()
        }));
        assert_eq!(s.regime, "PureAntiZeno");
    }

    #[test]
    fn csv_columns_follow_outputs() {
        let c = cfg(Overrides {
            delta_t: Some(0.1),
            total_time: Some(0.5),
            sample_dt: Some(0.01),
            outputs: Some(vec![Output::Envelope, Output::Delta]),
            ..Overrides::default()
        });
        let a = execute_run(&c, true).unwrap();
        let text = String::from_utf8(a.csv.unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,envelope,delta"));
        assert_eq!(lines.next(), Some("0.0,1.0,0.0"));
        assert_eq!(text.lines().count(), 52);
        assert!(!text.contains('\r'));

        let c = RunConfig {
            outputs: [Output::Summary].into_iter().collect(),
            ..c
        };
        assert!(execute_run(&c, true).unwrap().csv.is_none());
    }

    #[test]
    fn failed_fit_is_recorded_not_fatal() {
        let c = cfg(Overrides {
            delta_t: Some(0.1),
            total_time: Some(1.0),
            sample_dt: Some(0.01),
            fit_window: Some((0.5, 0.51)),
            ..Overrides::default()
        });
        let a = execute_run(&c, true).unwrap();
        assert!(a.summary.gamma_prime_fit.is_none());
        assert!(a.summary.fit_error.is_some());
        let text = String::from_utf8(a.csv.unwrap()).unwrap();
        assert_eq!(text.lines().nth(1), Some("0.0,1.0,1.0,1.0,,"));
    }

    #[test]
    fn sweep_keeps_order_and_records_failures() {
        let base = cfg(Overrides {
            total_time: Some(2.0),
            sample_dt: Some(1e-3),
            ..Overrides::default()
        });
        let spec = SweepSpec::new(SweepAxis::DeltaT, vec![5.0, 1.0, 0.1], base).unwrap();
        let one = execute_sweep(&spec, 1, false).unwrap();
        let many = execute_sweep(&spec, 3, false).unwrap();
        assert_eq!(one, many);
        assert!(one[0].0.error.is_some());
        assert_eq!(one[1].0.summary.as_ref().unwrap().gamma_prime_est, 25.0);
        assert!((one[2].0.summary.as_ref().unwrap().gamma_prime_est - 2.5).abs() < 1e-12);
    }

    #[test]
    fn undersized_grid_reports_sizing_error() {
        let opts = OracleOptions {
            grid_width: Some(5.0),
            ..OracleOptions::default()
        };
        match cmd_oracle_check(&RunConfig::default(), &opts, None) {
            Err(CliError::Model(e @ crate::ZenoError::GridSizing { .. })) => {
                assert!(e.to_string().contains("suggested domain"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
