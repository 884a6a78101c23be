//! Periodic von Neumann measurements on the free packet ("quantum shuffling").
//!
//! The pointer state is always the initial packet. Amplitudes are not
//! renormalised after a measurement, so survival probabilities are absolute.

mod crossing;
mod engine;
mod envelope;
mod fit;
mod regime;
mod schedule;

pub use crossing::crossing_time;
pub use engine::{
    attenuation_factor, shuffled_modulus, shuffled_phase, shuffled_survival, shuffled_trace, steady_arrow_survival,
    steady_arrow_trace, unperturbed_trace,
};
pub use envelope::{envelope, envelope_rate, envelope_rate_amp};
pub use fit::{fit_exponential, ExponentialFit, FitOptions};
pub use regime::{classify_regime, Regime, RegimeLabel};
pub use schedule::{CombPosition, MeasurementSchedule, DEFAULT_SAMPLE_DT, DEFAULT_TOTAL_TIME};

use crate::error::{Result, ZenoError};
use crate::params::{derive_scales, PhysicalParams};
use crate::trace::CorrelationTrace;

/// `Delta(t) = exp(-gamma'_est t) - exp(-gamma'_fit t)` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovDistance {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub max_abs: f64,
    /// `sqrt(int Delta^2 dt)`, trapezoid rule.
    pub l2: f64,
}

impl MarkovDistance {
    pub fn from_rates(times: &[f64], estimated: f64, fitted: f64) -> Self {
        let values: Vec<f64> = times
            .iter()
            .map(|&t| (-estimated * t).exp() - (-fitted * t).exp())
            .collect();
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let integral: f64 = times
            .windows(2)
            .zip(values.windows(2))
            .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] * v[0] + v[1] * v[1]))
            .sum();
        MarkovDistance {
            times: times.to_vec(),
            values,
            max_abs,
            l2: integral.sqrt(),
        }
    }
}

/// Distance between the estimated envelope and the exponential fitted to the
/// perturbed `|C|` over `fit_window`.
pub fn markov_distance(
    params: &PhysicalParams,
    schedule: &MeasurementSchedule,
    fit_window: (f64, f64),
) -> Result<MarkovDistance> {
    let trace = shuffled_trace(params, schedule)?;
    let estimated = envelope_rate_amp(params, schedule.delta_t());
    let fit = fit_exponential(
        &trace,
        fit_window,
        FitOptions {
            initial_rate: Some(estimated),
            ..FitOptions::default()
        },
    )?;
    Ok(MarkovDistance::from_rates(&window_times(&trace, fit_window), estimated, fit.rate))
}

fn window_times(trace: &CorrelationTrace, (lo, hi): (f64, f64)) -> Vec<f64> {
    let slack = 1e-9 * hi.abs().max(1.0);
    trace
        .times()
        .iter()
        .copied()
        .filter(|&t| t >= lo - slack && t <= hi + slack)
        .collect()
}

/// Everything one measurement schedule produces.
#[derive(Debug, Clone)]
pub struct ShuffleResult {
    pub trace: CorrelationTrace,
    /// `gamma = dt / tau_Z^2`.
    pub envelope_rate: f64,
    /// `gamma' = gamma / 2`.
    pub envelope_rate_amp: f64,
    /// Fit of the perturbed `|C|`; a failed fit does not invalidate the trace.
    pub fit: std::result::Result<ExponentialFit, ZenoError>,
    pub markov_distance: Option<MarkovDistance>,
    pub regime: RegimeLabel,
    pub crossing_time: Option<f64>,
}

impl ShuffleResult {
    pub fn fitted_rate_amp(&self) -> Option<f64> {
        self.fit.as_ref().ok().map(|f| f.rate)
    }
}

pub fn run_shuffle(
    params: &PhysicalParams,
    schedule: &MeasurementSchedule,
    fit_window: (f64, f64),
) -> Result<ShuffleResult> {
    let scales = derive_scales(params);
    let trace = shuffled_trace(params, schedule)?;
    let envelope_rate = envelope_rate(params, schedule.delta_t());
    let envelope_rate_amp = 0.5 * envelope_rate;
    let fit = fit_exponential(
        &trace,
        fit_window,
        FitOptions {
            initial_rate: Some(envelope_rate_amp),
            ..FitOptions::default()
        },
    );
    let markov_distance = fit
        .as_ref()
        .ok()
        .map(|f| MarkovDistance::from_rates(&window_times(&trace, fit_window), envelope_rate_amp, f.rate));
    Ok(ShuffleResult {
        trace,
        envelope_rate,
        envelope_rate_amp,
        fit,
        markov_distance,
        regime: classify_regime(&scales, schedule.delta_t()),
        crossing_time: crossing_time(params, schedule),
    })
}
