use serde::Serialize;

use crate::analytic::{correlation_unperturbed, energy_moments};
use crate::error::Result;
use crate::oracle::{grid_correlation, grid_shuffled_survival, init_gaussian, FreePropagator, GridSpec};
use crate::params::PhysicalParams;
use crate::shuffle::{shuffled_survival, MeasurementSchedule};

const CORRELATION_SAMPLES: usize = 1001;
const MAX_SHUFFLE_SAMPLES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleTolerances {
    pub correlation: f64,
    pub phase: f64,
    pub moments: f64,
    pub shuffle: f64,
}

impl Default for OracleTolerances {
    fn default() -> Self {
        OracleTolerances {
            correlation: 1e-6,
            phase: 1e-5,
            moments: 1e-6,
            shuffle: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShuffleCheck {
    pub delta_t: f64,
    pub samples: usize,
    pub max_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub schema: u32,
    pub grid: GridSpec,
    pub horizon: f64,
    /// `max |C_grid(t) - C(t)|` over the horizon.
    pub correlation_max_abs_error: f64,
    /// `max ||C_grid| - |C||`.
    pub modulus_max_abs_error: f64,
    /// Largest wrapped phase difference.
    pub phase_max_abs_error: f64,
    pub mean_h_rel_error: f64,
    pub delta_e_rel_error: f64,
    pub shuffle: Vec<ShuffleCheck>,
    pub tolerances: OracleTolerances,
    pub pass: bool,
}

/// Compares every closed form against the grid path on `[0, horizon]`.
pub fn oracle_check(
    params: &PhysicalParams,
    spec: &GridSpec,
    horizon: f64,
    delta_ts: &[f64],
    sample_dt: f64,
    tolerances: OracleTolerances,
) -> Result<OracleReport> {
    spec.check_adequate(params, horizon)?;

    let times: Vec<f64> = (0..CORRELATION_SAMPLES)
        .map(|k| horizon * k as f64 / (CORRELATION_SAMPLES - 1) as f64)
        .collect();
    let grid = grid_correlation(params, spec, &times)?;
    let (mut c_err, mut m_err, mut ph_err) = (0.0f64, 0.0f64, 0.0f64);
    for (&t, g) in times.iter().zip(&grid) {
        let exact = correlation_unperturbed(params, t);
        c_err = c_err.max((g - exact).norm());
        m_err = m_err.max((g.norm() - exact.norm()).abs());
        ph_err = ph_err.max((g * exact.conj()).arg().abs());
    }

    let psi0 = init_gaussian(spec, params)?;
    let (h1, h2) = FreePropagator::new(spec, params).energy_moments(&psi0)?;
    let moments = energy_moments(params);
    let mean_h_rel_error = ((h1 - moments.mean_h) / moments.mean_h).abs();
    let delta_e_rel_error = (((h2 - h1 * h1).sqrt() - moments.delta_e) / moments.delta_e).abs();

    let mut shuffle = Vec::with_capacity(delta_ts.len());
    for &dt in delta_ts {
        let schedule = MeasurementSchedule::with_sampling(dt, horizon.max(dt), sample_dt.min(dt))?;
        let samples = shuffle_sample_times(&schedule, horizon);
        let grid = grid_shuffled_survival(params, spec, &schedule, &samples)?;
        let mut worst = 0.0f64;
        for (&t, g) in samples.iter().zip(&grid) {
            worst = worst.max((g - shuffled_survival(params, &schedule, t)?).abs());
        }
        shuffle.push(ShuffleCheck {
            delta_t: dt,
            samples: samples.len(),
            max_abs_error: worst,
        });
    }

    let pass = c_err <= tolerances.correlation
        && ph_err <= tolerances.phase
        && mean_h_rel_error <= tolerances.moments
        && delta_e_rel_error <= tolerances.moments
        && shuffle.iter().all(|s| s.max_abs_error <= tolerances.shuffle);

    Ok(OracleReport {
        schema: 1,
        grid: *spec,
        horizon,
        correlation_max_abs_error: c_err,
        modulus_max_abs_error: m_err,
        phase_max_abs_error: ph_err,
        mean_h_rel_error,
        delta_e_rel_error,
        shuffle,
        tolerances,
        pass,
    })
}

// A strided subset of the sample grid plus every measurement instant.
fn shuffle_sample_times(schedule: &MeasurementSchedule, horizon: f64) -> Vec<f64> {
    let last = ((horizon / schedule.sample_dt()) + 1e-9).floor() as u64;
    let stride = ((last as usize + 1).div_ceil(MAX_SHUFFLE_SAMPLES)).max(1) as u64;
    let mut times: Vec<f64> = (0..=last).step_by(stride as usize).map(|k| schedule.sample_time(k)).collect();
    let n_meas = ((horizon / schedule.delta_t()) + 1e-9).floor() as u64;
    times.extend((1..=n_meas).map(|n| n as f64 * schedule.delta_t()));
    times.retain(|&t| t <= horizon * (1.0 + 1e-12));
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    times
}
