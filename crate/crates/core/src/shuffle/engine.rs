//! Survival and correlation of the packet under the measurement comb.
//!
//! Two pictures are evaluated independently:
//!
//! * stopping arrow: every measurement projects the state back onto `Psi_0`
//!   and keeps the (un-normalised) amplitude `<Psi_0|Psi_dt>`, so
//!   `P_n(t) = [P(dt)]^n |<Psi_0|Psi_{t - n dt}>|^2`;
//! * steady arrow: the packet is never disturbed; each measurement only moves
//!   the reference state forward to `Psi_{t_n}` and multiplies the record by the
//!   attenuation `alpha_k = |<Psi_{t_(k-1)}|Psi_{t_k}>|^2`.
//!
//! For free evolution the two coincide.

use crate::analytic::{correlation_modulus, correlation_phase, survival_unperturbed, two_time_overlap};
use crate::error::Result;
use crate::params::PhysicalParams;
use crate::shuffle::schedule::MeasurementSchedule;
use crate::trace::{CorrelationTrace, TraceKind};

fn powu(base: f64, n: u64) -> f64 {
    match i32::try_from(n) {
        Ok(k) => base.powi(k),
        Err(_) => base.powf(n as f64),
    }
}

/// Stopping-arrow survival probability at `t`, post-measurement at `t = n dt`.
pub fn shuffled_survival(params: &PhysicalParams, schedule: &MeasurementSchedule, t: f64) -> Result<f64> {
    schedule.check_time(t)?;
    let pos = schedule.position(t);
    let per_measurement = survival_unperturbed(params, schedule.delta_t());
    Ok(powu(per_measurement, pos.measurements) * survival_unperturbed(params, pos.elapsed))
}

/// Modulus of the stopping-arrow amplitude, `|C(dt)|^n |C(t - n dt)|`.
pub fn shuffled_modulus(params: &PhysicalParams, schedule: &MeasurementSchedule, t: f64) -> Result<f64> {
    schedule.check_time(t)?;
    Ok(shuffled_modulus_unchecked(params, schedule, t))
}

pub(crate) fn shuffled_modulus_unchecked(params: &PhysicalParams, schedule: &MeasurementSchedule, t: f64) -> f64 {
    let pos = schedule.position(t);
    powu(correlation_modulus(params, schedule.delta_t()), pos.measurements)
        * correlation_modulus(params, pos.elapsed)
}

/// Unwrapped phase of the stopping-arrow amplitude, `n arg C(dt) + arg C(t - n dt)`.
pub fn shuffled_phase(params: &PhysicalParams, schedule: &MeasurementSchedule, t: f64) -> Result<f64> {
    schedule.check_time(t)?;
    let pos = schedule.position(t);
    Ok(pos.measurements as f64 * correlation_phase(params, schedule.delta_t())
        + correlation_phase(params, pos.elapsed))
}

/// Perturbed correlation sampled every `sample_dt`; each segment between
/// measurements repeats the first one, scaled by `|C(dt)|^n`.
pub fn shuffled_trace(params: &PhysicalParams, schedule: &MeasurementSchedule) -> Result<CorrelationTrace> {
    let times = schedule.sample_times();
    let step_mod = correlation_modulus(params, schedule.delta_t());
    let step_phase = correlation_phase(params, schedule.delta_t());
    let (modulus, phase): (Vec<f64>, Vec<f64>) = times
        .iter()
        .map(|&t| {
            let pos = schedule.position(t);
            (
                powu(step_mod, pos.measurements) * correlation_modulus(params, pos.elapsed),
                pos.measurements as f64 * step_phase + correlation_phase(params, pos.elapsed),
            )
        })
        .unzip();
    CorrelationTrace::from_polar(TraceKind::Perturbed, times, &modulus, phase)
}

/// Free correlation `C(t)` on the schedule's sample grid.
pub fn unperturbed_trace(params: &PhysicalParams, schedule: &MeasurementSchedule) -> Result<CorrelationTrace> {
    let times = schedule.sample_times();
    let modulus: Vec<f64> = times.iter().map(|&t| correlation_modulus(params, t)).collect();
    let phase = times.iter().map(|&t| correlation_phase(params, t)).collect();
    CorrelationTrace::from_polar(TraceKind::Unperturbed, times, &modulus, phase)
}

/// Attenuation `alpha_k = |<Psi_{t_(k-1)}|Psi_{t_k}>|^2` picked up at the
/// `k`-th photograph (`k >= 1`), from the two-time overlap of the moving packet.
pub fn attenuation_factor(params: &PhysicalParams, schedule: &MeasurementSchedule, k: u64) -> f64 {
    let dt = schedule.delta_t();
    let t_prev = (k.saturating_sub(1)) as f64 * dt;
    let t_k = k as f64 * dt;
    two_time_overlap(params, t_prev, t_k).norm_sqr()
}

/// Steady-arrow survival `(prod_{k<=n} alpha_k) |<Psi_{t_n}|Psi_t>|^2` with
/// `t_n <= t < t_(n+1)`.
pub fn steady_arrow_survival(params: &PhysicalParams, schedule: &MeasurementSchedule, t: f64) -> Result<f64> {
    schedule.check_time(t)?;
    let pos = schedule.position(t);
    let attenuation: f64 = (1..=pos.measurements)
        .map(|k| attenuation_factor(params, schedule, k))
        .product();
    let reference = pos.measurements as f64 * schedule.delta_t();
    Ok(attenuation * two_time_overlap(params, reference, reference + pos.elapsed).norm_sqr())
}

/// [`steady_arrow_survival`] on every sample point, accumulating the
/// attenuation product once.
pub fn steady_arrow_trace(params: &PhysicalParams, schedule: &MeasurementSchedule) -> Vec<f64> {
    let n_max = schedule.measurement_count();
    let mut cumulative = Vec::with_capacity(n_max as usize + 1);
    let mut acc = 1.0;
    cumulative.push(acc);
    for k in 1..=n_max {
        acc *= attenuation_factor(params, schedule, k);
        cumulative.push(acc);
    }
    schedule
        .sample_times()
        .into_iter()
        .map(|t| {
            let pos = schedule.position(t);
            let n = pos.measurements.min(n_max);
            let reference = n as f64 * schedule.delta_t();
            cumulative[n as usize] * two_time_overlap(params, reference, reference + pos.elapsed).norm_sqr()
        })
        .collect()
}
