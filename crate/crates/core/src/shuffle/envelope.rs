use crate::error::Result;
use crate::analytic::energy_variance;
use crate::params::PhysicalParams;
use crate::shuffle::schedule::MeasurementSchedule;
use crate::trace::{CorrelationTrace, TraceKind};

/// Survival decay rate of the Markovian limit, `gamma = dt / tau_Z^2`.
///
/// Obtained from `[1 - dt^2/tau_Z^2]^n -> exp(-gamma t_n)`, i.e. from the
/// quadratic short-time prefactor rather than the exact `P(dt)`.
pub fn envelope_rate(params: &PhysicalParams, delta_t: f64) -> f64 {
    let hbar = params.hbar();
    delta_t * energy_variance(params) / (hbar * hbar)
}

/// Amplitude rate `gamma' = gamma / 2`, the decay rate of `|C|`.
pub fn envelope_rate_amp(params: &PhysicalParams, delta_t: f64) -> f64 {
    0.5 * envelope_rate(params, delta_t)
}

/// `exp(-gamma' t)` on the schedule's sample grid.
pub fn envelope(params: &PhysicalParams, schedule: &MeasurementSchedule) -> Result<CorrelationTrace> {
    let rate = envelope_rate_amp(params, schedule.delta_t());
    let times = schedule.sample_times();
    let values: Vec<f64> = times.iter().map(|&t| (-rate * t).exp()).collect();
    CorrelationTrace::real(TraceKind::Envelope, times, &values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_rates() {
        let p = PhysicalParams::default();
        let cases = [(1.0, 25.0), (0.1, 2.5), (0.01, 0.25)];
        for (dt, expected) in cases {
            assert_eq!(envelope_rate_amp(&p, dt), expected, "dt={dt}");
        }
    }

    #[test]
    fn agrees_with_zeno_time() {
        for p0 in [0.0, 0.3, 1.0, -2.0] {
            let p = PhysicalParams::default().with_p0(p0).unwrap();
            let tz = crate::params::derive_scales(&p).tau_zeno;
            let rate = envelope_rate(&p, 0.1);
            assert!((rate - 0.1 / (tz * tz)).abs() <= 1e-13 * rate);
        }
    }

    #[test]
    fn linear_in_interval() {
        let p = PhysicalParams::default().with_p0(0.3).unwrap();
        let base = envelope_rate(&p, 0.01);
        for k in 1..20 {
            let dt = 0.01 * k as f64;
            assert!((envelope_rate(&p, dt) - k as f64 * base).abs() < 1e-12 * k as f64 * base);
        }
    }

    #[test]
    fn starts_at_one() {
        let p = PhysicalParams::default();
        let s = MeasurementSchedule::with_sampling(0.1, 1.0, 1e-3).unwrap();
        let env = envelope(&p, &s).unwrap();
        assert_eq!(env.modulus()[0], 1.0);
        assert_eq!(env.len(), 1001);
    }
}
