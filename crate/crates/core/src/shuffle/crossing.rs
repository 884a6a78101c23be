use crate::analytic::correlation_modulus;
use crate::params::PhysicalParams;
use crate::shuffle::engine::shuffled_modulus_unchecked;
use crate::shuffle::schedule::MeasurementSchedule;

const BISECTION_STEPS: usize = 64;

/// First time the perturbed `|C|` drops strictly below the free `|C|`.
///
/// The sample grid locates the first offending sample; the crossing is then
/// bisected on the closed-form piecewise curves down to `1e-9 sample_dt`.
pub fn crossing_time(params: &PhysicalParams, schedule: &MeasurementSchedule) -> Option<f64> {
    let below = |t: f64| shuffled_modulus_unchecked(params, schedule, t) < correlation_modulus(params, t);
    let last = schedule.last_sample();
    let k = (1..=last).find(|&k| below(schedule.sample_time(k)))?;
    let mut lo = schedule.sample_time(k - 1);
    let mut hi = schedule.sample_time(k);
    let tol = 1e-9 * schedule.sample_dt();
    for _ in 0..BISECTION_STEPS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}
