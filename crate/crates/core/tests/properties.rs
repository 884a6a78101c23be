use std::f64::consts::FRAC_PI_4;

use proptest::prelude::*;

use zeno_core::analytic::{
    complex_spread, correlation_modulus, correlation_phase, correlation_unperturbed, survival_unperturbed,
};
use zeno_core::shuffle::{
    classify_regime, envelope_rate_amp, fit_exponential, shuffled_survival, shuffled_trace, steady_arrow_survival,
    FitOptions, MeasurementSchedule, Regime,
};
use zeno_core::{derive_scales, CorrelationTrace, PhysicalParams, TraceKind};

fn params() -> impl Strategy<Value = PhysicalParams> {
    (0.2f64..5.0, 0.01f64..10.0, 0.05f64..3.0, -2.0f64..2.0, -5.0f64..5.0)
        .prop_map(|(hbar, mass, sigma0, x0, p0)| PhysicalParams::new(hbar, mass, sigma0, x0, p0).unwrap())
}

proptest! {
    #[test]
    fn correlation_modulus_never_increases(p in params(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let tau = p.tau();
        let (t1, t2) = (a.min(b) * 50.0 * tau, a.max(b) * 50.0 * tau);
        prop_assert!(correlation_modulus(&p, t2) <= correlation_modulus(&p, t1) * (1.0 + 1e-15));
        prop_assert!(correlation_modulus(&p, t1) <= 1.0);
    }

    #[test]
    fn survival_is_squared_modulus(p in params(), a in 0.0f64..20.0) {
        let t = a * p.tau();
        let c = correlation_unperturbed(&p, t);
        prop_assert!((survival_unperturbed(&p, t) - c.norm_sqr()).abs() <= 1e-15);
    }

    #[test]
    fn spread_never_below_initial_width(p in params(), a in 0.0f64..100.0) {
        let s = complex_spread(&p, a * p.tau());
        prop_assert!(s.modulus >= p.sigma0());
    }

    #[test]
    fn resting_phase_bounded_and_decreasing(p in params(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let p = p.with_p0(0.0).unwrap();
        let tau = p.tau();
        let (t1, t2) = (a.min(b) * 1000.0 * tau, a.max(b) * 1000.0 * tau);
        let (f1, f2) = (correlation_phase(&p, t1), correlation_phase(&p, t2));
        prop_assert!(f1 <= 0.0 && f1 > -FRAC_PI_4);
        prop_assert!(f2 <= f1);
    }

    #[test]
    fn zeno_time_shrinks_with_speed(p in params(), a in 0.0f64..5.0, b in 0.0f64..5.0) {
        let slow = derive_scales(&p.with_p0(a.min(b)).unwrap()).tau_zeno;
        let fast = derive_scales(&p.with_p0(-a.max(b)).unwrap()).tau_zeno;
        prop_assert!(fast <= slow);
    }

    #[test]
    fn scales_invariant_under_common_rescaling(p in params(), c in 0.1f64..10.0) {
        // p0 scales with p_s so that p0/p_s is unchanged.
        let q = PhysicalParams::new(c * p.hbar(), c * p.mass(), p.sigma0(), p.x0(), c * p.p0()).unwrap();
        let (a, b) = (derive_scales(&p), derive_scales(&q));
        prop_assert!((a.tau - b.tau).abs() <= 1e-12 * a.tau);
        prop_assert!((a.tau_zeno - b.tau_zeno).abs() <= 1e-12 * a.tau_zeno);
    }

    #[test]
    fn derive_scales_is_pure(p in params()) {
        let (a, b) = (derive_scales(&p), derive_scales(&p));
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn regime_rank_grows_with_interval(p in params(), a in -6.0f64..2.0, b in -6.0f64..2.0) {
        let s = derive_scales(&p);
        let rank = |r: Regime| match r {
            Regime::Zeno => 0,
            Regime::CrossoverZeno => 1,
            Regime::ConvexAntiZeno => 2,
            Regime::PureAntiZeno => 3,
        };
        let (short, long) = (10f64.powf(a.min(b)) * s.tau, 10f64.powf(a.max(b)) * s.tau);
        let (r1, r2) = (classify_regime(&s, short).label, classify_regime(&s, long).label);
        prop_assert!(rank(r1) <= rank(r2));
        prop_assert_eq!(r2 == Regime::PureAntiZeno, long >= s.tau_zeno);
        if short < s.tau.min(s.tau_zeno) {
            prop_assert_eq!(r1, Regime::Zeno);
        }
    }

    #[test]
    fn product_law_at_measurement_instants(p in params(), a in 0.05f64..3.0, n in 1u64..40) {
        let dt = a * p.tau();
        let s = MeasurementSchedule::with_sampling(dt, 40.0 * dt, dt / 10.0).unwrap();
        let got = shuffled_survival(&p, &s, n as f64 * dt).unwrap();
        let want = survival_unperturbed(&p, dt).powi(n as i32);
        prop_assert!((got - want).abs() <= 1e-12 * want.max(1e-300) + 1e-300, "{got} vs {want}");
    }

    #[test]
    fn stopping_and_steady_arrows_agree(p in params(), a in 0.05f64..3.0, u in 0.0f64..1.0) {
        let dt = a * p.tau();
        let s = MeasurementSchedule::with_sampling(dt, 20.0 * dt, dt / 10.0).unwrap();
        let t = u * 20.0 * dt;
        let stop = shuffled_survival(&p, &s, t).unwrap();
        let steady = steady_arrow_survival(&p, &s, t).unwrap();
        prop_assert!((stop - steady).abs() <= 1e-12, "{stop} vs {steady}");
    }

    #[test]
    fn fit_recovers_pure_exponential(rate in 0.01f64..10.0) {
        let times: Vec<f64> = (0..=2000).map(|k| k as f64 * 2.5e-3).collect();
        let values: Vec<f64> = times.iter().map(|&t| (-rate * t).exp()).collect();
        let trace = CorrelationTrace::real(TraceKind::Fit, times, &values).unwrap();
        let fit = fit_exponential(&trace, (0.0, 5.0), FitOptions::default()).unwrap();
        prop_assert!((fit.rate - rate).abs() <= 1e-9 * rate);
    }
}

#[test]
fn envelope_tracks_trace_deep_in_the_zeno_regime() {
    let p = PhysicalParams::default();
    for dt in [0.02, 0.01, 0.005, 0.001] {
        let s = MeasurementSchedule::with_sampling(dt, 5.0, 1e-3).unwrap();
        let trace = shuffled_trace(&p, &s).unwrap();
        let rate = envelope_rate_amp(&p, dt);
        let worst = trace
            .times()
            .iter()
            .zip(trace.modulus())
            .map(|(&t, m)| (m - (-rate * t).exp()).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 0.02, "dt={dt}: {worst}");
    }
}

#[test]
fn zeno_limit_approaches_one_from_below() {
    let p = PhysicalParams::default();
    let values: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&dt| {
            let s = MeasurementSchedule::with_sampling(dt, 1.0, dt).unwrap();
            shuffled_survival(&p, &s, 1.0).unwrap()
        })
        .collect();
    assert!(values[0] < values[1] && values[1] < values[2] && values[2] < 1.0, "{values:?}");
}

#[test]
fn halving_sample_step_keeps_shared_samples() {
    let p = PhysicalParams::default().with_p0(0.4).unwrap();
    let coarse = MeasurementSchedule::with_sampling(0.1, 2.0, 2e-3).unwrap();
    let fine = MeasurementSchedule::with_sampling(0.1, 2.0, 1e-3).unwrap();
    let (a, b) = (shuffled_trace(&p, &coarse).unwrap(), shuffled_trace(&p, &fine).unwrap());
    for (k, &t) in a.times().iter().enumerate() {
        assert_eq!(b.times()[2 * k], t);
        assert_eq!(a.values()[k], b.values()[2 * k], "t={t}");
    }
}
