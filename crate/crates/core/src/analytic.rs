//! Closed-form dynamics of the free Gaussian packet: wave function, densities,
//! energy moments, the autocorrelation `C(t) = <Psi_0|Psi_t>` and the
//! survival probability `P(t) = |C(t)|^2`.
//!
//! Everything here is a pure function of [`PhysicalParams`] and the time
//! arguments. The formulas are regular for every real `t`; negative times give
//! the time-reversed packet and `C(-t) = conj(C(t))`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::params::PhysicalParams;

/// `sigma~_t = sigma0 (1 + i hbar t / 2 m sigma0^2)` and its modulus `sigma_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexSpread {
    pub value: Complex64,
    pub modulus: f64,
}

pub fn complex_spread(params: &PhysicalParams, t: f64) -> ComplexSpread {
    let s0 = params.sigma0();
    let r = t / params.tau();
    ComplexSpread {
        value: Complex64::new(s0, s0 * r),
        modulus: s0 * r.hypot(1.0),
    }
}

/// Centroid position `x0 + (p0/m) t`.
#[inline]
pub fn centroid(params: &PhysicalParams, t: f64) -> f64 {
    params.x0() + params.velocity() * t
}

/// One evaluation of the packet at `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub x: f64,
    pub t: f64,
    pub amplitude: Complex64,
    /// `S(x, t) / hbar`; agrees with `amplitude.arg()` modulo `2 pi`.
    pub real_phase: f64,
}

/// `Psi_t(x) = A_t exp[-(x - x_t)^2 / 4 sigma0 sigma~_t + i p0 (x - x_t)/hbar + i E0 t/hbar]`
/// with the complex normalisation `A_t = (2 pi sigma~_t^2)^(-1/4)` (principal branch).
pub fn psi_at(params: &PhysicalParams, x: f64, t: f64) -> Complex64 {
    let spread = complex_spread(params, t).value;
    let norm = (Complex64::new(2.0 * PI, 0.0) * spread * spread).powf(-0.25);
    let dx = x - centroid(params, t);
    let hbar = params.hbar();
    let exponent = -dx * dx / (4.0 * params.sigma0() * spread)
        + Complex64::i() * (params.p0() * dx / hbar + params.e0() * t / hbar);
    norm * exponent.exp()
}

/// Real phase `S(x,t)/hbar`: translation, spreading, propagation and
/// normalisation contributions.
pub fn real_phase(params: &PhysicalParams, x: f64, t: f64) -> f64 {
    let hbar = params.hbar();
    let s0 = params.sigma0();
    let st = complex_spread(params, t).modulus;
    let dx = x - centroid(params, t);
    let action = params.p0() * dx
        + hbar * t / (8.0 * params.mass() * s0 * s0 * st * st) * dx * dx
        + params.e0() * t
        - 0.5 * hbar * (t / params.tau()).atan();
    action / hbar
}

pub fn wave_sample(params: &PhysicalParams, x: f64, t: f64) -> WaveSample {
    WaveSample {
        x,
        t,
        amplitude: psi_at(params, x, t),
        real_phase: real_phase(params, x, t),
    }
}

/// `|Psi_t(x)|^2`, a normal density of width `sigma_t` centred at `x_t`.
pub fn density_exact(params: &PhysicalParams, x: f64, t: f64) -> f64 {
    let st = complex_spread(params, t).modulus;
    let dx = x - centroid(params, t);
    (-dx * dx / (2.0 * st * st)).exp() / (2.0 * PI * st * st).sqrt()
}

/// Short-time (`t << tau`) form: parabolic falloff of the peak with the
/// Gaussian profile frozen at width `sigma0`.
pub fn density_fresnel(params: &PhysicalParams, x: f64, t: f64) -> f64 {
    let s0 = params.sigma0();
    let m = params.mass();
    let hbar = params.hbar();
    let dx = x - centroid(params, t);
    let falloff = 1.0 - hbar * hbar / (8.0 * m * m * s0.powi(4)) * t * t;
    falloff * (-dx * dx / (2.0 * s0 * s0)).exp() / (2.0 * PI * s0 * s0).sqrt()
}

/// Long-time (`t >> tau`) form with the `tau/t` prefactor. Undefined at `t = 0`.
pub fn density_fraunhofer(params: &PhysicalParams, x: f64, t: f64) -> Result<f64> {
    if t == 0.0 || !t.is_finite() {
        return Err(ZenoError::TimeOutOfRange {
            t,
            lo: f64::MIN_POSITIVE,
            hi: f64::INFINITY,
        });
    }
    let s0 = params.sigma0();
    let ratio = params.tau() / t.abs();
    let dx = x - centroid(params, t);
    Ok(ratio * (-ratio * ratio * dx * dx / (2.0 * s0 * s0)).exp() / (2.0 * PI * s0 * s0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyMoments {
    /// `<H> = p0^2/2m + p_s^2/2m`.
    pub mean_h: f64,
    /// `sqrt(<H^2> - <H>^2) = sqrt(2 p_s^2/m) sqrt(p0^2/2m + p_s^2/4m)`.
    pub delta_e: f64,
}

pub fn energy_moments(params: &PhysicalParams) -> EnergyMoments {
    let m = params.mass();
    let ps = params.p_spread();
    let p0 = params.p0();
    EnergyMoments {
        mean_h: p0 * p0 / (2.0 * m) + ps * ps / (2.0 * m),
        delta_e: (2.0 * ps * ps / m).sqrt() * (p0 * p0 / (2.0 * m) + ps * ps / (4.0 * m)).sqrt(),
    }
}

/// `(Delta E)^2 = (2 p_s^2/m)(p0^2/2m + p_s^2/4m)`, without the round trip through a square root.
pub fn energy_variance(params: &PhysicalParams) -> f64 {
    let m = params.mass();
    let ps = params.p_spread();
    let p0 = params.p0();
    (2.0 * ps * ps / m) * (p0 * p0 / (2.0 * m) + ps * ps / (4.0 * m))
}

// (t / 2 tau)^2
#[inline]
fn half_ratio_sq(params: &PhysicalParams, t: f64) -> f64 {
    let r = t / (2.0 * params.tau());
    r * r
}

/// `|C(t)| = [1 + (t/2tau)^2]^(-1/4) exp(-E0 t^2 / 4 m sigma0^2 [1 + (t/2tau)^2])`.
pub fn correlation_modulus(params: &PhysicalParams, t: f64) -> f64 {
    let q = 1.0 + half_ratio_sq(params, t);
    let s0 = params.sigma0();
    q.powf(-0.25) * (-params.e0() * t * t / (4.0 * params.mass() * s0 * s0 * q)).exp()
}

/// Unwrapped phase of `C(t)`:
/// `-(E0 t/hbar) / [1 + (t/2tau)^2] - (1/2) atan(t/2tau)`.
///
/// For `p0 = 0` this is `-(1/2) atan(t/2tau)`, decreasing monotonically to `-pi/4`.
pub fn correlation_phase(params: &PhysicalParams, t: f64) -> f64 {
    let q = 1.0 + half_ratio_sq(params, t);
    -params.e0() * t / (params.hbar() * q) - 0.5 * (t / (2.0 * params.tau())).atan()
}

/// `C(t) = <Psi_0|Psi_t>`.
pub fn correlation_unperturbed(params: &PhysicalParams, t: f64) -> Complex64 {
    Complex64::from_polar(correlation_modulus(params, t), correlation_phase(params, t))
}

/// `P(t) = [1 + (t/2tau)^2]^(-1/2) exp(-E0 t^2 / 2 m sigma0^2 [1 + (t/2tau)^2])`.
pub fn survival_unperturbed(params: &PhysicalParams, t: f64) -> f64 {
    let q = 1.0 + half_ratio_sq(params, t);
    let s0 = params.sigma0();
    (-params.e0() * t * t / (2.0 * params.mass() * s0 * s0 * q)).exp() / q.sqrt()
}

/// Quadratic short-time law `1 - [1 + 2 (p0/p_s)^2] t^2 / 8 tau^2`, identical
/// to `1 - (Delta E)^2 t^2 / hbar^2`.
pub fn survival_short_time(params: &PhysicalParams, t: f64) -> f64 {
    let ratio = params.p0() / params.p_spread();
    let tau = params.tau();
    1.0 - (1.0 + 2.0 * ratio * ratio) * t * t / (8.0 * tau * tau)
}

/// `|p0| / p_s <= 1/sqrt(2)`: the packet spreads faster than it translates, so
/// decorrelation is quadratic at short times and Zeno/anti-Zeno behaviour is
/// observable at all.
pub fn overlap_condition_ok(params: &PhysicalParams) -> bool {
    (params.p0() / params.p_spread()).abs() <= FRAC_1_SQRT_2
}

/// `<Psi_t1|Psi_t2>` evaluated as a Gaussian integral over the two closed-form
/// packets, without using time-translation invariance.
pub fn two_time_overlap(params: &PhysicalParams, t1: f64, t2: f64) -> Complex64 {
    let s0 = params.sigma0();
    let hbar = params.hbar();
    let two_pi = Complex64::new(2.0 * PI, 0.0);

    let sp1 = complex_spread(params, t1).value;
    let sp2 = complex_spread(params, t2).value;
    let a1 = (4.0 * s0 * sp1).inv().conj();
    let a2 = (4.0 * s0 * sp2).inv();
    let n1 = (two_pi * sp1 * sp1).powf(-0.25).conj();
    let n2 = (two_pi * sp2 * sp2).powf(-0.25);

    let d = centroid(params, t1) - centroid(params, t2);
    let sum = a1 + a2;
    let gauss = (Complex64::new(PI, 0.0) / sum).sqrt() * (-a1 * a2 / sum * d * d).exp();
    let carrier = Complex64::from_polar(1.0, (params.p0() * d + params.e0() * (t2 - t1)) / hbar);
    n1 * n2 * gauss * carrier
}
