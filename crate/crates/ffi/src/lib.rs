//! C ABI over `zeno-core`.
//!
//! Every function returns a [`ZenoStatus`] and writes results through out
//! pointers. Models and shuffle runs are opaque heap handles; free them with
//! the matching `*_free` function. Panics never cross the boundary.

use std::ffi::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zeno_core::analytic::{correlation_unperturbed, survival_unperturbed};
use zeno_core::shuffle::{classify_regime, run_shuffle, shuffled_survival, steady_arrow_survival, ShuffleResult};
use zeno_core::{derive_scales, MeasurementSchedule, PhysicalParams, Regime, ZenoError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZenoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidSchedule = 3,
    TimeOutOfRange = 4,
    FitFailed = 5,
    Grid = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

impl From<&ZenoError> for ZenoStatus {
    fn from(e: &ZenoError) -> Self {
        match e {
            ZenoError::InvalidParameter { .. } => ZenoStatus::InvalidParameter,
            ZenoError::InvalidSchedule(_) => ZenoStatus::InvalidSchedule,
            ZenoError::TimeOutOfRange { .. } => ZenoStatus::TimeOutOfRange,
            ZenoError::DegenerateWindow { .. } | ZenoError::FitNonConvergence { .. } => ZenoStatus::FitFailed,
            ZenoError::GridMismatch(_) | ZenoError::GridSizing { .. } => ZenoStatus::Grid,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZenoRegime {
    PureAntiZeno = 0,
    ConvexAntiZeno = 1,
    CrossoverZeno = 2,
    Zeno = 3,
}

impl From<Regime> for ZenoRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::PureAntiZeno => ZenoRegime::PureAntiZeno,
            Regime::ConvexAntiZeno => ZenoRegime::ConvexAntiZeno,
            Regime::CrossoverZeno => ZenoRegime::CrossoverZeno,
            Regime::Zeno => ZenoRegime::Zeno,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ZenoScales {
    pub tau: f64,
    pub tau_zeno: f64,
    pub tau_inflx: f64,
    pub p_spread: f64,
    pub e0: f64,
    pub mean_h: f64,
    pub delta_e: f64,
    pub momentum_ratio: f64,
}

/// Summary of one shuffle run. Optional values come with a presence flag.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoShuffleSummary {
    pub gamma: f64,
    pub gamma_prime: f64,
    pub has_fit: bool,
    pub gamma_prime_fit: f64,
    pub max_abs_delta: f64,
    pub l2_delta: f64,
    pub has_crossing: bool,
    pub crossing_time: f64,
    pub regime: ZenoRegime,
    pub samples: usize,
}

/// Opaque packet handle.
pub struct ZenoModel {
    params: PhysicalParams,
}

/// Opaque handle to a finished shuffle run.
pub struct ZenoShuffle {
    params: PhysicalParams,
    schedule: MeasurementSchedule,
    result: ShuffleResult,
}

fn guard(f: impl FnOnce() -> ZenoStatus) -> ZenoStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(ZenoStatus::Panic)
}

fn status_of<T>(r: zeno_core::Result<T>, write: impl FnOnce(T)) -> ZenoStatus {
    match r {
        Ok(v) => {
            write(v);
            ZenoStatus::Ok
        }
        Err(e) => (&e).into(),
    }
}

/// Static, NUL-terminated description of a status code. Never free it.
/// Takes a plain int so that out-of-range codes from C stay defined.
#[no_mangle]
pub extern "C" fn zeno_status_message(status: c_int) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"invalid packet parameter\0",
        3 => b"invalid measurement schedule\0",
        4 => b"time outside the schedule\0",
        5 => b"exponential fit failed\0",
        6 => b"grid error\0",
        7 => b"output buffer too small\0",
        8 => b"internal panic\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}

/// Creates a packet. On success `*out` owns a new handle.
///
/// # Safety
/// `out` must be null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn zeno_model_new(
    hbar: f64,
    mass: f64,
    sigma0: f64,
    x0: f64,
    p0: f64,
    out: *mut *mut ZenoModel,
) -> ZenoStatus {
    if out.is_null() {
        return ZenoStatus::NullPointer;
    }
    guard(|| {
        status_of(PhysicalParams::new(hbar, mass, sigma0, x0, p0), |params| {
            *out = Box::into_raw(Box::new(ZenoModel { params }));
        })
    })
}

/// # Safety
/// `model` must be null or a handle from [`zeno_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zeno_model_free(model: *mut ZenoModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn zeno_model_scales(model: *const ZenoModel, out: *mut ZenoScales) -> ZenoStatus {
    let (Some(m), false) = (model.as_ref(), out.is_null()) else {
        return ZenoStatus::NullPointer;
    };
    guard(|| {
        let s = derive_scales(&m.params);
        *out = ZenoScales {
            tau: s.tau,
            tau_zeno: s.tau_zeno,
            tau_inflx: s.tau_inflx,
            p_spread: s.p_spread,
            e0: s.e0,
            mean_h: s.mean_h,
            delta_e: s.delta_e,
            momentum_ratio: s.momentum_ratio,
        };
        ZenoStatus::Ok
    })
}

/// Free autocorrelation `C(t)` as real and imaginary parts.
///
/// # Safety
/// `model` must be a live handle; `re` and `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeno_correlation(model: *const ZenoModel, t: f64, re: *mut f64, im: *mut f64) -> ZenoStatus {
    let Some(m) = model.as_ref() else {
        return ZenoStatus::NullPointer;
    };
    if re.is_null() || im.is_null() {
        return ZenoStatus::NullPointer;
    }
    guard(|| {
        let c = correlation_unperturbed(&m.params, t);
        *re = c.re;
        *im = c.im;
        ZenoStatus::Ok
    })
}

/// Free survival probability `|C(t)|^2`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn zeno_survival(model: *const ZenoModel, t: f64, out: *mut f64) -> ZenoStatus {
    let (Some(m), false) = (model.as_ref(), out.is_null()) else {
        return ZenoStatus::NullPointer;
    };
    guard(|| {
        *out = survival_unperturbed(&m.params, t);
        ZenoStatus::Ok
    })
}

/// # Safety
/// `model` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn zeno_classify_regime(model: *const ZenoModel, delta_t: f64, out: *mut ZenoRegime) -> ZenoStatus {
    let (Some(m), false) = (model.as_ref(), out.is_null()) else {
        return ZenoStatus::NullPointer;
    };
    if !delta_t.is_finite() || delta_t <= 0.0 {
        return ZenoStatus::InvalidSchedule;
    }
    guard(|| {
        *out = classify_regime(&derive_scales(&m.params), delta_t).label.into();
        ZenoStatus::Ok
    })
}

/// Runs a measurement schedule and keeps the result behind `*out`. A failed
/// fit is not an error; check `has_fit` in the summary.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn zeno_shuffle_new(
    model: *const ZenoModel,
    delta_t: f64,
    total_time: f64,
    sample_dt: f64,
    fit_lo: f64,
    fit_hi: f64,
    out: *mut *mut ZenoShuffle,
) -> ZenoStatus {
    let (Some(m), false) = (model.as_ref(), out.is_null()) else {
        return ZenoStatus::NullPointer;
    };
    guard(|| {
        let params = m.params;
        let run = MeasurementSchedule::with_sampling(delta_t, total_time, sample_dt)
            .and_then(|schedule| Ok((schedule, run_shuffle(&params, &schedule, (fit_lo, fit_hi))?)));
        status_of(run, |(schedule, result)| {
            *out = Box::into_raw(Box::new(ZenoShuffle {
                params,
                schedule,
                result,
            }));
        })
    })
}

/// # Safety
/// `shuffle` must be null or a handle from [`zeno_shuffle_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zeno_shuffle_free(shuffle: *mut ZenoShuffle) {
    if !shuffle.is_null() {
        drop(Box::from_raw(shuffle));
    }
}

/// # Safety
/// `shuffle` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn zeno_shuffle_summary(shuffle: *const ZenoShuffle, out: *mut ZenoShuffleSummary) -> ZenoStatus {
    let (Some(s), false) = (shuffle.as_ref(), out.is_null()) else {
        return ZenoStatus::NullPointer;
    };
    guard(|| {
        let r = &s.result;
        let md = r.markov_distance.as_ref();
        *out = ZenoShuffleSummary {
            gamma: r.envelope_rate,
            gamma_prime: r.envelope_rate_amp,
            has_fit: r.fit.is_ok(),
            gamma_prime_fit: r.fitted_rate_amp().unwrap_or(f64::NAN),
            max_abs_delta: md.map_or(f64::NAN, |d| d.max_abs),
            l2_delta: md.map_or(f64::NAN, |d| d.l2),
            has_crossing: r.crossing_time.is_some(),
            crossing_time: r.crossing_time.unwrap_or(f64::NAN),
            regime: r.regime.label.into(),
            samples: r.trace.len(),
        };
        ZenoStatus::Ok
    })
}

/// Copies sample times and the perturbed `|C|` into caller buffers of
/// capacity `cap`. `*written` always receives the sample count, so a first
/// call with `cap = 0` sizes the buffers.
///
/// # Safety
/// `shuffle` must be a live handle, `written` valid for a write, and `times`
/// and `modulus` valid for `cap` writes each (they may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn zeno_shuffle_trace(
    shuffle: *const ZenoShuffle,
    times: *mut f64,
    modulus: *mut f64,
    cap: usize,
    written: *mut usize,
) -> ZenoStatus {
    let (Some(s), false) = (shuffle.as_ref(), written.is_null()) else {
        return ZenoStatus::NullPointer;
    };
    guard(|| {
        let trace = &s.result.trace;
        let n = trace.len();
        *written = n;
        if cap < n {
            return ZenoStatus::BufferTooSmall;
        }
        if times.is_null() || modulus.is_null() {
            return ZenoStatus::NullPointer;
        }
        ptr::copy_nonoverlapping(trace.times().as_ptr(), times, n);
        for (k, c) in trace.values().iter().enumerate() {
            *modulus.add(k) = c.norm();
        }
        ZenoStatus::Ok
    })
}

/// Perturbed survival probability at `t` under the handle's schedule.
///
/// # Safety
/// `shuffle` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn zeno_shuffle_survival(shuffle: *const ZenoShuffle, t: f64, out: *mut f64) -> ZenoStatus {
    let (Some(s), false) = (shuffle.as_ref(), out.is_null()) else {
        return ZenoStatus::NullPointer;
    };
    guard(|| status_of(shuffled_survival(&s.params, &s.schedule, t), |v| *out = v))
}

/// Same quantity built from the steady per-interval attenuation factors.
///
/// # Safety
/// `shuffle` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn zeno_shuffle_steady_survival(shuffle: *const ZenoShuffle, t: f64, out: *mut f64) -> ZenoStatus {
    let (Some(s), false) = (shuffle.as_ref(), out.is_null()) else {
        return ZenoStatus::NullPointer;
    };
    guard(|| status_of(steady_arrow_survival(&s.params, &s.schedule, t), |v| *out = v))
}
