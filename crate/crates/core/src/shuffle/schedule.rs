use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};

pub const DEFAULT_SAMPLE_DT: f64 = 1e-4;
pub const DEFAULT_TOTAL_TIME: f64 = 5.0;

// |t/dt - n| below this (relative to max(1, t/dt)) counts as landing on n.
const SNAP: f64 = 1e-9;

/// Equally spaced projective measurements at `t_n = n * delta_t`,
/// `n = 1..=floor(total_time / delta_t)`, observed every `sample_dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub struct MeasurementSchedule {
    delta_t: f64,
    total_time: f64,
    sample_dt: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleRepr {
    delta_t: f64,
    #[serde(default = "default_total_time")]
    total_time: f64,
    #[serde(default = "default_sample_dt")]
    sample_dt: f64,
}

fn default_total_time() -> f64 {
    DEFAULT_TOTAL_TIME
}

fn default_sample_dt() -> f64 {
    DEFAULT_SAMPLE_DT
}

impl TryFrom<ScheduleRepr> for MeasurementSchedule {
    type Error = ZenoError;

    fn try_from(r: ScheduleRepr) -> Result<Self> {
        MeasurementSchedule::with_sampling(r.delta_t, r.total_time, r.sample_dt)
    }
}

impl From<MeasurementSchedule> for ScheduleRepr {
    fn from(s: MeasurementSchedule) -> Self {
        ScheduleRepr {
            delta_t: s.delta_t,
            total_time: s.total_time,
            sample_dt: s.sample_dt,
        }
    }
}

/// Position of a time relative to the measurement comb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombPosition {
    /// Measurements already applied (post-measurement convention at `t = n delta_t`).
    pub measurements: u64,
    /// Free evolution since the last measurement, in `[0, delta_t)`.
    pub elapsed: f64,
}

impl MeasurementSchedule {
    pub fn new(delta_t: f64, total_time: f64) -> Result<Self> {
        Self::with_sampling(delta_t, total_time, DEFAULT_SAMPLE_DT.min(delta_t))
    }

    pub fn with_sampling(delta_t: f64, total_time: f64, sample_dt: f64) -> Result<Self> {
        for (name, v) in [("delta_t", delta_t), ("total_time", total_time), ("sample_dt", sample_dt)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(ZenoError::InvalidSchedule(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if sample_dt > delta_t {
            return Err(ZenoError::InvalidSchedule(format!(
                "sample_dt ({sample_dt}) must not exceed delta_t ({delta_t})"
            )));
        }
        if total_time < delta_t {
            return Err(ZenoError::InvalidSchedule(format!(
                "total_time ({total_time}) must be at least delta_t ({delta_t})"
            )));
        }
        Ok(MeasurementSchedule {
            delta_t,
            total_time,
            sample_dt,
        })
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn sample_dt(&self) -> f64 {
        self.sample_dt
    }

    pub fn with_delta_t(self, delta_t: f64) -> Result<Self> {
        Self::with_sampling(delta_t, self.total_time, self.sample_dt)
    }

    pub fn with_total_time(self, total_time: f64) -> Result<Self> {
        Self::with_sampling(self.delta_t, total_time, self.sample_dt)
    }

    /// Number of measurements inside the horizon.
    pub fn measurement_count(&self) -> u64 {
        snapped_floor(self.total_time / self.delta_t)
    }

    /// Index of the last sample, `floor(total_time / sample_dt)`.
    pub fn last_sample(&self) -> u64 {
        snapped_floor(self.total_time / self.sample_dt)
    }

    pub fn sample_time(&self, k: u64) -> f64 {
        k as f64 * self.sample_dt
    }

    /// Sample instants `0, sample_dt, 2 sample_dt, ...` up to the horizon.
    pub fn sample_times(&self) -> Vec<f64> {
        (0..=self.last_sample()).map(|k| self.sample_time(k)).collect()
    }

    pub fn check_time(&self, t: f64) -> Result<()> {
        if t >= 0.0 && t <= self.total_time * (1.0 + 1e-12) {
            Ok(())
        } else {
            Err(ZenoError::TimeOutOfRange {
                t,
                lo: 0.0,
                hi: self.total_time,
            })
        }
    }

    /// Splits `t` into completed measurements and the free time since the last one.
    pub fn position(&self, t: f64) -> CombPosition {
        let q = t / self.delta_t;
        let n = snapped_floor(q);
        let elapsed = if is_snapped(q) {
            0.0
        } else {
            (t - n as f64 * self.delta_t).max(0.0)
        };
        CombPosition {
            measurements: n,
            elapsed,
        }
    }
}

fn is_snapped(q: f64) -> bool {
    (q - q.round()).abs() <= SNAP * q.abs().max(1.0)
}

fn snapped_floor(q: f64) -> u64 {
    if is_snapped(q) {
        q.round().max(0.0) as u64
    } else {
        q.floor().max(0.0) as u64
    }
}
