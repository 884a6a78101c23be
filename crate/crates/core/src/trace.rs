use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    Unperturbed,
    Perturbed,
    Envelope,
    Fit,
}

/// Correlation amplitude sampled on a strictly increasing time grid.
///
/// `phase` holds the unwrapped argument of each value; `values[k].arg()` only
/// agrees with it modulo `2 pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTrace {
    kind: TraceKind,
    times: Vec<f64>,
    values: Vec<Complex64>,
    phase: Vec<f64>,
}

// rounding slack for |C| <= 1
const MODULUS_SLACK: f64 = 1e-12;

impl CorrelationTrace {
    /// Builds a trace from moduli and unwrapped phases.
    pub fn from_polar(kind: TraceKind, times: Vec<f64>, modulus: &[f64], phase: Vec<f64>) -> Result<Self> {
        if modulus.len() != times.len() || phase.len() != times.len() {
            return Err(ZenoError::InvalidSchedule(format!(
                "trace length mismatch: {} times, {} moduli, {} phases",
                times.len(),
                modulus.len(),
                phase.len()
            )));
        }
        let values = modulus
            .iter()
            .zip(&phase)
            .map(|(&r, &th)| Complex64::from_polar(r, th))
            .collect();
        let trace = CorrelationTrace {
            kind,
            times,
            values,
            phase,
        };
        trace.check()?;
        Ok(trace)
    }

    /// Builds a real, non-negative trace (envelopes and fits).
    pub fn real(kind: TraceKind, times: Vec<f64>, modulus: &[f64]) -> Result<Self> {
        let phase = vec![0.0; times.len()];
        Self::from_polar(kind, times, modulus, phase)
    }

    fn check(&self) -> Result<()> {
        if let Some(w) = self.times.windows(2).find(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater)) {
            return Err(ZenoError::InvalidSchedule(format!(
                "trace times must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some(v) = self.values.iter().find(|v| matches!(v.norm().partial_cmp(&(1.0 + MODULUS_SLACK)), None | Some(Ordering::Greater))) {
            return Err(ZenoError::InvalidSchedule(format!(
                "correlation modulus {} exceeds 1",
                v.norm()
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> TraceKind {
        self.kind
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unordered_times() {
        let r = CorrelationTrace::real(TraceKind::Envelope, vec![0.0, 0.1, 0.1], &[1.0, 0.9, 0.8]);
        assert!(r.is_err());
    }

    #[test]
    fn rejects_super_unit_modulus() {
        let r = CorrelationTrace::real(TraceKind::Fit, vec![0.0, 0.1], &[1.0, 1.01]);
        assert!(r.is_err());
    }

    #[test]
    fn keeps_unwrapped_phase() {
        let tr = CorrelationTrace::from_polar(
            TraceKind::Perturbed,
            vec![0.0, 1.0],
            &[1.0, 0.5],
            vec![0.0, -7.0],
        )
        .unwrap();
        assert_eq!(tr.phase()[1], -7.0);
        assert!((tr.values()[1].arg() - (-7.0 + 2.0 * std::f64::consts::PI)).abs() < 1e-12);
        assert!((tr.modulus()[1] - 0.5).abs() < 1e-15);
    }
}
