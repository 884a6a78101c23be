//! Brute-force reference path: the packet sampled on a periodic grid, evolved
//! exactly in momentum space and measured by explicit quadrature.
//!
//! Nothing here calls the closed forms in [`crate::analytic`]; the two paths
//! meet only in tests and in `zeno oracle-check`.

mod grid;
mod report;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub use grid::{GridSpec, COVERAGE_SIGMAS, DEFAULT_POINTS, MIN_POINTS, RESOLUTION_MARGIN};
pub use report::{oracle_check, OracleReport, OracleTolerances, ShuffleCheck};

use crate::error::{Result, ZenoError};
use crate::params::PhysicalParams;
use crate::shuffle::MeasurementSchedule;

#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    spec: GridSpec,
    amps: Vec<Complex64>,
}

impl GridState {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// `int |Psi|^2 dx`; on a periodic grid the trapezoid rule is a plain sum.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.spec.dx()
    }

    pub fn position_mean(&self) -> f64 {
        let dx = self.spec.dx();
        let w: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(j, a)| self.spec.x(j) * a.norm_sqr())
            .sum();
        w * dx / self.norm()
    }

    pub fn position_variance(&self) -> f64 {
        let mean = self.position_mean();
        let dx = self.spec.dx();
        let w: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(j, a)| (self.spec.x(j) - mean).powi(2) * a.norm_sqr())
            .sum();
        w * dx / self.norm()
    }

    fn scaled(&self, c: Complex64) -> GridState {
        GridState {
            spec: self.spec,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }
}

/// Samples `A0 exp[-(x - x0)^2 / 4 sigma0^2 + i p0 (x - x0) / hbar]` on the grid.
pub fn init_gaussian(spec: &GridSpec, params: &PhysicalParams) -> Result<GridState> {
    spec.check_adequate(params, 0.0)?;
    let s0 = params.sigma0();
    let norm = (2.0 * PI * s0 * s0).powf(-0.25);
    let amps = spec
        .positions()
        .into_iter()
        .map(|x| {
            let d = x - params.x0();
            Complex64::from_polar(norm * (-d * d / (4.0 * s0 * s0)).exp(), params.p0() * d / params.hbar())
        })
        .collect();
    Ok(GridState { spec: *spec, amps })
}

/// Exact free evolution on a fixed grid via the diagonal momentum-space propagator.
pub struct FreePropagator {
    spec: GridSpec,
    hbar: f64,
    mass: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FreePropagator {
    pub fn new(spec: &GridSpec, params: &PhysicalParams) -> Self {
        let mut planner = FftPlanner::new();
        FreePropagator {
            spec: *spec,
            hbar: params.hbar(),
            mass: params.mass(),
            wavenumbers: spec.wavenumbers(),
            forward: planner.plan_fft_forward(spec.n_points),
            inverse: planner.plan_fft_inverse(spec.n_points),
        }
    }

    fn check(&self, state: &GridState) -> Result<()> {
        if state.spec != self.spec {
            return Err(ZenoError::GridMismatch(format!(
                "propagator built for {:?}, state on {:?}",
                self.spec, state.spec
            )));
        }
        Ok(())
    }

    /// `Psi -> F^-1 exp(-i hbar k^2 dt / 2m) F Psi`.
    pub fn propagate(&self, state: &GridState, dt: f64) -> Result<GridState> {
        self.check(state)?;
        let mut buf = state.amps.clone();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.spec.n_points as f64;
        for (a, &k) in buf.iter_mut().zip(&self.wavenumbers) {
            *a *= Complex64::from_polar(scale, -self.hbar * k * k * dt / (2.0 * self.mass));
        }
        self.inverse.process(&mut buf);
        Ok(GridState {
            spec: state.spec,
            amps: buf,
        })
    }

    /// `(<H>, <H^2>)` from the momentum-space distribution.
    pub fn energy_moments(&self, state: &GridState) -> Result<(f64, f64)> {
        self.check(state)?;
        let mut buf = state.amps.clone();
        self.forward.process(&mut buf);
        let (mut w, mut h1, mut h2) = (0.0, 0.0, 0.0);
        for (a, &k) in buf.iter().zip(&self.wavenumbers) {
            let p = a.norm_sqr();
            let e = self.hbar * self.hbar * k * k / (2.0 * self.mass);
            w += p;
            h1 += p * e;
            h2 += p * e * e;
        }
        Ok((h1 / w, h2 / w))
    }

    /// `<p>` from the momentum-space distribution.
    pub fn momentum_mean(&self, state: &GridState) -> Result<f64> {
        self.check(state)?;
        let mut buf = state.amps.clone();
        self.forward.process(&mut buf);
        let (w, p) = buf
            .iter()
            .zip(&self.wavenumbers)
            .fold((0.0, 0.0), |(w, p), (a, &k)| (w + a.norm_sqr(), p + a.norm_sqr() * self.hbar * k));
        Ok(p / w)
    }
}

pub fn propagate_free(state: &GridState, params: &PhysicalParams, dt: f64) -> Result<GridState> {
    FreePropagator::new(&state.spec, params).propagate(state, dt)
}

/// `<a|b>` by trapezoid quadrature.
pub fn overlap(a: &GridState, b: &GridState) -> Result<Complex64> {
    if a.spec != b.spec {
        return Err(ZenoError::GridMismatch(format!("{:?} vs {:?}", a.spec, b.spec)));
    }
    let s: Complex64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum();
    Ok(s * a.spec.dx())
}

/// `|ref><ref|state>`: collapse onto the reference, keeping the overlap as
/// amplitude (no renormalisation).
pub fn project_measure(state: &GridState, reference: &GridState) -> Result<GridState> {
    let c = overlap(reference, state)?;
    Ok(reference.scaled(c))
}

/// `<Psi_0|Psi_t>` for each `t`, each propagated directly from the initial grid state.
pub fn grid_correlation(params: &PhysicalParams, spec: &GridSpec, times: &[f64]) -> Result<Vec<Complex64>> {
    let psi0 = init_gaussian(spec, params)?;
    let prop = FreePropagator::new(spec, params);
    times
        .iter()
        .map(|&t| overlap(&psi0, &prop.propagate(&psi0, t)?))
        .collect()
}

/// Survival under the measurement comb, by explicit propagate/project cycles.
///
/// `times` must be sorted ascending.
pub fn grid_shuffled_survival(
    params: &PhysicalParams,
    spec: &GridSpec,
    schedule: &MeasurementSchedule,
    times: &[f64],
) -> Result<Vec<f64>> {
    let psi0 = init_gaussian(spec, params)?;
    let prop = FreePropagator::new(spec, params);
    let mut state = psi0.clone();
    let mut done = 0u64;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let pos = schedule.position(t);
        while done < pos.measurements {
            let evolved = prop.propagate(&state, schedule.delta_t())?;
            state = project_measure(&evolved, &psi0)?;
            done += 1;
        }
        let current = if pos.elapsed > 0.0 {
            prop.propagate(&state, pos.elapsed)?
        } else {
            state.clone()
        };
        out.push(overlap(&psi0, &current)?.norm_sqr());
    }
    Ok(out)
}
