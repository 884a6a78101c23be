use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::params::PhysicalParams;

pub const DEFAULT_POINTS: usize = 4096;
pub const MIN_POINTS: usize = 256;
/// Half-widths of the spread packet kept between the centroid path and the box edge.
pub const COVERAGE_SIGMAS: f64 = 10.0;
/// `(k_nyquist - |k0|) sigma0` required so the momentum tail is below double precision.
pub const RESOLUTION_MARGIN: f64 = 6.0;

/// Uniform periodic grid `x_j = x_min + j dx`, `j = 0..n_points`,
/// `dx = (x_max - x_min) / n_points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < MIN_POINTS || !n_points.is_power_of_two() {
            return Err(ZenoError::GridSizing {
                diagnostic: format!("n_points must be a power of two >= {MIN_POINTS}, got {n_points}"),
                suggested_x_min: x_min,
                suggested_x_max: x_max,
                suggested_points: n_points.next_power_of_two().max(MIN_POINTS),
            });
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(ZenoError::GridSizing {
                diagnostic: format!("empty or non-finite domain [{x_min}, {x_max}]"),
                suggested_x_min: x_min.min(x_max),
                suggested_x_max: x_max.max(x_min),
                suggested_points: n_points,
            });
        }
        Ok(GridSpec { x_min, x_max, n_points })
    }

    /// Smallest box satisfying the coverage rule for free evolution up to `horizon`.
    pub fn auto(params: &PhysicalParams, horizon: f64, n_points: usize) -> Result<Self> {
        let (lo, hi) = required_domain(params, horizon);
        let spec = GridSpec::new(lo, hi, n_points)?;
        spec.check_adequate(params, horizon)?;
        Ok(spec)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points;
        let dk = 2.0 * PI / (n as f64 * self.dx());
        (0..n)
            .map(|j| if j < n / 2 { j as f64 } else { j as f64 - n as f64 } * dk)
            .collect()
    }

    /// Coverage of the centroid path `+- 10 sigma_T` and momentum resolution.
    pub fn check_adequate(&self, params: &PhysicalParams, horizon: f64) -> Result<()> {
        let (lo, hi) = required_domain(params, horizon);
        let tol = 1e-9 * (hi - lo);
        let k0 = params.p0().abs() / params.hbar();
        let needed_dx = PI / (RESOLUTION_MARGIN / params.sigma0() + k0);
        let width = (self.x_max.max(hi) - self.x_min.min(lo)).max(hi - lo);
        let suggested_points = ((width / needed_dx).ceil() as usize)
            .next_power_of_two()
            .max(self.n_points)
            .max(MIN_POINTS);
        if self.x_min > lo + tol || self.x_max < hi - tol {
            return Err(ZenoError::GridSizing {
                diagnostic: format!(
                    "domain [{}, {}] does not cover the packet to {COVERAGE_SIGMAS} widths up to t = {horizon}",
                    self.x_min, self.x_max
                ),
                suggested_x_min: lo,
                suggested_x_max: hi,
                suggested_points,
            });
        }
        if self.dx() > needed_dx {
            return Err(ZenoError::GridSizing {
                diagnostic: format!(
                    "spacing {} too coarse for sigma0 = {} and p0 = {} (need <= {needed_dx})",
                    self.dx(),
                    params.sigma0(),
                    params.p0()
                ),
                suggested_x_min: self.x_min,
                suggested_x_max: self.x_max,
                suggested_points,
            });
        }
        Ok(())
    }
}

fn required_domain(params: &PhysicalParams, horizon: f64) -> (f64, f64) {
    let horizon = horizon.abs();
    let spread = params.sigma0() * (1.0 + (horizon / params.tau()).powi(2)).sqrt();
    let start = params.x0();
    let end = params.x0() + params.p0() / params.mass() * horizon;
    (
        start.min(end) - COVERAGE_SIGMAS * spread,
        start.max(end) + COVERAGE_SIGMAS * spread,
    )
}
