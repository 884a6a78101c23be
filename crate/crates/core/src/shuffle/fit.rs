//! Single-parameter least-squares fit of `|C(t)|` to `exp(-rate t)`.
//!
//! The amplitude is pinned to 1 at `t = 0`. The objective
//! `S(rate) = sum_i (|C_i| - exp(-rate t_i))^2` is bracketed by a logarithmic
//! scan around the starting rate and then minimised by safeguarded Newton
//! iteration on `S'(rate) = 0`, falling back to bisection whenever a Newton
//! step leaves the bracket.

use crate::error::{Result, ZenoError};
use crate::trace::CorrelationTrace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Starting rate; `None` derives one from a log-linear regression.
    pub initial_rate: Option<f64>,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            initial_rate: None,
            rel_tol: 1e-10,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFit {
    /// Fitted amplitude decay rate `gamma'_fit`.
    pub rate: f64,
    /// Residual sum of squares at `rate`.
    pub residual: f64,
    pub samples: usize,
    pub iterations: usize,
}

// scan covers initial * 10^[-SCAN_DECADES, SCAN_DECADES]
const SCAN_DECADES: i32 = 4;
const SCAN_PER_DECADE: i32 = 25;

struct Samples {
    t: Vec<f64>,
    y: Vec<f64>,
}

impl Samples {
    fn objective(&self, rate: f64) -> f64 {
        self.t
            .iter()
            .zip(&self.y)
            .map(|(&t, &y)| {
                let r = y - (-rate * t).exp();
                r * r
            })
            .sum()
    }

    // (S'/2, S''/2) with respect to the rate
    fn derivatives(&self, rate: f64) -> (f64, f64) {
        let mut g = 0.0;
        let mut h = 0.0;
        for (&t, &y) in self.t.iter().zip(&self.y) {
            let e = (-rate * t).exp();
            g += (y - e) * t * e;
            h += t * t * e * (2.0 * e - y);
        }
        (g, h)
    }

    fn loglinear_rate(&self) -> f64 {
        let (num, den) = self
            .t
            .iter()
            .zip(&self.y)
            .filter(|(&t, &y)| t > 0.0 && y > 0.0)
            .fold((0.0, 0.0), |(n, d), (&t, &y)| (n - t * y.ln(), d + t * t));
        if den > 0.0 && num > 0.0 {
            num / den
        } else {
            1.0
        }
    }
}

/// Fits the modulus of `trace` on samples with `lo <= t <= hi`.
pub fn fit_exponential(trace: &CorrelationTrace, window: (f64, f64), options: FitOptions) -> Result<ExponentialFit> {
    let (lo, hi) = window;
    let times = trace.times();
    if times.is_empty() || lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(ZenoError::DegenerateWindow { lo, hi, samples: 0 });
    }
    let first = times[0];
    let last = times[times.len() - 1];
    let slack = 1e-9 * (last - first).abs().max(1.0);
    if lo < first - slack || hi > last + slack {
        return Err(ZenoError::TimeOutOfRange {
            t: if lo < first - slack { lo } else { hi },
            lo: first,
            hi: last,
        });
    }
    let mut samples = Samples { t: Vec::new(), y: Vec::new() };
    for (&t, v) in times.iter().zip(trace.values()) {
        if t >= lo - slack && t <= hi + slack {
            samples.t.push(t);
            samples.y.push(v.norm());
        }
    }
    if samples.t.len() < 3 {
        return Err(ZenoError::DegenerateWindow {
            lo,
            hi,
            samples: samples.t.len(),
        });
    }
    minimise(&samples, options)
}

fn minimise(samples: &Samples, options: FitOptions) -> Result<ExponentialFit> {
    let start = match options.initial_rate {
        Some(r) if r.is_finite() && r > 0.0 => r,
        _ => samples.loglinear_rate(),
    };

    // coarse scan: 0 followed by a log grid around the start
    let mut grid = vec![0.0];
    let steps = 2 * SCAN_DECADES * SCAN_PER_DECADE;
    for j in 0..=steps {
        let e = (j - SCAN_DECADES * SCAN_PER_DECADE) as f64 / SCAN_PER_DECADE as f64;
        grid.push(start * 10f64.powf(e));
    }
    let values: Vec<f64> = grid.iter().map(|&r| samples.objective(r)).collect();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v < values[b] { i } else { b });

    let samples_n = samples.t.len();
    if best == grid.len() - 1 {
        return Err(ZenoError::FitNonConvergence {
            iterations: grid.len(),
            last_rate: grid[best],
        });
    }
    if best == 0 && samples.derivatives(0.0).0 >= 0.0 {
        // minimum sits on the constraint rate >= 0
        return Ok(ExponentialFit {
            rate: 0.0,
            residual: values[0],
            samples: samples_n,
            iterations: grid.len(),
        });
    }

    let mut lo = if best == 0 { 0.0 } else { grid[best - 1] };
    let mut hi = grid[best + 1];
    // S' < 0 at lo and S' > 0 at hi bracket the minimum; the scan guarantees
    // S(lo) >= S(best) <= S(hi) so a stationary point lies inside.
    let mut rate = grid[best];
    if rate <= lo || rate >= hi {
        rate = 0.5 * (lo + hi);
    }
    for iter in 0..options.max_iter {
        let (g, h) = samples.derivatives(rate);
        let slope = g;
        if slope < 0.0 {
            lo = rate;
        } else {
            hi = rate;
        }
        let newton = if h > 0.0 { rate - slope / h } else { f64::NAN };
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - rate).abs();
        rate = next;
        if step <= options.rel_tol * rate.abs().max(f64::MIN_POSITIVE) || hi - lo <= options.rel_tol * rate {
            return Ok(ExponentialFit {
                rate,
                residual: samples.objective(rate),
                samples: samples_n,
                iterations: grid.len() + iter + 1,
            });
        }
    }
    Err(ZenoError::FitNonConvergence {
        iterations: grid.len() + options.max_iter,
        last_rate: rate,
    })
}
