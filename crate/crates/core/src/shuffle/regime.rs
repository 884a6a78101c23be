use std::fmt;

use serde::{Deserialize, Serialize};

use crate::params::DerivedScales;

/// Where a measurement interval sits relative to `tau`, `tau_inflx` and `tau_Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `dt >= tau_Z`: first segment convex, perturbed decay always below the free one.
    PureAntiZeno,
    /// `tau_inflx < dt < tau_Z`: still below the free decay, by convexity.
    ConvexAntiZeno,
    /// `tau <= dt <= tau_inflx`: slower at first, later crosses below.
    CrossoverZeno,
    /// `dt < tau`: inside the quadratic region; decay inhibited until the
    /// exponential envelope takes over.
    Zeno,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::PureAntiZeno => "PureAntiZeno",
            Regime::ConvexAntiZeno => "ConvexAntiZeno",
            Regime::CrossoverZeno => "CrossoverZeno",
            Regime::Zeno => "Zeno",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeLabel {
    pub label: Regime,
    /// `(tau, tau_inflx, tau_Z)` the label was decided against.
    pub bounds_used: (f64, f64, f64),
}

/// Total map from `dt > 0` to a [`Regime`].
///
/// `tau_Z` is tested first and `tau` second, so when a large `p0` pushes
/// `tau_Z` below `tau_inflx` (or below `tau`) the anti-Zeno label wins.
pub fn classify_regime(scales: &DerivedScales, delta_t: f64) -> RegimeLabel {
    let bounds_used = (scales.tau, scales.tau_inflx, scales.tau_zeno);
    let label = if delta_t >= scales.tau_zeno {
        Regime::PureAntiZeno
    } else if delta_t < scales.tau {
        Regime::Zeno
    } else if delta_t <= scales.tau_inflx {
        Regime::CrossoverZeno
    } else {
        Regime::ConvexAntiZeno
    };
    RegimeLabel { label, bounds_used }
}
