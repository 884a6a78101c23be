//! Free Gaussian wave-packet dynamics under repeated projective measurement.
//!
//! * [`params`]: packet parameters and characteristic time scales.
//! * [`analytic`]: closed-form wave function, densities, autocorrelation and survival.
//! * [`shuffle`]: periodic measurements, envelopes, exponential fits,
//!   Markovianity distance and Zeno/anti-Zeno classification.
//! * [`cli`]: configuration and the `zeno` command implementations.
//!
//! The grid-based reference solver in `oracle` backs the test suite and the
//! `zeno oracle-check` command.

pub mod analytic;
pub mod cli;
pub mod error;
#[doc(hidden)]
pub mod oracle;
pub mod params;
pub mod shuffle;
pub mod trace;

pub use error::{Result, ZenoError};
pub use params::{derive_scales, DerivedScales, PhysicalParams};
pub use shuffle::{MeasurementSchedule, Regime};
pub use trace::{CorrelationTrace, TraceKind};
