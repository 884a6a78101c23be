//! Physical parameters of the initial Gaussian packet and the characteristic
//! scales derived from them.
//!
//! Units are whatever the caller chooses; the defaults use natural units with
//! `hbar = 1` and reproduce the reference configuration `m = 0.1`,
//! `sigma0 = 0.5`, `p0 = 0` (spreading time `tau = 0.05`).

use serde::{Deserialize, Serialize};

use crate::analytic::energy_moments;
use crate::error::{Result, ZenoError};

/// Parameters of the free Gaussian packet
/// `Psi_0(x) = (2 pi sigma0^2)^(-1/4) exp[-(x - x0)^2 / 4 sigma0^2 + i p0 (x - x0) / hbar]`.
///
/// Construction rejects non-positive `hbar`, `mass` or `sigma0` and any
/// non-finite field, so every value of this type is usable as-is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct PhysicalParams {
    hbar: f64,
    mass: f64,
    sigma0: f64,
    x0: f64,
    p0: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ParamsRepr {
    hbar: f64,
    mass: f64,
    sigma0: f64,
    x0: f64,
    p0: f64,
}

impl Default for ParamsRepr {
    fn default() -> Self {
        let p = PhysicalParams::default();
        ParamsRepr {
            hbar: p.hbar,
            mass: p.mass,
            sigma0: p.sigma0,
            x0: p.x0,
            p0: p.p0,
        }
    }
}

impl TryFrom<ParamsRepr> for PhysicalParams {
    type Error = ZenoError;

    fn try_from(r: ParamsRepr) -> Result<Self> {
        PhysicalParams::new(r.hbar, r.mass, r.sigma0, r.x0, r.p0)
    }
}

impl From<PhysicalParams> for ParamsRepr {
    fn from(p: PhysicalParams) -> Self {
        ParamsRepr {
            hbar: p.hbar,
            mass: p.mass,
            sigma0: p.sigma0,
            x0: p.x0,
            p0: p.p0,
        }
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            hbar: 1.0,
            mass: 0.1,
            sigma0: 0.5,
            x0: 0.0,
            p0: 0.0,
        }
    }
}

fn positive(field: &'static str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        Err(ZenoError::param(field, format!("must be finite, got {v}")))
    } else if v <= 0.0 {
        Err(ZenoError::param(field, format!("must be > 0, got {v}")))
    } else {
        Ok(v)
    }
}

fn finite(field: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ZenoError::param(field, format!("must be finite, got {v}")))
    }
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, sigma0: f64, x0: f64, p0: f64) -> Result<Self> {
        Ok(PhysicalParams {
            hbar: positive("hbar", hbar)?,
            mass: positive("mass", mass)?,
            sigma0: positive("sigma0", sigma0)?,
            x0: finite("x0", x0)?,
            p0: finite("p0", p0)?,
        })
    }

    /// Natural units, `hbar = 1`.
    pub fn natural(mass: f64, sigma0: f64, x0: f64, p0: f64) -> Result<Self> {
        Self::new(1.0, mass, sigma0, x0, p0)
    }

    pub fn with_hbar(self, hbar: f64) -> Result<Self> {
        Self::new(hbar, self.mass, self.sigma0, self.x0, self.p0)
    }

    pub fn with_mass(self, mass: f64) -> Result<Self> {
        Self::new(self.hbar, mass, self.sigma0, self.x0, self.p0)
    }

    pub fn with_sigma0(self, sigma0: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, sigma0, self.x0, self.p0)
    }

    pub fn with_x0(self, x0: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, self.sigma0, x0, self.p0)
    }

    pub fn with_p0(self, p0: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, self.sigma0, self.x0, p0)
    }

    #[inline]
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        self.mass
    }

    #[inline]
    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    #[inline]
    pub fn x0(&self) -> f64 {
        self.x0
    }

    #[inline]
    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// Group velocity `p0 / m`.
    #[inline]
    pub fn velocity(&self) -> f64 {
        self.p0 / self.mass
    }

    /// Spreading time `tau = 2 m sigma0^2 / hbar`.
    #[inline]
    pub fn tau(&self) -> f64 {
        2.0 * self.mass * self.sigma0 * self.sigma0 / self.hbar
    }

    /// Spreading momentum `p_s = hbar / 2 sigma0`.
    #[inline]
    pub fn p_spread(&self) -> f64 {
        self.hbar / (2.0 * self.sigma0)
    }

    /// Translational energy `E0 = p0^2 / 2m`.
    #[inline]
    pub fn e0(&self) -> f64 {
        self.p0 * self.p0 / (2.0 * self.mass)
    }
}

/// Characteristic scales of a packet, computed once by [`derive_scales`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedScales {
    /// Spreading time `2 m sigma0^2 / hbar`.
    pub tau: f64,
    /// Zeno time `hbar / Delta E`.
    pub tau_zeno: f64,
    /// `sqrt(2) tau`, where the free survival probability changes curvature.
    pub tau_inflx: f64,
    pub p_spread: f64,
    pub e0: f64,
    pub mean_h: f64,
    pub delta_e: f64,
    /// `p0 / p_s`.
    pub momentum_ratio: f64,
}

pub fn derive_scales(params: &PhysicalParams) -> DerivedScales {
    let tau = params.tau();
    let moments = energy_moments(params);
    let p_spread = params.p_spread();
    DerivedScales {
        tau,
        tau_zeno: params.hbar() / moments.delta_e,
        tau_inflx: std::f64::consts::SQRT_2 * tau,
        p_spread,
        e0: params.e0(),
        mean_h: moments.mean_h,
        delta_e: moments.delta_e,
        momentum_ratio: params.p0() / p_spread,
    }
}

/// The three natural spreading regimes of a free packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NaturalRegime {
    /// `t <<< tau`, essentially spreadless.
    EhrenfestHuygens,
    /// `t << tau`, width grows quadratically.
    Fresnel,
    /// `t >> tau`, width grows linearly.
    Fraunhofer,
}

/// Finer banding used by [`natural_regime_band`]; `Transition` covers
/// `tau/3 <= t <= 10 tau`, which the coarse classifier folds into `Fresnel`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeBand {
    EhrenfestHuygens,
    Fresnel,
    Transition,
    Fraunhofer,
}

pub const EHRENFEST_HUYGENS_CUTOFF: f64 = 1.0 / 100.0;
pub const FRESNEL_CUTOFF: f64 = 1.0 / 3.0;
pub const FRAUNHOFER_CUTOFF: f64 = 10.0;

pub fn natural_regime_band(t: f64, scales: &DerivedScales) -> Result<RegimeBand> {
    if !t.is_finite() || t < 0.0 {
        return Err(ZenoError::TimeOutOfRange {
            t,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let tau = scales.tau;
    Ok(if t < EHRENFEST_HUYGENS_CUTOFF * tau {
        RegimeBand::EhrenfestHuygens
    } else if t < FRESNEL_CUTOFF * tau {
        RegimeBand::Fresnel
    } else if t > FRAUNHOFER_CUTOFF * tau {
        RegimeBand::Fraunhofer
    } else {
        RegimeBand::Transition
    })
}

pub fn classify_natural_regime(t: f64, scales: &DerivedScales) -> Result<NaturalRegime> {
    Ok(match natural_regime_band(t, scales)? {
        RegimeBand::EhrenfestHuygens => NaturalRegime::EhrenfestHuygens,
        RegimeBand::Fresnel | RegimeBand::Transition => NaturalRegime::Fresnel,
        RegimeBand::Fraunhofer => NaturalRegime::Fraunhofer,
    })
}
