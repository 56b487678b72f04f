//! Kinematics of the deformed algebra `[X, P] = iħ(1 + βP²)`.
//!
//! States live on the auxiliary momentum `p` with physical momentum
//! `P = tan(√β p)/√β`, so the momentum domain is the open interval
//! `|p| < π/(2√β)`. The undeformed case `β = 0` is handled by explicit
//! branches (unbounded domain, kinetic energy `p²/2m`).

use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Error, Result};

/// Relative margin kept from the cutoff when evaluating functions that
/// blow up (or decay as `1/tan²`) at `±p_max`.
pub const CUTOFF_MARGIN: f64 = 1e-12;

/// Mass and reduced Planck constant. Both default to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    m: f64,
    hbar: f64,
}

impl PhysicalParams {
    pub fn new(m: f64, hbar: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(invalid("m", m, "mass must be finite and > 0"));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(invalid("hbar", hbar, "hbar must be finite and > 0"));
        }
        Ok(Self { m, hbar })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self { m: 1.0, hbar: 1.0 }
    }
}

/// Deformation parameter `β ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deformation {
    beta: f64,
    sqrt_beta: f64,
}

impl Deformation {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(invalid("beta", beta, "deformation must be finite and >= 0"));
        }
        Ok(Self {
            beta,
            sqrt_beta: beta.sqrt(),
        })
    }

    pub fn undeformed() -> Self {
        Self {
            beta: 0.0,
            sqrt_beta: 0.0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sqrt_beta(&self) -> f64 {
        self.sqrt_beta
    }

    pub fn is_undeformed(&self) -> bool {
        self.beta == 0.0
    }

    /// `π/(2√β)`, or `+∞` when `β = 0`.
    pub fn p_max(&self) -> f64 {
        if self.is_undeformed() {
            f64::INFINITY
        } else {
            FRAC_PI_2 / self.sqrt_beta
        }
    }

    /// Minimal position uncertainty `ħ√β`.
    pub fn minimal_length(&self, params: &PhysicalParams) -> f64 {
        params.hbar() * self.sqrt_beta
    }

    /// Clamps `p` to `|p| ≤ p_max(1 − CUTOFF_MARGIN)`.
    pub fn clamp(&self, p: f64) -> f64 {
        let limit = self.p_max() * (1.0 - CUTOFF_MARGIN);
        p.clamp(-limit, limit)
    }

    pub(crate) fn check_inside(&self, p: f64) -> Result<()> {
        let p_max = self.p_max();
        if p.is_nan() || p.abs() >= p_max {
            return Err(Error::OutsideDomain { p, p_max });
        }
        Ok(())
    }

    /// Physical momentum `P = tan(√β p)/√β` (`p` itself when `β = 0`).
    pub fn physical_momentum(&self, p: f64) -> f64 {
        if self.is_undeformed() {
            p
        } else {
            (self.sqrt_beta * p).tan() / self.sqrt_beta
        }
    }

    /// `P(p)² + q² = 2m(T(p) − E)` for a bound state with decay parameter `q`.
    ///
    /// This is the denominator shared by every eigenfunction in this crate.
    /// It is evaluated as `(tan²(√βp) + βq²)/β` so the `β → 0` limit is
    /// `p² + q²`. `p` is clamped away from the cutoff.
    pub fn decay_denominator(&self, p: f64, q: f64) -> f64 {
        let p = self.clamp(p);
        let big_p = self.physical_momentum(p);
        big_p * big_p + q * q
    }
}

impl Default for Deformation {
    fn default() -> Self {
        Self::undeformed()
    }
}

/// The momentum domain of the deformed problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentumDomain {
    Bounded { lo: f64, hi: f64 },
    Unbounded,
}

impl MomentumDomain {
    pub fn contains(&self, p: f64) -> bool {
        match *self {
            MomentumDomain::Bounded { lo, hi } => p > lo && p < hi,
            MomentumDomain::Unbounded => p.is_finite(),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            MomentumDomain::Bounded { lo, hi } => hi - lo,
            MomentumDomain::Unbounded => f64::INFINITY,
        }
    }
}

/// `(−π/(2√β), π/(2√β))`, or the unbounded sentinel for `β = 0`.
pub fn momentum_domain(deformation: &Deformation) -> MomentumDomain {
    if deformation.is_undeformed() {
        MomentumDomain::Unbounded
    } else {
        let p_max = deformation.p_max();
        MomentumDomain::Bounded {
            lo: -p_max,
            hi: p_max,
        }
    }
}

/// Deformed kinetic energy `tan²(√β p)/(2mβ)`; `p²/(2m)` when `β = 0`.
pub fn deformed_kinetic(p: f64, deformation: &Deformation, params: &PhysicalParams) -> Result<f64> {
    deformation.check_inside(p)?;
    Ok(kinetic_unchecked(p, deformation, params))
}

pub(crate) fn kinetic_unchecked(p: f64, deformation: &Deformation, params: &PhysicalParams) -> f64 {
    let big_p = deformation.physical_momentum(p);
    big_p * big_p / (2.0 * params.m())
}
