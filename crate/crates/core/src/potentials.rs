//! Momentum-space kernels `U(p, p′)` of the three potentials.
//!
//! The kernels are the undeformed Fourier kernels, carried unchanged onto
//! the compact deformed domain.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::kinematics::{Deformation, PhysicalParams};

/// Self-adjoint extension parameter `A` of the inverse coordinate
/// `1/x = v.p. 1/x + Aπδ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extension {
    Finite(f64),
    /// `A → +∞`, `δ = 0`.
    PlusInfinity,
    /// `A → −∞`, `δ = 1`.
    MinusInfinity,
}

impl Extension {
    /// Maps `±∞` onto the limiting variants; NaN is rejected.
    pub fn from_f64(a: f64) -> Result<Self> {
        if a.is_nan() {
            return Err(invalid("A", a, "extension parameter must not be NaN"));
        }
        Ok(if a == f64::INFINITY {
            Extension::PlusInfinity
        } else if a == f64::NEG_INFINITY {
            Extension::MinusInfinity
        } else {
            Extension::Finite(a)
        })
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            Extension::Finite(a) => a,
            Extension::PlusInfinity => f64::INFINITY,
            Extension::MinusInfinity => f64::NEG_INFINITY,
        }
    }

    /// `δ = arccot(A)/π` on the branch `arccot A = π/2 − arctan A`, so that
    /// `δ ∈ (0, 1)` is continuous and decreasing for finite `A`.
    pub fn delta(&self) -> f64 {
        match *self {
            Extension::Finite(a) => 0.5 - a.atan() / PI,
            Extension::PlusInfinity => 0.0,
            Extension::MinusInfinity => 1.0,
        }
    }
}

/// One of the three attractive potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    /// `V(x) = −2πħU₀δ(x)`.
    Delta { u0: f64 },
    /// `V(x) = −πħU₀(δ(x − a) + δ(x + a))`.
    DoubleDelta { u0: f64, a: f64 },
    /// `V(x) = −α/x` with extension parameter `A`.
    CoulombLike { alpha: f64, extension: Extension },
}

impl PotentialSpec {
    /// `U₀ = 0` is accepted as the free particle.
    pub fn delta(u0: f64) -> Result<Self> {
        let spec = PotentialSpec::Delta { u0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn double_delta(u0: f64, a: f64) -> Result<Self> {
        let spec = PotentialSpec::DoubleDelta { u0, a };
        spec.validate()?;
        Ok(spec)
    }

    pub fn coulomb(alpha: f64, extension: Extension) -> Result<Self> {
        let spec = PotentialSpec::CoulombLike { alpha, extension };
        spec.validate()?;
        Ok(spec)
    }

    /// Attractive couplings only.
    pub fn validate(&self) -> Result<()> {
        match *self {
            PotentialSpec::Delta { u0 } => check_coupling("u0", u0, true),
            PotentialSpec::DoubleDelta { u0, a } => {
                check_coupling("u0", u0, true)?;
                if !(a.is_finite() && a >= 0.0) {
                    return Err(invalid("a", a, "half-separation must be finite and >= 0"));
                }
                Ok(())
            }
            PotentialSpec::CoulombLike { alpha, extension } => {
                check_coupling("alpha", alpha, false)?;
                if let Extension::Finite(a) = extension {
                    if !a.is_finite() {
                        return Err(invalid("A", a, "use the infinite variants for A = ±inf"));
                    }
                }
                Ok(())
            }
        }
    }

    /// Short name used in output records.
    pub fn name(&self) -> &'static str {
        match self {
            PotentialSpec::Delta { .. } => "delta",
            PotentialSpec::DoubleDelta { .. } => "double-delta",
            PotentialSpec::CoulombLike { .. } => "coulomb",
        }
    }

    /// Coefficient `b` of the step part `b·θ(p′ − p)`; `None` for the
    /// continuous kernels.
    pub fn step_coefficient(&self, params: &PhysicalParams) -> Option<Complex64> {
        match *self {
            PotentialSpec::CoulombLike { alpha, .. } => {
                Some(Complex64::new(0.0, -alpha / params.hbar()))
            }
            _ => None,
        }
    }

    /// The kernel with its step part removed, so that
    /// `U(p, p′) = smooth(p, p′) + b·θ(p′ − p)`.
    pub fn smooth_kernel(&self, p: f64, p_prime: f64, params: &PhysicalParams) -> Complex64 {
        match *self {
            PotentialSpec::Delta { u0 } => Complex64::new(-u0, 0.0),
            PotentialSpec::DoubleDelta { u0, a } => {
                Complex64::new(-u0 * ((a / params.hbar()) * (p - p_prime)).cos(), 0.0)
            }
            PotentialSpec::CoulombLike { alpha, extension } => {
                -(alpha / (2.0 * params.hbar())) * Complex64::new(extension.as_f64(), -1.0)
            }
        }
    }

    /// `U(p, p′)` without domain checks; the step is `θ(0) = 1/2`.
    pub fn kernel_unchecked(&self, p: f64, p_prime: f64, params: &PhysicalParams) -> Complex64 {
        let smooth = self.smooth_kernel(p, p_prime, params);
        match self.step_coefficient(params) {
            Some(b) => smooth + b * heaviside(p_prime - p),
            None => smooth,
        }
    }
}

fn check_coupling(name: &'static str, value: f64, allow_zero: bool) -> Result<()> {
    let ok = value.is_finite() && (value > 0.0 || (allow_zero && value == 0.0));
    if !ok {
        return Err(invalid(
            name,
            value,
            "coupling must be attractive (positive) and finite",
        ));
    }
    Ok(())
}

/// Heaviside step with `θ(0) = 1/2`.
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

/// Momentum-space kernel `U(p, p′)` of the potential.
pub fn kernel(
    spec: &PotentialSpec,
    p: f64,
    p_prime: f64,
    deformation: &Deformation,
    params: &PhysicalParams,
) -> Result<Complex64> {
    deformation.check_inside(p)?;
    deformation.check_inside(p_prime)?;
    if let PotentialSpec::CoulombLike {
        extension: Extension::PlusInfinity | Extension::MinusInfinity,
        ..
    } = spec
    {
        return Err(Error::Unsupported(
            "the kernel is infinite for A = ±inf; only the analytic spectrum exists".into(),
        ));
    }
    Ok(spec.kernel_unchecked(p, p_prime, params))
}

/// `max |U(p, p′) − conj(U(p′, p))|` over all node pairs.
pub fn hermiticity_defect(spec: &PotentialSpec, grid: &[f64], params: &PhysicalParams) -> f64 {
    hermiticity_defect_of(|p, pp| spec.kernel_unchecked(p, pp, params), grid)
}

/// Same check for an arbitrary two-argument kernel.
pub fn hermiticity_defect_of<K: Fn(f64, f64) -> Complex64>(kernel: K, grid: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, &p) in grid.iter().enumerate() {
        for &pp in &grid[i..] {
            worst = worst.max((kernel(p, pp) - kernel(pp, p).conj()).norm());
        }
    }
    worst
}
