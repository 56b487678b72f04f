//! Single attractive delta well.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::kinematics::{Deformation, PhysicalParams};
use crate::state::{BoundState, StateLabel, Wavefunction, DEFAULT_SAMPLES};

/// The single bound state of the delta well with its eigenfunction.
#[derive(Debug, Clone)]
pub struct DeltaSolution {
    pub state: BoundState,
    pub wavefunction: Wavefunction,
}

/// Positive root of `q(1 + √β q) = 2πmU₀`.
///
/// Uses `q = 2c/(1 + √(1 + 4√β c))`, which has no cancellation for small
/// `β` and reduces to `q = 2πmU₀` at `β = 0`.
pub fn delta_q(u0: f64, deformation: &Deformation, params: &PhysicalParams) -> f64 {
    let c = 2.0 * PI * params.m() * u0;
    2.0 * c / (1.0 + (1.0 + 4.0 * deformation.sqrt_beta() * c).sqrt())
}

/// Amplitude `N` of `φ(p) = N/(P² + q²)` with unit L² norm,
/// `N = √(2/π) q^{3/2} (1 + √βq)/√(1 + 2√βq)`.
///
/// Multiplying by `β` gives the constant in front of `1/(tan²(√βp) + βq²)`.
pub fn decay_normalization(q: f64, deformation: &Deformation) -> f64 {
    let s = deformation.sqrt_beta() * q;
    (2.0 / PI).sqrt() * q.powf(1.5) * (1.0 + s) / (1.0 + 2.0 * s).sqrt()
}

pub fn solve_delta(
    u0: f64,
    deformation: &Deformation,
    params: &PhysicalParams,
) -> Result<DeltaSolution> {
    if !(u0.is_finite() && u0 > 0.0) {
        return Err(invalid("u0", u0, "delta coupling must be finite and > 0"));
    }
    let q = delta_q(u0, deformation, params);
    let c = 2.0 * PI * params.m() * u0;
    let residual = (q * (1.0 + deformation.sqrt_beta() * q) - c).abs() / c;
    let state = BoundState::from_q(q, StateLabel::Single, residual, params)?;

    let norm = decay_normalization(q, deformation);
    let def = *deformation;
    let wavefunction = Wavefunction::new(def, q, norm, DEFAULT_SAMPLES, move |p| {
        Complex64::new(norm / def.decay_denominator(p, q), 0.0)
    })?;
    Ok(DeltaSolution {
        state,
        wavefunction,
    })
}

/// Coefficients of `E = c₀ + c₁√β + c₂β + O(β^{3/2})`:
/// `(−2π²mU₀², 8π³m²U₀³, −40π⁴m³U₀⁴)`.
pub fn delta_energy_expansion(u0: f64, params: &PhysicalParams) -> (f64, f64, f64) {
    let m = params.m();
    (
        -2.0 * PI.powi(2) * m * u0.powi(2),
        8.0 * PI.powi(3) * m.powi(2) * u0.powi(3),
        -40.0 * PI.powi(4) * m.powi(3) * u0.powi(4),
    )
}
