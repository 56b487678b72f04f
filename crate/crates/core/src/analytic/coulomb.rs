//! The deformed one-dimensional Coulomb problem `V = −α/x`, with the
//! inverse coordinate fixed by the self-adjoint extension parameter `A`.
//!
//! Levels satisfy `mα/(ħq(1 + √βq)) = n + δ` with `δ = arccot(A)/π`, and
//! the eigenfunctions are `φ(p) = N e^{iΦ(p)}/(P² + q²)` where
//! `Φ′(p) = −α₀/(tan²(√βp) + βq²)`, `α₀ = 2mβα/ħ`, `Φ(0) = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::delta::decay_normalization;
use crate::error::{invalid, Error, Result};
use crate::kinematics::{Deformation, PhysicalParams};
use crate::potentials::Extension;
use crate::state::{BoundState, StateLabel, Wavefunction, DEFAULT_SAMPLES};

#[derive(Debug, Clone)]
pub struct CoulombSolution {
    /// Levels in increasing `n`, labelled by `n`.
    pub states: Vec<BoundState>,
    pub wavefunctions: Vec<Wavefunction>,
    pub delta: f64,
    /// `α₀ = 2mβα/ħ`.
    pub alpha0: f64,
    /// `φ₀ = πmα/(ħq(1 + √βq))` per level; equals `π(n + δ)`.
    pub phi0_per_state: Vec<f64>,
    pub extension: Extension,
}

/// Lowest admissible principal number: `n = 0` is excluded when `δ = 0`.
pub fn first_level(extension: Extension) -> u32 {
    if extension.delta() == 0.0 {
        1
    } else {
        0
    }
}

/// Positive root of `√βq² + q − c = 0`, `c = mα/(ħ(n + δ))`.
pub fn coulomb_q(
    alpha: f64,
    n: u32,
    delta: f64,
    deformation: &Deformation,
    params: &PhysicalParams,
) -> f64 {
    let c = params.m() * alpha / (params.hbar() * (n as f64 + delta));
    2.0 * c / (1.0 + (1.0 + 4.0 * deformation.sqrt_beta() * c).sqrt())
}

/// `atan(εx)/ε`, continuous through `ε = 0`.
fn atanc(eps: f64, x: f64) -> f64 {
    let y = eps * x;
    if y.abs() < 1e-4 {
        let y2 = y * y;
        x * (1.0 - y2 / 3.0 + y2 * y2 / 5.0)
    } else {
        y.atan() / eps
    }
}

/// `Φ(p) = −α₀ ∫₀^p dp′/(tan²(√βp′) + βq²)`.
///
/// In closed form this is `−(α₀/√β)(u − atan(tan u/s)/s)/(s² − 1)` with
/// `u = √βp`, `s = √βq`. It is evaluated as
/// `−(α₀/√β)(atanc(s − 1, X) + u)/(s(1 + s))`, `X = tan u/(s + tan²u)`,
/// which is regular at `s = 1` and continuous on the whole open domain.
pub fn coulomb_phase(
    p: f64,
    q: f64,
    alpha: f64,
    deformation: &Deformation,
    params: &PhysicalParams,
) -> f64 {
    if deformation.is_undeformed() {
        return -(2.0 * params.m() * alpha / (params.hbar() * q)) * (p / q).atan();
    }
    let sb = deformation.sqrt_beta();
    let s = sb * q;
    let u = sb * deformation.clamp(p);
    let t = u.tan();
    let x = t / (s + t * t);
    // α₀/√β = 2m√βα/ħ
    let lead = 2.0 * params.m() * sb * alpha / params.hbar();
    -lead * (atanc(s - 1.0, x) + u) / (s * (1.0 + s))
}

pub fn solve_coulomb(
    alpha: f64,
    extension: Extension,
    n_max: usize,
    deformation: &Deformation,
    params: &PhysicalParams,
) -> Result<CoulombSolution> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(invalid(
            "alpha",
            alpha,
            "Coulomb coupling must be finite and > 0",
        ));
    }
    if n_max == 0 {
        return Err(invalid(
            "n_max",
            0.0,
            "at least one level must be requested",
        ));
    }
    if let Extension::Finite(a) = extension {
        if !a.is_finite() {
            return Err(invalid("A", a, "use the infinite variants for A = ±inf"));
        }
    }
    let delta = extension.delta();
    let n0 = first_level(extension);
    let sb = deformation.sqrt_beta();
    let mut states = Vec::with_capacity(n_max);
    let mut wavefunctions = Vec::with_capacity(n_max);
    let mut phi0_per_state = Vec::with_capacity(n_max);
    for k in 0..n_max {
        let n = n0 + u32::try_from(k).map_err(|_| Error::Unsupported("too many levels".into()))?;
        let q = coulomb_q(alpha, n, delta, deformation, params);
        let target = n as f64 + delta;
        let phi0 = PI * params.m() * alpha / (params.hbar() * q * (1.0 + sb * q));
        let residual = (phi0 / PI - target).abs() / target;
        states.push(BoundState::from_q(
            q,
            StateLabel::Level(n),
            residual,
            params,
        )?);
        phi0_per_state.push(phi0);

        let norm = decay_normalization(q, deformation);
        let def = *deformation;
        let par = *params;
        wavefunctions.push(Wavefunction::new(
            def,
            q,
            norm,
            DEFAULT_SAMPLES,
            move |p| {
                Complex64::from_polar(
                    norm / def.decay_denominator(p, q),
                    coulomb_phase(p, q, alpha, &def, &par),
                )
            },
        )?);
    }
    Ok(CoulombSolution {
        states,
        wavefunctions,
        delta,
        alpha0: 2.0 * params.m() * deformation.beta() * alpha / params.hbar(),
        phi0_per_state,
        extension,
    })
}

/// Comparison of the level from the quantization condition with the
/// closed-form energy expression `−(1/(8mβ))(1 − √(1 + x))`,
/// `x = 4mα√β/(ħ(n + δ))`, and with its square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDiscrepancy {
    pub n: u32,
    pub delta: f64,
    /// `−q_n²/(2m)`.
    pub quantization_energy: f64,
    /// The expression as printed, without the square.
    pub printed_energy: f64,
    /// `−(1/(8mβ))(1 − √(1 + x))²`.
    pub squared_energy: f64,
    pub difference: f64,
    pub squared_relative_error: f64,
    /// The printed expression has the wrong sign.
    pub sign_flagged: bool,
}

pub fn coulomb_closed_form_energy_check(
    alpha: f64,
    extension: Extension,
    deformation: &Deformation,
    params: &PhysicalParams,
    n: u32,
) -> Result<EnergyDiscrepancy> {
    if deformation.is_undeformed() {
        return Err(Error::Unsupported(
            "the closed-form check needs beta > 0".into(),
        ));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(invalid(
            "alpha",
            alpha,
            "Coulomb coupling must be finite and > 0",
        ));
    }
    let delta = extension.delta();
    if n < first_level(extension) {
        return Err(invalid(
            "n",
            n as f64,
            "n = 0 is not a level when delta = 0",
        ));
    }
    let m = params.m();
    let beta = deformation.beta();
    let q = coulomb_q(alpha, n, delta, deformation, params);
    let quantization_energy = -q * q / (2.0 * m);
    let x = 4.0 * m * alpha * deformation.sqrt_beta() / (params.hbar() * (n as f64 + delta));
    // 1 − √(1 + x) = −x/(1 + √(1 + x))
    let one_minus_root = -x / (1.0 + (1.0 + x).sqrt());
    let printed_energy = -one_minus_root / (8.0 * m * beta);
    let squared_energy = -one_minus_root * one_minus_root / (8.0 * m * beta);
    Ok(EnergyDiscrepancy {
        n,
        delta,
        quantization_energy,
        printed_energy,
        squared_energy,
        difference: printed_energy - quantization_energy,
        squared_relative_error: (squared_energy - quantization_energy).abs()
            / quantization_energy.abs(),
        sign_flagged: printed_energy.signum() != quantization_energy.signum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_adaptive, QuadratureGrid};
    use proptest::prelude::*;

    fn unit() -> PhysicalParams {
        PhysicalParams::default()
    }

    fn def(beta: f64) -> Deformation {
        Deformation::new(beta).unwrap()
    }

    #[test]
    fn undeformed_ground_state() {
        let sol = solve_coulomb(
            1.0,
            Extension::Finite(0.0),
            3,
            &Deformation::undeformed(),
            &unit(),
        )
        .unwrap();
        assert_eq!(sol.delta, 0.5);
        assert!((sol.states[0].q - 2.0).abs() < 1e-15);
        assert!((sol.states[0].energy + 2.0).abs() < 1e-15);
        for (k, s) in sol.states.iter().enumerate() {
            let n = k as f64;
            assert_eq!(s.label, StateLabel::Level(k as u32));
            assert!((s.energy + 0.5 / (n + 0.5).powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn delta_zero_and_one_coincide() {
        let d = def(0.02);
        let plus = solve_coulomb(1.0, Extension::PlusInfinity, 6, &d, &unit()).unwrap();
        let minus = solve_coulomb(1.0, Extension::MinusInfinity, 6, &d, &unit()).unwrap();
        assert_eq!(plus.states[0].label, StateLabel::Level(1));
        assert_eq!(minus.states[0].label, StateLabel::Level(0));
        for (a, b) in plus.states.iter().zip(&minus.states) {
            assert!((a.energy - b.energy).abs() <= 1e-12 * a.energy.abs());
        }
    }

    #[test]
    fn quantization_residual_and_phi0() {
        for a in [-2.0, 0.0, 1.0] {
            let sol = solve_coulomb(1.3, Extension::Finite(a), 5, &def(0.005), &unit()).unwrap();
            for (k, s) in sol.states.iter().enumerate() {
                assert!(s.residual < 1e-10);
                let phi0 = sol.phi0_per_state[k];
                // φ₀ = πα₀/(2βq(1+√βq))
                let alt = PI * sol.alpha0 / (2.0 * 0.005 * s.q * (1.0 + 0.005f64.sqrt() * s.q));
                assert!((phi0 - alt).abs() < 1e-12 * phi0);
                assert!((phi0 - PI * (k as f64 + sol.delta)).abs() < 1e-10);
                // sin(φ₀ − δπ) = 0
                assert!((phi0 - PI * sol.delta).sin().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn phase_derivative_matches_kernel_solution() {
        let d = def(0.02);
        let sb = d.sqrt_beta();
        for q in [0.5, 1.0 / sb, 9.0] {
            let alpha0 = 2.0 * 0.02 * 1.0;
            for p in [-9.0, -1.0, 0.0, 0.3, 5.0, 10.5] {
                let h = 1e-5;
                let num = (coulomb_phase(p + h, q, 1.0, &d, &unit())
                    - coulomb_phase(p - h, q, 1.0, &d, &unit()))
                    / (2.0 * h);
                let exact = -alpha0 / ((sb * p).tan().powi(2) + 0.02 * q * q);
                assert!(
                    (num - exact).abs() < 1e-7 * exact.abs().max(1e-3),
                    "q {q} p {p}: {num} vs {exact}"
                );
            }
        }
        assert_eq!(coulomb_phase(0.0, 1.0, 1.0, &d, &unit()), 0.0);
    }

    #[test]
    fn phase_against_partial_fractions() {
        // Φ = −(α₀/√β)(u − atan(tan u/s)/s)/(s² − 1) away from s = 1
        let d = def(0.3);
        let sb = d.sqrt_beta();
        let q = 0.6;
        let s = sb * q;
        for p in [-2.5, -0.7, 0.4, 2.8] {
            let u = sb * p;
            let expected = -(2.0 * 0.3 / sb) * (u - (u.tan() / s).atan() / s) / (s * s - 1.0);
            assert!((coulomb_phase(p, q, 1.0, &d, &unit()) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_small_beta_limit() {
        let q = 1.3;
        for p in [-4.0, 0.5, 3.0] {
            let limit = coulomb_phase(p, q, 1.0, &Deformation::undeformed(), &unit());
            let close = coulomb_phase(p, q, 1.0, &def(1e-12), &unit());
            assert!((close - limit).abs() < 1e-5);
        }
    }

    #[test]
    fn wavefunctions_normalized_and_orthogonal() {
        let d = def(0.02);
        let sol = solve_coulomb(1.0, Extension::Finite(1.0), 4, &d, &unit()).unwrap();
        for wf in &sol.wavefunctions {
            assert!((wf.norm_squared().unwrap() - 1.0).abs() < 1e-8);
        }
        let grid = QuadratureGrid::tangent_mapped(&d, sol.states[1].q, 1200).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let ip = sol.wavefunctions[i].inner_product(&sol.wavefunctions[j], &grid);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expected).norm() < 1e-6, "<{i}|{j}> = {ip}");
            }
        }
    }

    #[test]
    fn full_integral_closed_form() {
        // ∫φ dp = (2C/α₀) sin φ₀ with C = βN
        let beta = 0.02;
        let d = def(beta);
        let sol = solve_coulomb(1.0, Extension::Finite(0.0), 3, &d, &unit()).unwrap();
        for (k, wf) in sol.wavefunctions.iter().enumerate() {
            let re =
                integrate_adaptive(|p: f64| wf.eval(p).re, -d.p_max(), d.p_max(), 1e-13, 1e-13)
                    .unwrap()
                    .value;
            let im =
                integrate_adaptive(|p: f64| wf.eval(p).im, -d.p_max(), d.p_max(), 1e-13, 1e-13)
                    .unwrap()
                    .value;
            let c = beta * wf.norm_constant();
            let closed = 2.0 * c / sol.alpha0 * sol.phi0_per_state[k].sin();
            assert!((re - closed).abs() < 1e-9, "level {k}: {re} vs {closed}");
            assert!(im.abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_energy_flags_sign() {
        let r =
            coulomb_closed_form_energy_check(1.0, Extension::Finite(0.0), &def(0.01), &unit(), 0)
                .unwrap();
        assert!(r.quantization_energy < 0.0);
        assert!(r.printed_energy > 0.0);
        assert!(r.sign_flagged);
        assert!(r.squared_relative_error < 1e-12);
        assert!(coulomb_closed_form_energy_check(
            1.0,
            Extension::PlusInfinity,
            &def(0.01),
            &unit(),
            0
        )
        .is_err());
        assert!(coulomb_closed_form_energy_check(
            1.0,
            Extension::Finite(0.0),
            &Deformation::undeformed(),
            &unit(),
            0
        )
        .is_err());
    }

    #[test]
    fn undeformed_limit_of_levels() {
        for n in 0..4u32 {
            let e = -coulomb_q(1.0, n, 0.5, &def(1e-14), &unit()).powi(2) / 2.0;
            let limit = -1.0 / (2.0 * (n as f64 + 0.5).powi(2));
            assert!((e - limit).abs() < 1e-6 * limit.abs());
        }
    }

    #[test]
    fn rejects_invalid() {
        let d = def(0.1);
        assert!(solve_coulomb(0.0, Extension::Finite(0.0), 1, &d, &unit()).is_err());
        assert!(solve_coulomb(1.0, Extension::Finite(0.0), 0, &d, &unit()).is_err());
    }

    proptest! {
        #[test]
        fn squared_form_identity(alpha in 0.05f64..5.0, a in -20.0f64..20.0, beta in 1e-6f64..2.0, n in 0u32..30, m in 0.2f64..5.0) {
            let params = PhysicalParams::new(m, 1.0).unwrap();
            let r = coulomb_closed_form_energy_check(alpha, Extension::Finite(a), &def(beta), &params, n).unwrap();
            prop_assert!(r.squared_relative_error < 1e-12);
            prop_assert!(r.sign_flagged);
        }

        #[test]
        fn phase_is_odd_and_continuous(p in -1.5f64..1.5, q in 0.1f64..10.0) {
            let d = def(1.0);
            let a = coulomb_phase(p, q, 1.0, &d, &unit());
            let b = coulomb_phase(-p, q, 1.0, &d, &unit());
            prop_assert!((a + b).abs() < 1e-12 * a.abs().max(1.0));
            let c = coulomb_phase(p + 1e-9, q, 1.0, &d, &unit());
            prop_assert!((a - c).abs() < 1e-6);
        }
    }
}
