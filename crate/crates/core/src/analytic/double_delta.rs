//! Two delta wells of strength `−πħU₀` at `x = ±a`.
//!
//! With `D(p) = P² + q²` the eigenfunctions are `cos(αp)/D` (even) and
//! `sin(αp)/D` (odd), `α = a/ħ`, and the spectral conditions read
//! `1 = mU₀ (G(0) ± G(α))` where `G(α) = ∫ cos(2αp)/D dp = β g(α)`.
//! Both sides are monotone in `q`, so each parity has at most one level.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::delta::delta_q;
use super::gfunc::{g_function, integer_index, integrate_half_period};
use crate::error::{invalid, Error, Result};
use crate::kinematics::{Deformation, PhysicalParams};
use crate::numerics::{find_root_bracketed, ROOT_TOL};
use crate::state::{BoundState, StateLabel, Wavefunction, DEFAULT_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    fn label(self) -> StateLabel {
        match self {
            Parity::Even => StateLabel::Even,
            Parity::Odd => StateLabel::Odd,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DoubleDeltaState {
    pub state: BoundState,
    pub parity: Parity,
    pub wavefunction: Wavefunction,
    /// `(φ̃₊, φ̃₋)` in `φ(p) = (φ̃₊e^{−iαp} + φ̃₋e^{iαp})/(P² + q²)`, so that
    /// `φ̃₊ = ±φ̃₋` for even and odd states.
    pub varphi: (Complex64, Complex64),
}

#[derive(Debug, Clone)]
pub struct DoubleDeltaSolution {
    /// Even state first, then the odd state if it is bound.
    pub states: Vec<DoubleDeltaState>,
    /// `n` with `a = nħ√β` when the separation is commensurate.
    pub integer_separation: Option<u32>,
}

impl DoubleDeltaSolution {
    pub fn even(&self) -> Option<&DoubleDeltaState> {
        self.states.iter().find(|s| s.parity == Parity::Even)
    }

    pub fn odd(&self) -> Option<&DoubleDeltaState> {
        self.states.iter().find(|s| s.parity == Parity::Odd)
    }
}

/// `G(α) = ∫ cos(2αp)/(P² + q²) dp`.
pub fn pair_integral(alpha: f64, q: f64, deformation: &Deformation) -> Result<f64> {
    if deformation.is_undeformed() {
        Ok(PI * (-2.0 * alpha.abs() * q).exp() / q)
    } else {
        Ok(deformation.beta() * g_function(alpha, q, deformation)?)
    }
}

/// `1 − mU₀(G(0) ± G(α))`; increasing in `q`, zero at a bound state.
pub fn spectral_condition(
    parity: Parity,
    u0: f64,
    alpha: f64,
    q: f64,
    deformation: &Deformation,
    params: &PhysicalParams,
) -> Result<f64> {
    let g0 = pair_integral(0.0, q, deformation)?;
    let ga = pair_integral(alpha, q, deformation)?;
    Ok(1.0 - params.m() * u0 * (g0 + parity.sign() * ga))
}

/// `lim_{q→0} ∫ 2sin²(αp)/(P² + q²) dp`; an odd state exists iff
/// `mU₀` times this exceeds one.
fn odd_threshold_integral(alpha: f64, deformation: &Deformation) -> Result<f64> {
    if alpha == 0.0 {
        return Ok(0.0);
    }
    if deformation.is_undeformed() {
        return Ok(2.0 * PI * alpha);
    }
    let sb = deformation.sqrt_beta();
    let k = alpha / sb;
    // 2β ∫ sin²(αp)/tan²(√βp) dp, even integrand, u = √βp
    let f = |u: f64| {
        let (sin, cos) = u.sin_cos();
        let r = (k * u).sin() / sin;
        r * r * cos * cos
    };
    let tol = 1e-14 * k * k * FRAC_PI_2;
    Ok(4.0 * sb * integrate_half_period(f, 0.0, 2.0 * k, tol)?)
}

/// `∫ trig²(αp)/(P² + q²)² dp` with `trig = cos` (even) or `sin` (odd).
fn norm_integral(parity: Parity, alpha: f64, q: f64, deformation: &Deformation) -> Result<f64> {
    let s = deformation.sqrt_beta() * q;
    let base = PI * (1.0 + 2.0 * s) / (2.0 * q.powi(3) * (1.0 + s).powi(2));
    // ∫cos(2αp)/D² = −(1/2q) ∂G(α)/∂q where a closed form of G exists
    let cross = if deformation.is_undeformed() {
        let x = 2.0 * alpha * q;
        Some(PI * (1.0 + x) * (-x).exp() / (2.0 * q.powi(3)))
    } else {
        integer_index(alpha, deformation).map(|n| {
            if n == 0 {
                return base;
            }
            let sb = deformation.sqrt_beta();
            let nf = n as f64;
            let lead = PI / (q * (1.0 + s).powi(n as i32 + 1));
            let first = if n >= 2 {
                -(nf - 1.0) * sb * (1.0 - s).powi(n as i32 - 2)
            } else {
                0.0
            };
            let second = -(1.0 - s).powi(n as i32 - 1) * (1.0 / q + (nf + 1.0) * sb / (1.0 + s));
            -lead * (first + second) / (2.0 * q)
        })
    };
    if let Some(c) = cross {
        return Ok(0.5 * (base + parity.sign() * c));
    }
    let sb = deformation.sqrt_beta();
    let beta = deformation.beta();
    let k = alpha / sb;
    let f = |u: f64| {
        let (sin, cos) = u.sin_cos();
        let t = match parity {
            Parity::Even => (k * u).cos(),
            Parity::Odd => (k * u).sin(),
        };
        let c2 = cos * cos;
        let d = sin * sin + s * s * c2;
        t * t * c2 * c2 / (d * d)
    };
    let scale = 2.0 * beta * sb;
    let tol = 1e-12 * base / scale;
    Ok(scale * integrate_half_period(f, s.atan(), 2.0 * k, tol)?)
}

fn find_state(
    parity: Parity,
    u0: f64,
    alpha: f64,
    deformation: &Deformation,
    params: &PhysicalParams,
) -> Result<Option<f64>> {
    let cond = |q: f64| spectral_condition(parity, u0, alpha, q, deformation, params);
    let hi = delta_q(u0, deformation, params);
    let f_hi = cond(hi)?;
    if f_hi <= 0.0 {
        return Ok((f_hi == 0.0).then_some(hi));
    }
    let mut lo = match parity {
        Parity::Even => delta_q(0.5 * u0, deformation, params),
        Parity::Odd => {
            if params.m() * u0 * odd_threshold_integral(alpha, deformation)? <= 1.0 {
                return Ok(None);
            }
            0.5 * hi
        }
    };
    let mut f_lo = cond(lo)?;
    let mut halvings = 0;
    while f_lo >= 0.0 {
        if f_lo == 0.0 {
            return Ok(Some(lo));
        }
        halvings += 1;
        if halvings > 200 {
            return Ok(None);
        }
        lo *= 0.5;
        f_lo = cond(lo)?;
    }
    // the condition is evaluated through a fallible quadrature; surface the
    // first error after the root search instead of inside the closure
    let mut failure = None;
    let root = find_root_bracketed(
        |q| match cond(q) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        ROOT_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    root.map(Some)
}

pub fn solve_double_delta(
    u0: f64,
    a: f64,
    deformation: &Deformation,
    params: &PhysicalParams,
) -> Result<DoubleDeltaSolution> {
    if !(u0.is_finite() && u0 > 0.0) {
        return Err(invalid(
            "u0",
            u0,
            "double-delta coupling must be finite and > 0",
        ));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(invalid("a", a, "half-separation must be finite and >= 0"));
    }
    let alpha = a / params.hbar();
    let integer_separation = integer_index(alpha, deformation);
    let mut states = Vec::with_capacity(2);
    for parity in [Parity::Even, Parity::Odd] {
        let q = if alpha == 0.0 {
            // both wells merge into the single delta; the odd state decouples
            match parity {
                Parity::Even => Some(delta_q(u0, deformation, params)),
                Parity::Odd => None,
            }
        } else {
            find_state(parity, u0, alpha, deformation, params)?
        };
        let Some(q) = q else { continue };
        let residual = spectral_condition(parity, u0, alpha, q, deformation, params)?.abs();
        let state = BoundState::from_q(q, parity.label(), residual, params)?;
        let norm = norm_integral(parity, alpha, q, deformation)?;
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Unsupported(format!(
                "degenerate double-delta norm {norm:e}"
            )));
        }
        let amp = 1.0 / norm.sqrt();
        let def = *deformation;
        let wavefunction = Wavefunction::new(def, q, amp, DEFAULT_SAMPLES, move |p| {
            let t = match parity {
                Parity::Even => (alpha * p).cos(),
                Parity::Odd => (alpha * p).sin(),
            };
            Complex64::new(amp * t / def.decay_denominator(p, q), 0.0)
        })?;
        let half = 0.5 * amp;
        let varphi = match parity {
            Parity::Even => (Complex64::new(half, 0.0), Complex64::new(half, 0.0)),
            Parity::Odd => (Complex64::new(0.0, half), Complex64::new(0.0, -half)),
        };
        states.push(DoubleDeltaState {
            state,
            parity,
            wavefunction,
            varphi,
        });
    }
    Ok(DoubleDeltaSolution {
        states,
        integer_separation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::delta::solve_delta;
    use crate::numerics::{integrate_adaptive, QuadratureGrid};
    use proptest::prelude::*;

    fn unit() -> PhysicalParams {
        PhysicalParams::default()
    }

    fn def(beta: f64) -> Deformation {
        Deformation::new(beta).unwrap()
    }

    #[test]
    fn zero_separation_is_single_delta() {
        let d = def(0.01);
        let sol = solve_double_delta(1.0, 0.0, &d, &unit()).unwrap();
        let single = solve_delta(1.0, &d, &unit()).unwrap();
        assert_eq!(sol.states.len(), 1);
        let even = sol.even().unwrap();
        assert!((even.state.q - single.state.q).abs() < 1e-10);
        assert!(sol.odd().is_none());
        for p in [-3.0, 0.0, 1.0, 10.0] {
            assert!((even.wavefunction.eval(p) - single.wavefunction.eval(p)).norm() < 1e-12);
        }
    }

    #[test]
    fn undeformed_transcendental_equation() {
        let sol = solve_double_delta(1.0, 1.0, &Deformation::undeformed(), &unit()).unwrap();
        let even = sol.even().unwrap().state.q;
        let odd = sol.odd().unwrap().state.q;
        assert!((even - PI * (1.0 + (-2.0 * even).exp())).abs() < 1e-11);
        assert!((odd - PI * (1.0 - (-2.0 * odd).exp())).abs() < 1e-11);
        assert!(even > odd);
    }

    #[test]
    fn small_beta_converges_to_undeformed_roots() {
        let exact = solve_double_delta(1.0, 1.0, &Deformation::undeformed(), &unit()).unwrap();
        let mut prev = f64::INFINITY;
        for beta in [1e-6, 1e-8] {
            let sol = solve_double_delta(1.0, 1.0, &def(beta), &unit()).unwrap();
            assert_eq!(
                sol.integer_separation,
                Some((1.0 / beta.sqrt()).round() as u32)
            );
            let err = (sol.even().unwrap().state.q - exact.even().unwrap().state.q)
                .abs()
                .max((sol.odd().unwrap().state.q - exact.odd().unwrap().state.q).abs());
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn integer_separation_uses_closed_condition() {
        // 1/(mU₀) − π/(q(1+s)) = ±π(1−s)^{n−1}/(q(1+s)^{n+1})
        let d = def(0.04);
        for n in 1..=3u32 {
            let a = n as f64 * d.sqrt_beta();
            let sol = solve_double_delta(1.0, a, &d, &unit()).unwrap();
            assert_eq!(sol.integer_separation, Some(n));
            for st in &sol.states {
                let q = st.state.q;
                let s = d.sqrt_beta() * q;
                let lhs = 1.0 - PI / (q * (1.0 + s));
                let rhs = PI * (1.0 - s).powi(n as i32 - 1) / (q * (1.0 + s).powi(n as i32 + 1));
                let sign = if st.parity == Parity::Even { 1.0 } else { -1.0 };
                assert!((lhs - sign * rhs).abs() < 1e-11, "n={n} {:?}", st.parity);
            }
        }
    }

    #[test]
    fn wavefunctions_normalized_and_parity() {
        for (beta, a) in [(0.04, 0.4), (0.04, 0.33), (0.0, 0.8), (0.5, 1.3)] {
            let d = Deformation::new(beta).unwrap();
            let sol = solve_double_delta(2.0, a, &d, &unit()).unwrap();
            assert_eq!(sol.states.len(), 2, "beta {beta} a {a}");
            for st in &sol.states {
                let n = st.wavefunction.norm_squared().unwrap();
                assert!((n - 1.0).abs() < 1e-8, "beta {beta} a {a}: {n}");
                let wf = &st.wavefunction;
                let g = wf.grid();
                for i in 0..g.order() {
                    let (x, y) = (wf.amplitudes()[i], wf.amplitudes()[g.mirror(i)]);
                    let defect = match st.parity {
                        Parity::Even => (x - y).norm(),
                        Parity::Odd => (x + y).norm(),
                    };
                    assert!(defect <= 1e-12 * x.norm().max(1e-300));
                }
            }
        }
    }

    #[test]
    fn varphi_matches_projections() {
        // φ̃± = mU₀ ∫ e^{±iαp} φ(p) dp
        let d = def(0.04);
        let u0 = 2.0;
        let a = 0.33;
        let sol = solve_double_delta(u0, a, &d, &unit()).unwrap();
        for st in &sol.states {
            let grid = QuadratureGrid::tangent_mapped(&d, st.state.q, 600).unwrap();
            let proj = |sign: f64| -> Complex64 {
                grid.nodes()
                    .iter()
                    .zip(grid.weights())
                    .map(|(&p, &w)| {
                        Complex64::from_polar(1.0, sign * a * p) * st.wavefunction.eval(p) * w
                    })
                    .sum::<Complex64>()
                    * u0
            };
            let (vp, vm) = st.varphi;
            assert!((proj(1.0) - vp).norm() < 1e-9 * vp.norm());
            assert!((proj(-1.0) - vm).norm() < 1e-9 * vm.norm());
            match st.parity {
                Parity::Even => assert_eq!(vp, vm),
                Parity::Odd => assert_eq!(vp, -vm),
            }
        }
    }

    #[test]
    fn shallow_wells_have_no_odd_state() {
        // undeformed threshold 2πmU₀a/ħ = 1
        let sol = solve_double_delta(0.1, 1.0, &Deformation::undeformed(), &unit()).unwrap();
        assert!(sol.odd().is_none());
        let sol = solve_double_delta(0.2, 1.0, &Deformation::undeformed(), &unit()).unwrap();
        assert!(sol.odd().is_some());
        let sol = solve_double_delta(0.1, 1.0, &def(0.01), &unit()).unwrap();
        assert!(sol.odd().is_none());
    }

    #[test]
    fn odd_threshold_against_direct_integral() {
        let d = def(0.3);
        let alpha = 0.77;
        let sb = d.sqrt_beta();
        let direct = integrate_adaptive(
            |p: f64| {
                let t = (sb * p).tan();
                2.0 * 0.3 * (alpha * p).sin().powi(2) / (t * t)
            },
            -d.p_max(),
            d.p_max(),
            1e-13,
            1e-13,
        )
        .unwrap()
        .value;
        let got = odd_threshold_integral(alpha, &d).unwrap();
        assert!((got - direct).abs() < 1e-10 * direct);
    }

    #[test]
    fn closed_norm_against_quadrature() {
        let d = def(0.04);
        for n in 1..=3u32 {
            let alpha = n as f64 * d.sqrt_beta();
            for parity in [Parity::Even, Parity::Odd] {
                let closed = norm_integral(parity, alpha, 1.7, &d).unwrap();
                let numeric = {
                    let sb = d.sqrt_beta();
                    let s = sb * 1.7;
                    let k = alpha / sb;
                    let f = |u: f64| {
                        let (sin, cos) = u.sin_cos();
                        let t = if parity == Parity::Even {
                            (k * u).cos()
                        } else {
                            (k * u).sin()
                        };
                        let c2 = cos * cos;
                        let den = sin * sin + s * s * c2;
                        t * t * c2 * c2 / (den * den)
                    };
                    2.0 * 0.04
                        * sb
                        * integrate_adaptive(f, 0.0, FRAC_PI_2, 1e-16, 1e-14)
                            .unwrap()
                            .value
                };
                assert!(
                    (closed - numeric).abs() < 1e-11 * closed,
                    "n={n} {parity:?}"
                );
            }
        }
    }

    #[test]
    fn rejects_invalid() {
        assert!(solve_double_delta(0.0, 1.0, &def(0.1), &unit()).is_err());
        assert!(solve_double_delta(1.0, -1.0, &def(0.1), &unit()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn even_binds_at_least_as_single_delta(u0 in 0.2f64..3.0, n in 1u32..40, beta in 0.0f64..0.05) {
            // commensurate separations; in between, g(α) can be negative
            let d = Deformation::new(beta).unwrap();
            let a = if beta == 0.0 { 0.05 * n as f64 } else { n as f64 * d.sqrt_beta() };
            let sol = solve_double_delta(u0, a, &d, &unit()).unwrap();
            let even = sol.even().unwrap().state.q;
            // per-well coupling U₀/2 in the normalization of the single well
            prop_assert!(even >= delta_q(0.5 * u0, &d, &unit()));
            prop_assert!(even <= delta_q(u0, &d, &unit()) * (1.0 + 1e-12));
            if let Some(odd) = sol.odd() {
                if d.sqrt_beta() * even < 1.0 {
                    prop_assert!(even >= odd.state.q);
                }
            }
            for st in &sol.states {
                prop_assert!(st.state.residual < 1e-10);
            }
        }
    }
}
