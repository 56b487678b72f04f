//! The integral `g(α) = ∫ cos(2αp)/(tan²(√βp) + βq²) dp` over the momentum
//! domain, which carries the separation dependence of the double well.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};
use crate::kinematics::Deformation;
use crate::numerics::integrate_adaptive;

fn check(q: f64, deformation: &Deformation) -> Result<()> {
    if !(q.is_finite() && q > 0.0) {
        return Err(invalid("q", q, "decay parameter must be finite and > 0"));
    }
    if deformation.is_undeformed() {
        return Err(Error::Unsupported("g is defined for beta > 0 only".into()));
    }
    Ok(())
}

/// `g(√β n)`: `π/(βq(1+s))` for `n = 0`, else `π(1−s)^{n−1}/(βq(1+s)^{n+1})`
/// with `s = √βq`.
pub fn g_function_closed(n: u32, q: f64, deformation: &Deformation) -> Result<f64> {
    check(q, deformation)?;
    let beta = deformation.beta();
    let s = deformation.sqrt_beta() * q;
    let base = PI / (beta * q * (1.0 + s));
    if n == 0 {
        return Ok(base);
    }
    Ok(base * ((1.0 - s) / (1.0 + s)).powi(n as i32 - 1) / (1.0 + s))
}

/// `g(α)` by adaptive Gauss–Kronrod on `u = √βp ∈ (0, π/2)`, using that the
/// integrand is even. The absolute error is below `1e−10`.
pub fn g_function_numeric(alpha: f64, q: f64, deformation: &Deformation) -> Result<f64> {
    check(q, deformation)?;
    if !alpha.is_finite() {
        return Err(invalid("alpha", alpha, "must be finite"));
    }
    let sb = deformation.sqrt_beta();
    let s = sb * q;
    let k = 2.0 * alpha.abs() / sb;
    // 1/(tan²u + s²) = cos²u/(sin²u + s²cos²u) avoids the overflow at π/2
    let f = |u: f64| {
        let (sin, cos) = u.sin_cos();
        (k * u).cos() * cos * cos / (sin * sin + s * s * cos * cos)
    };
    let scale = 2.0 / sb;
    let tol = (5e-12 / scale).max(1e-15 * FRAC_PI_2 / (s * (1.0 + s)));
    Ok(scale * integrate_half_period(f, s.atan(), k, tol)?)
}

/// `∫₀^{π/2} f(u) du` for an integrand with a core of width `knee` at the
/// origin and oscillations of angular frequency `k`. The range is cut at
/// the knee and then into pieces of about four periods.
pub(crate) fn integrate_half_period<F: Fn(f64) -> f64>(
    f: F,
    knee: f64,
    k: f64,
    abs_tol: f64,
) -> Result<f64> {
    let knee = knee.clamp(0.0, 0.5 * FRAC_PI_2);
    let rest = FRAC_PI_2 - knee;
    let pieces = ((rest * k / (8.0 * PI)).ceil() as usize).max(1);
    let h = rest / pieces as f64;
    let piece_tol = abs_tol / (pieces + 1) as f64;
    let mut total = 0.0;
    if knee > 0.0 {
        total += integrate_adaptive(&f, 0.0, knee, piece_tol, 1e-14)?.value;
    }
    for j in 0..pieces {
        let a = knee + h * j as f64;
        let b = if j + 1 == pieces { FRAC_PI_2 } else { a + h };
        total += integrate_adaptive(&f, a, b, piece_tol, 1e-14)?.value;
    }
    Ok(total)
}

/// `n` when `α/√β` lies within `1e−9` of a non-negative integer.
pub fn integer_index(alpha: f64, deformation: &Deformation) -> Option<u32> {
    if deformation.is_undeformed() {
        return None;
    }
    let x = alpha.abs() / deformation.sqrt_beta();
    let n = x.round();
    ((x - n).abs() <= 1e-9 * n.max(1.0) && n < u32::MAX as f64).then_some(n as u32)
}

/// `g(α)`, closed form at integer points.
pub fn g_function(alpha: f64, q: f64, deformation: &Deformation) -> Result<f64> {
    match integer_index(alpha, deformation) {
        Some(n) => g_function_closed(n, q, deformation),
        None => g_function_numeric(alpha, q, deformation),
    }
}
