//! Spectral integration and differentiation on a [`QuadratureGrid`].
//!
//! Both operators act in the reference variable `t` of the grid and are
//! exact for polynomials in `t` of degree below the grid order; the chain
//! rule through the grid jacobian carries them to momentum space.

use faer::Mat;
use num_complex::Complex64;

use super::quadrature::QuadratureGrid;
use crate::error::{Error, Result};

/// Integrals from the lower end of the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Cumulative {
    /// `∫_{lo}^{p_k} f` for every node `p_k`.
    pub at_nodes: Vec<Complex64>,
    /// `∫_{lo}^{hi} f`, equal to the plain quadrature sum.
    pub total: Complex64,
}

/// Matrix `Q` with `Σ_j Q_ij g(t_j) = ∫_{−1}^{t_i} g(t) dt` for polynomials
/// `g` of degree below `n`, on the Gauss–Legendre nodes `t`.
pub(crate) fn reference_integration_matrix(t: &[f64], w: &[f64]) -> Mat<f64> {
    let n = t.len();
    // P_k(t_j) for k = 0..=n
    let mut p = Mat::<f64>::zeros(n + 1, n);
    for (j, &x) in t.iter().enumerate() {
        p[(0, j)] = 1.0;
        if n >= 1 {
            p[(1, j)] = x;
        }
        for k in 1..n {
            let kf = k as f64;
            p[(k + 1, j)] = ((2.0 * kf + 1.0) * x * p[(k, j)] - kf * p[(k - 1, j)]) / (kf + 1.0);
        }
    }
    // antiderivative of P_k from −1, sampled at t_i
    let anti = Mat::<f64>::from_fn(n, n, |i, k| {
        if k == 0 {
            t[i] + 1.0
        } else {
            (p[(k + 1, i)] - p[(k - 1, i)]) / (2.0 * k as f64 + 1.0)
        }
    });
    // Legendre coefficients from samples
    let coeff = Mat::<f64>::from_fn(n, n, |k, j| (k as f64 + 0.5) * w[j] * p[(k, j)]);
    &anti * &coeff
}

/// Barycentric differentiation matrix on Gauss–Legendre nodes.
pub(crate) fn reference_differentiation_matrix(t: &[f64], w: &[f64]) -> Mat<f64> {
    let n = t.len();
    let lambda: Vec<f64> = (0..n)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            s * ((1.0 - t[j] * t[j]) * w[j]).sqrt()
        })
        .collect();
    let mut d = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = lambda[j] / lambda[i] / (t[i] - t[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        d[(i, i)] = diag;
    }
    d
}

fn check_len(grid: &QuadratureGrid, len: usize) -> Result<()> {
    if grid.order() != len {
        return Err(Error::LengthMismatch {
            expected: grid.order(),
            actual: len,
        });
    }
    Ok(())
}

/// Cumulative integral `∫_{lo}^{p_k} f(p) dp` of sampled values.
pub fn cumulative_integral(grid: &QuadratureGrid, samples: &[Complex64]) -> Result<Cumulative> {
    check_len(grid, samples.len())?;
    let q = reference_integration_matrix(grid.reference_nodes(), grid.reference_weights());
    let g: Vec<Complex64> = samples
        .iter()
        .zip(grid.jacobian())
        .map(|(f, j)| f * j)
        .collect();
    let n = grid.order();
    let at_nodes = (0..n)
        .map(|i| (0..n).map(|j| g[j] * q[(i, j)]).sum())
        .collect();
    let total = samples.iter().zip(grid.weights()).map(|(f, w)| f * w).sum();
    Ok(Cumulative { at_nodes, total })
}

/// `df/dp` at the nodes of `grid`.
pub fn derivative(grid: &QuadratureGrid, samples: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(grid, samples.len())?;
    let d = reference_differentiation_matrix(grid.reference_nodes(), grid.reference_weights());
    let n = grid.order();
    Ok((0..n)
        .map(|i| {
            let dt: Complex64 = (0..n).map(|j| samples[j] * d[(i, j)]).sum();
            dt / grid.jacobian()[i]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{Deformation, MomentumDomain};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn half_pi_grid(n: usize) -> QuadratureGrid {
        QuadratureGrid::gauss_legendre(
            MomentumDomain::Bounded {
                lo: -FRAC_PI_2,
                hi: FRAC_PI_2,
            },
            n,
        )
        .unwrap()
    }

    #[test]
    fn constant_integrates_to_pi() {
        let g = half_pi_grid(40);
        let cum = cumulative_integral(&g, &vec![c(1.0); 40]).unwrap();
        assert!((cum.total.re - PI).abs() < 1e-14);
        for (k, v) in cum.at_nodes.iter().enumerate() {
            assert!((v.re - (g.nodes()[k] + FRAC_PI_2)).abs() < 1e-13);
        }
    }

    #[test]
    fn odd_integrand_total_vanishes() {
        let g = half_pi_grid(64);
        let s: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&p| c(p.sin() * p.cos().powi(2)))
            .collect();
        let cum = cumulative_integral(&g, &s).unwrap();
        assert!(cum.total.norm() < 1e-12);
        // ∫_{-π/2}^{p} sin cos² = (-cos³ p)/3
        for (k, v) in cum.at_nodes.iter().enumerate() {
            let exact = -g.nodes()[k].cos().powi(3) / 3.0;
            assert!((v.re - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_profile_full_integral() {
        // ∫ dp / (tan²(√β p) + β q²) = π/(β q (1 + √β q)) at β = q = 1
        let g = half_pi_grid(200);
        let s: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&p| c(1.0 / (p.tan().powi(2) + 1.0)))
            .collect();
        let cum = cumulative_integral(&g, &s).unwrap();
        assert!((cum.total.re - FRAC_PI_2).abs() < 1e-13);
        let last = *cum.at_nodes.last().unwrap();
        assert!((last.re - cum.total.re).abs() < 1e-6);
    }

    #[test]
    fn derivative_on_tangent_grid() {
        let def = Deformation::new(0.1).unwrap();
        let g = QuadratureGrid::tangent_mapped(&def, 1.0, 120).unwrap();
        let sb = def.sqrt_beta();
        let f = |p: f64| 1.0 / ((sb * p).tan().powi(2) + 0.1);
        let df = |p: f64| {
            let t = (sb * p).tan();
            -2.0 * t * sb * (1.0 + t * t) / (t * t + 0.1).powi(2)
        };
        let s: Vec<Complex64> = g.nodes().iter().map(|&p| c(f(p))).collect();
        let d = derivative(&g, &s).unwrap();
        for (k, v) in d.iter().enumerate() {
            assert!((v.re - df(g.nodes()[k])).abs() < 1e-9, "node {k}");
        }
    }

    #[test]
    fn length_mismatch() {
        let g = half_pi_grid(8);
        assert!(matches!(
            cumulative_integral(&g, &[c(1.0); 3]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(derivative(&g, &[c(1.0); 9]).is_err());
    }
}
