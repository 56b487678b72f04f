//! The position operator `X = iħ d/dp` and its inverse
//! `(1/X)φ(p) = −(i/ħ)∫_{lo}^{p} φ + c[φ]`, `c[φ] = ((i + A)/2ħ)∫φ`,
//! acting on functions sampled on a quadrature grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::PhysicalParams;
use crate::numerics::{cumulative_integral, derivative};
use crate::potentials::Extension;
use crate::state::GridFunction;

/// `c[φ] = ((i + A)/2ħ) ∫φ dp`.
pub fn inverse_x_constant(
    total: Complex64,
    extension: Extension,
    params: &PhysicalParams,
) -> Result<Complex64> {
    let Extension::Finite(a) = extension else {
        return Err(Error::Unsupported(
            "1/X has no finite constant term for A = ±inf".into(),
        ));
    };
    Ok(Complex64::new(a, 1.0) * total / (2.0 * params.hbar()))
}

pub fn apply_inverse_x(
    f: &GridFunction,
    extension: Extension,
    params: &PhysicalParams,
) -> Result<GridFunction> {
    let cumulative = cumulative_integral(&f.grid, &f.values)?;
    let c = inverse_x_constant(cumulative.total, extension, params)?;
    let k = Complex64::new(0.0, -1.0 / params.hbar());
    Ok(GridFunction {
        grid: f.grid.clone(),
        values: cumulative.at_nodes.iter().map(|j| k * j + c).collect(),
    })
}

pub fn apply_x(f: &GridFunction, params: &PhysicalParams) -> Result<GridFunction> {
    let d = derivative(&f.grid, &f.values)?;
    let k = Complex64::new(0.0, params.hbar());
    Ok(GridFunction {
        grid: f.grid.clone(),
        values: d.into_iter().map(|v| k * v).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::coulomb::solve_coulomb;
    use crate::kinematics::Deformation;

    #[test]
    fn zero_maps_to_zero() {
        let d = Deformation::new(0.02).unwrap();
        let grid = crate::numerics::QuadratureGrid::tangent_mapped(&d, 1.0, 64).unwrap();
        let zero = GridFunction::zeros(grid);
        let out =
            apply_inverse_x(&zero, Extension::Finite(0.3), &PhysicalParams::default()).unwrap();
        assert!(out.values.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
        assert!(
            apply_inverse_x(&zero, Extension::PlusInfinity, &PhysicalParams::default()).is_err()
        );
    }

    #[test]
    fn inverse_of_coulomb_eigenfunctions() {
        let params = PhysicalParams::default();
        let d = Deformation::new(0.02).unwrap();
        let ext = Extension::Finite(0.0);
        let sol = solve_coulomb(1.0, ext, 3, &d, &params).unwrap();
        for wf in &sol.wavefunctions {
            let f = GridFunction::from(wf);
            let a = apply_x(&apply_inverse_x(&f, ext, &params).unwrap(), &params).unwrap();
            let b = apply_inverse_x(&apply_x(&f, &params).unwrap(), ext, &params).unwrap();
            assert!(f.l2_distance(&a.values) < 1e-6);
            assert!(f.l2_distance(&b.values) < 1e-6);
        }
    }

    #[test]
    fn constant_term_closed_form() {
        // c[φ] = ((i + A)/2ħ)(2C/α₀) sin φ₀
        let params = PhysicalParams::default();
        let beta = 0.02;
        let d = Deformation::new(beta).unwrap();
        let a = 1.0;
        let ext = Extension::Finite(a);
        let sol = solve_coulomb(1.0, ext, 1, &d, &params).unwrap();
        let wf = &sol.wavefunctions[0];
        let cum = cumulative_integral(wf.grid(), wf.amplitudes()).unwrap();
        let got = inverse_x_constant(cum.total, ext, &params).unwrap();
        let closed = 2.0 * beta * wf.norm_constant() / sol.alpha0 * sol.phi0_per_state[0].sin();
        let expected = Complex64::new(a, 1.0) * closed / 2.0;
        assert!((got - expected).norm() < 1e-9 * expected.norm());
    }
}
