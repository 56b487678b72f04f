//! Nyström discretisation of the momentum-space Schrödinger equation
//! `T(p)φ(p) + ∫U(p, p′)φ(p′)dp′ = Eφ(p)`, used to cross-check the
//! closed-form spectra.
//!
//! The matrix is `H_ij = T(p_i)δ_ij + √w_i V_ij/√w_j`, where `V_ij` is the
//! quadrature of the kernel. Continuous kernels give `V_ij = U(p_i, p_j)w_j`.
//! The step part `b·θ(p′ − p)` of the Coulomb kernel is integrated exactly
//! through the spectral integration matrix `Q` of the grid,
//! `∫_{p_i}^{hi} φ ≈ Σ_j (w_j − Q_ij J_j)φ_j`, which keeps `H` Hermitian.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::{kinetic_unchecked, Deformation, PhysicalParams};
use crate::numerics::calculus::reference_integration_matrix;
use crate::numerics::linalg::{lowest_eigenpairs, HermitianMatrix};
use crate::numerics::{GridMap, QuadratureGrid};
use crate::potentials::{Extension, PotentialSpec};
use crate::state::Wavefunction;

pub const DEFAULT_GRID_ORDER: usize = 2000;
pub const MIN_GRID_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub grid_order: usize,
    /// Grid map; `None` picks one suited to the potential.
    pub map: Option<GridMap>,
    /// Re-solve at half the order to estimate the discretisation error.
    pub convergence: bool,
    #[doc(hidden)]
    pub flip_kernel_sign: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            grid_order: DEFAULT_GRID_ORDER,
            map: None,
            convergence: true,
            flip_kernel_sign: false,
        }
    }
}

impl OracleOptions {
    pub fn with_order(grid_order: usize) -> Self {
        Self {
            grid_order,
            ..Self::default()
        }
    }
}

/// The default grid map: affine for the delta wells, and a tangent map
/// scaled to the `k`-th Coulomb level so the whole Rydberg-like series is
/// resolved.
pub fn default_map(spec: &PotentialSpec, params: &PhysicalParams, k: usize) -> GridMap {
    match *spec {
        PotentialSpec::CoulombLike { alpha, .. } => GridMap::Tangent {
            q_scale: params.m() * alpha / (params.hbar() * k.max(1) as f64),
        },
        _ => GridMap::Affine,
    }
}

#[derive(Debug, Clone)]
pub struct DiscretizedHamiltonian {
    pub grid: QuadratureGrid,
    pub matrix: HermitianMatrix,
    pub potential: PotentialSpec,
    pub deformation: Deformation,
    pub params: PhysicalParams,
    /// Largest `|H_ij − conj(H_ji)|` before symmetrisation, relative to
    /// the largest off-diagonal entry.
    pub hermitian_defect: f64,
    flipped: bool,
}

pub fn build_hamiltonian(
    spec: &PotentialSpec,
    deformation: &Deformation,
    params: &PhysicalParams,
    n: usize,
) -> Result<DiscretizedHamiltonian> {
    let map = default_map(spec, params, 5);
    build_with_map(spec, deformation, params, n, map, false)
}

pub fn build_hamiltonian_with(
    spec: &PotentialSpec,
    deformation: &Deformation,
    params: &PhysicalParams,
    options: &OracleOptions,
    states: usize,
) -> Result<DiscretizedHamiltonian> {
    let map = options
        .map
        .unwrap_or_else(|| default_map(spec, params, states));
    build_with_map(
        spec,
        deformation,
        params,
        options.grid_order,
        map,
        options.flip_kernel_sign,
    )
}

fn build_with_map(
    spec: &PotentialSpec,
    deformation: &Deformation,
    params: &PhysicalParams,
    n: usize,
    map: GridMap,
    flip: bool,
) -> Result<DiscretizedHamiltonian> {
    if deformation.is_undeformed() {
        return Err(Error::Unsupported(
            "the oracle needs beta > 0 (compact momentum domain); use the analytic solvers for beta = 0".into(),
        ));
    }
    if n < MIN_GRID_ORDER {
        return Err(crate::error::invalid(
            "grid",
            n as f64,
            "grid order must be >= 16",
        ));
    }
    if let PotentialSpec::CoulombLike {
        extension: Extension::PlusInfinity | Extension::MinusInfinity,
        ..
    } = spec
    {
        return Err(Error::Unsupported(
            "the kernel is infinite for A = ±inf".into(),
        ));
    }
    let grid = QuadratureGrid::build(deformation, map, n)?;
    let p = grid.nodes();
    let w = grid.weights();
    let sw: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    let sign = if flip { -1.0 } else { 1.0 };

    let step = spec.step_coefficient(params).map(|b| {
        let q = reference_integration_matrix(grid.reference_nodes(), grid.reference_weights());
        (b, q)
    });
    let jac = grid.jacobian();
    let mut matrix = HermitianMatrix::from_fn(n, |i, j| {
        let mut v = spec.smooth_kernel(p[i], p[j], params) * (sw[i] * sw[j]);
        if let Some((b, q)) = &step {
            v += b * (sw[i] * sw[j] - q[(i, j)] * jac[j] * sw[i] / sw[j]);
        }
        v * sign
    });
    let mut off = 0.0f64;
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            let hij = matrix.get(i, j);
            off = off.max(hij.norm());
            defect = defect.max((hij - matrix.get(j, i).conj()).norm());
        }
    }
    for (i, &pi) in p.iter().enumerate() {
        let d = matrix.get(i, i) + kinetic_unchecked(pi, deformation, params);
        matrix.set(i, i, d);
    }
    matrix.symmetrize();
    Ok(DiscretizedHamiltonian {
        grid,
        matrix,
        potential: *spec,
        deformation: *deformation,
        params: *params,
        hermitian_defect: if off > 0.0 { defect / off } else { 0.0 },
        flipped: flip,
    })
}

/// One negative eigenvalue of the discretised problem.
#[derive(Debug, Clone)]
pub struct OracleState {
    pub energy: f64,
    /// `φ(p_i)` with `Σ w_i|φ_i|² = 1` and the largest entry real positive.
    pub amplitudes: Vec<Complex64>,
    /// `max_i |φ_i − φ_{mirror(i)}|/max|φ|` and the same with `+`.
    pub even_defect: f64,
    pub odd_defect: f64,
    /// `|E(N) − E(N/2)|` when requested.
    pub convergence: Option<f64>,
}

impl OracleState {
    /// `Some(true)` for even, `Some(false)` for odd, `None` when neither
    /// defect is below `tol`.
    pub fn parity(&self, tol: f64) -> Option<bool> {
        if self.even_defect <= tol && self.even_defect <= self.odd_defect {
            Some(true)
        } else if self.odd_defect <= tol {
            Some(false)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleSpectrum {
    pub states: Vec<OracleState>,
    pub grid_order: usize,
    pub grid: QuadratureGrid,
}

impl OracleSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    /// Weighted L² distance between state `k` and `wf` sampled on the
    /// oracle grid, with the global phase of `wf` fitted to the state.
    pub fn distance_to(&self, k: usize, wf: &Wavefunction) -> f64 {
        let phi = &self.states[k].amplitudes;
        let w = self.grid.weights();
        let other = wf.sample_at(self.grid.nodes());
        let overlap: Complex64 = other
            .iter()
            .zip(phi)
            .zip(w)
            .map(|((a, b), w)| a.conj() * b * w)
            .sum();
        let rot = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        phi.iter()
            .zip(&other)
            .zip(w)
            .map(|((a, b), w)| w * (a - b * rot).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

fn align_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let Some(big) = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
    else {
        return v;
    };
    if big.norm() > 0.0 {
        let rot = big.conj() / big.norm();
        v.iter_mut().for_each(|x| *x *= rot);
    }
    v
}

/// Up to `k` bound states (negative eigenvalues), lowest first.
pub fn bound_states(h: &DiscretizedHamiltonian, k: usize) -> Result<OracleSpectrum> {
    bound_states_with(h, k, true)
}

pub fn bound_states_with(
    h: &DiscretizedHamiltonian,
    k: usize,
    convergence: bool,
) -> Result<OracleSpectrum> {
    let n = h.grid.order();
    let eig = lowest_eigenpairs(&h.matrix, 0.0, k, true)?;
    let coarse = if convergence && !eig.is_empty() && n / 2 >= MIN_GRID_ORDER {
        let half = build_with_map(
            &h.potential,
            &h.deformation,
            &h.params,
            n / 2,
            h.grid.map(),
            h.flipped,
        )?;
        Some(lowest_eigenpairs(&half.matrix, 0.0, k, false)?.values)
    } else {
        None
    };
    let sw: Vec<f64> = h.grid.weights().iter().map(|x| x.sqrt()).collect();
    let mut states = Vec::with_capacity(eig.len());
    for idx in 0..eig.len() {
        let v = eig
            .vector(idx)
            .ok_or_else(|| Error::Eigen("missing eigenvector".into()))?;
        let phi = align_phase(v.iter().zip(&sw).map(|(x, s)| x / s).collect());
        let scale = phi
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut even = 0.0f64;
        let mut odd = 0.0f64;
        for i in 0..n {
            let m = phi[h.grid.mirror(i)];
            even = even.max((phi[i] - m).norm());
            odd = odd.max((phi[i] + m).norm());
        }
        states.push(OracleState {
            energy: eig.values[idx],
            amplitudes: phi,
            even_defect: even / scale,
            odd_defect: odd / scale,
            convergence: coarse
                .as_ref()
                .and_then(|c| c.get(idx))
                .map(|e| (e - eig.values[idx]).abs()),
        });
    }
    Ok(OracleSpectrum {
        states,
        grid_order: n,
        grid: h.grid.clone(),
    })
}

/// Solves the problem described by `options` in one call.
pub fn solve(
    spec: &PotentialSpec,
    deformation: &Deformation,
    params: &PhysicalParams,
    options: &OracleOptions,
    k: usize,
) -> Result<(DiscretizedHamiltonian, OracleSpectrum)> {
    let h = build_hamiltonian_with(spec, deformation, params, options, k)?;
    let spectrum = bound_states_with(&h, k, options.convergence)?;
    Ok((h, spectrum))
}

/// `‖(H − E)v‖/‖v‖` with `v_i = √w_i φ(p_i)`.
pub fn residual(h: &DiscretizedHamiltonian, wavefunction: &Wavefunction, energy: f64) -> f64 {
    let v: Vec<Complex64> = h
        .grid
        .nodes()
        .iter()
        .zip(h.grid.weights())
        .map(|(&p, &w)| wavefunction.eval(p) * w.sqrt())
        .collect();
    residual_of(h, &v, energy)
}

pub(crate) fn residual_of(h: &DiscretizedHamiltonian, v: &[Complex64], energy: f64) -> f64 {
    let hv = h.matrix.apply(v);
    let num: f64 = hv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - b * energy).norm_sqr())
        .sum();
    let den: f64 = v.iter().map(|b| b.norm_sqr()).sum();
    (num / den).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{solve_coulomb, solve_delta, solve_double_delta};

    fn unit() -> PhysicalParams {
        PhysicalParams::default()
    }

    fn def(beta: f64) -> Deformation {
        Deformation::new(beta).unwrap()
    }

    #[test]
    fn free_particle_has_no_bound_state() {
        let h =
            build_hamiltonian(&PotentialSpec::Delta { u0: 0.0 }, &def(0.01), &unit(), 64).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                if i != j {
                    assert_eq!(h.matrix.get(i, j), Complex64::new(0.0, 0.0));
                }
            }
            assert!(h.matrix.get(i, i).re > 0.0);
        }
        assert!(bound_states(&h, 5).unwrap().states.is_empty());
    }

    #[test]
    fn delta_single_level_and_eigenvector() {
        let d = def(0.01);
        let spec = PotentialSpec::delta(1.0).unwrap();
        let exact = solve_delta(1.0, &d, &unit()).unwrap();
        let e = exact.state.energy.abs();
        let mut prev = f64::INFINITY;
        for n in [16, 24, 32, 48, 200] {
            let h = build_hamiltonian(&spec, &d, &unit(), n).unwrap();
            assert_eq!(h.hermitian_defect, 0.0);
            let sp = bound_states(&h, 5).unwrap();
            assert_eq!(sp.states.len(), 1);
            let s = &sp.states[0];
            let err = (s.energy - exact.state.energy).abs();
            assert!(err < prev || err < 1e-12 * e, "n={n}: {err:e}");
            prev = err;
            assert_eq!(s.parity(1e-8), Some(true));
            assert_eq!(s.convergence.is_some(), n >= 32);
        }
        assert!(prev < 1e-12 * e);
        let h = build_hamiltonian(&spec, &d, &unit(), 200).unwrap();
        assert!(
            bound_states(&h, 1)
                .unwrap()
                .distance_to(0, &exact.wavefunction)
                < 1e-10
        );
    }

    #[test]
    fn zero_separation_matrix_equals_delta() {
        let d = def(0.02);
        let a = build_hamiltonian(&PotentialSpec::delta(1.0).unwrap(), &d, &unit(), 100).unwrap();
        let b = build_hamiltonian(
            &PotentialSpec::double_delta(1.0, 0.0).unwrap(),
            &d,
            &unit(),
            100,
        )
        .unwrap();
        for i in 0..100 {
            for j in 0..100 {
                assert_eq!(a.matrix.get(i, j), b.matrix.get(i, j));
            }
        }
    }

    #[test]
    fn double_delta_parity_ordering() {
        let d = def(0.04);
        let a = 2.0 * d.sqrt_beta();
        let h = build_hamiltonian(
            &PotentialSpec::double_delta(1.0, a).unwrap(),
            &d,
            &unit(),
            400,
        )
        .unwrap();
        let sp = bound_states(&h, 5).unwrap();
        let exact = solve_double_delta(1.0, a, &d, &unit()).unwrap();
        assert_eq!(sp.states.len(), exact.states.len());
        assert_eq!(sp.states[0].parity(1e-8), Some(true));
        if sp.states.len() > 1 {
            assert_eq!(sp.states[1].parity(1e-8), Some(false));
        }
    }

    #[test]
    fn coulomb_is_hermitian_and_close() {
        let d = def(0.02);
        let spec = PotentialSpec::coulomb(1.0, Extension::Finite(0.0)).unwrap();
        let opts = OracleOptions::with_order(300);
        let (h, sp) = solve(&spec, &d, &unit(), &opts, 3).unwrap();
        assert!(h.hermitian_defect < 1e-12, "{}", h.hermitian_defect);
        let exact = solve_coulomb(1.0, Extension::Finite(0.0), 3, &d, &unit()).unwrap();
        for (o, e) in sp.states.iter().zip(&exact.states) {
            assert!(
                (o.energy - e.energy).abs() < 1e-6 * e.energy.abs(),
                "{} vs {}",
                o.energy,
                e.energy
            );
        }
    }

    #[test]
    fn residual_controls() {
        let d = def(0.01);
        let spec = PotentialSpec::delta(1.0).unwrap();
        let exact = solve_delta(1.0, &d, &unit()).unwrap();
        let coarse = residual(
            &build_hamiltonian(&spec, &d, &unit(), 200).unwrap(),
            &exact.wavefunction,
            exact.state.energy,
        );
        let h = build_hamiltonian(&spec, &d, &unit(), 400).unwrap();
        let fine = residual(&h, &exact.wavefunction, exact.state.energy);
        assert!(fine < coarse);
        assert!(residual(&h, &exact.wavefunction, exact.state.energy + 0.1) >= 0.05);
    }

    #[test]
    fn coulomb_phase_is_required() {
        // dropping the phase of the eigenfunction breaks the equation
        let d = def(0.02);
        let ext = Extension::Finite(0.0);
        let spec = PotentialSpec::coulomb(1.0, ext).unwrap();
        let h =
            build_hamiltonian_with(&spec, &d, &unit(), &OracleOptions::with_order(300), 1).unwrap();
        let exact = solve_coulomb(1.0, ext, 1, &d, &unit()).unwrap();
        let wf = &exact.wavefunctions[0];
        let e = exact.states[0].energy;
        let good = residual(&h, wf, e);
        let v: Vec<Complex64> = h
            .grid
            .nodes()
            .iter()
            .zip(h.grid.weights())
            .map(|(&p, &w)| Complex64::new(wf.eval(p).norm() * w.sqrt(), 0.0))
            .collect();
        let bad = residual_of(&h, &v, e);
        assert!(good < 1e-4, "{good}");
        assert!(bad > 100.0 * good);
    }

    #[test]
    fn rejects_undeformed_and_small_grids() {
        let spec = PotentialSpec::delta(1.0).unwrap();
        assert!(build_hamiltonian(&spec, &Deformation::undeformed(), &unit(), 100).is_err());
        assert!(build_hamiltonian(&spec, &def(0.1), &unit(), 8).is_err());
    }

    #[test]
    fn flipped_kernel_loses_the_bound_state() {
        let opts = OracleOptions {
            grid_order: 200,
            flip_kernel_sign: true,
            ..OracleOptions::default()
        };
        let (_, sp) = solve(
            &PotentialSpec::delta(1.0).unwrap(),
            &def(0.01),
            &unit(),
            &opts,
            3,
        )
        .unwrap();
        assert!(sp.states.is_empty());
    }
}
