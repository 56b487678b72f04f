//! Dense Hermitian eigenproblems, backed by `faer`.

use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative Hermitian defect accepted by [`eigh`] before symmetrization.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex matrix that is Hermitian up to rounding.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    inner: Mat<Complex64>,
}

impl HermitianMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(n: usize, f: F) -> Self {
        Self {
            inner: Mat::from_fn(n, n, f),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: Mat::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.inner[(i, j)] = value;
    }

    /// `max |H_ij − conj(H_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in j..n {
                worst = worst.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max |H_ij|`.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.inner[(i, j)].norm());
            }
        }
        m
    }

    /// Replaces `H` with `(H + H†)/2`.
    pub fn symmetrize(&mut self) {
        let n = self.dim();
        for j in 0..n {
            let d = self.inner[(j, j)];
            self.inner[(j, j)] = Complex64::new(d.re, 0.0);
            for i in (j + 1)..n {
                let avg = 0.5 * (self.inner[(i, j)] + self.inner[(j, i)].conj());
                self.inner[(i, j)] = avg;
                self.inner[(j, i)] = avg.conj();
            }
        }
    }

    /// `H·v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, &vj) in v.iter().enumerate() {
            if vj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.inner[(i, j)] * vj;
            }
        }
        out
    }

    fn is_real(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| self.inner[(i, j)].im == 0.0))
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    vectors: Option<Mat<Complex64>>,
}

impl Eigen {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn has_vectors(&self) -> bool {
        self.vectors.is_some()
    }

    /// The `k`-th eigenvector, if vectors were computed.
    pub fn vector(&self, k: usize) -> Option<Vec<Complex64>> {
        let v = self.vectors.as_ref()?;
        Some((0..v.nrows()).map(|i| v[(i, k)]).collect())
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(H + H†)/2` first; a relative defect
/// above [`HERMITIAN_TOL`] is rejected. Real matrices take the real
/// symmetric path.
pub fn eigh(h: &HermitianMatrix) -> Result<Eigen> {
    eigh_impl(h, true, true)
}

/// Eigenvalues only.
pub fn eigvalsh(h: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eigh_impl(h, true, false)?.values)
}

fn eigh_impl(h: &HermitianMatrix, check: bool, vectors: bool) -> Result<Eigen> {
    let mut h = h.clone();
    if check {
        let defect = h.hermitian_defect();
        let scale = h.max_abs().max(1.0);
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian {
                defect,
                tolerance: HERMITIAN_TOL * scale,
            });
        }
    }
    h.symmetrize();
    let n = h.dim();
    if h.is_real() {
        let re = Mat::<f64>::from_fn(n, n, |i, j| h.inner[(i, j)].re);
        if vectors {
            let evd = re
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| Error::Eigen(format!("{e:?}")))?;
            let s = evd.S().column_vector();
            let u = evd.U();
            Ok(Eigen {
                values: (0..n).map(|k| s[k]).collect(),
                vectors: Some(Mat::from_fn(n, n, |i, j| Complex64::new(u[(i, j)], 0.0))),
            })
        } else {
            let values = re
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| Error::Eigen(format!("{e:?}")))?;
            Ok(Eigen {
                values,
                vectors: None,
            })
        }
    } else if vectors {
        let evd = h
            .inner
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = evd.S().column_vector();
        Ok(Eigen {
            values: (0..n).map(|k| s[k].re).collect(),
            vectors: Some(evd.U().to_owned()),
        })
    } else {
        let values = h
            .inner
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        Ok(Eigen {
            values,
            vectors: None,
        })
    }
}

/// Up to `max_count` lowest eigenpairs with eigenvalue below `below`.
///
/// Matrices whose diagonal spans many orders of magnitude (the deformed
/// kinetic energy grows like `tan²` towards the cutoff) lose the small
/// eigenvalues to rounding in a direct solve, whose absolute error is
/// `ε‖H‖`. Here `H − σ` is factorized with a shift `σ` below the
/// Gershgorin bound and the resolvent `(H − σ)⁻¹` is diagonalized instead;
/// its dominant eigenvalues `1/(E − σ)` are the wanted low-lying ones.
pub fn lowest_eigenpairs(
    h: &HermitianMatrix,
    below: f64,
    max_count: usize,
    vectors: bool,
) -> Result<Eigen> {
    let n = h.dim();
    let defect = h.hermitian_defect();
    let scale = h.max_abs().max(1.0);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            defect,
            tolerance: HERMITIAN_TOL * scale,
        });
    }
    let mut h = h.clone();
    h.symmetrize();

    let gershgorin = (0..n)
        .map(|i| {
            let off: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| h.inner[(i, j)].norm())
                .sum();
            h.inner[(i, i)].re - off
        })
        .fold(f64::INFINITY, f64::min);
    let sigma = gershgorin - (1.0 + 0.01 * gershgorin.abs());

    let mut shifted = h.inner.clone();
    for i in 0..n {
        shifted[(i, i)] -= Complex64::new(sigma, 0.0);
    }
    let resolvent = if h.is_real() {
        let re = Mat::<f64>::from_fn(n, n, |i, j| shifted[(i, j)].re);
        let inv = re
            .llt(Side::Lower)
            .map_err(|e| Error::Eigen(format!("shifted matrix not positive definite: {e:?}")))?
            .inverse();
        HermitianMatrix::from_fn(n, |i, j| Complex64::new(inv[(i, j)], 0.0))
    } else {
        let inv = shifted
            .llt(Side::Lower)
            .map_err(|e| Error::Eigen(format!("shifted matrix not positive definite: {e:?}")))?
            .inverse();
        HermitianMatrix { inner: inv }
    };

    let eig = eigh_impl(&resolvent, false, vectors)?;
    let mut values = Vec::new();
    let mut columns = Vec::new();
    for k in (0..n).rev() {
        let mu = eig.values[k];
        if mu <= 0.0 || values.len() >= max_count {
            break;
        }
        let e = sigma + 1.0 / mu;
        if e >= below {
            break;
        }
        values.push(e);
        columns.push(k);
    }
    let vectors = eig
        .vectors
        .as_ref()
        .map(|v| Mat::from_fn(n, columns.len(), |i, c| v[(i, columns[c])]));
    Ok(Eigen { values, vectors })
}
