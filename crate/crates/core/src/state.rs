//! Bound states and momentum-space eigenfunctions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::kinematics::{Deformation, PhysicalParams};
use crate::numerics::quadrature::{integrate_adaptive, tangent_map};
use crate::numerics::QuadratureGrid;

/// Number of nodes used to sample returned eigenfunctions.
pub const DEFAULT_SAMPLES: usize = 400;

/// Quantum label of a bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateLabel {
    /// The single level of the delta well.
    Single,
    Even,
    Odd,
    /// Principal number of the Coulomb-like spectrum.
    Level(u32),
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Single => f.write_str("single"),
            StateLabel::Even => f.write_str("even"),
            StateLabel::Odd => f.write_str("odd"),
            StateLabel::Level(n) => write!(f, "n={n}"),
        }
    }
}

/// A bound state `E = −q²/(2m) < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub q: f64,
    pub label: StateLabel,
    /// Dimensionless defect of the quantization condition at `q`.
    pub residual: f64,
}

impl BoundState {
    pub fn from_q(
        q: f64,
        label: StateLabel,
        residual: f64,
        params: &PhysicalParams,
    ) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(invalid("q", q, "decay parameter must be finite and > 0"));
        }
        Ok(Self {
            energy: -q * q / (2.0 * params.m()),
            q,
            label,
            residual,
        })
    }
}

/// One sample of a wavefunction on its quadrature grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub node: f64,
    pub weight: f64,
    pub amplitude: Complex64,
}

type Evaluator = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Normalized momentum-space eigenfunction.
///
/// Carries a closed-form evaluator valid on the open momentum domain and
/// its samples on a tangent-mapped Gauss–Legendre grid scaled to the
/// state's decay parameter.
#[derive(Clone)]
pub struct Wavefunction {
    evaluator: Evaluator,
    grid: QuadratureGrid,
    amplitudes: Vec<Complex64>,
    norm_constant: f64,
    deformation: Deformation,
    q: f64,
}

impl fmt::Debug for Wavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Wavefunction")
            .field("norm_constant", &self.norm_constant)
            .field("q", &self.q)
            .field("beta", &self.deformation.beta())
            .field("samples", &self.amplitudes.len())
            .finish()
    }
}

impl Wavefunction {
    pub(crate) fn new<F>(
        deformation: Deformation,
        q: f64,
        norm_constant: f64,
        samples: usize,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        let grid = QuadratureGrid::tangent_mapped(&deformation, q, samples)?;
        let evaluator: Evaluator = Arc::new(f);
        let amplitudes = grid.nodes().iter().map(|&p| evaluator(p)).collect();
        Ok(Self {
            evaluator,
            grid,
            amplitudes,
            norm_constant,
            deformation,
            q,
        })
    }

    /// `φ(p)`, with `p` clamped just inside the cutoff.
    pub fn eval(&self, p: f64) -> Complex64 {
        (self.evaluator)(self.deformation.clamp(p))
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn deformation(&self) -> &Deformation {
        &self.deformation
    }

    /// Decay parameter that sets the sampling grid.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn samples(&self) -> impl Iterator<Item = Sample> + '_ {
        self.grid
            .nodes()
            .iter()
            .zip(self.grid.weights())
            .zip(&self.amplitudes)
            .map(|((&node, &weight), &amplitude)| Sample {
                node,
                weight,
                amplitude,
            })
    }

    /// Values at arbitrary nodes.
    pub fn sample_at(&self, nodes: &[f64]) -> Vec<Complex64> {
        nodes.iter().map(|&p| self.eval(p)).collect()
    }

    /// `Σ w_i |φ(p_i)|²` on the sampling grid.
    pub fn grid_norm_squared(&self) -> f64 {
        self.samples()
            .map(|s| s.weight * s.amplitude.norm_sqr())
            .sum()
    }

    /// `∫|φ|² dp` by adaptive Gauss–Kronrod through the tangent map.
    pub fn norm_squared(&self) -> Result<f64> {
        let def = self.deformation;
        let q = self.q;
        let f = |t: f64| {
            let (p, dp) = tangent_map(&def, q, t);
            (self.evaluator)(p).norm_sqr() * dp
        };
        Ok(integrate_adaptive(f, -1.0, 1.0, 1e-11, 1e-12)?.value)
    }

    /// `⟨self, other⟩ = ∫ conj(φ) ψ dp` on `grid`.
    pub fn inner_product(&self, other: &Wavefunction, grid: &QuadratureGrid) -> Complex64 {
        grid.nodes()
            .iter()
            .zip(grid.weights())
            .map(|(&p, &w)| self.eval(p).conj() * other.eval(p) * w)
            .sum()
    }
}

/// Sampled complex function on a quadrature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: QuadratureGrid,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(grid: QuadratureGrid) -> Self {
        let n = grid.order();
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Weighted L² distance to another function sampled on the same grid.
    pub fn l2_distance(&self, other: &[Complex64]) -> f64 {
        self.values
            .iter()
            .zip(other)
            .zip(self.grid.weights())
            .map(|((a, b), w)| w * (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(a, w)| w * a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl From<&Wavefunction> for GridFunction {
    fn from(wf: &Wavefunction) -> Self {
        Self {
            grid: wf.grid.clone(),
            values: wf.amplitudes.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_from_q() {
        let params = PhysicalParams::new(2.0, 1.0).unwrap();
        let s = BoundState::from_q(3.0, StateLabel::Even, 0.0, &params).unwrap();
        assert_eq!(s.energy, -9.0 / 4.0);
        assert!(BoundState::from_q(0.0, StateLabel::Single, 0.0, &params).is_err());
    }

    #[test]
    fn labels_display() {
        assert_eq!(StateLabel::Level(3).to_string(), "n=3");
        assert_eq!(StateLabel::Odd.to_string(), "odd");
    }

    #[test]
    fn lorentzian_is_normalized() {
        // undeformed delta state: √(2/π) q^{3/2}/(p² + q²)
        let q: f64 = 1.7;
        let c = (2.0 / std::f64::consts::PI).sqrt() * q.powf(1.5);
        let wf = Wavefunction::new(Deformation::undeformed(), q, c, 64, move |p| {
            Complex64::new(c / (p * p + q * q), 0.0)
        })
        .unwrap();
        assert!((wf.grid_norm_squared() - 1.0).abs() < 1e-12);
        assert!((wf.norm_squared().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(wf.samples().count(), 64);
    }
}
