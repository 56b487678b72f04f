//! Gauss–Legendre rules on the momentum interval and adaptive Gauss–Kronrod
//! integration.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};
use crate::kinematics::{Deformation, MomentumDomain};

/// Gauss–Legendre nodes and weights on the reference interval `(−1, 1)`,
/// nodes ascending.
pub fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for iter in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 * x.abs().max(1.0) || iter == 99 {
                dp = legendre_with_derivative(n, x).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// How reference nodes `t ∈ (−1, 1)` are mapped onto momenta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridMap {
    /// `p = lo + (t + 1)(hi − lo)/2`.
    Affine,
    /// `tan(√β p) = s·tan(πt/2)` with `s = √β·q_scale`, i.e. `p = q_scale·tan(πt/2)`
    /// when `β = 0`. Nodes cluster where a bound state of decay parameter
    /// `q_scale` has its structure, and the map covers unbounded domains.
    Tangent { q_scale: f64 },
}

/// Quadrature rule on the momentum domain: a Gauss–Legendre rule in a
/// reference variable `t`, pushed forward through a [`GridMap`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    reference_nodes: Vec<f64>,
    reference_weights: Vec<f64>,
    jacobian: Vec<f64>,
    domain: MomentumDomain,
    map: GridMap,
}

impl QuadratureGrid {
    /// Standard Gauss–Legendre rule mapped affinely onto a bounded domain.
    pub fn gauss_legendre(domain: MomentumDomain, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", n as f64, "quadrature order must be >= 2"));
        }
        let (lo, hi) = match domain {
            MomentumDomain::Bounded { lo, hi } if lo.is_finite() && hi.is_finite() && hi > lo => {
                (lo, hi)
            }
            _ => {
                return Err(Error::Unsupported(
                    "Gauss-Legendre needs a finite domain; use a tangent-mapped grid for beta = 0"
                        .into(),
                ))
            }
        };
        let (t, w) = legendre_rule(n);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let nodes = t.iter().map(|&x| mid + half * x).collect();
        let weights = w.iter().map(|&x| half * x).collect();
        Ok(Self {
            nodes,
            weights,
            reference_nodes: t,
            reference_weights: w,
            jacobian: vec![half; n],
            domain,
            map: GridMap::Affine,
        })
    }

    /// Gauss–Legendre rule on the full momentum domain through the tangent
    /// map. Works for `β = 0` as well.
    pub fn tangent_mapped(deformation: &Deformation, q_scale: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", n as f64, "quadrature order must be >= 2"));
        }
        if !(q_scale.is_finite() && q_scale > 0.0) {
            return Err(invalid(
                "q_scale",
                q_scale,
                "grid scale must be finite and > 0",
            ));
        }
        let (t, w) = legendre_rule(n);
        let mut nodes = Vec::with_capacity(n);
        let mut jacobian = Vec::with_capacity(n);
        for &x in &t {
            let (p, dp) = tangent_map(deformation, q_scale, x);
            nodes.push(p);
            jacobian.push(dp);
        }
        let weights = w.iter().zip(&jacobian).map(|(a, b)| a * b).collect();
        Ok(Self {
            nodes,
            weights,
            reference_nodes: t,
            reference_weights: w,
            jacobian,
            domain: crate::kinematics::momentum_domain(deformation),
            map: GridMap::Tangent { q_scale },
        })
    }

    /// Builds the grid of order `n` described by `map` on the momentum domain.
    pub fn build(deformation: &Deformation, map: GridMap, n: usize) -> Result<Self> {
        match map {
            GridMap::Affine => {
                Self::gauss_legendre(crate::kinematics::momentum_domain(deformation), n)
            }
            GridMap::Tangent { q_scale } => Self::tangent_mapped(deformation, q_scale, n),
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Gauss–Legendre nodes in the reference variable `t`.
    pub fn reference_nodes(&self) -> &[f64] {
        &self.reference_nodes
    }

    pub fn reference_weights(&self) -> &[f64] {
        &self.reference_weights
    }

    /// `dp/dt` at every node.
    pub fn jacobian(&self) -> &[f64] {
        &self.jacobian
    }

    pub fn domain(&self) -> MomentumDomain {
        self.domain
    }

    pub fn map(&self) -> GridMap {
        self.map
    }

    /// `Σ w_i f(p_i)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }

    /// Index of the node mirrored through the origin. Both maps are odd,
    /// so the grid is symmetric.
    pub fn mirror(&self, i: usize) -> usize {
        self.order() - 1 - i
    }
}

/// `(p(t), dp/dt)` for the tangent map.
pub(crate) fn tangent_map(deformation: &Deformation, q_scale: f64, t: f64) -> (f64, f64) {
    let v = FRAC_PI_2 * t;
    let (sin, cos) = v.sin_cos();
    if deformation.is_undeformed() {
        let p = q_scale * sin / cos;
        (p, FRAC_PI_2 * q_scale / (cos * cos))
    } else {
        let sb = deformation.sqrt_beta();
        let s = sb * q_scale;
        // atan(s tan v) computed as atan2 to stay accurate near v = ±π/2
        let p = (s * sin).atan2(cos) / sb;
        let dp = FRAC_PI_2 * s / (sb * (cos * cos + s * s * sin * sin));
        (p, dp)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive 15-point Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Stops once the summed error estimate is below `max(abs_tol, rel_tol·|I|)`.
/// The integrand is never evaluated at the endpoints.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = kronrod15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let value: f64 = parts.iter().map(|x| x.2).sum();
        let error: f64 = parts.iter().map(|x| x.3).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNotConverged {
                estimate: error,
                evaluations,
            });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            return Err(Error::QuadratureNotConverged {
                estimate: error,
                evaluations,
            });
        }
        let (v1, e1) = kronrod15(&mut f, lo, mid);
        let (v2, e2) = kronrod15(&mut f, mid, hi);
        evaluations += 30;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}
