use faer::prelude::*;
use faer::Mat;

use crate::error::{invalid, Result};

/// Least-squares polynomial fit `y ≈ Σ_k c_k x^k`, `k = 0..=degree`.
///
/// The abscissae are rescaled to `[−1, 1]` before the QR solve.
pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(crate::error::Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() <= degree {
        return Err(invalid(
            "points",
            x.len() as f64,
            "need more points than the fit degree",
        ));
    }
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(invalid(
            "x",
            scale,
            "abscissae must be finite and not all zero",
        ));
    }
    let a = Mat::<f64>::from_fn(x.len(), degree + 1, |i, k| (x[i] / scale).powi(k as i32));
    let b = Mat::<f64>::from_fn(y.len(), 1, |i, _| y[i]);
    let sol = a.qr().solve_lstsq(&b);
    Ok((0..=degree)
        .map(|k| sol[(k, 0)] / scale.powi(k as i32))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_polynomial() {
        let x: Vec<f64> = (0..10).map(|i| 1e-3 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 3.0 * v + 40.0 * v * v).collect();
        let c = polyfit(&x, &y, 2).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-12);
        assert!((c[1] + 3.0).abs() < 1e-9);
        assert!((c[2] - 40.0).abs() < 1e-6);
    }

    #[test]
    fn too_few_points() {
        assert!(polyfit(&[1.0, 2.0], &[1.0, 2.0], 2).is_err());
    }
}
