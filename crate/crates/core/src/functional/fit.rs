use crate::function::{Polynomial, TestFunction};
use crate::prelude::*;
use crate::special::{least_squares, max_abs_residual};

use super::{e_poly_quad, ka_eval};

/// Power law `value ∝ (1−a²)^{−N̂}` fitted on `ln value` against `−ln(1−a²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub samples: Vec<(f64, f64)>,
    pub exponent: f64,
    pub intercept: f64,
    /// Largest absolute deviation of `ln value` from the fitted line.
    pub residual: f64,
}

impl ScalingFit {
    /// `(−ln(1−a²), ln value)` pairs, ready for plotting.
    pub fn log_points(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|&(a, v)| (-(1.0 - a * a).ln(), v.ln())).collect()
    }
}

pub fn scaling_fit(samples: &[(f64, f64)]) -> Result<ScalingFit> {
    if samples.len() < 3 {
        return Err(Error::InsufficientData("a scaling fit needs at least three samples"));
    }
    if samples.iter().any(|&(a, v)| !(a > 0.0 && a < 1.0) || !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain("samples need 0 < a < 1 and finite positive values"));
    }
    let xs: Vec<f64> = samples.iter().map(|&(a, _)| -(1.0 - a * a).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, v)| v.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    Ok(ScalingFit {
        samples: samples.to_vec(),
        exponent: slope,
        intercept,
        residual: max_abs_residual(&xs, &ys, slope, intercept),
    })
}

/// Scaling exponent of `K_a(f)` as `a → 1`.
pub fn scaling_fit_ka(f: &TestFunction, grid: &[f64], reltol: f64) -> Result<ScalingFit> {
    let mut samples = Vec::with_capacity(grid.len());
    for &a in grid {
        let r = ka_eval(f, a, reltol)?;
        if !r.converged {
            return Err(Error::Refused("a functional sample did not converge"));
        }
        samples.push((a, r.value));
    }
    scaling_fit(&samples)
}

/// Scaling exponent of `E(R,S,a)` as `a → 1`.
pub fn scaling_fit_e(r: &Polynomial, s: &Polynomial, grid: &[f64], reltol: f64) -> Result<ScalingFit> {
    let mut samples = Vec::with_capacity(grid.len());
    for &a in grid {
        let v = e_poly_quad(r, s, a, reltol)?;
        if !v.converged {
            return Err(Error::Refused("a functional sample did not converge"));
        }
        samples.push((a, v.value));
    }
    scaling_fit(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_law_recovered() {
        let s: Vec<_> = [0.9, 0.99, 0.999].iter().map(|&a| (a, 3.0 * (1.0 - a * a).powf(-0.5))).collect();
        let fit = scaling_fit(&s).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!(scaling_fit(&s[..2]).is_err());
    }
}
