use crate::prelude::*;
use crate::special::PI;

use super::hermite_functions;

/// Closed-form Mehler kernel `Σ_α r^{|α|} Φ_α(x) Φ_α(y)`.
pub fn mehler_kernel(r: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check(r, x, y)?;
    let n = x.len() as f64;
    let q = 1.0 - r * r;
    let xx: f64 = x.iter().map(|v| v * v).sum();
    let yy: f64 = y.iter().map(|v| v * v).sum();
    let xy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let expo = -0.5 * ((1.0 + r * r) / q) * (xx + yy) + (2.0 * r / q) * xy;
    Ok((PI * q).powf(-n / 2.0) * expo.exp())
}

/// Truncated sum over `|α| ≤ K`.
pub fn mehler_partial_sum(r: f64, x: &[f64], y: &[f64], k: u32) -> Result<f64> {
    check(r, x, y)?;
    let k = k as usize;
    // by_degree[d] = Σ_{|α| = d, first j axes} Φ_α(x) Φ_α(y)
    let mut by_degree = vec![0.0; k + 1];
    by_degree[0] = 1.0;
    for (&xj, &yj) in x.iter().zip(y) {
        let hx = hermite_functions(k, xj);
        let hy = hermite_functions(k, yj);
        let prod: Vec<f64> = hx.iter().zip(&hy).map(|(a, b)| a * b).collect();
        let mut next = vec![0.0; k + 1];
        for (d, acc) in next.iter_mut().enumerate() {
            *acc = (0..=d).map(|i| by_degree[d - i] * prod[i]).sum();
        }
        by_degree = next;
    }
    let mut s = 0.0;
    let mut rp = 1.0;
    for v in by_degree {
        s += rp * v;
        rp *= r;
    }
    Ok(s)
}

fn check(r: f64, x: &[f64], y: &[f64]) -> Result<()> {
    if !(r.abs() < 1.0) {
        return Err(Error::Domain("Mehler parameter must satisfy |r| < 1"));
    }
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Dimension { expected: x.len().max(1), got: y.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_parameter_and_origin() {
        let k = mehler_kernel(0.0, &[0.4], &[-1.1]).unwrap();
        assert!((k - PI.powf(-0.5) * (-(0.16 + 1.21) / 2.0f64).exp()).abs() < 1e-15);
        let r: f64 = 0.3;
        let k0 = mehler_kernel(r, &[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!((k0 - 1.0 / (PI * (1.0 - r * r))).abs() < 1e-14);
        assert!(mehler_kernel(1.0, &[0.0], &[0.0]).is_err());
    }

    #[test]
    fn partial_sum_converges() {
        let k = mehler_kernel(0.5, &[0.3], &[0.3]).unwrap();
        let s = mehler_partial_sum(0.5, &[0.3], &[0.3], 40).unwrap();
        assert!((k - s).abs() < 1e-10);
        let k2 = mehler_kernel(0.4, &[0.3, -0.2], &[0.1, 0.5]).unwrap();
        let s2 = mehler_partial_sum(0.4, &[0.3, -0.2], &[0.1, 0.5], 40).unwrap();
        assert!((k2 - s2).abs() < 1e-12);
    }
}
