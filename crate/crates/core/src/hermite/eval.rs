use crate::prelude::*;

use super::MultiIndex;

/// `π^{-1/4}`.
pub(crate) const PI_M14: f64 = 0.751_125_544_464_942_5;
const RESCALE: f64 = 1e150;
#[allow(clippy::excessive_precision)]
const LN_RESCALE: f64 = 345.387_763_949_107_0;

/// `h_0 .. h_K` at one point, stored as `h_k(x) = mant[k] · e^{off[k]}`.
///
/// The Gaussian factor lives in the offset, so the values stay meaningful
/// long after `e^{-x²/2}` has underflowed.
#[derive(Debug, Clone)]
pub struct ScaledHermite {
    mant: Vec<f64>,
    off: Vec<f64>,
}

impl ScaledHermite {
    pub fn len(&self) -> usize {
        self.mant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mant.is_empty()
    }

    pub fn value(&self, k: usize) -> f64 {
        self.mant[k] * self.off[k].exp()
    }

    pub fn ln_abs(&self, k: usize) -> f64 {
        self.mant[k].abs().ln() + self.off[k]
    }

    pub fn mantissa(&self, k: usize) -> f64 {
        self.mant[k]
    }

    pub fn offset(&self, k: usize) -> f64 {
        self.off[k]
    }
}

/// Normalized recurrence
/// `h_{k+1} = √(2/(k+1)) x h_k − √(k/(k+1)) h_{k−1}` with rescaling.
pub fn scaled_hermite(kmax: usize, x: f64) -> ScaledHermite {
    let mut mant = Vec::with_capacity(kmax + 1);
    let mut off = Vec::with_capacity(kmax + 1);
    let mut shift = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = PI_M14;
    mant.push(cur);
    off.push(shift);
    for k in 0..kmax {
        let kf = k as f64;
        let mut next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        if next.abs() > RESCALE {
            next /= RESCALE;
            cur /= RESCALE;
            shift += LN_RESCALE;
        }
        mant.push(next);
        off.push(shift);
        prev = cur;
        cur = next;
    }
    ScaledHermite { mant, off }
}

/// `[h_0(x), …, h_K(x)]`; entries underflow to zero far out.
pub fn hermite_functions(kmax: usize, x: f64) -> Vec<f64> {
    let s = scaled_hermite(kmax, x);
    (0..=kmax).map(|k| s.value(k)).collect()
}

/// Hermite functions continued to a complex argument (entire in `z`).
pub fn hermite_functions_complex(kmax: usize, z: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut prev = C64::new(0.0, 0.0);
    let mut cur = (-0.5 * z * z).exp() * PI_M14;
    out.push(cur);
    for k in 0..kmax {
        let kf = k as f64;
        let next = z * cur * (2.0 / (kf + 1.0)).sqrt() - prev * (kf / (kf + 1.0)).sqrt();
        out.push(next);
        prev = cur;
        cur = next;
    }
    out
}

/// `Φ_α(x)` with an underflow flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteValue {
    pub value: f64,
    /// Set when the true value is nonzero but below the `f64` range.
    pub underflow: bool,
}

/// `Φ_α(x) = ∏ h_{α_j}(x_j)`.
pub fn hermite_eval(alpha: &MultiIndex, x: &[f64]) -> Result<HermiteValue> {
    if x.len() != alpha.dim() {
        return Err(Error::Dimension { expected: alpha.dim(), got: x.len() });
    }
    let mut sign = 1.0;
    let mut ln_abs = 0.0;
    for (&k, &xj) in alpha.entries().iter().zip(x) {
        let s = scaled_hermite(k as usize, xj);
        let m = s.mantissa(k as usize);
        if m == 0.0 {
            return Ok(HermiteValue { value: 0.0, underflow: false });
        }
        sign *= m.signum();
        ln_abs += s.ln_abs(k as usize);
    }
    if ln_abs < f64::MIN_POSITIVE.ln() {
        return Ok(HermiteValue { value: 0.0, underflow: true });
    }
    Ok(HermiteValue { value: sign * ln_abs.exp(), underflow: false })
}
