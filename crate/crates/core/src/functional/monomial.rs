use crate::prelude::*;
use crate::special::{ln_binomial, ln_gamma};

/// The one-dimensional monomial sum
/// `2^{(j+k+2)/2} Σ_l C(k,l) Γ((j+l+1)/2) Γ((k−l+1)/2) a^l (1−a²)^{−(j+l+1)/2}`.
///
/// This dominates the signed-kernel integral
/// `∬ |x|^j |y|^k e^{−x²/2−y²/2} e^{axy}`; for the `e^{a|xy|}` kernel use
/// [`e_monomial_bound_abs`].
pub fn e_monomial_bound(j: u32, k: u32, a: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::Domain("monomial bound needs 0 ≤ a < 1"));
    }
    let ln_q = (1.0 - a * a).ln();
    let ln_a = a.ln();
    let mut terms = Vec::with_capacity(k as usize + 1);
    for l in 0..=k {
        if l > 0 && a == 0.0 {
            break;
        }
        let (jf, kf, lf) = (j as f64, k as f64, l as f64);
        let mut t = ln_binomial(k, l) + ln_gamma((jf + lf + 1.0) / 2.0) + ln_gamma((kf - lf + 1.0) / 2.0)
            - 0.5 * (jf + lf + 1.0) * ln_q;
        if l > 0 {
            t += lf * ln_a;
        }
        terms.push(t);
    }
    let shift = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|t| (t - shift).exp()).sum();
    Ok((0.5 * (j + k + 2) as f64 * core::f64::consts::LN_2 + shift + s.ln()).exp())
}

/// Bound for `∬ |x|^j |y|^k e^{−x²/2−y²/2} e^{a|xy|}`: twice the signed sum,
/// since the `|xy|` integrand is at most `e^{axy} + e^{−axy}`.
pub fn e_monomial_bound_abs(j: u32, k: u32, a: f64) -> Result<f64> {
    Ok(2.0 * e_monomial_bound(j, k, a)?)
}
