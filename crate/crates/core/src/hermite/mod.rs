//! Hermite functions, Gauss rules, finite Hermite expansions and Mehler's kernel.

mod eval;
mod expansion;
mod index;
mod mehler;
mod quadrature;

pub use eval::{
    hermite_eval, hermite_functions, hermite_functions_complex, scaled_hermite, HermiteValue,
    ScaledHermite,
};
pub use expansion::{fourier_diagonal, neg_i_pow, project, synthesize, HermiteExpansion, Projection, PRUNE};
pub use index::{multiindex_enumerate, MultiIndex};
pub use mehler::{mehler_kernel, mehler_partial_sum};
pub use quadrature::{
    gauss_hermite_rule, gauss_legendre_rule, legendre_panels, mapped_half_line, QuadratureRule,
    WeightKind,
};

use crate::prelude::*;

/// `max |⟨Φ_α, Φ_β⟩ − δ_{αβ}|` over `|α|, |β| ≤ D` with an `m`-point tensor
/// Gauss–Hermite rule (exact when `m > D`).
pub fn orthonormality_defect(n: usize, max_degree: u32, m: usize) -> Result<f64> {
    let rule = gauss_hermite_rule(m)?;
    let (pts, w) = rule.tensor(n, true);
    let idx = multiindex_enumerate(n, max_degree);
    let mut vals = Vec::with_capacity(idx.len());
    for a in &idx {
        let mut row = Vec::with_capacity(w.len());
        for x in pts.chunks(n) {
            row.push(hermite_eval(a, x)?.value);
        }
        vals.push(row);
    }
    let mut worst: f64 = 0.0;
    for i in 0..idx.len() {
        for j in i..idx.len() {
            let ip: f64 = vals[i].iter().zip(&vals[j]).zip(&w).map(|((a, b), w)| a * b * w).sum();
            let delta = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - delta).abs());
        }
    }
    Ok(worst)
}
