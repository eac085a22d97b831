use crate::prelude::*;
use crate::special::{LogAccumulator, PI};

use super::eval::scaled_hermite;

/// Weight function a rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// `∫ g(x) e^{-x²} dx` over ℝ.
    Hermite,
    /// `∫_0^∞ g(x) dx` through `x = s·t/(1−t)`.
    MappedSemiInfinite,
    /// Composite Gauss–Legendre on an interval.
    LegendrePanel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Weights for the unweighted integral `∫ g(x) dx`; for Hermite rules
    /// these are `w_i e^{x_i²}`, computed without forming `e^{x_i²}`.
    pub plain_weights: Vec<f64>,
    pub kind: WeightKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Tensor-product rule on ℝⁿ: flattened points (`n` coordinates each)
    /// and product weights, plain or weighted.
    pub fn tensor(&self, n: usize, plain: bool) -> (Vec<f64>, Vec<f64>) {
        let w = if plain { &self.plain_weights } else { &self.weights };
        let m = self.nodes.len();
        let total = m.pow(n as u32);
        let mut points = Vec::with_capacity(total * n);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let mut wt = 1.0;
            for &i in &idx {
                points.push(self.nodes[i]);
                wt *= w[i];
            }
            weights.push(wt);
            for j in (0..n).rev() {
                idx[j] += 1;
                if idx[j] < m {
                    break;
                }
                idx[j] = 0;
            }
        }
        (points, weights)
    }

    /// `Σ w_i g(x_i)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * g(*x)).sum()
    }

    /// `Σ W_i g(x_i)` with the plain weights.
    pub fn integrate_plain(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.plain_weights).map(|(x, w)| w * g(*x)).sum()
    }
}

/// `m`-point Gauss–Hermite rule for the weight `e^{-x²}`.
///
/// Golub–Welsch for the starting nodes, then Newton polish on the normalized
/// recurrence. Weights come from the Christoffel function
/// `w_i = e^{-x_i²} / Σ_{k<m} h_k(x_i)²`, which keeps small weights accurate
/// to full relative precision.
pub fn gauss_hermite_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::Domain("Gauss rule needs at least one node"));
    }
    let diag = vec![0.0; m];
    let off: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let (mut nodes, _) = crate::linalg::tridiagonal_eigen(&diag, &off)?;
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (pm, pm1) = hermite_pair(m, *x);
            let deriv = (2.0 * m as f64).sqrt() * pm1 - *x * pm;
            if deriv == 0.0 {
                break;
            }
            let step = pm / deriv;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
    }
    for i in 0..m / 2 {
        let s = 0.5 * (nodes[m - 1 - i] - nodes[i]);
        nodes[i] = -s;
        nodes[m - 1 - i] = s;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::EigenSolver);
    }
    let mut weights = Vec::with_capacity(m);
    let mut plain = Vec::with_capacity(m);
    for &x in &nodes {
        let s = scaled_hermite(m - 1, x);
        let mut acc = LogAccumulator::new();
        for k in 0..m {
            acc.add_scaled(s.mantissa(k) * s.mantissa(k), 2.0 * s.offset(k));
        }
        let ln_plain = -acc.ln();
        plain.push(ln_plain.exp());
        weights.push((ln_plain - x * x).exp());
    }
    Ok(QuadratureRule { nodes, weights, plain_weights: plain, kind: WeightKind::Hermite })
}

/// `(h_m, h_{m−1})` up to a common positive factor.
fn hermite_pair(m: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..m {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            cur *= 1e-150;
            prev *= 1e-150;
        }
    }
    (cur, prev)
}

/// `m`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::Domain("Gauss rule needs at least one node"));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadratureRule {
        plain_weights: weights.clone(),
        nodes,
        weights,
        kind: WeightKind::LegendrePanel,
    })
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre: `panels` equal panels on `[a, b]`, `q` nodes each.
pub fn legendre_panels(a: f64, b: f64, panels: usize, q: usize) -> Result<QuadratureRule> {
    if !(b > a) || panels == 0 {
        return Err(Error::Domain("empty panel interval"));
    }
    let base = gauss_legendre_rule(q)?;
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * q);
    let mut weights = Vec::with_capacity(panels * q);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (t, w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(lo + 0.5 * h * (t + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    Ok(QuadratureRule {
        plain_weights: weights.clone(),
        nodes,
        weights,
        kind: WeightKind::LegendrePanel,
    })
}

/// Gauss–Legendre mapped to `[0, ∞)` by `x = s·t/(1−t)`.
pub fn mapped_half_line(m: usize, scale: f64) -> Result<QuadratureRule> {
    if !(scale > 0.0) {
        return Err(Error::Domain("mapping scale must be positive"));
    }
    let base = gauss_legendre_rule(m)?;
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for (u, w) in base.nodes.iter().zip(&base.weights) {
        let t = 0.5 * (u + 1.0);
        let one_minus = 1.0 - t;
        nodes.push(scale * t / one_minus);
        weights.push(0.5 * w * scale / (one_minus * one_minus));
    }
    Ok(QuadratureRule {
        plain_weights: weights.clone(),
        nodes,
        weights,
        kind: WeightKind::MappedSemiInfinite,
    })
}
