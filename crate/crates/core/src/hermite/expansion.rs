use crate::prelude::*;

use super::eval::scaled_hermite;
use super::{gauss_hermite_rule, multiindex_enumerate, MultiIndex};

/// Coefficients below this magnitude are dropped on construction.
pub const PRUNE: f64 = 1e-14;

/// Finite expansion `Σ c_α Φ_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, C64>,
    maxdeg: u32,
}

impl HermiteExpansion {
    /// Empty expansion (the zero function).
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be at least 1"));
        }
        Ok(Self { dim, coeffs: BTreeMap::new(), maxdeg: 0 })
    }

    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (MultiIndex, C64)>) -> Result<Self> {
        let mut e = Self::zero(dim)?;
        for (a, c) in pairs {
            e.insert(a, c)?;
        }
        Ok(e)
    }

    /// The single basis function `Φ_α`.
    pub fn basis(alpha: MultiIndex) -> Self {
        let dim = alpha.dim();
        let maxdeg = alpha.degree();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(alpha, C64::new(1.0, 0.0));
        Self { dim, coeffs, maxdeg }
    }

    /// Adds `c` to the coefficient of `α`, pruning if the result is negligible.
    pub fn insert(&mut self, alpha: MultiIndex, c: C64) -> Result<()> {
        if alpha.dim() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: alpha.dim() });
        }
        let total = self.coeffs.get(&alpha).copied().unwrap_or_default() + c;
        if total.norm() < PRUNE {
            self.coeffs.remove(&alpha);
        } else {
            self.maxdeg = self.maxdeg.max(alpha.degree());
            self.coeffs.insert(alpha, total);
        }
        Ok(())
    }

    /// Raises the declared degree bound.
    pub fn with_maxdeg(mut self, d: u32) -> Result<Self> {
        if self.coeffs.keys().any(|a| a.degree() > d) {
            return Err(Error::Precondition("declared degree below an existing index"));
        }
        self.maxdeg = d;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn maxdeg(&self) -> u32 {
        self.maxdeg
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, alpha: &MultiIndex) -> C64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    /// Coefficients in graded-lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.coeffs.iter()
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, C64> {
        &self.coeffs
    }

    /// Parseval: `‖f‖₂² = Σ |c_α|²`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::max_entry).max().unwrap_or(0)
    }

    /// Coefficientwise map, re-pruned.
    pub fn map(&self, f: impl Fn(&MultiIndex, C64) -> C64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(a, c)| (a.clone(), f(a, *c)))
            .filter(|(_, c)| c.norm() >= PRUNE)
            .collect();
        Self { dim: self.dim, coeffs, maxdeg: self.maxdeg }
    }

    pub fn scaled(&self, s: C64) -> Self {
        self.map(|_, c| c * s)
    }

    /// `Σ c_α Φ_α(x)`.
    pub fn eval(&self, x: &[f64]) -> C64 {
        let (ln_abs, unit) = self.eval_log(x);
        if ln_abs == f64::NEG_INFINITY {
            return C64::new(0.0, 0.0);
        }
        unit * ln_abs.exp()
    }

    /// `ln |f(x)|`; stays finite where `f(x)` itself underflows.
    pub fn ln_abs(&self, x: &[f64]) -> f64 {
        self.eval_log(x).0
    }

    /// `(ln|f(x)|, f(x)/|f(x)|)`.
    pub fn eval_log(&self, x: &[f64]) -> (f64, C64) {
        debug_assert_eq!(x.len(), self.dim);
        if self.coeffs.is_empty() {
            return (f64::NEG_INFINITY, C64::new(0.0, 0.0));
        }
        let kmax = self.max_entry() as usize;
        let tables: Vec<_> = x
            .iter()
            .map(|&xj| {
                let s = scaled_hermite(kmax, xj);
                (0..=kmax)
                    .map(|k| (s.mantissa(k).abs().ln() + s.offset(k), s.mantissa(k).signum()))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut terms = Vec::with_capacity(self.coeffs.len());
        let mut shift = f64::NEG_INFINITY;
        for (a, c) in &self.coeffs {
            let mut ln = c.norm().ln();
            let mut sign = 1.0;
            for (t, &k) in tables.iter().zip(a.entries()) {
                ln += t[k as usize].0;
                sign *= t[k as usize].1;
            }
            if ln > shift {
                shift = ln;
            }
            terms.push((ln, c / c.norm() * sign));
        }
        if shift == f64::NEG_INFINITY {
            return (shift, C64::new(0.0, 0.0));
        }
        let mut re = crate::special::Neumaier::new();
        let mut im = crate::special::Neumaier::new();
        for (ln, u) in terms {
            let s = (ln - shift).exp();
            re.add(u.re * s);
            im.add(u.im * s);
        }
        let sum = C64::new(re.value(), im.value());
        let mag = sum.norm();
        if mag == 0.0 {
            return (f64::NEG_INFINITY, C64::new(0.0, 0.0));
        }
        (shift + mag.ln(), sum / mag)
    }

    /// Evaluation at a complex point via the entire continuation of `Φ_α`.
    pub fn eval_complex(&self, z: &[C64]) -> C64 {
        let kmax = self.max_entry() as usize;
        let tables: Vec<_> = z
            .iter()
            .map(|&zj| super::hermite_functions_complex(kmax, zj))
            .collect();
        let mut acc = C64::new(0.0, 0.0);
        for (a, c) in &self.coeffs {
            let mut term = *c;
            for (t, &k) in tables.iter().zip(a.entries()) {
                term *= t[k as usize];
            }
            acc += term;
        }
        acc
    }
}

/// `Σ c_α Φ_α(x)`.
pub fn synthesize(e: &HermiteExpansion, x: &[f64]) -> C64 {
    e.eval(x)
}

/// Exact Fourier action `c_α ↦ (−i)^{|α|} c_α`.
pub fn fourier_diagonal(e: &HermiteExpansion) -> HermiteExpansion {
    e.map(|a, c| times_neg_i_pow(c, a.degree()))
}

/// `(−i)^k`.
pub fn neg_i_pow(k: u32) -> C64 {
    times_neg_i_pow(C64::new(1.0, 0.0), k)
}

/// `c · (−i)^k` by component swaps, with no rounding.
pub(crate) fn times_neg_i_pow(c: C64, k: u32) -> C64 {
    match k % 4 {
        0 => c,
        1 => C64::new(c.im, -c.re),
        2 => C64::new(-c.re, -c.im),
        _ => C64::new(-c.im, c.re),
    }
}

/// Result of projecting a sampled function onto `{Φ_α : |α| ≤ D}`.
#[derive(Debug, Clone)]
pub struct Projection {
    pub expansion: HermiteExpansion,
    pub converged: bool,
    /// Largest coefficient change between the last two node counts.
    pub max_change: f64,
    /// Nodes per axis of the accepted rule.
    pub nodes: usize,
}

const MAX_TENSOR_POINTS: usize = 1 << 20;

/// `(f, Φ_α)` for `|α| ≤ D` by tensor Gauss–Hermite, doubling `m` until no
/// coefficient moves by more than `tol`.
pub fn project(
    f: &dyn Fn(&[f64]) -> C64,
    n: usize,
    max_degree: u32,
    m: usize,
    tol: f64,
) -> Result<Projection> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1"));
    }
    let mut m = m.max(max_degree as usize + 1);
    let indices = multiindex_enumerate(n, max_degree);
    let mut prev = project_once(f, n, max_degree, m, &indices)?;
    loop {
        let next_m = 2 * m;
        if next_m.checked_pow(n as u32).is_none_or(|p| p > MAX_TENSOR_POINTS) {
            let expansion = HermiteExpansion::from_pairs(n, indices.iter().cloned().zip(prev))?
                .with_maxdeg(max_degree)?;
            return Ok(Projection { expansion, converged: false, max_change: f64::INFINITY, nodes: m });
        }
        let next = project_once(f, n, max_degree, next_m, &indices)?;
        let change = prev.iter().zip(&next).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if change <= tol {
            let expansion = HermiteExpansion::from_pairs(n, indices.iter().cloned().zip(next))?
                .with_maxdeg(max_degree)?;
            return Ok(Projection { expansion, converged: true, max_change: change, nodes: next_m });
        }
        prev = next;
        m = next_m;
    }
}

/// Single tensor-rule projection, contracted one axis at a time.
fn project_once(
    f: &dyn Fn(&[f64]) -> C64,
    n: usize,
    max_degree: u32,
    m: usize,
    indices: &[MultiIndex],
) -> Result<Vec<C64>> {
    let rule = gauss_hermite_rule(m)?;
    let kdim = max_degree as usize + 1;
    // table[k][i] = W_i h_k(x_i)
    let table: Vec<Vec<f64>> = {
        let mut t = vec![vec![0.0; m]; kdim];
        for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.plain_weights).enumerate() {
            let s = scaled_hermite(kdim - 1, x);
            for (k, row) in t.iter_mut().enumerate() {
                row[i] = w * s.value(k);
            }
        }
        t
    };
    let total = m.pow(n as u32);
    let mut data = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    let mut point = vec![0.0; n];
    for _ in 0..total {
        for (p, &i) in point.iter_mut().zip(&idx) {
            *p = rule.nodes[i];
        }
        data.push(f(&point));
        for j in (0..n).rev() {
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
        }
    }
    let mut dims = vec![m; n];
    for axis in 0..n {
        data = contract_axis(&data, &dims, axis, &table);
        dims[axis] = kdim;
    }
    let strides: Vec<usize> = (0..n).map(|j| kdim.pow((n - 1 - j) as u32)).collect();
    Ok(indices
        .iter()
        .map(|a| {
            let off: usize = a.entries().iter().zip(&strides).map(|(&k, s)| k as usize * s).sum();
            data[off]
        })
        .collect())
}

fn contract_axis(data: &[C64], dims: &[usize], axis: usize, table: &[Vec<f64>]) -> Vec<C64> {
    let outer: usize = dims[..axis].iter().product();
    let inner: usize = dims[axis + 1..].iter().product();
    let len = dims[axis];
    let kdim = table.len();
    let mut out = vec![C64::new(0.0, 0.0); outer * kdim * inner];
    for o in 0..outer {
        for (k, row) in table.iter().enumerate() {
            let dst = &mut out[(o * kdim + k) * inner..(o * kdim + k + 1) * inner];
            for (i, &w) in row.iter().enumerate().take(len) {
                if w == 0.0 {
                    continue;
                }
                let src = &data[(o * len + i) * inner..(o * len + i + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += s * w;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::PI;

    #[test]
    fn projection_of_simple_functions() {
        let phi2 = HermiteExpansion::basis(MultiIndex::single(2));
        let p = project(&|x: &[f64]| phi2.eval(x), 1, 6, 32, 1e-12).unwrap();
        assert!(p.converged);
        for (a, c) in p.expansion.iter() {
            if a.degree() == 2 {
                assert!((c - C64::new(1.0, 0.0)).norm() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
        let q = project(&|x: &[f64]| C64::new(x[0] * (-x[0] * x[0] / 2.0).exp(), 0.0), 1, 4, 32, 1e-12)
            .unwrap();
        let c1 = q.expansion.get(&MultiIndex::single(1));
        assert!((c1.re - PI.powf(0.25) / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty_expansion_is_zero() {
        let e = HermiteExpansion::zero(2).unwrap();
        assert_eq!(synthesize(&e, &[0.3, -1.0]), C64::new(0.0, 0.0));
        let g = HermiteExpansion::basis(MultiIndex::single(0));
        assert!((synthesize(&g, &[0.0]).re - PI.powf(-0.25)).abs() < 1e-16);
    }

    #[test]
    fn pruning_and_degree() {
        let mut e = HermiteExpansion::zero(1).unwrap();
        e.insert(MultiIndex::single(3), C64::new(1e-15, 0.0)).unwrap();
        assert!(e.is_empty());
        e.insert(MultiIndex::single(3), C64::new(1.0, 0.0)).unwrap();
        assert_eq!(e.maxdeg(), 3);
        assert!(e.insert(MultiIndex::zero(2), C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn fourier_diagonal_phases() {
        let e = HermiteExpansion::basis(MultiIndex::single(1));
        let f = fourier_diagonal(&e);
        assert_eq!(f.get(&MultiIndex::single(1)), C64::new(0.0, -1.0));
        let g = HermiteExpansion::basis(MultiIndex::single(0));
        assert_eq!(fourier_diagonal(&g), g);
    }

    #[test]
    fn log_evaluation_far_out() {
        let e = HermiteExpansion::from_pairs(
            1,
            [(MultiIndex::single(0), C64::new(1.0, 0.0)), (MultiIndex::single(4), C64::new(0.0, 2.0))],
        )
        .unwrap();
        let x = 45.0;
        let ln = e.ln_abs(&[x]);
        let s = scaled_hermite(4, x);
        let expect = (2.0 * s.value(4).abs().max(0.0)).ln();
        assert!(expect == f64::NEG_INFINITY || (ln - expect).abs() < 1e-10);
        assert!((ln - (2f64.ln() + s.ln_abs(4))).abs() < 1e-10);
    }
}
