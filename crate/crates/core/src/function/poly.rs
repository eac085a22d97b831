use crate::hermite::{MultiIndex, PRUNE};
use crate::linalg::Matrix;
use crate::prelude::*;

/// Polynomial `Σ p_β x^β` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, C64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(MultiIndex::zero(dim), C64::new(1.0, 0.0))
    }

    pub fn monomial(beta: MultiIndex, c: C64) -> Self {
        let mut p = Self::zero(beta.dim());
        p.add_term(beta, c);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, C64)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (b, c) in terms {
            if b.dim() != dim {
                return Err(Error::Dimension { expected: dim, got: b.dim() });
            }
            p.add_term(b, c);
        }
        Ok(p)
    }

    /// Real coefficients for `x^k` in one variable, lowest degree first.
    pub fn univariate(coeffs: &[f64]) -> Self {
        let mut p = Self::zero(1);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::single(k as u32), C64::new(*c, 0.0));
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, C64> {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ |p_β|`, so that `|P(x)| ≤ Σ|p_β| (1+|x|)^{deg P}`.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    fn add_term(&mut self, beta: MultiIndex, c: C64) {
        let t = self.terms.get(&beta).copied().unwrap_or_default() + c;
        if t.norm() == 0.0 {
            self.terms.remove(&beta);
        } else {
            self.terms.insert(beta, t);
        }
    }

    /// Drops coefficients below the expansion pruning threshold.
    pub fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= PRUNE);
        self
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (b, c) in &self.terms {
            let mut m = 1.0;
            for (&k, &xj) in b.entries().iter().zip(x) {
                m *= xj.powi(k as i32);
            }
            acc += c * m;
        }
        acc
    }

    pub fn eval_complex(&self, z: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (b, c) in &self.terms {
            let mut m = C64::new(1.0, 0.0);
            for (&k, &zj) in b.entries().iter().zip(z) {
                m *= zj.powu(k);
            }
            acc += c * m;
        }
        acc
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut p = Self::zero(self.dim);
        for (b, c) in &self.terms {
            p.add_term(b.clone(), c * s);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (b, c) in &other.terms {
            p.add_term(b.clone(), *c);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.dim);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                let e: Vec<u32> = b1.entries().iter().zip(b2.entries()).map(|(x, y)| x + y).collect();
                p.add_term(MultiIndex::from(e.as_slice()), c1 * c2);
            }
        }
        p
    }

    /// `x ↦ P(δ_1 x_1, …, δ_n x_n)`.
    pub fn scale_variables(&self, d: &[f64]) -> Self {
        let mut p = Self::zero(self.dim);
        for (b, c) in &self.terms {
            let f: f64 = b.entries().iter().zip(d).map(|(&k, &dj)| dj.powi(k as i32)).product();
            p.add_term(b.clone(), c * f);
        }
        p
    }

    /// `x ↦ P(Mx)`.
    pub fn linear_substitute(&self, m: &Matrix) -> Self {
        let n = self.dim;
        let forms: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut f = Self::zero(n);
                for j in 0..n {
                    let mut e = vec![0u32; n];
                    e[j] = 1;
                    f.add_term(MultiIndex::from(e.as_slice()), C64::new(m[(i, j)], 0.0));
                }
                f
            })
            .collect();
        let mut out = Self::zero(n);
        for (b, c) in &self.terms {
            let mut term = Self::monomial(MultiIndex::zero(n), *c);
            for (i, &k) in b.entries().iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&forms[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_matches_pointwise() {
        let p = Polynomial::from_terms(
            2,
            [
                (MultiIndex::new(vec![2, 1]).unwrap(), C64::new(1.0, 0.5)),
                (MultiIndex::new(vec![0, 3]).unwrap(), C64::new(-2.0, 0.0)),
                (MultiIndex::zero(2), C64::new(0.25, 0.0)),
            ],
        )
        .unwrap();
        let m = Matrix::from_rows(2, vec![0.6, -0.8, 0.8, 0.6]).unwrap();
        let q = p.linear_substitute(&m);
        let x = [0.3, -1.7];
        let mx = m.apply(&x);
        assert!((q.eval(&x) - p.eval(&mx)).norm() < 1e-13);
        let s = p.scale_variables(&[2.0, 0.5]);
        assert!((s.eval(&x) - p.eval(&[0.6, -0.85])).norm() < 1e-13);
        assert_eq!(p.degree(), 3);
    }
}
