use crate::hermite::{HermiteExpansion, MultiIndex};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::prelude::*;
use crate::special::PI;

use super::{DecayBound, Polynomial};

/// `f(x) = P(x) e^{-((A+iB)x, x)}` with `A` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian {
    poly: Polynomial,
    a: Matrix,
    b: Matrix,
}

impl PolyGaussian {
    pub fn new(poly: Polynomial, a: Matrix, b: Option<Matrix>) -> Result<Self> {
        let n = poly.dim();
        if a.dim() != n {
            return Err(Error::Dimension { expected: n, got: a.dim() });
        }
        let b = b.unwrap_or_else(|| Matrix::zeros(n));
        if b.dim() != n {
            return Err(Error::Dimension { expected: n, got: b.dim() });
        }
        if !a.is_symmetric(0.0) || !b.is_symmetric(0.0) {
            return Err(Error::Domain("quadratic forms must be symmetric"));
        }
        if !a.is_positive_definite() {
            return Err(Error::Domain("A must be positive definite"));
        }
        Ok(Self { poly, a, b })
    }

    /// `P(x) e^{-|x|²/2}`.
    pub fn standard(poly: Polynomial) -> Self {
        let n = poly.dim();
        Self { poly, a: Matrix::identity(n).scaled(0.5), b: Matrix::zeros(n) }
    }

    /// `e^{-|x|²/2}` in `n` dimensions.
    pub fn gaussian(n: usize) -> Self {
        Self::standard(Polynomial::one(n))
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn has_chirp(&self) -> bool {
        !self.b.is_zero()
    }

    /// `A = ½I` and `B = 0` exactly.
    pub fn is_standard(&self) -> bool {
        let n = self.dim();
        self.b.is_zero()
            && (0..n).all(|i| (0..n).all(|j| self.a[(i, j)] == if i == j { 0.5 } else { 0.0 }))
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        let q = C64::new(self.a.quadratic_form(x), self.b.quadratic_form(x));
        self.poly.eval(x) * (-q).exp()
    }

    pub fn ln_abs(&self, x: &[f64]) -> f64 {
        self.poly.eval(x).norm().ln() - self.a.quadratic_form(x)
    }

    /// `|f(x)| ≤ Σ|p_β| (1+|x|)^{deg P} e^{-λ_min(A)|x|²}`.
    pub fn decay(&self) -> DecayBound {
        let lam = symmetric_eigen(&self.a).map(|(v, _)| v[0]).unwrap_or(f64::MIN_POSITIVE);
        DecayBound::gaussian(self.poly.coefficient_l1().max(f64::MIN_POSITIVE), lam)
            .with_degree(self.poly.degree())
    }

    /// `f_δ(x) = δ^{n/2} f(δx)`.
    pub fn dilate(&self, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::Domain("dilation factor must be positive"));
        }
        let n = self.dim();
        let poly = self
            .poly
            .scale_variables(&vec![delta; n])
            .scale(C64::new(delta.powf(n as f64 / 2.0), 0.0));
        Ok(Self { poly, a: self.a.scaled(delta * delta), b: self.b.scaled(delta * delta) })
    }

    /// Exact transform for `B = 0`: diagonalize `A`, dilate each axis to the
    /// standard Gaussian, act diagonally on the Hermite expansion, undo.
    pub fn fourier_exact(&self) -> Result<Self> {
        if self.has_chirp() {
            return Err(Error::Refused("exact transform needs B = 0"));
        }
        let n = self.dim();
        if self.is_standard() {
            let e = poly_gaussian_to_hermite(self)?;
            return Ok(hermite_to_poly_gaussian(&crate::hermite::fourier_diagonal(&e)));
        }
        let (lam, r) = symmetric_eigen(&self.a)?;
        let s: Vec<f64> = lam.iter().map(|l| (2.0 * l).sqrt()).collect();
        // h(u) = P(R diag(1/s) u) e^{-|u|²/2}
        let inv_s: Vec<f64> = s.iter().map(|v| 1.0 / v).collect();
        let q = self.poly.linear_substitute(&r.mul(&Matrix::diagonal(&inv_s)));
        let h = hermite_to_poly_gaussian(&crate::hermite::fourier_diagonal(&poly_gaussian_to_hermite(
            &Self::standard(q),
        )?));
        // f̂(y) = (Π s)^{-1} H(diag(1/s) Rᵀ y) e^{-(A^{-1}y,y)/4}
        let jac: f64 = s.iter().product();
        let poly = h
            .poly
            .linear_substitute(&Matrix::diagonal(&inv_s).mul(&r.transpose()))
            .scale(C64::new(1.0 / jac, 0.0))
            .pruned();
        let mut a = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = (0..n).map(|k| r[(i, k)] * r[(j, k)] / (4.0 * lam[k])).sum();
            }
        }
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (a[(i, j)] + a[(j, i)]);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        Self::new(poly, a, None)
    }
}

/// Exact Hermite expansion of `P(x) e^{-|x|²/2}`.
pub fn poly_gaussian_to_hermite(f: &PolyGaussian) -> Result<HermiteExpansion> {
    if !f.is_standard() {
        return Err(Error::Precondition("poly_gaussian_to_hermite needs A = I/2 and B = 0"));
    }
    let n = f.dim();
    let deg = f.poly.degree() as usize;
    // table[k][j]: x^k e^{-x²/2} = Σ_j table[k][j] h_j(x)
    let mut table: Vec<Vec<f64>> = vec![vec![PI.powf(0.25)]];
    for k in 0..deg {
        let prev = &table[k];
        let mut next = vec![0.0; k + 2];
        for (i, &c) in prev.iter().enumerate() {
            let fi = i as f64;
            next[i + 1] += c * ((fi + 1.0) / 2.0).sqrt();
            if i > 0 {
                next[i - 1] += c * (fi / 2.0).sqrt();
            }
        }
        table.push(next);
    }
    let mut out = HermiteExpansion::zero(n)?;
    for (beta, c) in f.poly.terms() {
        let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::new(), 1.0)];
        for &k in beta.entries() {
            let row = &table[k as usize];
            let mut next = Vec::new();
            for (idx, w) in &partial {
                for (j, &t) in row.iter().enumerate() {
                    if t == 0.0 {
                        continue;
                    }
                    let mut e = idx.clone();
                    e.push(j as u32);
                    next.push((e, w * t));
                }
            }
            partial = next;
        }
        for (idx, w) in partial {
            out.insert(MultiIndex::new(idx)?, c * w)?;
        }
    }
    out.with_maxdeg(deg as u32)
}

/// `Σ c_α Φ_α` rewritten as `P(x) e^{-|x|²/2}`.
pub fn hermite_to_poly_gaussian(e: &HermiteExpansion) -> PolyGaussian {
    let n = e.dim();
    let kmax = e.max_entry() as usize;
    // polys[k]: coefficients of p_k with h_k = p_k e^{-x²/2}
    let mut polys: Vec<Vec<f64>> = vec![vec![PI.powf(-0.25)]];
    for k in 0..kmax {
        let kf = k as f64;
        let mut next = vec![0.0; k + 2];
        for (i, &c) in polys[k].iter().enumerate() {
            next[i + 1] += (2.0 / (kf + 1.0)).sqrt() * c;
        }
        if k > 0 {
            for (i, &c) in polys[k - 1].iter().enumerate() {
                next[i] -= (kf / (kf + 1.0)).sqrt() * c;
            }
        }
        polys.push(next);
    }
    let mut poly = Polynomial::zero(n);
    for (alpha, c) in e.iter() {
        let mut term = Polynomial::monomial(MultiIndex::zero(n), *c);
        for (axis, &k) in alpha.entries().iter().enumerate() {
            let mut factor = Polynomial::zero(n);
            for (p, &v) in polys[k as usize].iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                let mut ex = vec![0u32; n];
                ex[axis] = p as u32;
                factor = factor.add(&Polynomial::monomial(MultiIndex::from(ex.as_slice()), C64::new(v, 0.0)));
            }
            term = term.mul(&factor);
        }
        poly = poly.add(&term);
    }
    PolyGaussian::standard(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_coefficient() {
        let e = poly_gaussian_to_hermite(&PolyGaussian::gaussian(2)).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e.get(&MultiIndex::zero(2)).re - PI.powf(0.5)).abs() < 1e-14);
        let x = PolyGaussian::standard(Polynomial::univariate(&[0.0, 1.0]));
        let ex = poly_gaussian_to_hermite(&x).unwrap();
        assert!((ex.get(&MultiIndex::single(1)).re - PI.powf(0.25) / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn non_standard_refused() {
        let g = PolyGaussian::new(Polynomial::one(1), Matrix::identity(1), None).unwrap();
        assert!(poly_gaussian_to_hermite(&g).is_err());
        assert!(PolyGaussian::new(Polynomial::one(1), Matrix::identity(1).scaled(-1.0), None).is_err());
    }

    #[test]
    fn closed_form_transform() {
        let g = PolyGaussian::new(Polynomial::one(1), Matrix::identity(1), None).unwrap();
        let h = g.fourier_exact().unwrap();
        for y in [0.0, 0.7, -2.0] {
            let expect = 0.5f64.sqrt() * (-y * y / 4.0f64).exp();
            assert!((h.eval(&[y]).re - expect).abs() < 1e-15);
        }
    }
}
