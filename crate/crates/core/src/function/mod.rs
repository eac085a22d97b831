//! Test functions: exact Hermite expansions, the Gaussian class
//! `P(x)e^{-((A+iB)x,x)}`, and sampled functions with decay bounds.

mod eigen;
mod fourier;
mod poly;
mod poly_gaussian;
mod sampled;

pub use eigen::{coherent_state, make_ft_eigenfunction, random_expansion, random_phase_expansion};
pub use fourier::{chirp_fourier, dilate, fourier, quadrature_fourier};
pub use poly::Polynomial;
pub use poly_gaussian::{hermite_to_poly_gaussian, poly_gaussian_to_hermite, PolyGaussian};
pub use sampled::{DecayBound, DecayProfile, LogAbsFn, PointFn, Sampled};

use crate::hermite::HermiteExpansion;
use crate::prelude::*;

/// Any function the experiments can feed to a functional.
#[derive(Debug, Clone)]
pub enum TestFunction {
    FiniteHermite(HermiteExpansion),
    PolyGaussianForm(PolyGaussian),
    Sampled(Sampled),
}

impl TestFunction {
    pub fn dim(&self) -> usize {
        match self {
            Self::FiniteHermite(e) => e.dim(),
            Self::PolyGaussianForm(p) => p.dim(),
            Self::Sampled(s) => s.dim(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        match self {
            Self::FiniteHermite(e) => e.eval(x),
            Self::PolyGaussianForm(p) => p.eval(x),
            Self::Sampled(s) => s.eval(x),
        }
    }

    /// `ln |f(x)|`, finite wherever `f(x) ≠ 0` even if the value underflows.
    pub fn ln_abs(&self, x: &[f64]) -> f64 {
        match self {
            Self::FiniteHermite(e) => e.ln_abs(x),
            Self::PolyGaussianForm(p) => p.ln_abs(x),
            Self::Sampled(s) => s.ln_abs(x),
        }
    }

    pub fn decay(&self) -> DecayBound {
        match self {
            Self::FiniteHermite(e) => hermite_decay(e),
            Self::PolyGaussianForm(p) => p.decay(),
            Self::Sampled(s) => s.decay(),
        }
    }

    /// Whether the values are exact, or come from a certified quadrature.
    pub fn converged(&self) -> bool {
        match self {
            Self::Sampled(s) => s.converged(),
            _ => true,
        }
    }

    pub fn has_exact_fourier(&self) -> bool {
        match self {
            Self::FiniteHermite(_) => true,
            Self::PolyGaussianForm(p) => !p.has_chirp(),
            Self::Sampled(_) => false,
        }
    }

    /// Exact Hermite coefficients when the representation has them.
    pub fn to_expansion(&self) -> Option<HermiteExpansion> {
        match self {
            Self::FiniteHermite(e) => Some(e.clone()),
            Self::PolyGaussianForm(p) if p.is_standard() => poly_gaussian_to_hermite(p).ok(),
            _ => None,
        }
    }
}

impl From<HermiteExpansion> for TestFunction {
    fn from(e: HermiteExpansion) -> Self {
        Self::FiniteHermite(e)
    }
}

impl From<PolyGaussian> for TestFunction {
    fn from(p: PolyGaussian) -> Self {
        Self::PolyGaussianForm(p)
    }
}

impl From<Sampled> for TestFunction {
    fn from(s: Sampled) -> Self {
        Self::Sampled(s)
    }
}

/// `|Φ_α(x)| ≤ K(α) (1+|x|)^{|α|} e^{-|x|²/2}` with `K` the coefficient
/// `ℓ¹` norm of the Hermite polynomial factor.
fn hermite_decay(e: &HermiteExpansion) -> DecayBound {
    let kmax = e.max_entry() as usize;
    let mut abs_polys: Vec<Vec<f64>> = vec![vec![crate::special::PI.powf(-0.25)]];
    for k in 0..kmax {
        let kf = k as f64;
        let mut next = vec![0.0; k + 2];
        for (i, &c) in abs_polys[k].iter().enumerate() {
            next[i + 1] += (2.0 / (kf + 1.0)).sqrt() * c;
        }
        if k > 0 {
            for (i, &c) in abs_polys[k - 1].iter().enumerate() {
                next[i] += (kf / (kf + 1.0)).sqrt() * c;
            }
        }
        abs_polys.push(next);
    }
    let l1: Vec<f64> = abs_polys.iter().map(|p| p.iter().sum()).collect();
    let c: f64 = e
        .iter()
        .map(|(a, c)| c.norm() * a.entries().iter().map(|&k| l1[k as usize]).product::<f64>())
        .sum();
    let deg = e.iter().map(|(a, _)| a.degree()).max().unwrap_or(0);
    DecayBound::gaussian(c.max(f64::MIN_POSITIVE), 0.5).with_degree(deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::MultiIndex;

    #[test]
    fn hermite_decay_dominates() {
        let e = random_expansion(1, 10, 3).unwrap();
        let d = hermite_decay(&e);
        for i in 0..400 {
            let x = -20.0 + 0.1 * i as f64;
            assert!(e.ln_abs(&[x]) <= d.ln_bound(x.abs()) + 1e-12);
        }
        let f = TestFunction::from(HermiteExpansion::basis(MultiIndex::new(vec![3, 2]).unwrap()));
        let d2 = f.decay();
        for (x, y) in [(0.5, -2.0), (4.0, 3.0), (-7.0, 0.1)] {
            let r: f64 = (x * x + y * y).sqrt();
            assert!(f.ln_abs(&[x, y]) <= d2.ln_bound(r) + 1e-12);
        }
    }
}
