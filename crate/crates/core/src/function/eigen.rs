use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hermite::{multiindex_enumerate, HermiteExpansion, MultiIndex};
use crate::prelude::*;
use crate::special::LN_PI;

fn normal_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn normalized(e: HermiteExpansion) -> Result<HermiteExpansion> {
    let norm = e.norm_sq().sqrt();
    if norm == 0.0 {
        return Err(Error::Domain("empty expansion cannot be normalized"));
    }
    Ok(e.scaled(C64::new(1.0 / norm, 0.0)))
}

/// Unit-norm expansion with i.i.d. complex Gaussian coefficients on `|α| ≤ D`.
pub fn random_expansion(n: usize, max_degree: u32, seed: u64) -> Result<HermiteExpansion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = multiindex_enumerate(n, max_degree)
        .into_iter()
        .map(|a| (a, normal_complex(&mut rng)))
        .collect();
    normalized(HermiteExpansion::from_pairs(n, pairs)?)?.with_maxdeg(max_degree)
}

/// Coefficients of modulus one with uniformly random phases on `|α| ≤ D`.
pub fn random_phase_expansion(n: usize, max_degree: u32, seed: u64) -> Result<HermiteExpansion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = multiindex_enumerate(n, max_degree)
        .into_iter()
        .map(|a| {
            let theta: f64 = rng.random_range(0.0..core::f64::consts::TAU);
            (a, C64::from_polar(1.0, theta))
        })
        .collect();
    HermiteExpansion::from_pairs(n, pairs)?.with_maxdeg(max_degree)
}

/// `(e^{-|ξ-u|²/2}, Φ_α) = Π_j π^{1/4} e^{-u_j²/4} u_j^{α_j} / √(2^{α_j} α_j!)`.
pub fn coherent_state(center: &[f64], alpha: &MultiIndex) -> f64 {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for (&u, &k) in center.iter().zip(alpha.entries()) {
        ln += 0.25 * LN_PI - 0.25 * u * u;
        if k > 0 {
            if u == 0.0 {
                return 0.0;
            }
            ln += k as f64 * u.abs().ln()
                - 0.5 * (k as f64 * core::f64::consts::LN_2 + crate::special::ln_factorial(k));
            if u < 0.0 && k % 2 == 1 {
                sign = -sign;
            }
        }
    }
    sign * ln.exp()
}

/// Random eigenfunction of the Fourier transform with eigenvalue `(−i)^{k₀}`.
///
/// A random superposition of three translated Gaussians (centers in
/// `[−1.5, 1.5]ⁿ`, complex Gaussian amplitudes) is projected onto
/// `{|α| ≡ k₀ mod 4, |α| ≤ D}` and normalized; the phase is fixed so that
/// the first coefficient is real and positive. The coherent-state profile
/// keeps the coefficients decaying like those of a genuine Schwartz function.
pub fn make_ft_eigenfunction(n: usize, max_degree: u32, k0: u32, seed: u64) -> Result<HermiteExpansion> {
    if k0 > 3 {
        return Err(Error::Domain("eigen-class must be 0, 1, 2 or 3"));
    }
    if max_degree < k0 {
        return Err(Error::Precondition("degree bound below the eigen-class"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sources: Vec<(Vec<f64>, C64)> = (0..3)
        .map(|_| {
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.5..1.5)).collect();
            (c, normal_complex(&mut rng))
        })
        .collect();
    let mut e = HermiteExpansion::zero(n)?;
    for alpha in multiindex_enumerate(n, max_degree) {
        if alpha.degree() % 4 != k0 {
            continue;
        }
        let c: C64 = sources.iter().map(|(u, w)| w * coherent_state(u, &alpha)).sum();
        e.insert(alpha, c)?;
    }
    if e.is_empty() {
        return Err(Error::Domain("empty support for the requested eigen-class"));
    }
    let first = *e.iter().next().map(|(_, c)| c).unwrap_or(&C64::new(1.0, 0.0));
    let phase = first.conj() / first.norm();
    normalized(e.scaled(phase))?.with_maxdeg(max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::fourier_diagonal;

    #[test]
    fn trivial_eigenfunction() {
        let e = make_ft_eigenfunction(1, 0, 0, 11).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e.get(&MultiIndex::single(0)) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(make_ft_eigenfunction(1, 1, 2, 0).is_err());
    }

    #[test]
    fn eigen_relation_is_exact() {
        for k0 in 0..4 {
            let e = make_ft_eigenfunction(2, 12, k0, 5).unwrap();
            let f = fourier_diagonal(&e);
            let lam = crate::hermite::neg_i_pow(k0);
            for (a, c) in e.iter() {
                assert_eq!(f.get(a), c * lam);
            }
            assert!((e.norm_sq() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn coherent_state_matches_quadrature() {
        let u = [0.8];
        let p = crate::hermite::project(
            &|x: &[f64]| C64::new((-(x[0] - u[0]).powi(2) / 2.0).exp(), 0.0),
            1,
            10,
            40,
            1e-13,
        )
        .unwrap();
        for (a, c) in p.expansion.iter() {
            assert!((c.re - coherent_state(&u, a)).abs() < 1e-12);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(random_expansion(2, 4, 9).unwrap(), random_expansion(2, 4, 9).unwrap());
        assert_ne!(random_expansion(2, 4, 9).unwrap(), random_expansion(2, 4, 10).unwrap());
    }
}
