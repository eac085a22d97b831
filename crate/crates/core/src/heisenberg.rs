//! Schrödinger representation `π(x,u)f(ξ) = e^{i(x·ξ + x·u/2)} f(ξ+u)`, the
//! Hermite–Poisson semigroup, Laguerre functions and the circle-averaged
//! norm identity in one dimension.

use alloc::sync::Arc;

use crate::function::{DecayBound, DecayProfile, Sampled, TestFunction};
use crate::hermite::{legendre_panels, HermiteExpansion};
use crate::prelude::*;
use crate::special::{binomial, least_squares, max_abs_residual, LogAccumulator};

/// `(x + iy, u + iv)`; real when `y = v = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub y: Vec<f64>,
    pub v: Vec<f64>,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self { x: vec![0.0; n], u: vec![0.0; n], y: vec![0.0; n], v: vec![0.0; n] }
    }

    pub fn real(x: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        let n = x.len();
        Self::complex(x, vec![0.0; n], u, vec![0.0; n])
    }

    pub fn complex(x: Vec<f64>, y: Vec<f64>, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let n = x.len();
        for w in [&y, &u, &v] {
            if w.len() != n {
                return Err(Error::Dimension { expected: n, got: w.len() });
            }
        }
        if x.iter().chain(&y).chain(&u).chain(&v).any(|t| !t.is_finite()) {
            return Err(Error::Domain("group element entries must be finite"));
        }
        Ok(Self { x, u, y, v })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn is_real(&self) -> bool {
        self.y.iter().chain(&self.v).all(|&t| t == 0.0)
    }

    fn z(&self) -> Vec<C64> {
        self.x.iter().zip(&self.y).map(|(&a, &b)| C64::new(a, b)).collect()
    }

    fn w(&self) -> Vec<C64> {
        self.u.iter().zip(&self.v).map(|(&a, &b)| C64::new(a, b)).collect()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Bound for `ξ ↦ g(ξ+s)` given one for `g`.
fn shifted(d: DecayBound, s: f64) -> DecayBound {
    let poly = d.degree as f64 * s.ln_1p();
    match d.profile {
        DecayProfile::Gaussian => DecayBound {
            c: (d.c.ln() + poly + d.sigma * s * s).exp(),
            sigma: 0.5 * d.sigma,
            ..d
        },
        DecayProfile::Exponential => DecayBound { c: (d.c.ln() + poly + d.sigma * s).exp(), ..d },
    }
}

/// `π(g)f`. Complex elements need the entire extension of a finite Hermite
/// expansion.
pub fn schrodinger_apply(f: &TestFunction, g: &GroupElement) -> Result<TestFunction> {
    let n = f.dim();
    if g.dim() != n {
        return Err(Error::Dimension { expected: n, got: g.dim() });
    }
    let z = g.z();
    let w = g.w();
    let half_zw: C64 = z.iter().zip(&w).map(|(a, b)| a * b).sum::<C64>() * 0.5;
    let phase0 = (C64::i() * half_zw).exp();
    if g.is_real() {
        let fc = f.clone();
        let (x, u) = (g.x.clone(), g.u.clone());
        let eval = Arc::new(move |xi: &[f64]| {
            let shifted: Vec<f64> = xi.iter().zip(&u).map(|(a, b)| a + b).collect();
            let dot: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
            C64::from_polar(1.0, dot) * phase0 * fc.eval(&shifted)
        });
        let fl = f.clone();
        let ul = g.u.clone();
        let ln_abs = Arc::new(move |xi: &[f64]| {
            let shifted: Vec<f64> = xi.iter().zip(&ul).map(|(a, b)| a + b).collect();
            fl.ln_abs(&shifted)
        });
        let decay = shifted(f.decay(), norm(&g.u));
        let mut s = Sampled::new(n, eval, decay).with_ln_abs(ln_abs).with_converged(f.converged());
        let dual = match f {
            TestFunction::Sampled(p) => p.dual_decay(),
            _ => crate::function::fourier(f).ok().map(|h| h.decay()),
        };
        if let Some(d) = dual {
            s = s.with_dual_decay(shifted(d, norm(&g.x)));
        }
        return Ok(TestFunction::Sampled(s));
    }
    let e = match f {
        TestFunction::FiniteHermite(e) => e.clone(),
        _ => return Err(Error::Refused("complex group elements need a finite Hermite expansion")),
    };
    let base = f.decay();
    let (un, yn, vn) = (norm(&g.u), norm(&g.y), norm(&g.v));
    let ln_c = base.c.ln()
        + base.degree as f64 * (un * un + vn * vn).sqrt().ln_1p()
        + 0.5 * (un * un + vn * vn)
        + 2.0 * yn * yn
        + half_zw.im.abs();
    let decay = DecayBound { c: ln_c.exp(), sigma: 0.125, degree: base.degree, profile: DecayProfile::Gaussian };
    let eval = Arc::new(move |xi: &[f64]| {
        let arg: Vec<C64> = xi.iter().zip(&w).map(|(a, b)| b + a).collect();
        let dot: C64 = z.iter().zip(xi).map(|(a, b)| a * b).sum();
        (C64::i() * dot).exp() * phase0 * e.eval_complex(&arg)
    });
    Ok(TestFunction::Sampled(Sampled::new(n, eval, decay)))
}

/// `‖f‖₂²` by composite Gauss–Legendre on `[−R, R]^n`, halving panels until
/// consecutive values agree to `reltol`.
pub fn l2_norm_sq(f: &TestFunction, reltol: f64) -> Result<(f64, bool)> {
    let n = f.dim();
    let d = f.decay();
    let r = DecayBound { c: d.c * d.c, sigma: 2.0 * d.sigma, degree: 2 * d.degree, profile: d.profile }
        .radius_below(-60.0);
    let q = if n == 1 { 16 } else { 8 };
    let mut panels = ((2.0 * r).ceil() as usize).max(4);
    let mut prev = f64::NAN;
    for _ in 0..6 {
        let rule = legendre_panels(-r, r, panels, q)?;
        let (pts, wts) = rule.tensor(n, true);
        let v: f64 = pts.chunks(n).zip(&wts).map(|(x, w)| w * f.eval(x).norm_sqr()).sum();
        if (v - prev).abs() <= reltol * v.abs() {
            return Ok((v, true));
        }
        prev = v;
        panels *= 2;
        if pts.len() > 4_000_000 {
            break;
        }
    }
    Ok((prev, false))
}

/// `c_α ↦ e^{-t(2|α|+n)^{1/2}} c_α`.
pub fn poisson_semigroup(e: &HermiteExpansion, t: f64) -> Result<HermiteExpansion> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain("semigroup time must be nonnegative"));
    }
    let n = e.dim() as f64;
    Ok(e.map(|a, c| c * (-t * (2.0 * a.degree() as f64 + n).sqrt()).exp()))
}

/// `L_k^ν(x)` by the three-term recurrence.
pub fn laguerre_eval(k: u32, nu: u32, x: f64) -> f64 {
    let nu = nu as f64;
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + nu - x;
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + nu - x) * cur - (j + nu) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln L_k^ν(x)` for `x ≤ 0`, where every term of the recurrence is positive;
/// rescales to stay finite for any `k`.
pub fn laguerre_ln_negative(k: u32, nu: u32, x: f64) -> Result<f64> {
    if x > 0.0 {
        return Err(Error::Domain("log-domain Laguerre needs a nonpositive argument"));
    }
    let nu_f = nu as f64;
    let mut prev = 1.0f64;
    let mut cur = 1.0 + nu_f - x;
    let mut off = 0.0;
    if k == 0 {
        return Ok(0.0);
    }
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + nu_f - x) * cur - (j + nu_f) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
        if cur > 1e200 {
            prev /= 1e200;
            cur /= 1e200;
            off += 200.0 * core::f64::consts::LN_10;
        }
    }
    Ok(cur.ln() + off)
}

/// `φ_k^ν(y, v) = L_k^ν((|y|²+|v|²)/2) e^{-(|y|²+|v|²)/4}`.
pub fn phi(k: u32, nu: u32, y: &[f64], v: &[f64]) -> f64 {
    let s: f64 = y.iter().chain(v).map(|t| t * t).sum();
    laguerre_eval(k, nu, 0.5 * s) * (-0.25 * s).exp()
}

/// `ln φ_k^ν(2iy, 2iv) = ln L_k^ν(−2ρ²) + ρ²` with `ρ² = |y|²+|v|²`.
pub fn phi_imag_ln(k: u32, nu: u32, rho_sq: f64) -> Result<f64> {
    Ok(laguerre_ln_negative(k, nu, -2.0 * rho_sq)? + rho_sq)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    /// `(2√(2k+n)ρ, ln φ_k^ν(2iy,2iv))`.
    pub points: Vec<(f64, f64)>,
}

/// Slope of `ln φ_k^ν(2iy,2iv)` against `2√(2k+n)ρ`, `n = ν+1`.
pub fn laguerre_growth_fit(nu: u32, rho: f64, ks: &[u32]) -> Result<GrowthFit> {
    if !(rho > 0.0) {
        return Err(Error::Domain("growth fit needs ρ > 0"));
    }
    if ks.len() < 10 {
        return Err(Error::InsufficientData("growth fit needs at least ten values of k"));
    }
    let n = nu as f64 + 1.0;
    let mut points = Vec::with_capacity(ks.len());
    for &k in ks {
        points.push((2.0 * (2.0 * k as f64 + n).sqrt() * rho, phi_imag_ln(k, nu, rho * rho)?));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    Ok(GrowthFit { slope, intercept, residual: max_abs_residual(&xs, &ys, slope, intercept), points })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KAverageReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_dev: f64,
    pub converged: bool,
}

/// `∫_{SO(2)} ‖π(k·(iy, iv))f‖₂² dk` against `Σ_k |c_k|² φ_k^0(2iy, 2iv)`.
pub fn kaverage_identity_check(f: &HermiteExpansion, y: f64, v: f64, m: usize) -> Result<KAverageReport> {
    if f.dim() != 1 {
        return Err(Error::Dimension { expected: 1, got: f.dim() });
    }
    if m == 0 {
        return Err(Error::Domain("need at least one circle point"));
    }
    let tf = TestFunction::from(f.clone());
    let mut lhs = 0.0;
    let mut converged = true;
    for j in 0..m {
        let th = core::f64::consts::TAU * j as f64 / m as f64;
        let (s, c) = th.sin_cos();
        let g = GroupElement::complex(vec![0.0], vec![c * y - s * v], vec![0.0], vec![s * y + c * v])?;
        let (val, ok) = l2_norm_sq(&schrodinger_apply(&tf, &g)?, 1e-13)?;
        converged &= ok;
        lhs += val;
    }
    lhs /= m as f64;
    let rho_sq = y * y + v * v;
    let mut acc = LogAccumulator::new();
    for (a, c) in f.iter() {
        let k = a.entries()[0];
        acc.add_log(2.0 * c.norm().ln() + phi_imag_ln(k, 0, rho_sq)?);
    }
    let rhs = acc.value();
    Ok(KAverageReport { lhs, rhs, rel_dev: (lhs - rhs).abs() / rhs, converged })
}

/// `C(k+ν, k)`, the value of `L_k^ν` at the origin.
pub fn laguerre_at_zero(k: u32, nu: u32) -> f64 {
    binomial(k + nu, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::MultiIndex;

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre_eval(0, 3, 1.7), 1.0);
        assert!((laguerre_eval(1, 1, 0.4) - (2.0 - 0.4)).abs() < 1e-15);
        assert!((laguerre_eval(3, 0, 0.0) - 1.0).abs() < 1e-15);
        assert!((laguerre_eval(6, 2, 0.0) - laguerre_at_zero(6, 2)).abs() < 1e-12);
        let x = -3.0;
        assert!((laguerre_ln_negative(25, 1, x).unwrap() - laguerre_eval(25, 1, x).ln()).abs() < 1e-12);
    }

    #[test]
    fn semigroup_law() {
        let e = crate::function::random_expansion(1, 10, 5).unwrap();
        let a = poisson_semigroup(&poisson_semigroup(&e, 0.3).unwrap(), 0.7).unwrap();
        let b = poisson_semigroup(&e, 1.0).unwrap();
        for (k, c) in b.iter() {
            assert!((a.get(k) - c).norm() <= 1e-15 * c.norm().max(1e-300) + 1e-17);
        }
        let m = poisson_semigroup(&HermiteExpansion::basis(MultiIndex::single(4)), 1.0).unwrap();
        assert!((m.get(&MultiIndex::single(4)).re - (-3.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn real_action_is_unitary() {
        let f = TestFunction::from(HermiteExpansion::basis(MultiIndex::single(0)));
        let g = GroupElement::real(vec![1.0], vec![0.5]).unwrap();
        let (v, ok) = l2_norm_sq(&schrodinger_apply(&f, &g).unwrap(), 1e-13).unwrap();
        assert!(ok && (v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kaverage_gaussian() {
        let f = HermiteExpansion::basis(MultiIndex::single(0));
        let r = kaverage_identity_check(&f, 0.3, 0.0, 64).unwrap();
        assert!((r.rhs - 0.09f64.exp()).abs() < 1e-14);
        assert!(r.rel_dev < 1e-10, "{r:?}");
    }
}
