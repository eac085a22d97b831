//! Bargmann transform `Bf(z) = π^{-n/2} e^{-z²/4} ∫ f(ξ) e^{-|ξ|²/2} e^{z·ξ} dξ`
//! with `z² = Σ z_j²`, Cauchy-contour Taylor extraction, and the bridge
//! `(f, Φ_α) = (2^{|α|} α! π^{n/2})^{1/2} c_α`.

use crate::function::{fourier, TestFunction};
use crate::functional::ka_eval;
use crate::hermite::{legendre_panels, HermiteExpansion, MultiIndex};
use crate::prelude::*;
use crate::special::{LN_PI, PI};

/// `ln (2^{|α|} α! π^{n/2})^{1/2}`.
fn ln_bridge(alpha: &MultiIndex) -> f64 {
    0.5 * (alpha.degree() as f64 * core::f64::consts::LN_2
        + alpha.ln_factorial()
        + 0.5 * alpha.dim() as f64 * LN_PI)
}

/// `π^{-n/2} e^{-z²/4}` with `z² = Σ z_j²` (no conjugation).
fn gaussian_factor(z: &[C64]) -> C64 {
    let z2: C64 = z.iter().map(|v| v * v).sum();
    (-0.25 * z2).exp() * PI.powf(-(z.len() as f64) / 2.0)
}

/// Entire function `Σ c_α z^α` with finitely many Taylor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBargmann {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, C64>,
}

impl ExactBargmann {
    /// `BΦ_α = z^α (2^{|α|} α! π^{n/2})^{-1/2}` applied termwise.
    pub fn from_expansion(e: &HermiteExpansion) -> Result<Self> {
        Ok(Self { dim: e.dim(), coeffs: hermite_to_taylor(e)? })
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (a, c) in &self.coeffs {
            let mut t = *c;
            for (&k, &zj) in a.entries().iter().zip(z) {
                t *= zj.powu(k);
            }
            acc += t;
        }
        acc
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, C64> {
        &self.coeffs
    }
}

/// Bargmann transform by composite Gauss–Legendre, valid on `|z_j| ≤ ρ`.
#[derive(Debug, Clone)]
pub struct QuadratureBargmann {
    dim: usize,
    points: Vec<f64>,
    /// `W_i f(ξ_i) e^{-|ξ_i|²/2}`.
    values: Vec<C64>,
    max_modulus: f64,
    converged: bool,
    deviation: f64,
}

impl QuadratureBargmann {
    /// Builds a grid for `|z_j| ≤ max_modulus`, halving the panel width
    /// until probe values agree to `tol` relative to the absolute integral.
    pub fn new(f: &TestFunction, max_modulus: f64, tol: f64) -> Result<Self> {
        let n = f.dim();
        let d = f.decay();
        let sigma = d.sigma + 0.5;
        let rho = max_modulus * (n as f64).sqrt();
        let peak = rho * rho / (4.0 * sigma);
        let level = d.c.ln() + peak - 40.0;
        let bound = |r: f64| d.c.ln() + d.degree as f64 * r.ln_1p() - sigma * r * r + rho * r;
        let mut r = (rho / sigma).max(1.0);
        while bound(r) > level {
            r *= 1.25;
        }
        let q = if n == 1 { 16 } else { 8 };
        let h0 = (0.5 / sigma.sqrt()).min(q as f64 / (2.0 * (max_modulus + 1.0)));
        let mut panels = ((2.0 * r / h0).ceil() as usize).max(2);
        let probes = probe_points(n, max_modulus);
        let mut grid = Self::build(f, r, panels, q, max_modulus)?;
        for _ in 0..4 {
            panels *= 2;
            let fine = Self::build(f, r, panels, q, max_modulus)?;
            let mut dev: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for z in &probes {
                dev = dev.max((grid.eval(z) - fine.eval(z)).norm());
                scale = scale.max(fine.abs_integral(z));
            }
            let converged = dev <= tol * scale;
            grid = fine;
            grid.deviation = dev;
            if converged {
                grid.converged = true;
                break;
            }
            if grid.values.len() > 2_000_000 {
                break;
            }
        }
        Ok(grid)
    }

    /// Fixed grid with `panels` panels per axis on `[−r, r]`.
    pub fn with_resolution(f: &TestFunction, r: f64, panels: usize, q: usize) -> Result<Self> {
        Self::build(f, r, panels, q, f64::NAN)
    }

    fn build(f: &TestFunction, r: f64, panels: usize, q: usize, max_modulus: f64) -> Result<Self> {
        let n = f.dim();
        let rule = legendre_panels(-r, r, panels, q)?;
        let (points, weights) = rule.tensor(n, true);
        let values = points
            .chunks(n)
            .zip(&weights)
            .map(|(x, w)| {
                let g = -0.5 * x.iter().map(|v| v * v).sum::<f64>();
                f.eval(x) * (w * g.exp())
            })
            .collect();
        Ok(Self { dim: n, points, values, max_modulus, converged: false, deviation: f64::NAN })
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (x, v) in self.points.chunks(self.dim).zip(&self.values) {
            let dot: C64 = x.iter().zip(z).map(|(a, b)| b * a).sum();
            acc += v * dot.exp();
        }
        gaussian_factor(z) * acc
    }

    fn abs_integral(&self, z: &[C64]) -> f64 {
        let mut acc = 0.0;
        for (x, v) in self.points.chunks(self.dim).zip(&self.values) {
            let dot: f64 = x.iter().zip(z).map(|(a, b)| b.re * a).sum();
            acc += v.norm() * dot.exp();
        }
        gaussian_factor(z).norm() * acc
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn max_modulus(&self) -> f64 {
        self.max_modulus
    }

    /// Probe deviation at the last refinement.
    pub fn deviation(&self) -> f64 {
        self.deviation
    }
}

fn probe_points(n: usize, rho: f64) -> Vec<Vec<C64>> {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    [C64::new(0.0, 0.0), C64::new(rho, 0.0), C64::new(0.0, rho), C64::new(-rho * s, -rho * s)]
        .iter()
        .map(|&z| vec![z; n])
        .collect()
}

/// A transform that can be evaluated at complex points.
#[derive(Debug, Clone)]
pub enum EntireFunctionHandle {
    ExactPolynomialTimesGaussianFactor(ExactBargmann),
    QuadratureBargmann(QuadratureBargmann),
}

impl EntireFunctionHandle {
    pub fn dim(&self) -> usize {
        match self {
            Self::ExactPolynomialTimesGaussianFactor(e) => e.dim,
            Self::QuadratureBargmann(q) => q.dim,
        }
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        match self {
            Self::ExactPolynomialTimesGaussianFactor(e) => e.eval(z),
            Self::QuadratureBargmann(q) => q.eval(z),
        }
    }

    pub fn converged(&self) -> bool {
        match self {
            Self::ExactPolynomialTimesGaussianFactor(_) => true,
            Self::QuadratureBargmann(q) => q.converged,
        }
    }
}

/// Exact handle when Hermite coefficients are available, else quadrature
/// certified on `|z_j| ≤ max_modulus`.
pub fn bargmann_handle(f: &TestFunction, max_modulus: f64) -> Result<EntireFunctionHandle> {
    match f.to_expansion() {
        Some(e) => Ok(EntireFunctionHandle::ExactPolynomialTimesGaussianFactor(ExactBargmann::from_expansion(&e)?)),
        None => Ok(EntireFunctionHandle::QuadratureBargmann(QuadratureBargmann::new(f, max_modulus, 1e-12)?)),
    }
}

/// `Bf(z)` and whether it is exact or certified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BargmannValue {
    pub value: C64,
    pub converged: bool,
}

pub fn bargmann_eval(f: &TestFunction, z: &[C64]) -> Result<BargmannValue> {
    if z.len() != f.dim() {
        return Err(Error::Dimension { expected: f.dim(), got: z.len() });
    }
    let rho = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let h = bargmann_handle(f, rho)?;
    Ok(BargmannValue { value: h.eval(z), converged: h.converged() && f.converged() })
}

/// Tensor grid of `k` radii times `k` angles per axis inside `|z_j| ≤ radius`.
pub fn polydisc_grid(n: usize, radius: f64, k: usize) -> Vec<Vec<C64>> {
    let axis: Vec<C64> = (0..k)
        .flat_map(|i| {
            let r = radius * (i + 1) as f64 / k as f64;
            (0..k).map(move |j| C64::from_polar(r, core::f64::consts::TAU * (j as f64 + 0.5) / k as f64))
        })
        .collect();
    let mut out: Vec<Vec<C64>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&z| {
                    let mut q = p.clone();
                    q.push(z);
                    q
                })
            })
            .collect();
    }
    out
}

/// `max |Bf(−iz) − Bf̂(z)|` over the grid.
pub fn duality_check(f: &TestFunction, grid: &[Vec<C64>]) -> Result<f64> {
    let g = fourier(f)?;
    let rho = grid.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let bf = bargmann_handle(f, rho)?;
    let bg = bargmann_handle(&g, rho)?;
    let mut dev: f64 = 0.0;
    for z in grid {
        let rot: Vec<C64> = z.iter().map(|v| v * C64::new(0.0, -1.0)).collect();
        dev = dev.max((bf.eval(&rot) - bg.eval(z)).norm());
    }
    Ok(dev)
}

/// Taylor coefficients from a contour grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorCoefficients {
    pub coeffs: BTreeMap<MultiIndex, C64>,
    pub radii: Vec<f64>,
    pub points: usize,
    /// Largest `|c_α| r^α` among indices with an entry in `[M/2, M)`, a
    /// proxy for the aliased Taylor tail.
    pub aliasing: f64,
}

/// `c_α = r^{-α} M^{-n} Σ_θ F(r e^{iθ}) e^{-iα·θ}` for `|α| ≤ D`.
pub fn contour_taylor(
    f: &EntireFunctionHandle,
    radii: &[f64],
    m: usize,
    max_degree: u32,
) -> Result<TaylorCoefficients> {
    let n = f.dim();
    if radii.len() != n {
        return Err(Error::Dimension { expected: n, got: radii.len() });
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Domain("contour radii must be positive"));
    }
    if (max_degree as usize) >= m {
        return Err(Error::Refused("requested index not below the number of contour points"));
    }
    if m < 2 * max_degree as usize + 2 {
        return Err(Error::Precondition("contour needs M ≥ 2·(max index) + 2"));
    }
    let total = m.pow(n as u32);
    let mut data = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    let mut z = vec![C64::new(0.0, 0.0); n];
    for _ in 0..total {
        for j in 0..n {
            z[j] = C64::from_polar(radii[j], core::f64::consts::TAU * idx[j] as f64 / m as f64);
        }
        data.push(f.eval(&z));
        for j in (0..n).rev() {
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
        }
    }
    let twiddle: Vec<C64> =
        (0..m).map(|k| C64::from_polar(1.0, -core::f64::consts::TAU * k as f64 / m as f64)).collect();
    for axis in 0..n {
        let inner = m.pow((n - 1 - axis) as u32);
        let outer = total / (inner * m);
        let mut out = vec![C64::new(0.0, 0.0); total];
        for o in 0..outer {
            for i in 0..inner {
                for k in 0..m {
                    let mut s = C64::new(0.0, 0.0);
                    for l in 0..m {
                        s += data[(o * m + l) * inner + i] * twiddle[(k * l) % m];
                    }
                    out[(o * m + k) * inner + i] = s / m as f64;
                }
            }
        }
        data = out;
    }
    let strides: Vec<usize> = (0..n).map(|j| m.pow((n - 1 - j) as u32)).collect();
    let at = |e: &[usize]| e.iter().zip(&strides).map(|(k, s)| k * s).sum::<usize>();
    let mut coeffs = BTreeMap::new();
    for a in crate::hermite::multiindex_enumerate(n, max_degree) {
        let e: Vec<usize> = a.entries().iter().map(|&k| k as usize).collect();
        let scale: f64 = a.entries().iter().zip(radii).map(|(&k, r)| r.powi(-(k as i32))).product();
        coeffs.insert(a, data[at(&e)] * scale);
    }
    let mut aliasing: f64 = 0.0;
    for (flat, v) in data.iter().enumerate() {
        let high = (0..n).any(|j| (flat / strides[j]) % m >= m / 2);
        if high {
            aliasing = aliasing.max(v.norm());
        }
    }
    Ok(TaylorCoefficients { coeffs, radii: radii.to_vec(), points: m, aliasing })
}

/// Default contour radii `r_j = (2α_j + 1)^{1/2}` for a target index.
pub fn default_radii(alpha: &MultiIndex) -> Vec<f64> {
    alpha.entries().iter().map(|&k| (2.0 * k as f64 + 1.0).sqrt()).collect()
}

/// Hermite coefficients for `|α| ≤ D`, each read off its own contour at
/// radii `r_j = (2α_j+1)^{1/2}` with `M` points per axis.
pub fn natural_radius_coefficients(f: &EntireFunctionHandle, max_degree: u32, m: usize) -> Result<HermiteExpansion> {
    let n = f.dim();
    let mut out = HermiteExpansion::zero(n)?;
    for a in crate::hermite::multiindex_enumerate(n, max_degree) {
        let t = contour_taylor(f, &default_radii(&a), m, a.degree())?;
        let c = t.coeffs[&a] * ln_bridge(&a).exp();
        out.insert(a, c)?;
    }
    out.with_maxdeg(max_degree)
}

/// Taylor coefficients to Hermite coefficients.
pub fn coeff_bridge(c: &TaylorCoefficients) -> Result<HermiteExpansion> {
    let n = c.radii.len().max(c.coeffs.keys().next().map_or(1, MultiIndex::dim));
    let mut e = HermiteExpansion::zero(n)?;
    for (a, v) in &c.coeffs {
        let l = ln_bridge(a);
        if l > 700.0 {
            return Err(Error::Overflow);
        }
        e.insert(a.clone(), v * l.exp())?;
    }
    Ok(e)
}

/// Hermite coefficients to Taylor coefficients of `Bf`.
pub fn hermite_to_taylor(e: &HermiteExpansion) -> Result<BTreeMap<MultiIndex, C64>> {
    e.iter()
        .map(|(a, c)| {
            let l = ln_bridge(a);
            if l > 700.0 {
                return Err(Error::Overflow);
            }
            Ok((a.clone(), c * (-l).exp()))
        })
        .collect()
}

/// Per-point ratios `|Bf(z) Bf̂(z)| / (π^{-n} K_a(f) e^{(|y|² + ((1−a)/(1+a))|x|²)/2})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductReport {
    pub ka: f64,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

/// Checks the product estimate on a grid; `K_a` is measured unless given.
pub fn product_estimate_check(
    f: &TestFunction,
    a: f64,
    grid: &[Vec<C64>],
    ka: Option<f64>,
) -> Result<ProductReport> {
    let ka = match ka {
        Some(v) => v,
        None => {
            let r = ka_eval(f, a, 1e-9)?;
            if !r.converged {
                return Err(Error::Precondition("K_a did not converge"));
            }
            r.value
        }
    };
    let g = fourier(f)?;
    let rho = grid.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let bf = bargmann_handle(f, rho)?;
    let bg = bargmann_handle(&g, rho)?;
    let n = f.dim() as f64;
    let k = (1.0 - a) / (1.0 + a);
    let ratios: Vec<f64> = grid
        .iter()
        .map(|z| {
            let x2: f64 = z.iter().map(|v| v.re * v.re).sum();
            let y2: f64 = z.iter().map(|v| v.im * v.im).sum();
            let lhs = bf.eval(z).norm() * bg.eval(z).norm();
            let rhs = PI.powf(-n) * ka * (0.5 * (y2 + k * x2)).exp();
            lhs / rhs
        })
        .collect();
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(ProductReport { ka, ratios, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi(k: u32) -> TestFunction {
        TestFunction::from(HermiteExpansion::basis(MultiIndex::single(k)))
    }

    #[test]
    fn basis_transforms() {
        let z = [C64::new(0.7, -1.2)];
        let b0 = bargmann_eval(&phi(0), &z).unwrap().value;
        assert!((b0 - C64::new(PI.powf(-0.25), 0.0)).norm() < 1e-15);
        let b1 = bargmann_eval(&phi(1), &z).unwrap().value;
        assert!((b1 - z[0] * (2.0 * PI.sqrt()).powf(-0.5)).norm() < 1e-15);
    }

    #[test]
    fn quadrature_matches_exact() {
        let e = crate::function::random_expansion(1, 6, 4).unwrap();
        let f = TestFunction::from(e.clone());
        let q = QuadratureBargmann::new(&f, 3.0, 1e-13).unwrap();
        assert!(q.converged());
        let ex = ExactBargmann::from_expansion(&e).unwrap();
        for z in polydisc_grid(1, 3.0, 5) {
            assert!((q.eval(&z) - ex.eval(&z)).norm() < 1e-10);
        }
    }

    #[test]
    fn contour_on_monomial() {
        let mut c = BTreeMap::new();
        c.insert(MultiIndex::single(2), C64::new(1.0, 0.0));
        let h = EntireFunctionHandle::ExactPolynomialTimesGaussianFactor(ExactBargmann { dim: 1, coeffs: c });
        let t = contour_taylor(&h, &[1.0], 8, 3).unwrap();
        for (a, v) in &t.coeffs {
            let expect = if a.degree() == 2 { 1.0 } else { 0.0 };
            assert!((v - C64::new(expect, 0.0)).norm() < 1e-14);
        }
        assert!(contour_taylor(&h, &[1.0], 8, 8).is_err());
    }

    #[test]
    fn bridge_constants() {
        let h = bargmann_handle(&phi(1), 1.0).unwrap();
        let t = contour_taylor(&h, &[1.0], 8, 2).unwrap();
        let c1 = t.coeffs[&MultiIndex::single(1)];
        assert!((c1.re - (2.0 * PI.sqrt()).powf(-0.5)).abs() < 1e-14);
        let back = coeff_bridge(&t).unwrap();
        assert!((back.get(&MultiIndex::single(1)).re - 1.0).abs() < 1e-13);
        assert_eq!(default_radii(&MultiIndex::new(vec![0, 4]).unwrap()), vec![1.0, 3.0]);
    }
}
