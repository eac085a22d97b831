//! The subcritical Beurling functional `K_a`, its polynomial variant
//! `E(R,S,a)`, the weighted BDJ functional, exponential moments and
//! scaling-exponent fits.

mod bdj;
mod engine;
mod fit;
mod moment;
mod monomial;

pub use bdj::{weighted_bdj, weighted_bdj_with, BdjOptions};
pub use fit::{scaling_fit, scaling_fit_e, scaling_fit_ka, ScalingFit};
pub use moment::{exp_moment, MomentOrder};
pub use monomial::{e_monomial_bound, e_monomial_bound_abs};

use engine::{pair_sums, GridSpec, Kernel, SideGrid};

use crate::function::{fourier, DecayBound, DecayProfile, PolyGaussian, Polynomial, TestFunction};
use crate::prelude::*;

/// Outcome class of a functional evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Error estimate below the requested tolerance.
    Converged,
    /// Best estimate after the depth limit; tolerance not met.
    Unconverged,
    /// Partial sums settle but the tail is above tolerance.
    Finite,
    /// Partial sums keep doubling; value reported as `+∞`.
    Divergent,
    /// Neither convergence nor divergence could be established.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalResult {
    pub value: f64,
    pub abs_error: f64,
    pub converged: bool,
    pub depth: u32,
    pub status: Status,
}

impl FunctionalResult {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    fn divergent(depth: u32) -> Self {
        Self { value: f64::INFINITY, abs_error: f64::INFINITY, converged: false, depth, status: Status::Divergent }
    }
}

/// Controls for the double-integral evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KaOptions {
    pub reltol: f64,
    /// Panel halvings after the base grid; `None` picks 4 in one
    /// dimension and 1 above (each halving multiplies the work by `4ⁿ`).
    pub max_depth: Option<u32>,
}

impl KaOptions {
    pub fn new(reltol: f64) -> Self {
        Self { reltol, max_depth: None }
    }
}

/// `K_a(f) = ∬ |f(x)| |f̂(y)| e^{a|x·y|} dx dy`.
pub fn ka_eval(f: &TestFunction, a: f64, reltol: f64) -> Result<FunctionalResult> {
    ka_eval_with(f, a, KaOptions::new(reltol))
}

pub fn ka_eval_with(f: &TestFunction, a: f64, opts: KaOptions) -> Result<FunctionalResult> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::Domain("K_a needs 0 ≤ a < 1"));
    }
    let g = fourier(f)?;
    let fl = |x: &[f64]| f.ln_abs(x);
    let gl = |y: &[f64]| g.ln_abs(y);
    let mut r = double_integral(&fl, f.decay(), &gl, g.decay(), f.dim(), a, opts)?;
    if !g.converged() {
        r.converged = false;
        if r.status == Status::Converged {
            r.status = Status::Unconverged;
        }
    }
    Ok(r)
}

/// `E(R,S,a) = ∬ |R(x)| |S(y)| e^{-|x|²/2 - |y|²/2} e^{a|x·y|} dx dy`.
pub fn e_poly_quad(r: &Polynomial, s: &Polynomial, a: f64, reltol: f64) -> Result<FunctionalResult> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::Domain("E(R,S,a) needs 0 ≤ a < 1"));
    }
    if r.dim() != s.dim() {
        return Err(Error::Dimension { expected: r.dim(), got: s.dim() });
    }
    let f = PolyGaussian::standard(r.clone());
    let g = PolyGaussian::standard(s.clone());
    let fl = |x: &[f64]| f.ln_abs(x);
    let gl = |y: &[f64]| g.ln_abs(y);
    double_integral(&fl, f.decay(), &gl, g.decay(), r.dim(), a, KaOptions::new(reltol))
}

pub(crate) fn panel_layout(sigma: f64, degree: u32, n: usize) -> (f64, usize) {
    let (base, q) = if n == 1 { (0.5, 8) } else { (1.0, 4) };
    let h = base / (2.0 * sigma).sqrt() * (2.5 / ((degree + 1) as f64).sqrt()).min(1.0);
    (h, q)
}

fn double_integral(
    fl: &dyn Fn(&[f64]) -> f64,
    df: DecayBound,
    gl: &dyn Fn(&[f64]) -> f64,
    dg: DecayBound,
    n: usize,
    a: f64,
    opts: KaOptions,
) -> Result<FunctionalResult> {
    if df.profile != DecayProfile::Gaussian || dg.profile != DecayProfile::Gaussian {
        return Err(Error::Refused("K_a evaluation needs Gaussian decay bounds"));
    }
    let max_depth = opts.max_depth.unwrap_or(if n == 1 { 4 } else { 1 });
    let det = df.sigma * dg.sigma - 0.25 * a * a;
    if det <= 0.0 {
        return bdj::nested_verdict(fl, df, gl, dg, n, Kernel::Beurling { a }, opts.reltol);
    }
    let deg = df.degree + dg.degree + 2 * n as u32;
    let tail = |sigma: f64| DecayBound { c: df.c * dg.c, sigma, degree: deg, profile: DecayProfile::Gaussian };
    let tail_x = tail(det / dg.sigma);
    let tail_y = tail(det / df.sigma);
    let mut level = opts.reltol.ln() - 25.0;
    let (hx0, qx) = panel_layout(df.sigma, df.degree, n);
    let (hy0, qy) = panel_layout(dg.sigma, dg.degree, n);
    let eps = 1e-3 * opts.reltol;
    'radius: loop {
        let rx = tail_x.radius_below(level);
        let ry = tail_y.radius_below(level);
        let mut prev: Option<f64> = None;
        for depth in 0..=max_depth {
            let scale = 0.5f64.powi(depth as i32);
            let (hx, hy) = (hx0 * scale, hy0 * scale);
            let sx = GridSpec { half_panels: (rx / hx).ceil() as usize, h: hx, q: qx };
            let sy = GridSpec { half_panels: (ry / hy).ceil() as usize, h: hy, q: qy };
            let gx = SideGrid::build(fl, n, sx, &[])?;
            let gy = SideGrid::build(gl, n, sy, &[])?;
            let sums = pair_sums(&gx, &gy, Kernel::Beurling { a }, 1, eps);
            let total = sums.total();
            let ln_v = total.ln();
            let value = total.value();
            if depth == 0 {
                let needed = ln_v + opts.reltol.ln() - 12.0;
                if tail_x.ln_bound(sx.radius()).max(tail_y.ln_bound(sy.radius())) > needed && needed < level {
                    level = needed;
                    continue 'radius;
                }
            }
            let skipped = sums.total_skipped().value();
            if let Some(p) = prev {
                let err = (value - p).abs() + skipped;
                let converged = err <= opts.reltol * value;
                if converged || depth == max_depth {
                    let status = if converged { Status::Converged } else { Status::Unconverged };
                    return Ok(FunctionalResult { value, abs_error: err, converged, depth, status });
                }
            } else if max_depth == 0 {
                return Ok(FunctionalResult {
                    value,
                    abs_error: f64::INFINITY,
                    converged: false,
                    depth: 0,
                    status: Status::Unconverged,
                });
            }
            prev = Some(value);
        }
        unreachable!("depth loop always returns");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::PI;

    fn closed_form(a: f64) -> f64 {
        2.0 * PI / (1.0 - a * a).sqrt() * (1.0 + 2.0 / PI * a.asin())
    }

    #[test]
    fn gaussian_closed_form() {
        let g = TestFunction::from(PolyGaussian::gaussian(1));
        let r0 = ka_eval(&g, 0.0, 1e-10).unwrap();
        assert!((r0.value - 2.0 * PI).abs() < 1e-9);
        for a in [0.3, 0.6, 0.9] {
            let r = ka_eval(&g, a, 1e-8).unwrap();
            assert!(r.converged);
            assert!((r.value / closed_form(a) - 1.0).abs() < 1e-8, "a={a}: {}", r.value);
        }
        assert!(ka_eval(&g, 1.0, 1e-6).is_err());
    }
}
