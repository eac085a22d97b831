use alloc::sync::Arc;

use crate::hermite::{fourier_diagonal, gauss_hermite_rule, legendre_panels};
use crate::linalg::{complex_solve, symmetric_eigen, Matrix};
use crate::prelude::*;
use crate::special::PI;

use super::{DecayBound, DecayProfile, PolyGaussian, Sampled, TestFunction};

/// `f̂(y) = (2π)^{-n/2} ∫ f(x) e^{-ix·y} dx`.
///
/// Exact for Hermite expansions and for the Gaussian class with `B = 0`;
/// otherwise a certified quadrature whose flag is carried by the result.
pub fn fourier(f: &TestFunction) -> Result<TestFunction> {
    match f {
        TestFunction::FiniteHermite(e) => Ok(TestFunction::FiniteHermite(fourier_diagonal(e))),
        TestFunction::PolyGaussianForm(p) if !p.has_chirp() => {
            Ok(TestFunction::PolyGaussianForm(p.fourier_exact()?))
        }
        TestFunction::PolyGaussianForm(p) => Ok(TestFunction::Sampled(chirp_fourier(p)?)),
        TestFunction::Sampled(s) => Ok(TestFunction::Sampled(quadrature_fourier(s)?)),
    }
}

/// `f_δ(x) = δ^{n/2} f(δx)`.
pub fn dilate(f: &TestFunction, delta: f64) -> Result<TestFunction> {
    if !(delta > 0.0) {
        return Err(Error::Domain("dilation factor must be positive"));
    }
    if delta == 1.0 {
        return Ok(f.clone());
    }
    match f {
        TestFunction::FiniteHermite(e) => {
            let pg = super::hermite_to_poly_gaussian(e);
            Ok(TestFunction::PolyGaussianForm(pg.dilate(delta)?))
        }
        TestFunction::PolyGaussianForm(p) => Ok(TestFunction::PolyGaussianForm(p.dilate(delta)?)),
        TestFunction::Sampled(s) => Ok(TestFunction::Sampled(dilate_sampled(s, delta))),
    }
}

fn dilate_sampled(s: &Sampled, delta: f64) -> Sampled {
    let n = s.dim();
    let amp = delta.powf(n as f64 / 2.0);
    let ln_amp = amp.ln();
    let inner = s.point_fn();
    let eval = Arc::new(move |x: &[f64]| {
        let y: Vec<f64> = x.iter().map(|v| v * delta).collect();
        inner(&y) * amp
    });
    let scaled = |d: DecayBound, k: f64, amp: f64| {
        let sigma = match d.profile {
            DecayProfile::Gaussian => d.sigma * k * k,
            DecayProfile::Exponential => d.sigma * k,
        };
        DecayBound { c: d.c * amp * k.max(1.0).powi(d.degree as i32), sigma, ..d }
    };
    let mut out = Sampled::new(n, eval, scaled(s.decay(), delta, amp)).with_converged(s.converged());
    if let Some(log) = s.log_fn() {
        out = out.with_ln_abs(Arc::new(move |x: &[f64]| {
            let y: Vec<f64> = x.iter().map(|v| v * delta).collect();
            log(&y) + ln_amp
        }));
    }
    if let Some(d) = s.dual_decay() {
        out = out.with_dual_decay(scaled(d, 1.0 / delta, 1.0 / amp));
    }
    out
}

const PANEL_NODES: usize = 16;

/// Tensor composite Gauss–Legendre transform of a sampled function.
///
/// The truncation radius comes from the decay bound, the panel width from
/// the largest frequency the dual bound says matters. The grid is accepted
/// when halving the panel width moves no probe value by more than `1e-10`
/// of `‖f‖₁`.
pub fn quadrature_fourier(s: &Sampled) -> Result<Sampled> {
    let dual = s.dual_decay().ok_or(Error::Refused("numerical transform needs a dual decay bound"))?;
    let n = s.dim();
    let d = s.decay();
    let rx = d.radius_below(d.c.ln() - 39.0);
    let ry = dual.radius_below(dual.c.ln() - 39.0);
    let h = (PANEL_NODES as f64 / (2.0 * (ry + 1.0))).min(1.0);
    let panels = ((2.0 * rx / h).ceil() as usize).max(1);
    let probes: Vec<Vec<f64>> = [0.0, 0.2, 0.45]
        .iter()
        .map(|t| {
            let mut y = vec![0.0; n];
            y[0] = t * ry;
            y
        })
        .collect();
    let mut grid = SampledGrid::new(s, rx, panels)?;
    let mut converged = false;
    for _ in 0..4 {
        let fine = SampledGrid::new(s, rx, 2 * grid.panels)?;
        let scale = fine.l1.max(f64::MIN_POSITIVE);
        let dev = probes
            .iter()
            .map(|y| (grid.transform(y) - fine.transform(y)).norm())
            .fold(0.0, f64::max);
        grid = fine;
        if dev <= 1e-10 * scale {
            converged = true;
            break;
        }
        if grid.points.len() > 4_000_000 {
            break;
        }
    }
    let grid = Arc::new(grid);
    let eval = Arc::new(move |y: &[f64]| grid.transform(y));
    Ok(Sampled::new(n, eval, dual).with_dual_decay(d).with_converged(converged && s.converged()))
}

struct SampledGrid {
    dim: usize,
    panels: usize,
    points: Vec<f64>,
    values: Vec<C64>,
    l1: f64,
}

impl SampledGrid {
    fn new(s: &Sampled, r: f64, panels: usize) -> Result<Self> {
        let n = s.dim();
        let rule = legendre_panels(-r, r, panels, PANEL_NODES)?;
        let (points, weights) = rule.tensor(n, true);
        let mut values = Vec::with_capacity(weights.len());
        let mut l1 = 0.0;
        for (x, w) in points.chunks(n).zip(&weights) {
            let v = s.eval(x) * *w;
            l1 += v.norm();
            values.push(v);
        }
        Ok(Self { dim: n, panels, points, values, l1 })
    }

    fn transform(&self, y: &[f64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (x, v) in self.points.chunks(self.dim).zip(&self.values) {
            let phase: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
            acc += v * C64::from_polar(1.0, -phase);
        }
        acc * (2.0 * PI).powf(-(self.dim as f64) / 2.0)
    }
}

/// Transform of a chirped Gaussian-class function by contour shift.
///
/// With `G = A + iB` the saddle of `−(Gx,x) − ix·y` is `x₀ = −(i/2)G⁻¹y`, so
/// `f̂(y) = (2π)^{-n/2} e^{-(G⁻¹y,y)/4} ∫ P(x₀+s) e^{-(Gs,s)} ds`. The
/// remaining integral is done by Gauss–Hermite after `s = A^{-1/2}u`;
/// node counts double until the probes agree to `1e-12`.
pub fn chirp_fourier(p: &PolyGaussian) -> Result<Sampled> {
    let n = p.dim();
    let (lam, r) = symmetric_eigen(p.a())?;
    let mut s_half = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            s_half[(i, j)] = (0..n).map(|k| r[(i, k)] * r[(j, k)] / lam[k].sqrt()).sum();
        }
    }
    let det_s: f64 = lam.iter().map(|l| 1.0 / l.sqrt()).product();
    let bp = s_half.mul(p.b()).mul(&s_half);
    let g: Vec<C64> = (0..n * n)
        .map(|k| C64::new(p.a().as_slice()[k], p.b().as_slice()[k]))
        .collect();
    let mut ginv = vec![C64::new(0.0, 0.0); n * n];
    for col in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[col] = C64::new(1.0, 0.0);
        let x = complex_solve(n, &g, &e)?;
        for row in 0..n {
            ginv[row * n + col] = x[row];
        }
    }
    let ctx = Arc::new(ChirpContext {
        dim: n,
        poly: p.poly().clone(),
        s_half: s_half.clone(),
        bp,
        ginv,
        ln_prefactor: det_s.ln() - 0.5 * n as f64 * (2.0 * PI).ln(),
        points: Vec::new(),
        weights: Vec::new(),
    });
    // dual decay: e^{-Re(G⁻¹y,y)/4} with Re G⁻¹ = (A + B A⁻¹ B)⁻¹
    let a_inv = p.a().inverse()?;
    let m_eff = p.a().add(&p.b().mul(&a_inv).mul(p.b()));
    let lam_max = symmetric_eigen(&m_eff)?.0.last().copied().unwrap_or(1.0);
    let sigma = 1.0 / (4.0 * lam_max);
    let ry = DecayBound::gaussian(1.0, sigma).with_degree(p.poly().degree()).radius_below(-30.0);
    let probes: Vec<Vec<f64>> = [0.0, 0.3, 0.7]
        .iter()
        .map(|t| {
            let mut y = vec![0.0; n];
            y[0] = t * ry;
            if n > 1 {
                y[1] = -0.5 * t * ry;
            }
            y
        })
        .collect();
    let mut m = 24usize;
    let mut current = ctx.with_rule(m)?;
    let mut converged = false;
    while m.pow(n as u32) <= 1 << 16 {
        let next = ctx.with_rule(2 * m)?;
        let dev = probes
            .iter()
            .map(|y| {
                let (l1, u1) = current.eval_log(y);
                let (l2, u2) = next.eval_log(y);
                let scale = l1.max(l2);
                (u1 * (l1 - scale).exp() - u2 * (l2 - scale).exp()).norm()
            })
            .fold(0.0, f64::max);
        current = next;
        m *= 2;
        if dev <= 1e-12 {
            converged = true;
            break;
        }
    }
    let moment: f64 = {
        let norm_s = (0..n)
            .map(|i| (0..n).map(|j| s_half[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let d = p.poly().degree() as i32;
        let rule = gauss_hermite_rule(40)?;
        let (pts, w) = rule.tensor(n, false);
        pts.chunks(n)
            .zip(&w)
            .map(|(u, w)| w * (1.0 + norm_s * u.iter().map(|v| v * v).sum::<f64>().sqrt()).powi(d))
            .sum()
    };
    let ginv_norm = current.ginv.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let c = current.ln_prefactor.exp()
        * p.poly().coefficient_l1()
        * (1.0 + 0.5 * ginv_norm).powi(p.poly().degree() as i32)
        * moment;
    let dual = DecayBound::gaussian(c, sigma).with_degree(p.poly().degree());
    let current = Arc::new(current);
    let ev = current.clone();
    let eval = Arc::new(move |y: &[f64]| {
        let (l, u) = ev.eval_log(y);
        u * l.exp()
    });
    let log = Arc::new(move |y: &[f64]| current.eval_log(y).0);
    Ok(Sampled::new(n, eval, dual)
        .with_ln_abs(log)
        .with_dual_decay(p.decay())
        .with_converged(converged))
}

struct ChirpContext {
    dim: usize,
    poly: super::Polynomial,
    s_half: Matrix,
    bp: Matrix,
    ginv: Vec<C64>,
    ln_prefactor: f64,
    points: Vec<f64>,
    weights: Vec<C64>,
}

impl ChirpContext {
    fn with_rule(&self, m: usize) -> Result<Self> {
        let rule = gauss_hermite_rule(m)?;
        let (pts, w) = rule.tensor(self.dim, false);
        let n = self.dim;
        let mut points = Vec::with_capacity(pts.len());
        let mut weights = Vec::with_capacity(w.len());
        for (u, w) in pts.chunks(n).zip(&w) {
            points.extend(self.s_half.apply(u));
            weights.push(C64::from_polar(*w, -self.bp.quadratic_form(u)));
        }
        Ok(Self {
            dim: n,
            poly: self.poly.clone(),
            s_half: self.s_half.clone(),
            bp: self.bp.clone(),
            ginv: self.ginv.clone(),
            ln_prefactor: self.ln_prefactor,
            points,
            weights,
        })
    }

    fn eval_log(&self, y: &[f64]) -> (f64, C64) {
        let n = self.dim;
        let x0: Vec<C64> = (0..n)
            .map(|i| {
                let s: C64 = (0..n).map(|j| self.ginv[i * n + j] * y[j]).sum();
                s * C64::new(0.0, -0.5)
            })
            .collect();
        let mut quad = C64::new(0.0, 0.0);
        let mut z = vec![C64::new(0.0, 0.0); n];
        for (s, w) in self.points.chunks(n).zip(&self.weights) {
            for i in 0..n {
                z[i] = x0[i] + s[i];
            }
            quad += w * self.poly.eval_complex(&z);
        }
        let mut q = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                q += self.ginv[i * n + j] * y[i] * y[j];
            }
        }
        let expo = -0.25 * q;
        let mag = quad.norm();
        if mag == 0.0 {
            return (f64::NEG_INFINITY, C64::new(0.0, 0.0));
        }
        (self.ln_prefactor + expo.re + mag.ln(), quad / mag * C64::from_polar(1.0, expo.im))
    }
}
