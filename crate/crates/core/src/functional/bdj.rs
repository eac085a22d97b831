use crate::function::{fourier, DecayBound, TestFunction};
use crate::prelude::*;

use super::engine::{pair_sums, GridSpec, Kernel, SideGrid};
use super::{panel_layout, FunctionalResult, Status};

/// Nested radii `R_k = r0 · 2^k`, `k = 0..=doublings`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdjOptions {
    pub reltol: f64,
    pub r0: f64,
    pub doublings: u32,
}

impl Default for BdjOptions {
    fn default() -> Self {
        Self { reltol: 1e-6, r0: 4.0, doublings: 6 }
    }
}

/// `∬ |f(x)| |f̂(y)| e^{|x·y|} (1+|x|+|y|)^{−N} dx dy` over nested boxes.
///
/// Divergent when the partial sum more than doubles for four consecutive
/// radius doublings; finite when successive increments shrink by at least
/// a factor 0.75, the geometric tail being added to the value; inconclusive
/// otherwise.
pub fn weighted_bdj(f: &TestFunction, power: f64, reltol: f64) -> Result<FunctionalResult> {
    Ok(weighted_bdj_with(f, power, BdjOptions { reltol, ..BdjOptions::default() })?.0)
}

/// As [`weighted_bdj`], also returning `(R_k, partial sum)` pairs.
pub fn weighted_bdj_with(
    f: &TestFunction,
    power: f64,
    opts: BdjOptions,
) -> Result<(FunctionalResult, Vec<(f64, f64)>)> {
    if !(power >= 0.0) {
        return Err(Error::Domain("weight exponent must be nonnegative"));
    }
    let g = fourier(f)?;
    let fl = |x: &[f64]| f.ln_abs(x);
    let gl = |y: &[f64]| g.ln_abs(y);
    let (ln_s, radii) = nested_sums(&fl, f.decay(), &gl, g.decay(), f.dim(), Kernel::Weighted { power }, opts)?;
    let mut r = verdict(&ln_s, opts.reltol, opts.doublings);
    if !g.converged() && r.converged {
        r.converged = false;
        r.status = Status::Unconverged;
    }
    let partial = radii.into_iter().zip(ln_s.iter().map(|l| l.exp())).collect();
    Ok((r, partial))
}

pub(crate) fn nested_verdict(
    fl: &dyn Fn(&[f64]) -> f64,
    df: DecayBound,
    gl: &dyn Fn(&[f64]) -> f64,
    dg: DecayBound,
    n: usize,
    kernel: Kernel,
    reltol: f64,
) -> Result<FunctionalResult> {
    let opts = BdjOptions { reltol, ..BdjOptions::default() };
    let (ln_s, _) = nested_sums(fl, df, gl, dg, n, kernel, opts)?;
    Ok(verdict(&ln_s, reltol, opts.doublings))
}

fn aligned(h: f64, r0: f64) -> f64 {
    r0 / (r0 / h).ceil()
}

fn nested_sums(
    fl: &dyn Fn(&[f64]) -> f64,
    df: DecayBound,
    gl: &dyn Fn(&[f64]) -> f64,
    dg: DecayBound,
    n: usize,
    kernel: Kernel,
    opts: BdjOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let radii: Vec<f64> = (0..=opts.doublings).map(|k| opts.r0 * 2f64.powi(k as i32)).collect();
    let rmax = *radii.last().unwrap_or(&opts.r0);
    let (hx, qx) = panel_layout(df.sigma, df.degree, n);
    let (hy, qy) = panel_layout(dg.sigma, dg.degree, n);
    let (hx, hy) = (aligned(hx, opts.r0), aligned(hy, opts.r0));
    let sx = GridSpec { half_panels: (rmax / hx).round() as usize, h: hx, q: qx };
    let sy = GridSpec { half_panels: (rmax / hy).round() as usize, h: hy, q: qy };
    let gx = SideGrid::build(fl, n, sx, &radii)?;
    let gy = SideGrid::build(gl, n, sy, &radii)?;
    let sums = pair_sums(&gx, &gy, kernel, radii.len(), 1e-3 * opts.reltol);
    Ok((sums.cumulative_ln(), radii))
}

/// `ln(e^b − e^a)` for `b ≥ a`.
fn ln_diff(b: f64, a: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    b + (-(a - b).exp()).ln_1p()
}

fn verdict(ln_s: &[f64], reltol: f64, depth: u32) -> FunctionalResult {
    let k = ln_s.len();
    let ratios: Vec<f64> = ln_s.windows(2).map(|w| w[1] - w[0]).collect();
    let mut run = 0;
    for r in &ratios {
        if *r > core::f64::consts::LN_2 {
            run += 1;
            if run >= 4 {
                return FunctionalResult::divergent(depth);
            }
        } else {
            run = 0;
        }
    }
    let last = ln_s[k - 1];
    if k >= 4 {
        let inc: Vec<f64> = ln_s.windows(2).map(|w| ln_diff(w[1], w[0])).collect();
        let m = inc.len();
        let t1 = inc[m - 1] - inc[m - 2];
        let t2 = inc[m - 2] - inc[m - 3];
        let shrink = 0.75f64.ln();
        if t1 <= shrink && t2 <= shrink {
            let tau = t1.exp();
            let tail = inc[m - 1].exp() * tau / (1.0 - tau);
            let value = last.exp() + tail;
            let converged = tail <= reltol * value;
            let status = if converged { Status::Converged } else { Status::Finite };
            return FunctionalResult { value, abs_error: tail, converged, depth, status };
        }
    }
    FunctionalResult {
        value: last.exp(),
        abs_error: f64::INFINITY,
        converged: false,
        depth,
        status: Status::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_classes() {
        let div: Vec<f64> = (0..7).map(|k| (k as f64) * 1.0).collect();
        assert_eq!(verdict(&div, 1e-6, 0).status, Status::Divergent);
        let fin: Vec<f64> = (0..7).map(|k| (2.0 - 0.5f64.powi(k)).ln()).collect();
        let r = verdict(&fin, 1e-6, 0);
        assert!(matches!(r.status, Status::Finite | Status::Converged));
        assert!((r.value - 2.0).abs() < 1e-9);
        let flat: Vec<f64> = (0..7).map(|k| (1.0 + k as f64).ln()).collect();
        assert_eq!(verdict(&flat, 1e-6, 0).status, Status::Inconclusive);
    }
}
