use crate::function::TestFunction;
use crate::hermite::mapped_half_line;
use crate::prelude::*;
use crate::special::LogAccumulator;

use super::{FunctionalResult, Status};
use crate::function::DecayProfile;

/// Weight in the exponential moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentOrder {
    /// `e^{t|ξ|}`.
    Linear,
    /// No weight: the plain `L¹` norm.
    None,
}

/// `∫ |f(ξ)| e^{t|ξ|} dξ` by mapped Gauss–Legendre on each half axis,
/// doubling the node count until two successive values agree to `1e-10`.
pub fn exp_moment(f: &TestFunction, t: f64, order: MomentOrder) -> Result<FunctionalResult> {
    exp_moment_with(f, t, order, 1e-10)
}

pub fn exp_moment_with(f: &TestFunction, t: f64, order: MomentOrder, reltol: f64) -> Result<FunctionalResult> {
    if !(t >= 0.0) {
        return Err(Error::Domain("moment parameter must be nonnegative"));
    }
    let t = if order == MomentOrder::None { 0.0 } else { t };
    let n = f.dim();
    let d = f.decay();
    let scale = match d.profile {
        DecayProfile::Gaussian => (1.0 / d.sigma.sqrt()).max(t / d.sigma),
        DecayProfile::Exponential if d.sigma > t => 1.0 / (d.sigma - t),
        DecayProfile::Exponential => 1.0 / d.sigma,
    };
    let max_m = if n == 1 { 4096 } else { 512 };
    let mut m = 32;
    let mut prev = eval_once(f, t, m, scale)?;
    let mut depth = 0;
    loop {
        m *= 2;
        depth += 1;
        let next = eval_once(f, t, m, scale)?;
        let err = (next - prev).abs();
        if err <= reltol * next || m >= max_m || (n as u32 * m.ilog2()) > 22 {
            let converged = err <= reltol * next;
            let status = if converged { Status::Converged } else { Status::Unconverged };
            return Ok(FunctionalResult { value: next, abs_error: err, converged, depth, status });
        }
        prev = next;
    }
}

fn eval_once(f: &TestFunction, t: f64, m: usize, scale: f64) -> Result<f64> {
    let n = f.dim();
    let half = mapped_half_line(m, scale)?;
    let mut nodes = Vec::with_capacity(2 * m);
    let mut lw = Vec::with_capacity(2 * m);
    for (x, w) in half.nodes.iter().zip(&half.weights) {
        nodes.push(*x);
        lw.push(w.ln());
        nodes.push(-*x);
        lw.push(w.ln());
    }
    let k = nodes.len();
    let total = k.pow(n as u32);
    let mut acc = LogAccumulator::new();
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    for _ in 0..total {
        let mut l = 0.0;
        for j in 0..n {
            x[j] = nodes[idx[j]];
            l += lw[idx[j]];
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        acc.add_log(f.ln_abs(&x) + t * r + l);
        for j in (0..n).rev() {
            idx[j] += 1;
            if idx[j] < k {
                break;
            }
            idx[j] = 0;
        }
    }
    Ok(acc.value())
}
