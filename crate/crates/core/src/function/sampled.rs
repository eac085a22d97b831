use alloc::sync::Arc;
use core::fmt;

use crate::prelude::*;

/// Shape of a decay bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayProfile {
    /// `|f(x)| ≤ C (1+|x|)^d e^{-σ|x|²}`.
    Gaussian,
    /// `|f(x)| ≤ C (1+|x|)^d e^{-σ|x|}`.
    Exponential,
}

/// Pointwise envelope used to choose truncation radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayBound {
    pub c: f64,
    pub sigma: f64,
    /// Polynomial growth allowance `d`.
    pub degree: u32,
    pub profile: DecayProfile,
}

impl DecayBound {
    pub fn gaussian(c: f64, sigma: f64) -> Self {
        Self { c, sigma, degree: 0, profile: DecayProfile::Gaussian }
    }

    pub fn exponential(c: f64, sigma: f64) -> Self {
        Self { c, sigma, degree: 0, profile: DecayProfile::Exponential }
    }

    pub fn with_degree(mut self, d: u32) -> Self {
        self.degree = d;
        self
    }

    /// `ln` of the bound at radius `r`.
    pub fn ln_bound(&self, r: f64) -> f64 {
        let decay = match self.profile {
            DecayProfile::Gaussian => self.sigma * r * r,
            DecayProfile::Exponential => self.sigma * r,
        };
        self.c.ln() + self.degree as f64 * r.ln_1p() - decay
    }

    /// A radius beyond which the bound stays below `e^{level}`.
    pub fn radius_below(&self, level: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = 1.0;
        while self.ln_bound(hi) > level || self.is_rising(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > 1e8 {
                return hi;
            }
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.ln_bound(mid) > level || self.is_rising(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    fn is_rising(&self, r: f64) -> bool {
        self.ln_bound(r * 1.001 + 1e-9) > self.ln_bound(r)
    }
}

pub type PointFn = Arc<dyn Fn(&[f64]) -> C64 + Send + Sync>;
pub type LogAbsFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A function known only through pointwise evaluation plus a decay bound.
#[derive(Clone)]
pub struct Sampled {
    dim: usize,
    eval: PointFn,
    ln_abs: Option<LogAbsFn>,
    decay: DecayBound,
    dual_decay: Option<DecayBound>,
    converged: bool,
}

impl Sampled {
    pub fn new(dim: usize, eval: PointFn, decay: DecayBound) -> Self {
        Self { dim, eval, ln_abs: None, decay, dual_decay: None, converged: true }
    }

    /// Supplies `ln|f|` directly, for functions whose values underflow.
    pub fn with_ln_abs(mut self, f: LogAbsFn) -> Self {
        self.ln_abs = Some(f);
        self
    }

    /// Decay bound for the Fourier transform, needed to transform numerically.
    pub fn with_dual_decay(mut self, d: DecayBound) -> Self {
        self.dual_decay = Some(d);
        self
    }

    pub fn with_converged(mut self, ok: bool) -> Self {
        self.converged = ok;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        (self.eval)(x)
    }

    pub fn ln_abs(&self, x: &[f64]) -> f64 {
        match &self.ln_abs {
            Some(f) => f(x),
            None => self.eval(x).norm().ln(),
        }
    }

    pub fn decay(&self) -> DecayBound {
        self.decay
    }

    pub fn dual_decay(&self) -> Option<DecayBound> {
        self.dual_decay
    }

    /// False when the values come from a quadrature that failed its certificate.
    pub fn converged(&self) -> bool {
        self.converged
    }

    pub(crate) fn point_fn(&self) -> PointFn {
        self.eval.clone()
    }

    pub(crate) fn log_fn(&self) -> Option<LogAbsFn> {
        self.ln_abs.clone()
    }
}

impl fmt::Debug for Sampled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sampled")
            .field("dim", &self.dim)
            .field("decay", &self.decay)
            .field("dual_decay", &self.dual_decay)
            .field("converged", &self.converged)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_clears_level() {
        let d = DecayBound::gaussian(3.0, 0.5).with_degree(6);
        let r = d.radius_below(-40.0);
        assert!(d.ln_bound(r) <= -40.0 + 1e-9);
        assert!(d.ln_bound(0.9 * r) > -40.0);
        let e = DecayBound::exponential(1.0, 2.0);
        assert!((e.radius_below(-10.0) - 5.0).abs() < 1e-6);
    }
}
