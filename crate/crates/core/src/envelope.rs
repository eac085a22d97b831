//! Hermite-coefficient decay envelopes, dominance checks and decay-rate fits.

use crate::hermite::{HermiteExpansion, MultiIndex};
use crate::prelude::*;
use crate::special::{least_squares, max_abs_residual, LN_PI};

/// Coefficients below this modulus are left out of every fit.
pub const FIT_FLOOR: f64 = 1e-13;
/// Largest admissible growth of the log-ratio per unit `|α|`.
pub const DOMINANCE_SLOPE_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EnvelopeKind {
    /// `C e^{t/2} K_a^{1/2} Π(2α_j+1)^{1/4n} e^{-(2|α|+n)t/2n}`.
    Eigenfunction,
    /// `C K_a^{1/2} Π(2α_j+1)^{1/4} e^{-(2|α|+n)t/2}`.
    OnFinite,
    /// `C Π(2α_j+1)^{1/4} e^{-t(2α_j+1)^{1/2}/√(2n)}`.
    ExpDecay,
    /// `C e^{-t(2|α|+n)^{1/2}}`.
    EntireVector,
    /// `C Π(2α_j+1)^{-1/4} e^{-(2|α|+n)t/2}`.
    VemuriHardy,
    /// `C e^{-(2|α|+n)t/2}`.
    HardyPointwise,
}

impl EnvelopeKind {
    pub const ALL: [EnvelopeKind; 6] = [
        Self::Eigenfunction,
        Self::OnFinite,
        Self::ExpDecay,
        Self::EntireVector,
        Self::VemuriHardy,
        Self::HardyPointwise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Eigenfunction => "eigenfunction",
            Self::OnFinite => "o-n-finite",
            Self::ExpDecay => "exp-decay",
            Self::EntireVector => "entire-vector",
            Self::VemuriHardy => "vemuri-hardy",
            Self::HardyPointwise => "hardy-pointwise",
        }
    }

    fn needs_ka(self) -> bool {
        matches!(self, Self::Eigenfunction | Self::OnFinite)
    }
}

/// An envelope with its parameters; `t` and `a` stay linked by `a = tanh(2t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayEnvelope {
    pub kind: EnvelopeKind,
    pub n: usize,
    t: Option<f64>,
    ka: Option<f64>,
    pub c: f64,
}

impl DecayEnvelope {
    pub fn new(kind: EnvelopeKind, n: usize) -> Self {
        Self { kind, n, t: None, ka: None, c: 1.0 }
    }

    pub fn with_t(mut self, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain("t must be positive"));
        }
        self.t = Some(t);
        Ok(self)
    }

    /// Sets `t = artanh(a)/2`.
    pub fn with_a(self, a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain("a must lie in (0, 1)"));
        }
        self.with_t(0.5 * a.atanh())
    }

    /// Sets both, rejecting pairs that violate `a = tanh(2t)`.
    pub fn with_a_t(self, a: f64, t: f64) -> Result<Self> {
        if ((2.0 * t).tanh() - a).abs() > 1e-12 {
            return Err(Error::Inconsistent("a must equal tanh(2t)"));
        }
        self.with_t(t)
    }

    pub fn with_ka(mut self, ka: f64) -> Result<Self> {
        if !(ka > 0.0) || !ka.is_finite() {
            return Err(Error::Domain("K_a must be positive and finite"));
        }
        self.ka = Some(ka);
        Ok(self)
    }

    pub fn with_c(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain("C must be positive"));
        }
        self.c = c;
        Ok(self)
    }

    pub fn t(&self) -> Option<f64> {
        self.t
    }

    pub fn a(&self) -> Option<f64> {
        self.t.map(|t| (2.0 * t).tanh())
    }

    pub fn ka(&self) -> Option<f64> {
        self.ka
    }

    /// Natural log of the envelope at `α`.
    pub fn ln_eval(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.dim() != self.n {
            return Err(Error::Dimension { expected: self.n, got: alpha.dim() });
        }
        let t = self.t.ok_or(Error::MissingParameter("t"))?;
        let ln_ka = match (self.kind.needs_ka(), self.ka) {
            (true, Some(k)) => 0.5 * k.ln(),
            (true, None) => return Err(Error::MissingParameter("K_a")),
            (false, _) => 0.0,
        };
        let n = self.n as f64;
        let deg = alpha.degree() as f64;
        let ln_odd: f64 = alpha.entries().iter().map(|&k| (2.0 * k as f64 + 1.0).ln()).sum();
        let sqrt_odd: f64 = alpha.entries().iter().map(|&k| (2.0 * k as f64 + 1.0).sqrt()).sum();
        let body = match self.kind {
            EnvelopeKind::Eigenfunction => 0.5 * t + ln_odd / (4.0 * n) - (2.0 * deg + n) * t / (2.0 * n),
            EnvelopeKind::OnFinite => 0.25 * ln_odd - (2.0 * deg + n) * t / 2.0,
            EnvelopeKind::ExpDecay => 0.25 * ln_odd - t / (2.0 * n).sqrt() * sqrt_odd,
            EnvelopeKind::EntireVector => -t * (2.0 * deg + n).sqrt(),
            EnvelopeKind::VemuriHardy => -0.25 * ln_odd - (2.0 * deg + n) * t / 2.0,
            EnvelopeKind::HardyPointwise => -(2.0 * deg + n) * t / 2.0,
        };
        Ok(self.c.ln() + ln_ka + body)
    }
}

pub fn envelope_eval(e: &DecayEnvelope, alpha: &MultiIndex) -> Result<f64> {
    let l = e.ln_eval(alpha)?;
    if l < -745.0 {
        return Err(Error::Overflow);
    }
    Ok(l.exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeRow {
    pub alpha: MultiIndex,
    pub measured: f64,
    pub envelope: f64,
    /// `ln(measured / envelope)`, computed from logs.
    pub log_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayEnvelopeReport {
    pub rows: Vec<EnvelopeRow>,
    pub max_log_ratio: f64,
    /// Least-squares slope of the log-ratio against `|α|`.
    pub slope: f64,
}

impl DecayEnvelopeReport {
    pub fn dominated_with(&self, tol: f64) -> bool {
        self.max_log_ratio.is_finite() && self.slope <= tol
    }

    pub fn dominated(&self) -> bool {
        self.dominated_with(DOMINANCE_SLOPE_TOL)
    }
}

/// Rows for every coefficient at or above [`FIT_FLOOR`], in graded order.
pub fn envelope_check(coeffs: &HermiteExpansion, e: &DecayEnvelope) -> Result<DecayEnvelopeReport> {
    let mut rows = Vec::new();
    for (a, c) in coeffs.iter() {
        let m = c.norm();
        if m < FIT_FLOOR {
            continue;
        }
        let le = e.ln_eval(a)?;
        rows.push(EnvelopeRow { alpha: a.clone(), measured: m, envelope: le.exp(), log_ratio: m.ln() - le });
    }
    if rows.is_empty() {
        return Err(Error::InsufficientData("no coefficient above the fit floor"));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.alpha.degree() as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.log_ratio).collect();
    let spread = xs.iter().any(|&x| x != xs[0]);
    let slope = if spread { least_squares(&xs, &ys).0 } else { 0.0 };
    let max_log_ratio = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(DecayEnvelopeReport { rows, max_log_ratio, slope })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayLaw {
    /// `|c_α| ≈ C e^{-t(2|α|+n)^{1/2}}`.
    SqrtExponential,
    /// `|c_α| ≈ C e^{-t(2|α|+n)/2}`.
    Geometric,
}

impl DecayLaw {
    fn statistic(self, alpha: &MultiIndex) -> f64 {
        let s = 2.0 * alpha.degree() as f64 + alpha.dim() as f64;
        match self {
            Self::SqrtExponential => s.sqrt(),
            Self::Geometric => 0.5 * s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRateFit {
    pub law: DecayLaw,
    pub t: f64,
    pub intercept: f64,
    /// Largest absolute deviation of `−ln|c_α|` from the fitted line.
    pub residual: f64,
    pub points: Vec<(f64, f64)>,
}

/// Least-squares slope of `−ln|c_α|` against the law's statistic.
pub fn decay_rate_fit(coeffs: &HermiteExpansion, law: DecayLaw) -> Result<DecayRateFit> {
    let points: Vec<(f64, f64)> = coeffs
        .iter()
        .filter(|(_, c)| c.norm() >= FIT_FLOOR)
        .map(|(a, c)| (law.statistic(a), -c.norm().ln()))
        .collect();
    let mut degrees: Vec<u32> = coeffs.iter().filter(|(_, c)| c.norm() >= FIT_FLOOR).map(|(a, _)| a.degree()).collect();
    degrees.dedup();
    if points.len() < 5 || degrees.len() < 3 {
        return Err(Error::Refused("decay fit needs five coefficients over three degrees"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (t, intercept) = least_squares(&xs, &ys);
    let residual = max_abs_residual(&xs, &ys, t, intercept);
    Ok(DecayRateFit { law, t, intercept, residual, points })
}

/// `C₁ = C e^{-nt/2} π^{-n/4} (1−e^{-4s})^{-n/4} (1−e^{-2(t−s)})^{-n/2}`: Cauchy–Schwarz
/// against Mehler's kernel on the diagonal at `r = e^{-2s}`.
pub fn pointwise_constant(c: f64, t: f64, s: f64, n: usize) -> Result<f64> {
    if !(s > 0.0) || !(s < t) {
        return Err(Error::Domain("need 0 < s < t"));
    }
    let n = n as f64;
    let l = c.ln() - 0.5 * n * t - 0.25 * n * LN_PI
        - 0.25 * n * (-(-4.0 * s).exp_m1()).ln()
        - 0.5 * n * (-(-2.0 * (t - s)).exp_m1()).ln();
    Ok(l.exp())
}

/// `C₁ e^{-tanh(s)|x|²/2}` for coefficients bounded by `C e^{-(2|α|+n)t/2}`.
pub fn pointwise_gaussian_bound(c: f64, t: f64, s: f64, x: &[f64]) -> Result<f64> {
    let c1 = pointwise_constant(c, t, s, x.len())?;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    Ok(c1 * (-0.5 * s.tanh() * r2).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseReport {
    pub constant: f64,
    /// Largest `|f(x)| / bound(x)` over the grid.
    pub max_ratio: f64,
    pub points: usize,
}

impl PointwiseReport {
    pub fn passed(&self) -> bool {
        self.max_ratio <= 1.0
    }
}

/// Checks `|f(x)| ≤ C₁ e^{-tanh(s)|x|²/2}` on a grid after confirming the
/// coefficient hypothesis.
pub fn pointwise_gaussian_verify(
    f: &HermiteExpansion,
    c: f64,
    t: f64,
    s: f64,
    grid: &[Vec<f64>],
) -> Result<PointwiseReport> {
    let env = DecayEnvelope::new(EnvelopeKind::HardyPointwise, f.dim()).with_t(t)?.with_c(c)?;
    for (a, v) in f.iter() {
        if v.norm().ln() > env.ln_eval(a)? + 1e-12 {
            return Err(Error::Precondition("coefficients exceed C e^{-(2|α|+n)t/2}"));
        }
    }
    let constant = pointwise_constant(c, t, s, f.dim())?;
    let mut max_ratio: f64 = 0.0;
    for x in grid {
        if x.len() != f.dim() {
            return Err(Error::Dimension { expected: f.dim(), got: x.len() });
        }
        let b = pointwise_gaussian_bound(c, t, s, x)?;
        max_ratio = max_ratio.max(f.eval(x).norm() / b);
    }
    Ok(PointwiseReport { constant, max_ratio, points: grid.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardyRegime {
    OnlyZero,
    OnlyGaussian,
    InfiniteFamily,
}

/// Hardy's trichotomy for `|f| ≤ C e^{-a|x|²}`, `|f̂| ≤ C e^{-b|ξ|²}`.
pub fn hardy_regime(ab: f64) -> Result<HardyRegime> {
    if !(ab > 0.0) {
        return Err(Error::Domain("ab must be positive"));
    }
    Ok(if (ab - 0.25).abs() <= 1e-12 {
        HardyRegime::OnlyGaussian
    } else if ab > 0.25 {
        HardyRegime::OnlyZero
    } else {
        HardyRegime::InfiniteFamily
    })
}
