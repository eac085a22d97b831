//! Log-domain special functions and compensated accumulators.

#[allow(unused_imports)]
use num_traits::Float;

pub const PI: f64 = core::f64::consts::PI;
/// `ln π`.
pub const LN_PI: f64 = 1.144_729_885_849_400_2;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

pub fn ln_factorial(k: u32) -> f64 {
    if k < 2 {
        0.0
    } else {
        ln_gamma(k as f64 + 1.0)
    }
}

pub fn ln_binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    fn scale(&mut self, f: f64) {
        self.sum *= f;
        self.comp *= f;
    }
}

/// Sum of positive terms given by their logarithms.
///
/// Terms are stored relative to a running shift so that nothing overflows
/// even when individual exponents exceed the `f64` range.
#[derive(Debug, Clone, Copy)]
pub struct LogAccumulator {
    shift: f64,
    acc: Neumaier,
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self { shift: f64::NEG_INFINITY, acc: Neumaier::new() }
    }
}

impl LogAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `m · e^{shift}` where `m ≥ 0` is typically O(1).
    pub fn add_scaled(&mut self, mantissa: f64, shift: f64) {
        if mantissa <= 0.0 || shift == f64::NEG_INFINITY {
            return;
        }
        if shift > self.shift {
            if self.shift != f64::NEG_INFINITY {
                self.acc.scale((self.shift - shift).exp());
            }
            self.shift = shift;
        }
        self.acc.add(mantissa * (shift - self.shift).exp());
    }

    pub fn add_log(&mut self, log_term: f64) {
        self.add_scaled(1.0, log_term);
    }

    pub fn merge(&mut self, other: &LogAccumulator) {
        self.add_scaled(other.acc.value(), other.shift);
    }

    pub fn ln(&self) -> f64 {
        let v = self.acc.value();
        if v <= 0.0 {
            f64::NEG_INFINITY
        } else {
            self.shift + v.ln()
        }
    }

    pub fn value(&self) -> f64 {
        self.ln().exp()
    }
}

/// Least-squares line `y ≈ slope·x + intercept`; returns `(slope, intercept)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Largest absolute deviation from a fitted line.
pub fn max_abs_residual(xs: &[f64], ys: &[f64], slope: f64, intercept: f64) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half() {
        assert!((ln_gamma(0.5) - 0.5 * LN_PI).abs() < 1e-15);
        assert!((LN_PI - PI.ln()).abs() < 1e-15);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert!((ln_binomial(40, 20) - binomial(40, 20).ln()).abs() < 1e-10);
    }

    #[test]
    fn accumulator_handles_huge_exponents() {
        let mut acc = LogAccumulator::new();
        acc.add_log(1000.0);
        acc.add_log(1000.0);
        acc.add_log(-5.0);
        assert!((acc.ln() - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut s = Neumaier::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
