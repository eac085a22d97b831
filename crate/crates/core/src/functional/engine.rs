//! Tensor panel quadrature of `∬ |f(x)| |g(y)| e^{k(x,y)} dx dy`.
//!
//! Panels have a breakpoint at zero on every axis, so every cell pair sits
//! inside one sign orthant pair and `|x·y|` is smooth on it in one
//! dimension. Each node carries `ln|f| + ln w`; a cell pair is summed with
//! its upper bound factored out, so nothing overflows as `a → 1`. Cell
//! pairs whose bound cannot matter at the requested tolerance are skipped,
//! and their bound is reported as part of the error.

use crate::hermite::gauss_legendre_rule;
use crate::prelude::*;
use crate::special::LogAccumulator;

/// Exponent of the kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Kernel {
    /// `a |x·y|`.
    Beurling { a: f64 },
    /// `|x·y| − N ln(1 + |x| + |y|)`.
    Weighted { power: f64 },
}

impl Kernel {
    #[inline]
    fn ln(&self, x: &[f64], y: &[f64]) -> f64 {
        let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        match *self {
            Kernel::Beurling { a } => a * dot.abs(),
            Kernel::Weighted { power } => {
                let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                dot.abs() - power * (1.0 + nx + ny).ln()
            }
        }
    }

    fn ln_max(&self, cx: &Cell, cy: &Cell) -> f64 {
        let cross: f64 = cx.amax.iter().zip(&cy.amax).map(|(a, b)| a * b).sum();
        match *self {
            Kernel::Beurling { a } => a * cross,
            Kernel::Weighted { power } => {
                let nx = cx.amin.iter().map(|v| v * v).sum::<f64>().sqrt();
                let ny = cy.amin.iter().map(|v| v * v).sum::<f64>().sqrt();
                cross - power * (1.0 + nx + ny).ln()
            }
        }
    }
}

/// Uniform panels of width `h` on `[−P h, P h]` per axis, `q` nodes each.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GridSpec {
    pub half_panels: usize,
    pub h: f64,
    pub q: usize,
}

impl GridSpec {
    pub fn radius(&self) -> f64 {
        self.half_panels as f64 * self.h
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Cell {
    start: usize,
    count: usize,
    amax: Vec<f64>,
    amin: Vec<f64>,
    log_max: f64,
    shell: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct SideGrid {
    n: usize,
    cells: Vec<Cell>,
    points: Vec<f64>,
    lv: Vec<f64>,
}

impl SideGrid {
    /// Builds the grid; `shells` are nested box radii used to tag cells.
    pub fn build(ln_abs: &dyn Fn(&[f64]) -> f64, n: usize, spec: GridSpec, shells: &[f64]) -> Result<Self> {
        let rule = gauss_legendre_rule(spec.q)?;
        let panels = 2 * spec.half_panels;
        let r = spec.radius();
        let ncells = panels.checked_pow(n as u32).ok_or(Error::Overflow)?;
        let per_cell = spec.q.pow(n as u32);
        let mut cells = Vec::with_capacity(ncells);
        let mut points = Vec::with_capacity(ncells * per_cell * n);
        let mut lv = Vec::with_capacity(ncells * per_cell);
        let mut pidx = vec![0usize; n];
        let mut x = vec![0.0; n];
        for _ in 0..ncells {
            let lo: Vec<f64> = pidx.iter().map(|&p| -r + p as f64 * spec.h).collect();
            let hi: Vec<f64> = lo.iter().map(|l| l + spec.h).collect();
            let amax: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| l.abs().max(h.abs())).collect();
            let amin: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| l.abs().min(h.abs())).collect();
            let start = lv.len();
            let mut log_max = f64::NEG_INFINITY;
            let mut nidx = vec![0usize; n];
            for _ in 0..per_cell {
                let mut lw = 0.0;
                for j in 0..n {
                    let t = rule.nodes[nidx[j]];
                    x[j] = lo[j] + 0.5 * spec.h * (t + 1.0);
                    lw += (0.5 * spec.h * rule.weights[nidx[j]]).ln();
                }
                let v = ln_abs(&x) + lw;
                if v > f64::NEG_INFINITY {
                    points.extend_from_slice(&x);
                    lv.push(v);
                    log_max = log_max.max(v);
                }
                for j in (0..n).rev() {
                    nidx[j] += 1;
                    if nidx[j] < spec.q {
                        break;
                    }
                    nidx[j] = 0;
                }
            }
            let count = lv.len() - start;
            if count > 0 {
                let outer = amax.iter().copied().fold(0.0, f64::max);
                let shell = shells.iter().position(|&s| outer <= s * (1.0 + 1e-12)).unwrap_or(shells.len());
                cells.push(Cell { start, count, amax, amin, log_max, shell });
            }
            for j in (0..n).rev() {
                pidx[j] += 1;
                if pidx[j] < panels {
                    break;
                }
                pidx[j] = 0;
            }
        }
        Ok(Self { n, cells, points, lv })
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.n..(i + 1) * self.n]
    }
}

/// Per-shell sums and the bound on what pruning dropped.
#[derive(Debug, Clone)]
pub(crate) struct PairSums {
    pub shells: Vec<LogAccumulator>,
    pub skipped: Vec<LogAccumulator>,
}

impl PairSums {
    /// Cumulative `ln` of the sum over shells `0..=k`.
    pub fn cumulative_ln(&self) -> Vec<f64> {
        let mut acc = LogAccumulator::new();
        self.shells
            .iter()
            .map(|s| {
                acc.merge(s);
                acc.ln()
            })
            .collect()
    }

    pub fn total(&self) -> LogAccumulator {
        let mut acc = LogAccumulator::new();
        for s in &self.shells {
            acc.merge(s);
        }
        acc
    }

    pub fn total_skipped(&self) -> LogAccumulator {
        let mut acc = LogAccumulator::new();
        for s in &self.skipped {
            acc.merge(s);
        }
        acc
    }
}

fn pair_sum(x: &SideGrid, y: &SideGrid, cx: &Cell, cy: &Cell, kernel: Kernel, shift: f64) -> f64 {
    let mut s = 0.0;
    for i in cx.start..cx.start + cx.count {
        let xi = x.point(i);
        let li = x.lv[i] - shift;
        for j in cy.start..cy.start + cy.count {
            s += (li + y.lv[j] + kernel.ln(xi, y.point(j))).exp();
        }
    }
    s
}

/// Sums over all cell pairs, skipping pairs whose bound is below
/// `eps / (#pairs)` of an exactly evaluated lower bound for their shell.
pub(crate) fn pair_sums(x: &SideGrid, y: &SideGrid, kernel: Kernel, nshells: usize, eps: f64) -> PairSums {
    let nsh = nshells.max(1);
    let shell_of = |cx: &Cell, cy: &Cell| cx.shell.max(cy.shell).min(nsh - 1);
    let bound = |cx: &Cell, cy: &Cell| {
        cx.log_max + cy.log_max + kernel.ln_max(cx, cy) + ((cx.count * cy.count) as f64).ln()
    };
    let mut best: Vec<(f64, usize, usize)> = vec![(f64::NEG_INFINITY, 0, 0); nsh];
    let mut counts = vec![0usize; nsh];
    for (i, cx) in x.cells.iter().enumerate() {
        for (j, cy) in y.cells.iter().enumerate() {
            let s = shell_of(cx, cy);
            let u = bound(cx, cy);
            counts[s] += 1;
            if u > best[s].0 {
                best[s] = (u, i, j);
            }
        }
    }
    let mut shells = vec![LogAccumulator::new(); nsh];
    let mut skipped = vec![LogAccumulator::new(); nsh];
    let mut threshold = vec![f64::INFINITY; nsh];
    for s in 0..nsh {
        let (u, i, j) = best[s];
        if u == f64::NEG_INFINITY {
            continue;
        }
        let v = pair_sum(x, y, &x.cells[i], &y.cells[j], kernel, u);
        let low = u + v.ln();
        threshold[s] = low + eps.ln() - (counts[s] as f64).ln();
    }
    for (i, cx) in x.cells.iter().enumerate() {
        for (j, cy) in y.cells.iter().enumerate() {
            let s = shell_of(cx, cy);
            let u = bound(cx, cy);
            if u == f64::NEG_INFINITY {
                continue;
            }
            if u < threshold[s] && !(i == best[s].1 && j == best[s].2) {
                skipped[s].add_log(u);
                continue;
            }
            shells[s].add_scaled(pair_sum(x, y, cx, cy, kernel, u), u);
        }
    }
    PairSums { shells, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_case_is_product() {
        let g = |x: &[f64]| -0.5 * x[0] * x[0];
        let spec = GridSpec { half_panels: 24, h: 0.5, q: 8 };
        let sx = SideGrid::build(&g, 1, spec, &[]).unwrap();
        let sums = pair_sums(&sx, &sx, Kernel::Beurling { a: 0.0 }, 1, 1e-12);
        let v = sums.total().value();
        assert!((v - 2.0 * core::f64::consts::PI).abs() < 1e-12);
    }
}
