use core::cmp::Ordering;
use core::fmt;

use crate::prelude::*;

/// Multi-index `α ∈ ℕⁿ`.
///
/// Ordered graded-lexicographically: by `|α|` first, then with the larger
/// leading entry first, so `(1,0)` precedes `(0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("multi-index must have length at least 1"));
        }
        Ok(Self(entries))
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n.max(1)])
    }

    /// One-dimensional index `(k)`.
    pub fn single(k: u32) -> Self {
        Self(vec![k])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|α| = Σ α_j`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `ln α! = Σ ln α_j!`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&k| crate::special::ln_factorial(k)).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        Self(v.to_vec())
    }
}

/// All `α ∈ ℕⁿ` with `|α| ≤ D`, in graded-lexicographic order.
pub fn multiindex_enumerate(n: usize, max_degree: u32) -> Vec<MultiIndex> {
    let n = n.max(1);
    let mut out = Vec::new();
    let mut buf = vec![0u32; n];
    for d in 0..=max_degree {
        fill(&mut buf, 0, d, &mut out);
    }
    out
}

fn fill(buf: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(MultiIndex(buf.to_vec()));
        return;
    }
    for first in (0..=remaining).rev() {
        buf[pos] = first;
        fill(buf, pos + 1, remaining - first, out);
    }
}
