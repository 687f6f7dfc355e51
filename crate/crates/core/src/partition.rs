//! Integer partitions and the statistics attached to them: conjugation,
//! centralizer orders, the kappa statistic, hook lengths, and enumeration in
//! reverse-lexicographic order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A partition: a weakly decreasing sequence of positive integers.
///
/// The empty partition is a first-class value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Build from weakly decreasing positive parts.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::domain("partition parts must be weakly decreasing"));
        }
        if parts.contains(&0) {
            return Err(Error::domain("partition parts must be positive"));
        }
        Ok(Partition { parts })
    }

    /// Build from arbitrary positive parts, sorting them.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Part at `i` (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// `|μ|`, the size.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// `l(μ)`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The conjugate partition (transposed Young diagram).
    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut parts = Vec::with_capacity(cols);
        for j in 1..=cols {
            parts.push(self.parts.iter().filter(|&&p| p as usize >= j).count() as u32);
        }
        Partition { parts }
    }

    /// `z_μ = |Aut(μ)| · μ_1 ⋯ μ_l`, the centralizer order of a permutation of
    /// cycle type `μ` in `S_{|μ|}`; equals `∏_j j^{m_j} m_j!` over multiplicities.
    pub fn z_factor(&self) -> u64 {
        let mut z: u64 = 1;
        let mut run = 0u64;
        let mut prev = 0u32;
        for &p in &self.parts {
            if p == prev {
                run += 1;
            } else {
                run = 1;
                prev = p;
            }
            z *= p as u64 * run;
        }
        z
    }

    /// `κ_μ = |μ| + Σ_i (μ_i² − 2 i μ_i)`; antisymmetric under conjugation
    /// and always even.
    pub fn kappa(&self) -> i64 {
        let mut k = self.size() as i64;
        for (i, &p) in self.parts.iter().enumerate() {
            let p = p as i64;
            let row = (i + 1) as i64;
            k += p * p - 2 * row * p;
        }
        k
    }

    /// All partitions of `d` in reverse-lexicographic order, `(d)` first.
    pub fn enumerate(d: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn go(remaining: u32, max: u32, stack: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition {
                    parts: stack.clone(),
                });
                return;
            }
            let hi = remaining.min(max);
            for p in (1..=hi).rev() {
                stack.push(p);
                go(remaining - p, p, stack, out);
                stack.pop();
            }
        }
        go(d, d.max(1), &mut stack, &mut out);
        out
    }

    /// Multiset of hook lengths, one per cell.
    pub fn hooks(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size() as usize);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row - j as u32 - 1;
                let leg = conj.parts[j] - i as u32 - 1;
                out.push(arm + leg + 1);
            }
        }
        out
    }

    /// `n(λ) = Σ (i−1) λ_i`.
    pub fn n_stat(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// `‖λ‖² = Σ λ_i²`.
    pub fn norm_sq(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64 * p as u64).sum()
    }

    /// Dimension of the irreducible representation, `d! / ∏ hooks`.
    pub fn hook_dimension(&self) -> u64 {
        let d = self.size();
        let mut num: u128 = 1;
        for k in 1..=d {
            num *= k as u128;
        }
        for h in self.hooks() {
            num /= h as u128;
        }
        num as u64
    }

    /// Diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.len()).all(|i| self.part(i) >= other.part(i))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `3+1`, `3,1`, `(3,1)`, and `""` or `0` for the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts: Result<Vec<u32>> = s
            .split(['+', ','])
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::domain(format!("bad partition part {tok:?}")))
            })
            .collect();
        Partition::from_unsorted(parts?)
    }
}

/// Multiset of nontrivial `Z_a` monodromies; only ever consumed as the
/// multi-exponent of a monomial `x_{γ_1} ⋯ x_{γ_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistVector {
    order: u32,
    entries: Vec<u32>,
}

impl TwistVector {
    pub fn new(order: u32, mut entries: Vec<u32>) -> Result<Self> {
        if order < 1 {
            return Err(Error::domain("orbifold order must be at least 1"));
        }
        if entries.iter().any(|&g| g == 0 || g >= order) {
            return Err(Error::domain("twists must satisfy 1 <= gamma_i <= a-1"));
        }
        entries.sort_unstable();
        Ok(TwistVector { order, entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Degree-compatibility `d ≡ Σ γ_i (mod a)`.
    pub fn compatible_with_degree(&self, d: u64) -> bool {
        let s: u64 = self.entries.iter().map(|&g| g as u64).sum();
        s % self.order as u64 == d % self.order as u64
    }
}
