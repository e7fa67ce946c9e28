//! Type signatures of cochain summands and their enumeration.
//!
//! A degree-`m`, weight-`w` cochain space splits into summands
//! `Λ^{k₃} S̄³ ⊗ Λ^{k₄} S̄⁴ ⊗ ⋯` with `Σ k_ℓ = m` and `Σ (ℓ−2) k_ℓ = w`.
//! Shifting indices by two turns such a multiplicity sequence into a partition
//! of `w` with exactly `m` parts.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest generator degree in the relative complex.
pub const MIN_GENERATOR_DEGREE: u32 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid type signature `{0}`")]
pub struct ParseTypeError(pub String);

/// Multiplicity sequence `(k₃, k₄, …)`; only the nonzero `k_ℓ` are stored,
/// sorted by `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeSignature {
    multiplicities: Vec<(u32, u32)>,
}

impl TypeSignature {
    /// Builds a signature from `(ℓ, k_ℓ)` pairs. Zero multiplicities are dropped,
    /// repeated degrees are merged.
    ///
    /// Panics if some `ℓ < 3`.
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut m: Vec<(u32, u32)> = Vec::new();
        let mut sorted: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, k)| k > 0).collect();
        sorted.sort_unstable();
        for (l, k) in sorted {
            assert!(
                l >= MIN_GENERATOR_DEGREE,
                "generator degree {l} below {MIN_GENERATOR_DEGREE}"
            );
            match m.last_mut() {
                Some((pl, pk)) if *pl == l => *pk += k,
                _ => m.push((l, k)),
            }
        }
        TypeSignature { multiplicities: m }
    }

    /// Signature from the list of factor degrees, e.g. `[3, 3, 6]` for `(3² 6)`.
    pub fn from_parts(parts: &[u32]) -> Self {
        TypeSignature::new(parts.iter().map(|&l| (l, 1)))
    }

    pub fn empty() -> Self {
        TypeSignature {
            multiplicities: Vec::new(),
        }
    }

    pub fn multiplicities(&self) -> &[(u32, u32)] {
        &self.multiplicities
    }

    pub fn multiplicity(&self, l: u32) -> u32 {
        self.multiplicities
            .iter()
            .find(|(d, _)| *d == l)
            .map_or(0, |(_, k)| *k)
    }

    /// Cochain degree `Σ k_ℓ`.
    pub fn degree(&self) -> u32 {
        self.multiplicities.iter().map(|(_, k)| k).sum()
    }

    /// Weight `Σ (ℓ−2) k_ℓ`.
    pub fn weight(&self) -> u32 {
        self.multiplicities.iter().map(|(l, k)| (l - 2) * k).sum()
    }

    /// `Λ^k S̄^ℓ` vanishes once `k` exceeds `dim S̄^ℓ = ℓ + 1`.
    pub fn is_nonvanishing(&self) -> bool {
        self.multiplicities.iter().all(|&(l, k)| k <= l + 1)
    }

    /// Nondecreasing list of factor degrees.
    pub fn parts(&self) -> Vec<u32> {
        self.multiplicities
            .iter()
            .flat_map(|&(l, k)| std::iter::repeat_n(l, k as usize))
            .collect()
    }

    /// The partition of the weight attached to this signature: parts `ℓ − 2`,
    /// largest first.
    pub fn to_partition(&self) -> Vec<u32> {
        let mut p: Vec<u32> = self.parts().into_iter().map(|l| l - 2).collect();
        p.reverse();
        p
    }

    /// Inverse of [`TypeSignature::to_partition`]: `k̂_i = #{j | ℓ_j = i}`.
    pub fn from_partition(parts: &[u32]) -> Self {
        TypeSignature::new(parts.iter().map(|&p| (p + 2, 1)))
    }

    /// Shifted multiplicities `(k̂₁, k̂₂, …)` with `k̂_i = k_{i+2}`.
    pub fn shifted_sequence(&self) -> Vec<u32> {
        let Some(&(top, _)) = self.multiplicities.last() else {
            return Vec::new();
        };
        (MIN_GENERATOR_DEGREE..=top)
            .map(|l| self.multiplicity(l))
            .collect()
    }
}

/// Ordered lexicographically by the nondecreasing list of factor degrees,
/// which lists `(3² 6)` before `(3 4 5)` before `(4³)`.
impl Ord for TypeSignature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts().cmp(&other.parts())
    }
}

impl PartialOrd for TypeSignature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compact form: `3^2 6` for `(3² 6¹)`; the empty signature prints as `()`.
impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplicities.is_empty() {
            return write!(f, "()");
        }
        for (i, (l, k)) in self.multiplicities.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *k == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{k}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for TypeSignature {
    type Err = ParseTypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        if t.is_empty() {
            return Ok(TypeSignature::empty());
        }
        let bad = || ParseTypeError(s.to_string());
        let mut pairs = Vec::new();
        for tok in t.split_whitespace() {
            let (l, k) = match tok.split_once('^') {
                Some((l, k)) => (l.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?),
                None => (tok.parse().map_err(|_| bad())?, 1),
            };
            if l < MIN_GENERATOR_DEGREE || k == 0 {
                return Err(bad());
            }
            pairs.push((l, k));
        }
        Ok(TypeSignature::new(pairs))
    }
}

/// Solutions of `Σ k̂_j = m`, `Σ j k̂_j = w`, as shifted sequences `(k̂₁, k̂₂, …)`
/// without trailing zeros, built with the recursion
/// `F(m, w) = ⊔_{k̂₁ = max(0, 2m−w)}^{m} {(k̂₁, x) | x ∈ F(m − k̂₁, w − m)}`.
pub fn shifted_solutions(m: u32, w: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if w == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if w < m {
        return Vec::new();
    }
    let lo = (2 * m).saturating_sub(w);
    let mut out = Vec::new();
    for k1 in lo..=m {
        for rest in shifted_solutions(m - k1, w - m) {
            let mut seq = Vec::with_capacity(rest.len() + 1);
            seq.push(k1);
            seq.extend(rest);
            while seq.last() == Some(&0) {
                seq.pop();
            }
            out.push(seq);
        }
    }
    out
}

/// All type signatures of degree `m` and weight `w`, in canonical order.
///
/// With `nonvanishing_only`, summands with some `k_ℓ > ℓ + 1` (which are zero)
/// are dropped.
pub fn enumerate_types(m: u32, w: u32, nonvanishing_only: bool) -> Vec<TypeSignature> {
    let mut types: Vec<TypeSignature> = shifted_solutions(m, w)
        .into_iter()
        .map(|seq| {
            TypeSignature::new(
                seq.iter()
                    .enumerate()
                    .map(|(i, &k)| (i as u32 + MIN_GENERATOR_DEGREE, k)),
            )
        })
        .filter(|t| !nonvanishing_only || t.is_nonvanishing())
        .collect();
    types.sort();
    types
}

/// Coefficients `r̃(m, 0..=max_c)` of `∏_{k=1}^{m} 1/(1 − x^k)`.
pub fn partition_series(m: u32, max_c: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; max_c + 1];
    coeffs[0] = 1;
    for k in 1..=m as usize {
        for c in k..=max_c {
            coeffs[c] += coeffs[c - k];
        }
    }
    coeffs
}

/// Number `r(m, w)` of type signatures of degree `m` and weight `w` (before the
/// dimension filter), via `r(m, w) = r̃(m, w − m)`.
pub fn count_partitions(m: u32, w: u32) -> u64 {
    if w < m {
        return 0;
    }
    let c = (w - m) as usize;
    partition_series(m, c)[c]
}
