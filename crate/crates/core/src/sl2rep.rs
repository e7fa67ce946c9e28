//! Character calculus for sl(2).
//!
//! A finite-dimensional representation is recorded by its character: the
//! dimension of each H-weight space. Multiplicities of irreducibles follow from
//! `α_k = m_k − m_{k+2}`, so the dimension of the invariant part of a cochain
//! summand is available without building any basis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitions::{enumerate_types, TypeSignature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("weight multiplicities are not symmetric at weight {0}")]
    NotSymmetric(i64),
    #[error("negative multiplicity for highest weight {0}")]
    NegativeMultiplicity(i64),
}

/// Weight-space dimensions `j ↦ m_j`; zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    weights: BTreeMap<i64, u64>,
}

impl Character {
    pub fn zero() -> Self {
        Character::default()
    }

    /// The trivial one-dimensional representation.
    pub fn trivial() -> Self {
        sym_character(0)
    }

    pub fn from_weights(weights: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut c = Character::zero();
        for (j, m) in weights {
            c.add(j, m);
        }
        c
    }

    fn add(&mut self, j: i64, m: u64) {
        if m > 0 {
            *self.weights.entry(j).or_insert(0) += m;
        }
    }

    pub fn multiplicity(&self, j: i64) -> u64 {
        self.weights.get(&j).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.weights.iter().map(|(&j, &m)| (j, m))
    }

    pub fn is_symmetric(&self) -> bool {
        self.weights
            .iter()
            .all(|(&j, &m)| self.multiplicity(-j) == m)
    }

    pub fn sum(&self, other: &Character) -> Character {
        let mut c = self.clone();
        for (j, m) in other.weights() {
            c.add(j, m);
        }
        c
    }
}

/// Irreducible multiplicities `k ↦ α_k` (highest weight `k`, dimension `k+1`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    multiplicities: BTreeMap<u32, u64>,
}

impl Decomposition {
    pub fn from_multiplicities(pairs: impl IntoIterator<Item = (u32, u64)>) -> Self {
        let mut d = Decomposition::default();
        for (k, a) in pairs {
            if a > 0 {
                *d.multiplicities.entry(k).or_insert(0) += a;
            }
        }
        d
    }

    pub fn multiplicity(&self, k: u32) -> u64 {
        self.multiplicities.get(&k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.multiplicities.iter().map(|(&k, &a)| (k, a))
    }

    pub fn dim(&self) -> u64 {
        self.iter().map(|(k, a)| a * (k as u64 + 1)).sum()
    }

    /// Character of `⊕ α_k S̄^k`.
    pub fn recombine(&self) -> Character {
        let mut c = Character::zero();
        for (k, a) in self.iter() {
            for (j, m) in sym_character(k).weights() {
                c.add(j, m * a);
            }
        }
        c
    }
}

/// Character of `S̄^ℓ`: weights `−ℓ, −ℓ+2, …, ℓ`, each once.
pub fn sym_character(l: u32) -> Character {
    let l = l as i64;
    Character::from_weights((0..=l).map(|r| (2 * r - l, 1)))
}

/// Character of a tensor product.
pub fn tensor(a: &Character, b: &Character) -> Character {
    let mut c = Character::zero();
    for (i, m) in a.weights() {
        for (j, n) in b.weights() {
            c.add(i + j, m * n);
        }
    }
    c
}

/// Character of `Λ^k S̄^ℓ`: the coefficient of `t^k` in `∏_{r=0}^{ℓ} (1 + t q^{2r−ℓ})`.
/// Zero when `k > ℓ + 1`.
pub fn exterior_power_character(l: u32, k: u32) -> Character {
    if k > l + 1 {
        return Character::zero();
    }
    let k = k as usize;
    // layers[j] = character of Λ^j of the generators seen so far
    let mut layers: Vec<Character> = vec![Character::zero(); k + 1];
    layers[0] = Character::trivial();
    for r in 0..=l as i64 {
        let wt = 2 * r - l as i64;
        for j in (1..=k).rev() {
            let shifted: Vec<(i64, u64)> =
                layers[j - 1].weights().map(|(q, m)| (q + wt, m)).collect();
            for (q, m) in shifted {
                layers[j].add(q, m);
            }
        }
    }
    layers.swap_remove(k)
}

/// Splits a character into irreducibles via `α_k = m_k − m_{k+2}`.
pub fn decompose(c: &Character) -> Result<Decomposition, CharacterError> {
    for (j, m) in c.weights() {
        if c.multiplicity(-j) != m {
            return Err(CharacterError::NotSymmetric(j));
        }
    }
    let mut d = Decomposition::default();
    let top = c.weights.keys().next_back().copied().unwrap_or(0);
    for j in 0..=top {
        let (m, above) = (c.multiplicity(j), c.multiplicity(j + 2));
        if above > m {
            return Err(CharacterError::NegativeMultiplicity(j));
        }
        if m > above {
            d.multiplicities.insert(j as u32, m - above);
        }
    }
    Ok(d)
}

/// Number of trivial summands, `m₀ − m₂`.
pub fn trivial_multiplicity(c: &Character) -> u64 {
    let (m0, m2) = (c.multiplicity(0), c.multiplicity(2));
    debug_assert!(m0 >= m2, "not a character: m0 < m2");
    m0.saturating_sub(m2)
}

/// Character of the summand `⊗_ℓ Λ^{k_ℓ} S̄^ℓ`.
pub fn type_character(t: &TypeSignature) -> Character {
    t.multiplicities()
        .iter()
        .fold(Character::trivial(), |acc, &(l, k)| {
            tensor(&acc, &exterior_power_character(l, k))
        })
}

/// Dimension of the relative cochain space of degree `m` and weight `w`.
pub fn cochain_dimension(m: u32, w: u32) -> u64 {
    enumerate_types(m, w, true)
        .iter()
        .map(|t| trivial_multiplicity(&type_character(t)))
        .sum()
}

/// Per-type contributions to [`cochain_dimension`], including zero ones.
pub fn cochain_dimension_by_type(m: u32, w: u32) -> Vec<(TypeSignature, u64)> {
    enumerate_types(m, w, true)
        .into_iter()
        .map(|t| {
            let d = trivial_multiplicity(&type_character(&t));
            (t, d)
        })
        .collect()
}

/// Largest degree with a nonvanishing summand at weight `w` (0 if none).
pub fn max_degree(w: u32) -> u32 {
    (1..=w)
        .rev()
        .find(|&m| !enumerate_types(m, w, true).is_empty())
        .unwrap_or(0)
}

/// Dimensions of the relative cochain spaces at one weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsRow {
    pub w: u32,
    /// `dims[m-1]` is the dimension in degree `m`, for `m = 1..=max_degree(w)`.
    pub dims: Vec<u64>,
    /// `1 + Σ (−1)^m dims`, the `1` counting the degree-0 cochains.
    pub euler: i64,
}

/// `1 + Σ_{m≥1} (−1)^m d_m` with `dims[m-1] = d_m`.
pub fn euler_characteristic(dims: &[u64]) -> i64 {
    1 + dims
        .iter()
        .enumerate()
        .map(|(i, &d)| if i % 2 == 0 { -(d as i64) } else { d as i64 })
        .sum::<i64>()
}

pub fn dims_row(w: u32) -> DimsRow {
    let dims: Vec<u64> = (1..=max_degree(w))
        .map(|m| cochain_dimension(m, w))
        .collect();
    let euler = euler_characteristic(&dims);
    DimsRow { w, dims, euler }
}
