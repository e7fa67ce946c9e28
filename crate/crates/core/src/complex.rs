//! Wedge-monomial cochains, the sl(2) action on them, and explicit bases of
//! the invariant (relative) cochain spaces.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::exactlin::{kernel_basis, LinalgError, Rational, SparseMatrix, SparseVector};
use crate::partitions::{enumerate_types, TypeSignature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("term `{0}` does not have degree {1} and weight {2}")]
    Inconsistent(String, u32, u32),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The dual basis element `z̄_r^R` of `S̄^R`, dual to `x^r y^{R−r} / (r! (R−r)!)`.
///
/// Ordered by `(R, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualGenerator {
    // field order gives the derived (R, r) ordering
    deg: u8,
    r: u8,
}

impl DualGenerator {
    /// Panics unless `r <= big_r <= 255`.
    pub fn new(r: u32, big_r: u32) -> Self {
        assert!(
            r <= big_r && big_r <= u8::MAX as u32,
            "invalid generator z({r},{big_r})"
        );
        DualGenerator {
            deg: big_r as u8,
            r: r as u8,
        }
    }

    pub fn r(self) -> u32 {
        self.r as u32
    }

    pub fn big_r(self) -> u32 {
        self.deg as u32
    }

    pub fn h_weight(self) -> i64 {
        2 * self.r as i64 - self.deg as i64
    }

    pub fn weight(self) -> u32 {
        self.big_r() - 2
    }

    /// `z̄_{r+1}^R`, if it exists.
    pub fn raised(self) -> Option<Self> {
        (self.r < self.deg).then(|| DualGenerator {
            deg: self.deg,
            r: self.r + 1,
        })
    }

    /// `z̄_{r−1}^R`, if it exists.
    pub fn lowered(self) -> Option<Self> {
        (self.r > 0).then(|| DualGenerator {
            deg: self.deg,
            r: self.r - 1,
        })
    }
}

impl fmt::Display for DualGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z({},{})", self.r, self.deg)
    }
}

impl FromStr for DualGenerator {
    type Err = ComplexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ComplexError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix("z(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (r, big_r) = inner.split_once(',').ok_or_else(bad)?;
        let r: u32 = r.trim().parse().map_err(|_| bad())?;
        let big_r: u32 = big_r.trim().parse().map_err(|_| bad())?;
        if r > big_r || big_r > u8::MAX as u32 {
            return Err(bad());
        }
        Ok(DualGenerator::new(r, big_r))
    }
}

pub(crate) type Factors = SmallVec<[DualGenerator; 12]>;

/// A wedge product of distinct generators, stored with strictly increasing
/// factors. Ordered lexicographically by the factor list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgeMonomial {
    factors: Factors,
}

/// Sorts `factors` in place and returns the sign of the sorting permutation,
/// or `None` if a factor repeats.
pub(crate) fn sort_with_sign(factors: &mut [DualGenerator]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..factors.len() {
        let mut j = i;
        while j > 0 && factors[j - 1] > factors[j] {
            factors.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && factors[j - 1] == factors[j] {
            return None;
        }
    }
    Some(sign)
}

impl WedgeMonomial {
    /// The empty product.
    pub fn one() -> Self {
        WedgeMonomial {
            factors: Factors::new(),
        }
    }

    /// Brings a factor list into canonical order: returns `(sign, monomial)`
    /// with `z₁ ∧ ⋯ ∧ z_m = sign · monomial`, or `None` when the product
    /// vanishes because a factor repeats.
    pub fn canonicalize(factors: &[DualGenerator]) -> Option<(i32, WedgeMonomial)> {
        let mut f: Factors = factors.iter().copied().collect();
        let sign = sort_with_sign(&mut f)?;
        Some((sign, WedgeMonomial { factors: f }))
    }

    pub(crate) fn from_sorted(factors: Factors) -> Self {
        debug_assert!(factors.windows(2).all(|p| p[0] < p[1]));
        WedgeMonomial { factors }
    }

    pub fn factors(&self) -> &[DualGenerator] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn weight(&self) -> u32 {
        self.factors.iter().map(|g| g.weight()).sum()
    }

    pub fn h_weight(&self) -> i64 {
        self.factors.iter().map(|g| g.h_weight()).sum()
    }

    pub fn signature(&self) -> TypeSignature {
        TypeSignature::new(self.factors.iter().map(|g| (g.big_r(), 1)))
    }
}

impl fmt::Display for WedgeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "^")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Parses the canonical text form; the factors must already be strictly increasing.
impl FromStr for WedgeMonomial {
    type Err = ComplexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(WedgeMonomial::one());
        }
        let factors: Factors = s.split('^').map(str::parse).collect::<Result<_, _>>()?;
        if !factors.windows(2).all(|p| p[0] < p[1]) {
            return Err(ComplexError::Parse(s.to_string()));
        }
        Ok(WedgeMonomial { factors })
    }
}

/// A homogeneous cochain: rational combination of canonical monomials of one
/// degree and one weight. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainVector {
    degree: u32,
    weight: u32,
    terms: BTreeMap<WedgeMonomial, Rational>,
}

impl CochainVector {
    pub fn zero(degree: u32, weight: u32) -> Self {
        CochainVector {
            degree,
            weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(m: WedgeMonomial) -> Self {
        let mut v = CochainVector::zero(m.degree(), m.weight());
        v.terms.insert(m, Rational::one());
        v
    }

    /// Sums the given terms; each factor list is canonicalized.
    pub fn from_terms(
        degree: u32,
        weight: u32,
        terms: impl IntoIterator<Item = (Rational, Vec<DualGenerator>)>,
    ) -> Result<Self, ComplexError> {
        let mut v = CochainVector::zero(degree, weight);
        for (c, factors) in terms {
            if let Some((sign, m)) = WedgeMonomial::canonicalize(&factors) {
                v.try_add_term(m, &(c * Rational::from(sign)))?;
            }
        }
        Ok(v)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, m: &WedgeMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WedgeMonomial, &Rational)> + '_ {
        self.terms.iter()
    }

    /// First monomial with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&WedgeMonomial, &Rational)> {
        self.terms.iter().next()
    }

    pub fn try_add_term(&mut self, m: WedgeMonomial, c: &Rational) -> Result<(), ComplexError> {
        if m.degree() != self.degree || m.weight() != self.weight {
            return Err(ComplexError::Inconsistent(
                m.to_string(),
                self.degree,
                self.weight,
            ));
        }
        self.add_term(m, c);
        Ok(())
    }

    pub(crate) fn add_term(&mut self, m: WedgeMonomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> CochainVector {
        let mut v = CochainVector::zero(self.degree, self.weight);
        if !c.is_zero() {
            v.terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        }
        v
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &CochainVector) {
        for (m, x) in other.terms() {
            self.add_term(m.clone(), &(x * c));
        }
    }

    /// `λ` with `self = λ · other`, if it exists and `other` is nonzero.
    pub fn ratio_to(&self, other: &CochainVector) -> Option<Rational> {
        let (m, x) = other.leading()?;
        let lambda = self.get(m) / x;
        let mut diff = self.clone();
        diff.add_scaled(&-lambda.clone(), other);
        diff.is_zero().then_some(lambda)
    }

    /// Coordinates against an ordered monomial list (the list must contain
    /// every monomial of `self`).
    pub fn to_sparse(
        &self,
        index: &FxHashMap<WedgeMonomial, usize>,
        dim: usize,
    ) -> Option<SparseVector> {
        let mut v = SparseVector::zero(dim);
        for (m, x) in self.terms() {
            v.set(*index.get(m)?, x.clone());
        }
        Some(v)
    }

    pub fn from_sparse(
        monomials: &[WedgeMonomial],
        v: &SparseVector,
        degree: u32,
        weight: u32,
    ) -> Self {
        let mut c = CochainVector::zero(degree, weight);
        for (i, x) in v.iter() {
            c.terms.insert(monomials[i].clone(), x.clone());
        }
        c
    }

    /// One `num/den monomial` line per term, in monomial order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (m, x) in self.terms() {
            s.push_str(&format!("{x} {m}\n"));
        }
        s
    }

    /// Inverse of [`CochainVector::to_text`]; degree and weight are taken from
    /// the first term.
    pub fn from_text(text: &str) -> Result<Self, ComplexError> {
        let mut v: Option<CochainVector> = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (c, m) = line
                .split_once(' ')
                .ok_or_else(|| ComplexError::Parse(line.to_string()))?;
            let c: Rational = c
                .parse()
                .map_err(|_| ComplexError::Parse(line.to_string()))?;
            let m: WedgeMonomial = m.parse()?;
            let v = v.get_or_insert_with(|| CochainVector::zero(m.degree(), m.weight()));
            if v.terms.contains_key(&m) || c.is_zero() {
                return Err(ComplexError::Parse(line.to_string()));
            }
            v.try_add_term(m, &c)?;
        }
        v.ok_or_else(|| ComplexError::Parse("empty cochain".to_string()))
    }
}

/// Serializes a basis: one block per vector, blocks separated by blank lines.
pub fn basis_to_text(basis: &[CochainVector]) -> String {
    basis
        .iter()
        .map(CochainVector::to_text)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn basis_from_text(text: &str) -> Result<Vec<CochainVector>, ComplexError> {
    let mut out = Vec::new();
    let mut block = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !block.is_empty() {
                out.push(CochainVector::from_text(&block)?);
                block.clear();
            }
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    if !block.is_empty() {
        out.push(CochainVector::from_text(&block)?);
    }
    Ok(out)
}

/// Strictly increasing `k`-subsets of `{0, …, l}` as generators of `S̄^l`,
/// in lexicographic order, with their H-weights.
fn block_subsets(l: u32, k: u32) -> Vec<(Factors, i64)> {
    fn rec(l: u32, k: u32, start: u32, cur: &mut Factors, out: &mut Vec<(Factors, i64)>) {
        if cur.len() as u32 == k {
            let hw = cur.iter().map(|g| g.h_weight()).sum();
            out.push((cur.clone(), hw));
            return;
        }
        let remaining = k - cur.len() as u32;
        for r in start..=(l + 1 - remaining) {
            cur.push(DualGenerator::new(r, l));
            rec(l, k, r + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= l + 1 {
        rec(l, k, 0, &mut Factors::new(), &mut out);
    }
    out
}

/// All canonical monomials of type `t`, optionally only those of one H-weight,
/// in increasing order.
pub fn monomial_basis(t: &TypeSignature, h_weight: Option<i64>) -> Vec<WedgeMonomial> {
    let blocks: Vec<Vec<(Factors, i64)>> = t
        .multiplicities()
        .iter()
        .map(|&(l, k)| block_subsets(l, k))
        .collect();
    // suffix_range[i] = (min, max) H-weight reachable by blocks i..
    let mut suffix_range = vec![(0i64, 0i64); blocks.len() + 1];
    for i in (0..blocks.len()).rev() {
        let lo = blocks[i].iter().map(|b| b.1).min().unwrap_or(0);
        let hi = blocks[i].iter().map(|b| b.1).max().unwrap_or(0);
        suffix_range[i] = (suffix_range[i + 1].0 + lo, suffix_range[i + 1].1 + hi);
    }

    fn rec(
        i: usize,
        blocks: &[Vec<(Factors, i64)>],
        suffix_range: &[(i64, i64)],
        target: Option<i64>,
        acc_hw: i64,
        cur: &mut Factors,
        out: &mut Vec<WedgeMonomial>,
    ) {
        if let Some(t) = target {
            let (lo, hi) = suffix_range[i];
            if acc_hw + lo > t || acc_hw + hi < t {
                return;
            }
        }
        if i == blocks.len() {
            out.push(WedgeMonomial::from_sorted(cur.clone()));
            return;
        }
        for (f, hw) in &blocks[i] {
            let n = cur.len();
            cur.extend_from_slice(f);
            rec(i + 1, blocks, suffix_range, target, acc_hw + hw, cur, out);
            cur.truncate(n);
        }
    }

    let mut out = Vec::new();
    if t.is_nonvanishing() {
        rec(
            0,
            &blocks,
            &suffix_range,
            h_weight,
            0,
            &mut Factors::new(),
            &mut out,
        );
    }
    out
}

/// Basis elements of sl(2), acting on cochains through the dual action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2 {
    H,
    X,
    Y,
}

/// Image of one monomial under `ξ`: `(coefficient, monomial)` pairs.
///
/// `X` and `Y` move a single factor to its neighbour in the order, so the
/// factor list stays sorted and no sign appears.
pub(crate) fn act_monomial(xi: Sl2, m: &WedgeMonomial) -> Vec<(i64, WedgeMonomial)> {
    let f = m.factors();
    match xi {
        Sl2::H => {
            let h = m.h_weight();
            if h == 0 {
                Vec::new()
            } else {
                vec![(h, m.clone())]
            }
        }
        Sl2::X => (0..f.len())
            .filter_map(|j| {
                let g = f[j].raised()?;
                if f.get(j + 1) == Some(&g) {
                    return None;
                }
                let mut nf = m.factors.clone();
                nf[j] = g;
                Some((
                    (f[j].big_r() - f[j].r()) as i64,
                    WedgeMonomial::from_sorted(nf),
                ))
            })
            .collect(),
        Sl2::Y => (0..f.len())
            .filter_map(|j| {
                let g = f[j].lowered()?;
                if j > 0 && f[j - 1] == g {
                    return None;
                }
                let mut nf = m.factors.clone();
                nf[j] = g;
                Some((f[j].r() as i64, WedgeMonomial::from_sorted(nf)))
            })
            .collect(),
    }
}

/// `H·z̄_r^R = (2r−R) z̄_r^R`, `X·z̄_r^R = (R−r) z̄_{r+1}^R`, `Y·z̄_r^R = r z̄_{r−1}^R`,
/// extended to wedge products as a derivation.
pub fn act(xi: Sl2, v: &CochainVector) -> CochainVector {
    let mut out = CochainVector::zero(v.degree(), v.weight());
    for (m, c) in v.terms() {
        for (k, img) in act_monomial(xi, m) {
            out.add_term(img, &(c * &Rational::from(k)));
        }
    }
    out
}

/// Invariant cochains of one type, in kernel normal form over the monomials
/// of H-weight 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeBasis {
    pub signature: TypeSignature,
    pub vectors: Vec<CochainVector>,
}

/// Matrix of `X` from the H-weight-0 monomials of `t` (columns, in the given
/// order) to H-weight 2.
pub fn raising_matrix(monomials: &[WedgeMonomial]) -> SparseMatrix {
    let mut rows: FxHashMap<WedgeMonomial, usize> = FxHashMap::default();
    let mut triplets = Vec::new();
    for (col, m) in monomials.iter().enumerate() {
        for (k, img) in act_monomial(Sl2::X, m) {
            let n = rows.len();
            let row = *rows.entry(img).or_insert(n);
            triplets.push((row, col, Rational::from(k)));
        }
    }
    SparseMatrix::from_triplets(rows.len(), monomials.len(), triplets)
        .expect("indices are in range by construction")
}

/// Invariant cochains of type `t`: the kernel of `X` on the H-weight-0
/// monomials. Such a vector is a highest-weight vector of weight 0, so `Y`
/// kills it as well.
pub fn invariant_basis_for_type(t: &TypeSignature) -> Vec<CochainVector> {
    let monomials = monomial_basis(t, Some(0));
    if monomials.is_empty() {
        return Vec::new();
    }
    let x = raising_matrix(&monomials);
    let (m, w) = (t.degree(), t.weight());
    kernel_basis(&x)
        .iter()
        .map(|v| CochainVector::from_sparse(&monomials, v, m, w))
        .collect()
}

/// Invariant bases of every nonvanishing type of degree `m` and weight `w`,
/// in type order.
pub fn invariant_basis(m: u32, w: u32) -> Vec<TypeBasis> {
    enumerate_types(m, w, true)
        .into_par_iter()
        .map(|t| {
            let vectors = invariant_basis_for_type(&t);
            TypeBasis {
                signature: t,
                vectors,
            }
        })
        .collect()
}
