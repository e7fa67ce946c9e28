//! The coboundary on relative cochains, its matrices in the invariant bases,
//! and Betti numbers per weight.

use log::{debug, info};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    act, act_monomial, invariant_basis_for_type, CochainVector, ComplexError, DualGenerator,
    Factors, Sl2, TypeBasis, WedgeMonomial,
};
use crate::exactlin::{matmul, rank, Rational, SparseMatrix};
use crate::partitions::{enumerate_types, TypeSignature};
use crate::sl2rep::{
    cochain_dimension, euler_characteristic, max_degree, trivial_multiplicity, type_character,
};

#[derive(Debug, Error)]
pub enum CoboundaryError {
    #[error(
        "weight {w}, degree {m}, type ({ty}): image of d is not in the span of the invariant basis"
    )]
    NotInSpan { w: u32, m: u32, ty: String },
    #[error("weight {w}, degree {m}: {got} invariant cochains found, character calculus predicts {expected}")]
    DimensionMismatch {
        w: u32,
        m: u32,
        expected: u64,
        got: u64,
    },
    #[error("weight {w}, degree {m}, type ({ty}): basis is not in kernel normal form")]
    NotNormalForm { w: u32, m: u32, ty: String },
    #[error("weight {w}, degree {m}, type ({ty}): basis does not span the invariant cochains")]
    IncompleteBasis { w: u32, m: u32, ty: String },
    #[error("weight {w}: d∘d ≠ 0 from degree {m}")]
    NonzeroSquare { w: u32, m: u32 },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("checkpoint store: {0}")]
    Store(String),
}

fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Coefficient of `z̄_a^A ∧ z̄_b^B` (taken in this order) in `d z̄_r^R`, summing
/// both orderings of the pair:
/// `−r!(R−r)! (aB − bA) / (a!(A−a)! b!(B−b)!)`.
fn pair_coefficient(r: u32, big_r: u32, a: u32, big_a: u32, b: u32, big_b: u32) -> Rational {
    let det = (a * big_b) as i64 - (b * big_a) as i64;
    let num = -factorial(r) * factorial(big_r - r) * det;
    let den = factorial(a) * factorial(big_a - a) * factorial(b) * factorial(big_b - b);
    Rational::new(num, den)
}

/// Terms `(g₁, g₂, c)` with `g₁ < g₂` of `d z̄_r^R`. Only generators of degree
/// at least 3 occur.
fn d_generator_terms(g: DualGenerator) -> Vec<(DualGenerator, DualGenerator, Rational)> {
    let (r, big_r) = (g.r(), g.big_r());
    let mut out = Vec::new();
    for big_a in 3..=big_r.saturating_sub(1) {
        let big_b = big_r + 2 - big_a;
        if big_b < 3 {
            continue;
        }
        for a in 0..=big_a.min(r + 1) {
            let b = r + 1 - a;
            if b > big_b {
                continue;
            }
            let (g1, g2) = (DualGenerator::new(a, big_a), DualGenerator::new(b, big_b));
            if g1 >= g2 {
                continue;
            }
            let c = pair_coefficient(r, big_r, a, big_a, b, big_b);
            if !c.is_zero() {
                out.push((g1, g2, c));
            }
        }
    }
    out
}

/// `d z̄_r^R = −(r!(R−r)!/2) Σ (aB − bA) z̄_a^A/(a!(A−a)!) ∧ z̄_b^B/(b!(B−b)!)`,
/// over `a + b = r + 1`, `A + B = R + 2`, `A, B ≥ 3`.
pub fn d_generator(g: DualGenerator) -> CochainVector {
    let mut v = CochainVector::zero(2, g.weight());
    for (g1, g2, c) in d_generator_terms(g) {
        v.add_term(
            WedgeMonomial::from_sorted(Factors::from_slice(&[g1, g2])),
            &c,
        );
    }
    v
}

/// `d` on generators up to a fixed degree, scaled to integers by one common
/// denominator.
pub(crate) struct DTable {
    denom: BigInt,
    terms: Vec<Vec<(DualGenerator, DualGenerator, BigInt)>>,
}

fn generator_code(g: DualGenerator) -> usize {
    let big_r = g.big_r() as usize;
    big_r * (big_r + 1) / 2 + g.r() as usize
}

impl DTable {
    pub fn new(max_deg: u32) -> Self {
        let mut rational: Vec<Vec<(DualGenerator, DualGenerator, Rational)>> = Vec::new();
        for big_r in 0..=max_deg {
            for r in 0..=big_r {
                let g = DualGenerator::new(r, big_r);
                debug_assert_eq!(generator_code(g), rational.len());
                rational.push(if big_r >= 3 {
                    d_generator_terms(g)
                } else {
                    Vec::new()
                });
            }
        }
        let denom = rational
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, (_, _, c)| acc.lcm(c.denom()));
        let terms = rational
            .into_iter()
            .map(|ts| {
                ts.into_iter()
                    .map(|(g1, g2, c)| (g1, g2, c.numer() * (&denom / c.denom())))
                    .collect()
            })
            .collect();
        DTable { denom, terms }
    }

    fn max_deg_covers(&self, g: DualGenerator) -> bool {
        generator_code(g) < self.terms.len()
    }

    /// Adds `coeff · denom · d(monomial)` into `out`.
    fn apply(&self, m: &WedgeMonomial, coeff: &BigInt, out: &mut FxHashMap<WedgeMonomial, BigInt>) {
        let f = m.factors();
        let mut rest: Factors = Factors::with_capacity(f.len() + 1);
        for j in 0..f.len() {
            rest.clear();
            rest.extend(
                f.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, g)| *g),
            );
            // (−1)^j d z_j, and the 2-form g₁∧g₂ commutes to the front freely.
            for (g1, g2, c) in &self.terms[generator_code(f[j])] {
                let Err(p1) = rest.binary_search(g1) else {
                    continue;
                };
                let Err(p2) = rest.binary_search(g2) else {
                    continue;
                };
                let mut nf = Factors::with_capacity(f.len() + 1);
                nf.extend_from_slice(&rest[..p1]);
                nf.push(*g1);
                nf.extend_from_slice(&rest[p1..p2]);
                nf.push(*g2);
                nf.extend_from_slice(&rest[p2..]);
                let negative = (j + p1 + p2) % 2 == 1;
                let term = c * coeff;
                let e = out
                    .entry(WedgeMonomial::from_sorted(nf))
                    .or_insert_with(BigInt::zero);
                if negative {
                    *e -= term;
                } else {
                    *e += term;
                }
            }
        }
    }
}

/// Integer multiple of `v`: returns `(s, terms)` with `terms = s · v`.
fn integer_terms(v: &CochainVector) -> (BigInt, Vec<(WedgeMonomial, BigInt)>) {
    let s = v
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let terms = v
        .terms()
        .map(|(m, c)| (m.clone(), c.numer() * (&s / c.denom())))
        .collect();
    (s, terms)
}

fn integer_image(
    table: &DTable,
    terms: &[(WedgeMonomial, BigInt)],
) -> FxHashMap<WedgeMonomial, BigInt> {
    let mut out = FxHashMap::default();
    for (m, c) in terms {
        table.apply(m, c, &mut out);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The coboundary, extended from generators as a skew derivation:
/// `d(z₁∧⋯∧z_m) = Σ_j (−1)^{j+1} z₁∧⋯∧dz_j∧⋯∧z_m`.
pub fn d_cochain(v: &CochainVector) -> CochainVector {
    let max_deg = v
        .terms()
        .flat_map(|(m, _)| m.factors().iter().map(|g| g.big_r()))
        .max()
        .unwrap_or(0);
    d_cochain_with(&DTable::new(max_deg), v)
}

pub(crate) fn d_cochain_with(table: &DTable, v: &CochainVector) -> CochainVector {
    let (s, terms) = integer_terms(v);
    let scale = Rational::from(s * &table.denom).recip();
    let mut out = CochainVector::zero(v.degree() + 1, v.weight());
    let mut image: Vec<(WedgeMonomial, BigInt)> =
        integer_image(table, &terms).into_iter().collect();
    image.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    for (m, c) in image {
        out.add_term(m, &(Rational::from(c) * &scale));
    }
    out
}

/// Matrix of `d: C^m → C^{m+1}` at weight `w`: column `j` holds the
/// coordinates of `d(basis_m[j])` in `basis_{m+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialMatrix {
    pub w: u32,
    pub m: u32,
    pub matrix: SparseMatrix,
}

/// Builds the matrix of `d` from degree-`m` bases to degree-`m+1` bases.
///
/// Target bases must be in kernel normal form: every vector has leading
/// coefficient 1, and no other vector of the same type has a nonzero entry at
/// that monomial. The coordinates of an invariant cochain are then its
/// entries at the leading monomials. Each target basis is checked to be
/// `X`-closed and as large as the trivial multiplicity of its type, so it spans
/// every invariant cochain of that type; membership of an image is then
/// certified by checking that it has H-weight 0 and is annihilated by `X`.
pub fn d_matrix(
    w: u32,
    m: u32,
    source: &[TypeBasis],
    target: &[TypeBasis],
) -> Result<DifferentialMatrix, CoboundaryError> {
    let mut leads: FxHashMap<WedgeMonomial, usize> = FxHashMap::default();
    let mut row = 0;
    for tb in target {
        for v in &tb.vectors {
            let (lead, c) = v.leading().ok_or_else(|| CoboundaryError::NotNormalForm {
                w,
                m: m + 1,
                ty: tb.signature.to_string(),
            })?;
            if !c.is_one() {
                return Err(CoboundaryError::NotNormalForm {
                    w,
                    m: m + 1,
                    ty: tb.signature.to_string(),
                });
            }
            leads.insert(lead.clone(), row);
            row += 1;
        }
    }
    for tb in target {
        let incomplete = || CoboundaryError::IncompleteBasis {
            w,
            m: m + 1,
            ty: tb.signature.to_string(),
        };
        if tb.vectors.len() as u64 != trivial_multiplicity(&type_character(&tb.signature)) {
            return Err(incomplete());
        }
        if tb
            .vectors
            .iter()
            .any(|v| !act(Sl2::X, v).is_zero() || v.terms().any(|(mono, _)| mono.h_weight() != 0))
        {
            return Err(incomplete());
        }
        for (i, v) in tb.vectors.iter().enumerate() {
            let own = v.leading().unwrap().0;
            if v.terms()
                .any(|(mono, _)| mono != own && leads.contains_key(mono))
            {
                return Err(CoboundaryError::NotNormalForm {
                    w,
                    m: m + 1,
                    ty: format!("{} #{i}", tb.signature),
                });
            }
        }
    }
    let n_rows = row;

    let columns: Vec<(&TypeSignature, &CochainVector)> = source
        .iter()
        .flat_map(|tb| tb.vectors.iter().map(move |v| (&tb.signature, v)))
        .collect();
    let table = DTable::new(w + 2);
    let images: Vec<Result<Vec<(usize, Rational)>, CoboundaryError>> = columns
        .par_iter()
        .map(|&(sig, v)| {
            debug_assert!(v
                .terms()
                .all(|(mono, _)| mono.factors().iter().all(|g| table.max_deg_covers(*g))));
            let (s, terms) = integer_terms(v);
            let image = integer_image(&table, &terms);
            let not_in_span = || CoboundaryError::NotInSpan {
                w,
                m,
                ty: sig.to_string(),
            };
            let mut raised: FxHashMap<WedgeMonomial, BigInt> = FxHashMap::default();
            for (mono, c) in &image {
                if mono.h_weight() != 0 {
                    return Err(not_in_span());
                }
                for (k, img) in act_monomial(Sl2::X, mono) {
                    *raised.entry(img).or_insert_with(BigInt::zero) += c * k;
                }
            }
            if raised.values().any(|c| !c.is_zero()) {
                return Err(not_in_span());
            }
            let scale = Rational::from(s * &table.denom).recip();
            let mut entries: Vec<(usize, Rational)> = image
                .iter()
                .filter_map(|(mono, c)| {
                    leads
                        .get(mono)
                        .map(|&r| (r, Rational::from(c.clone()) * &scale))
                })
                .collect();
            entries.sort_unstable_by_key(|e| e.0);
            Ok(entries)
        })
        .collect();
    let mut triplets = Vec::new();
    for (j, col) in images.into_iter().enumerate() {
        for (i, x) in col? {
            triplets.push((i, j, x));
        }
    }
    let matrix = SparseMatrix::from_triplets(n_rows, columns.len(), triplets)
        .expect("indices in range by construction");
    Ok(DifferentialMatrix { w, m, matrix })
}

/// Dimensions, ranks and Betti numbers at one weight. Entry `i` of each list
/// refers to cochain degree `i + 1`; `ranks[i]` is the rank of `d` leaving
/// that degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightReport {
    pub w: u32,
    pub dims: Vec<u64>,
    pub ranks: Vec<u64>,
    pub betti: Vec<u64>,
    pub euler: i64,
}

impl WeightReport {
    /// Assembles the report from dimensions and ranks,
    /// `b_m = dim C^m − rank d_m − rank d_{m−1}`.
    pub fn from_dims_and_ranks(w: u32, dims: Vec<u64>, ranks: Vec<u64>) -> Self {
        assert_eq!(dims.len(), ranks.len());
        let betti = (0..dims.len())
            .map(|i| {
                let below = if i == 0 { 0 } else { ranks[i - 1] };
                dims[i] - ranks[i] - below
            })
            .collect();
        let euler = euler_characteristic(&dims);
        WeightReport {
            w,
            dims,
            ranks,
            betti,
            euler,
        }
    }
}

/// Persistence for the expensive intermediate results. Implementations must
/// return exactly what was stored.
pub trait Checkpoint: Sync {
    fn load_basis(
        &self,
        w: u32,
        m: u32,
        t: &TypeSignature,
    ) -> Result<Option<Vec<CochainVector>>, CoboundaryError>;
    fn store_basis(
        &self,
        w: u32,
        m: u32,
        t: &TypeSignature,
        basis: &[CochainVector],
    ) -> Result<(), CoboundaryError>;
    fn load_matrix(&self, w: u32, m: u32) -> Result<Option<SparseMatrix>, CoboundaryError>;
    fn store_matrix(&self, w: u32, m: u32, matrix: &SparseMatrix) -> Result<(), CoboundaryError>;
}

/// Keeps nothing.
pub struct NoCheckpoint;

impl Checkpoint for NoCheckpoint {
    fn load_basis(
        &self,
        _: u32,
        _: u32,
        _: &TypeSignature,
    ) -> Result<Option<Vec<CochainVector>>, CoboundaryError> {
        Ok(None)
    }

    fn store_basis(
        &self,
        _: u32,
        _: u32,
        _: &TypeSignature,
        _: &[CochainVector],
    ) -> Result<(), CoboundaryError> {
        Ok(())
    }

    fn load_matrix(&self, _: u32, _: u32) -> Result<Option<SparseMatrix>, CoboundaryError> {
        Ok(None)
    }

    fn store_matrix(&self, _: u32, _: u32, _: &SparseMatrix) -> Result<(), CoboundaryError> {
        Ok(())
    }
}

/// Invariant bases of all types of degree `m`, loaded from or saved to the
/// checkpoint store, with the total checked against the character count.
pub fn invariant_bases(
    w: u32,
    m: u32,
    store: &dyn Checkpoint,
) -> Result<Vec<TypeBasis>, CoboundaryError> {
    let bases = enumerate_types(m, w, true)
        .into_par_iter()
        .map(|t| {
            let vectors = match store.load_basis(w, m, &t)? {
                Some(v) => v,
                None => {
                    let v = invariant_basis_for_type(&t);
                    store.store_basis(w, m, &t, &v)?;
                    v
                }
            };
            Ok(TypeBasis {
                signature: t,
                vectors,
            })
        })
        .collect::<Result<Vec<_>, CoboundaryError>>()?;
    let got: u64 = bases.iter().map(|b| b.vectors.len() as u64).sum();
    let expected = cochain_dimension(m, w);
    if got != expected {
        return Err(CoboundaryError::DimensionMismatch {
            w,
            m,
            expected,
            got,
        });
    }
    Ok(bases)
}

/// Dimensions, ranks and Betti numbers of the relative complex at weight `w`.
pub fn betti_row(w: u32) -> Result<WeightReport, CoboundaryError> {
    betti_row_with(w, &NoCheckpoint)
}

/// [`betti_row`] with checkpointing. Bases are held for two consecutive
/// degrees at a time; every product of consecutive matrices is checked to
/// vanish.
pub fn betti_row_with(w: u32, store: &dyn Checkpoint) -> Result<WeightReport, CoboundaryError> {
    let top = max_degree(w);
    let dims: Vec<u64> = (1..=top).map(|m| cochain_dimension(m, w)).collect();
    let mut ranks = vec![0u64; top as usize];
    let mut lower: Option<Vec<TypeBasis>> = None;
    let mut previous: Option<SparseMatrix> = None;
    for m in 1..top {
        let (dm, dm1) = (dims[m as usize - 1], dims[m as usize]);
        let matrix = if dm == 0 || dm1 == 0 {
            lower = None;
            SparseMatrix::zeros(dm1 as usize, dm as usize)
        } else if let Some(mat) = store.load_matrix(w, m)? {
            debug!("w={w} m={m}: matrix from checkpoint");
            lower = None;
            mat
        } else {
            let source = match lower.take() {
                Some(b) => b,
                None => invariant_bases(w, m, store)?,
            };
            let target = invariant_bases(w, m + 1, store)?;
            let mat = d_matrix(w, m, &source, &target)?.matrix;
            store.store_matrix(w, m, &mat)?;
            lower = Some(target);
            mat
        };
        if let Some(prev) = &previous {
            let square = matmul(&matrix, prev).expect("consecutive shapes agree");
            if !square.is_zero() {
                return Err(CoboundaryError::NonzeroSquare { w, m: m - 1 });
            }
        }
        ranks[m as usize - 1] = rank(&matrix) as u64;
        info!(
            "w={w} m={m}: {}x{} matrix of rank {}",
            matrix.n_rows(),
            matrix.n_cols(),
            ranks[m as usize - 1]
        );
        previous = Some(matrix);
    }
    Ok(WeightReport::from_dims_and_ranks(w, dims, ranks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::invariant_basis;

    fn z(r: u32, big_r: u32) -> DualGenerator {
        DualGenerator::new(r, big_r)
    }

    #[test]
    fn cubic_generators_are_closed() {
        for r in 0..=3 {
            assert!(d_generator(z(r, 3)).is_zero());
        }
        assert!(!d_generator(z(2, 4)).is_zero());
    }

    #[test]
    fn generator_image_is_homogeneous() {
        for big_r in 3..=12 {
            for r in 0..=big_r {
                let dz = d_generator(z(r, big_r));
                assert!(dz.terms().all(|(m, _)| m.weight() == big_r - 2));
                assert!(dz
                    .terms()
                    .all(|(m, _)| m.h_weight() == 2 * r as i64 - big_r as i64));
            }
        }
    }

    #[test]
    fn square_vanishes_on_generators() {
        for big_r in 3..=11 {
            for r in 0..=big_r {
                assert!(
                    d_cochain(&d_generator(z(r, big_r))).is_zero(),
                    "z({r},{big_r})"
                );
            }
        }
    }

    #[test]
    fn weight_two_invariant_is_closed() {
        let b = invariant_basis(2, 2);
        assert!(d_cochain(&b[0].vectors[0]).is_zero());
    }

    #[test]
    fn weight_six_pipeline() {
        let report = betti_row(6).unwrap();
        assert_eq!(report.dims, vec![0, 1, 1, 0, 0]);
        assert_eq!(report.ranks, vec![0, 1, 0, 0, 0]);
        assert!(report.betti.iter().all(|&b| b == 0));
    }

    #[test]
    fn weight_eight_matrices() {
        let b3 = invariant_bases(8, 3, &NoCheckpoint).unwrap();
        let b4 = invariant_bases(8, 4, &NoCheckpoint).unwrap();
        let b5 = invariant_bases(8, 5, &NoCheckpoint).unwrap();
        let a = d_matrix(8, 3, &b3, &b4).unwrap().matrix;
        let b = d_matrix(8, 4, &b4, &b5).unwrap().matrix;
        assert_eq!(a.shape(), (5, 4));
        assert_eq!(b.shape(), (1, 5));
        assert_eq!(rank(&a), 4);
        assert_eq!(rank(&b), 1);
        assert!(matmul(&b, &a).unwrap().is_zero());
    }

    #[test]
    fn matrix_columns_reproduce_images() {
        for (w, m) in [(8, 3), (8, 4), (10, 4), (10, 5)] {
            let src = invariant_bases(w, m, &NoCheckpoint).unwrap();
            let tgt = invariant_bases(w, m + 1, &NoCheckpoint).unwrap();
            let mat = d_matrix(w, m, &src, &tgt).unwrap().matrix;
            let targets: Vec<&CochainVector> = tgt.iter().flat_map(|t| &t.vectors).collect();
            for (j, v) in src.iter().flat_map(|t| &t.vectors).enumerate() {
                let mut combo = CochainVector::zero(m + 1, w);
                for (i, x) in mat.column(j).iter() {
                    combo.add_scaled(x, targets[i]);
                }
                assert_eq!(combo, d_cochain(v));
            }
        }
    }

    #[test]
    fn incomplete_target_is_rejected() {
        let b3 = invariant_bases(8, 3, &NoCheckpoint).unwrap();
        let full = invariant_bases(8, 4, &NoCheckpoint).unwrap();
        let a = d_matrix(8, 3, &b3, &full).unwrap().matrix;
        // drop a target vector that some image actually uses
        let used = (0..a.n_rows()).find(|&i| !a.row(i).is_empty()).unwrap();
        let mut b4 = full.clone();
        let mut seen = 0;
        for tb in &mut b4 {
            if used < seen + tb.vectors.len() {
                tb.vectors.remove(used - seen);
                break;
            }
            seen += tb.vectors.len();
        }
        assert!(matches!(
            d_matrix(8, 3, &b3, &b4),
            Err(CoboundaryError::IncompleteBasis { w: 8, m: 4, .. })
        ));
        let mut scaled = full;
        let tb = scaled.iter_mut().find(|b| !b.vectors.is_empty()).unwrap();
        tb.vectors[0] = tb.vectors[0].scale(&Rational::from(2));
        assert!(matches!(
            d_matrix(8, 3, &b3, &scaled),
            Err(CoboundaryError::NotNormalForm { .. })
        ));
    }

    #[test]
    fn report_assembly() {
        let r = WeightReport::from_dims_and_ranks(
            12,
            vec![0, 0, 8, 23, 22, 13, 5, 0],
            vec![0, 0, 8, 14, 8, 5, 0, 0],
        );
        assert_eq!(r.betti, vec![0, 0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(r.euler, 2);
    }
}
