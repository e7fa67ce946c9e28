use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::elim::{self, Integers, ModP, Pivot, Row};
use super::reconstruct::{crt_step, BatchReconstructor};
use super::{LinalgError, Rational, SparseMatrix, SparseVector, PRIMES};

/// Primes tried by the modular kernel before falling back to exact elimination.
const MAX_KERNEL_PRIMES: usize = 48;

fn lcm_of_denoms<'a>(xs: impl Iterator<Item = &'a Rational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Rows scaled to primitive integer vectors; the row space is unchanged.
fn integer_rows(m: &SparseMatrix) -> Vec<Row<BigInt>> {
    (0..m.n_rows())
        .map(|r| {
            let row = m.row(r);
            let l = lcm_of_denoms(row.iter().map(|(_, x)| x));
            let mut out: Row<BigInt> = row
                .iter()
                .map(|(c, x)| (*c as u32, x.numer() * (&l / x.denom())))
                .collect();
            elim::make_primitive(&mut out);
            out
        })
        .collect()
}

/// Image of the matrix in GF(p), or `None` if p divides a denominator.
fn modp_rows(m: &SparseMatrix, f: ModP) -> Option<Vec<Row<u64>>> {
    (0..m.n_rows())
        .map(|r| {
            let mut out = Vec::with_capacity(m.row(r).len());
            for (c, x) in m.row(r) {
                let d = f.reduce(x.denom());
                if d == 0 {
                    return None;
                }
                let v = f.mul(f.reduce(x.numer()), f.inv(d));
                if v != 0 {
                    out.push((*c as u32, v));
                }
            }
            Some(out)
        })
        .collect()
}

/// Rank over GF(p); `None` when p divides one of the denominators.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Option<usize> {
    let f = ModP { p };
    let rows = modp_rows(m, f)?;
    Some(elim::eliminate(&f, m.n_cols(), rows, None).len())
}

/// Exact rank over Q.
///
/// A modular elimination predicts the pivot sequence; the count returned is
/// always that of the exact fraction-free elimination.
pub fn rank(m: &SparseMatrix) -> usize {
    if m.is_zero() {
        return 0;
    }
    let predicted: Option<Vec<(usize, u32)>> = PRIMES.iter().find_map(|&p| {
        let f = ModP { p };
        modp_rows(m, f).map(|rows| {
            elim::eliminate(&f, m.n_cols(), rows, None)
                .iter()
                .map(|pv| (pv.row, pv.col))
                .collect()
        })
    });
    let pivots = elim::eliminate(&Integers, m.n_cols(), integer_rows(m), predicted.as_deref());
    if let Some(pred) = &predicted {
        debug_assert!(
            pred.len() <= pivots.len(),
            "modular rank exceeds exact rank"
        );
    }
    pivots.len()
}

fn free_columns<S>(n_cols: usize, pivots: &[Pivot<S>]) -> Vec<usize> {
    let mut is_pivot = vec![false; n_cols];
    for pv in pivots {
        is_pivot[pv.col as usize] = true;
    }
    (0..n_cols).filter(|&c| !is_pivot[c]).collect()
}

/// Kernel of the eliminated system over GF(p), in reduced echelon form with
/// leading coordinates first. Returns the leading positions and dense rows.
fn kernel_rref_mod_p(n_cols: usize, pivots: &[Pivot<u64>], f: ModP) -> (Vec<usize>, Vec<Vec<u64>>) {
    let free = free_columns(n_cols, pivots);
    let mut basis: Vec<Vec<u64>> = free
        .iter()
        .map(|&fc| {
            let mut x = vec![0u64; n_cols];
            x[fc] = 1;
            for pv in pivots.iter().rev() {
                let mut acc = 0u64;
                for (j, a) in &pv.data {
                    if *j != pv.col && x[*j as usize] != 0 {
                        acc = f.add(acc, f.mul(*a, x[*j as usize]));
                    }
                }
                x[pv.col as usize] = f.sub(0, acc);
            }
            x
        })
        .collect();

    // reduced echelon form, leading coordinate = first nonzero
    let mut leading = Vec::with_capacity(basis.len());
    let mut row = 0;
    for c in 0..n_cols {
        if row == basis.len() {
            break;
        }
        let Some(k) = (row..basis.len()).find(|&k| basis[k][c] != 0) else {
            continue;
        };
        basis.swap(row, k);
        let inv = f.inv(basis[row][c]);
        for x in basis[row].iter_mut().skip(c) {
            *x = f.mul(*x, inv);
        }
        let pivot_row = basis[row].clone();
        for (k, other) in basis.iter_mut().enumerate() {
            if k == row || other[c] == 0 {
                continue;
            }
            let t = other[c];
            for j in c..n_cols {
                if pivot_row[j] != 0 {
                    other[j] = f.sub(other[j], f.mul(t, pivot_row[j]));
                }
            }
        }
        leading.push(c);
        row += 1;
    }
    (leading, basis)
}

fn verify_kernel(rows: &[Row<BigInt>], vectors: &[SparseVector]) -> bool {
    vectors.par_iter().all(|v| {
        let l = lcm_of_denoms(v.iter().map(|(_, x)| x));
        let mut dense: Vec<BigInt> = vec![BigInt::zero(); v.dim()];
        for (i, x) in v.iter() {
            dense[i] = x.numer() * (&l / x.denom());
        }
        rows.iter().all(|row| {
            let mut acc = BigInt::zero();
            for (c, a) in row {
                let y = &dense[*c as usize];
                if !y.is_zero() {
                    acc += a * y;
                }
            }
            acc.is_zero()
        })
    })
}

struct ModularAccumulator {
    rank: usize,
    leading: Vec<usize>,
    values: Vec<Vec<BigInt>>,
    modulus: BigInt,
}

impl ModularAccumulator {
    fn reconstruct(&self, n_cols: usize) -> Option<Vec<SparseVector>> {
        let mut rec = BatchReconstructor::new(&self.modulus);
        self.values
            .iter()
            .map(|row| {
                let mut v = SparseVector::zero(n_cols);
                for (j, u) in row.iter().enumerate() {
                    if !u.is_zero() {
                        v.set(j, rec.reconstruct(u)?);
                    }
                }
                Some(v)
            })
            .collect()
    }
}

/// Basis of the right null space `{v : M v = 0}` in reduced echelon normal form.
///
/// The basis is the reduced row echelon form of the null space: the leading
/// (first nonzero) coordinate of each vector equals 1 and is zero in every other
/// vector, so the leading coordinates are the lexicographically smallest
/// possible. Vectors are sorted by leading coordinate.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVector> {
    let n = m.n_cols();
    if n == 0 {
        return Vec::new();
    }
    if m.is_zero() {
        return (0..n).map(|i| SparseVector::unit(n, i)).collect();
    }
    let int_rows = integer_rows(m);
    let mut acc: Option<ModularAccumulator> = None;
    for &p in PRIMES.iter().take(MAX_KERNEL_PRIMES) {
        let f = ModP { p };
        let Some(rows) = modp_rows(m, f) else {
            continue;
        };
        let pivots = elim::eliminate(&f, n, rows, None);
        let rank_p = pivots.len();
        let (leading, basis) = kernel_rref_mod_p(n, &pivots, f);
        let restart = match &acc {
            None => true,
            Some(a) => rank_p > a.rank || (rank_p == a.rank && leading != a.leading),
        };
        if restart {
            acc = Some(ModularAccumulator {
                rank: rank_p,
                leading,
                values: basis
                    .into_iter()
                    .map(|row| row.into_iter().map(BigInt::from).collect())
                    .collect(),
                modulus: BigInt::from(p),
            });
        } else {
            let a = acc.as_mut().expect("accumulator initialised");
            if rank_p < a.rank {
                continue;
            }
            let inv = f.inv(f.reduce(&a.modulus));
            for (row, res) in a.values.iter_mut().zip(&basis) {
                for (x, r) in row.iter_mut().zip(res) {
                    crt_step(x, &a.modulus, *r, p, inv);
                }
            }
            a.modulus *= p;
        }
        let a = acc.as_ref().expect("accumulator initialised");
        if let Some(vectors) = a.reconstruct(n) {
            if verify_kernel(&int_rows, &vectors) {
                return vectors;
            }
        }
    }
    log::debug!(
        "modular kernel did not settle for {}x{} matrix; exact fallback",
        m.n_rows(),
        n
    );
    kernel_basis_exact(m)
}

/// Null space by exact fraction-free elimination and back-substitution over Q,
/// in the same normal form as [`kernel_basis`].
pub fn kernel_basis_exact(m: &SparseMatrix) -> Vec<SparseVector> {
    let n = m.n_cols();
    let pivots = elim::eliminate(&Integers, n, integer_rows(m), None);
    let free = free_columns(n, &pivots);
    let raw: Vec<SparseVector> = free
        .iter()
        .map(|&fc| {
            let mut x = vec![Rational::zero(); n];
            x[fc] = Rational::one();
            for pv in pivots.iter().rev() {
                let mut acc = Rational::zero();
                let mut lead = None;
                for (j, a) in &pv.data {
                    if *j == pv.col {
                        lead = Some(a);
                    } else if !x[*j as usize].is_zero() {
                        acc += &x[*j as usize] * &Rational::from(a.clone());
                    }
                }
                let lead = Rational::from(lead.expect("pivot entry present").clone());
                x[pv.col as usize] = -(acc / lead);
            }
            SparseVector::from_dense(&x)
        })
        .collect();
    rref_rows(raw)
}

/// Reduced row echelon form of a list of vectors (leading coordinate first),
/// dropping zero rows. Output rows are sorted by leading coordinate.
pub fn rref_rows(rows: Vec<SparseVector>) -> Vec<SparseVector> {
    rref_with_transform(rows, false).0
}

/// Like [`rref_rows`], optionally tracking `T` with `out[i] = Σ_j T[i][j] in[j]`.
fn rref_with_transform(
    mut rows: Vec<SparseVector>,
    track: bool,
) -> (Vec<SparseVector>, Vec<SparseVector>) {
    let k = rows.len();
    let mut transform: Vec<SparseVector> = if track {
        (0..k).map(|i| SparseVector::unit(k, i)).collect()
    } else {
        Vec::new()
    };
    let mut done = 0;
    while done < rows.len() {
        // pick the remaining row with the smallest leading coordinate
        let Some((best, lead)) = rows[done..]
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.leading().map(|(c, _)| (i + done, c)))
            .min_by_key(|&(i, c)| (c, i))
        else {
            break;
        };
        rows.swap(done, best);
        if track {
            transform.swap(done, best);
        }
        let inv = rows[done].get(lead).recip();
        rows[done] = rows[done].scale(&inv);
        if track {
            transform[done] = transform[done].scale(&inv);
        }
        let pivot = rows[done].clone();
        let pivot_t = if track {
            Some(transform[done].clone())
        } else {
            None
        };
        for i in 0..rows.len() {
            if i == done {
                continue;
            }
            let c = rows[i].get(lead);
            if c.is_zero() {
                continue;
            }
            let neg = -c;
            rows[i].add_scaled(&neg, &pivot);
            if let Some(pt) = &pivot_t {
                transform[i].add_scaled(&neg, pt);
            }
        }
        done += 1;
    }
    rows.truncate(done);
    if track {
        transform.truncate(done);
    }
    (rows, transform)
}

/// Expresses vectors in a fixed linearly independent family.
pub struct SpanSolver {
    dim: usize,
    n_basis: usize,
    echelon: Vec<SparseVector>,
    leading: Vec<usize>,
    /// `None` when the family is already in reduced echelon form.
    transform: Option<Vec<SparseVector>>,
}

fn is_reduced_echelon(rows: &[SparseVector]) -> bool {
    let leads: Vec<usize> = match rows
        .iter()
        .map(|r| r.leading().filter(|(_, x)| x.is_one()).map(|(c, _)| c))
        .collect::<Option<Vec<_>>>()
    {
        Some(l) => l,
        None => return false,
    };
    leads.windows(2).all(|w| w[0] < w[1])
        && rows.iter().enumerate().all(|(i, r)| {
            leads
                .iter()
                .enumerate()
                .all(|(j, &c)| i == j || r.get(c).is_zero())
        })
}

impl SpanSolver {
    pub fn new(dim: usize, basis: &[SparseVector]) -> Result<Self, LinalgError> {
        if let Some(v) = basis.iter().find(|v| v.dim() != dim) {
            return Err(LinalgError::DimensionMismatch {
                left: (dim, basis.len()),
                right: (v.dim(), 1),
            });
        }
        let (echelon, transform) = if is_reduced_echelon(basis) {
            (basis.to_vec(), None)
        } else {
            let (e, t) = rref_with_transform(basis.to_vec(), true);
            (e, Some(t))
        };
        if echelon.len() < basis.len() {
            return Err(LinalgError::DependentBasis);
        }
        let leading = echelon
            .iter()
            .map(|r| r.leading().expect("nonzero row").0)
            .collect();
        Ok(SpanSolver {
            dim,
            n_basis: basis.len(),
            echelon,
            leading,
            transform,
        })
    }

    pub fn len(&self) -> usize {
        self.n_basis
    }

    pub fn is_empty(&self) -> bool {
        self.n_basis == 0
    }

    /// Coefficients `c` with `Σ c_i basis_i = target`.
    pub fn solve(&self, target: &SparseVector) -> Result<Vec<Rational>, LinalgError> {
        if target.dim() != self.dim {
            return Err(LinalgError::DimensionMismatch {
                left: (self.dim, self.n_basis),
                right: (target.dim(), 1),
            });
        }
        let ech_coeffs: Vec<Rational> = self.leading.iter().map(|&c| target.get(c)).collect();
        let mut residual = target.clone();
        for (c, row) in ech_coeffs.iter().zip(&self.echelon) {
            residual.add_scaled(&-c, row);
        }
        if !residual.is_zero() {
            return Err(LinalgError::NotInSpan);
        }
        Ok(match &self.transform {
            None => ech_coeffs,
            Some(t) => {
                let mut out = vec![Rational::zero(); self.n_basis];
                for (c, trow) in ech_coeffs.iter().zip(t) {
                    for (j, x) in trow.iter() {
                        out[j] += c * x;
                    }
                }
                out
            }
        })
    }
}

/// Coefficients expressing `target` in the linearly independent family `basis`.
pub fn solve_in_span(
    basis: &[SparseVector],
    target: &SparseVector,
) -> Result<Vec<Rational>, LinalgError> {
    SpanSolver::new(target.dim(), basis)?.solve(target)
}

/// Rank by dense fraction-free (Bareiss) elimination. Slow; meant as an
/// independent cross-check for small matrices.
pub fn rank_dense_oracle(m: &SparseMatrix) -> usize {
    let (nr, nc) = m.shape();
    let rows = integer_rows(m);
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let mut d = vec![BigInt::zero(); nc];
            for (c, x) in row {
                d[*c as usize] = x.clone();
            }
            d
        })
        .collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..nc {
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nr {
            for j in c + 1..nc {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == nr {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_a() -> SparseMatrix {
        let r = |n: i64, d: i64| Rational::new(n, d);
        let dense = vec![
            vec![r(-6, 1), r(-12, 1), r(9, 4), r(0, 1)],
            vec![r(0, 1), r(-27, 1), r(0, 1), r(1, 1)],
            vec![r(0, 1), r(59, 1), r(0, 1), r(3, 1)],
            vec![r(5, 1), r(4, 1), r(3, 4), r(22, 1)],
            vec![r(7, 2), r(14, 1), r(21, 8), r(35, 1)],
        ];
        SparseMatrix::from_dense(4, &dense).unwrap()
    }

    #[test]
    fn rank_examples() {
        let b = SparseMatrix::from_i64_rows(5, &[&[-4, -3, -3, -9, 6]]);
        assert_eq!(rank(&b), 1);
        assert_eq!(rank(&SparseMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&paper_a()), 4);
        assert_eq!(rank(&SparseMatrix::zeros(0, 0)), 0);
    }

    #[test]
    fn product_of_worked_matrices_vanishes() {
        let b = SparseMatrix::from_i64_rows(5, &[&[-4, -3, -3, -9, 6]]);
        let ba = super::super::matmul(&b, &paper_a()).unwrap();
        assert_eq!(ba.shape(), (1, 4));
        assert!(ba.is_zero());
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(4)).is_empty());
        let k = kernel_basis(&SparseMatrix::zeros(1, 3));
        assert_eq!(
            k,
            (0..3).map(|i| SparseVector::unit(3, i)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn kernel_normal_form() {
        // x0 + x1 + x2 = 0 and x1 - x3 = 0
        let m = SparseMatrix::from_i64_rows(4, &[&[1, 1, 1, 0], &[0, 1, 0, -1]]);
        let k = kernel_basis(&m);
        let expect = vec![
            SparseVector::from_dense(&[1, 0, -1, 0].map(Rational::from)),
            SparseVector::from_dense(&[0, 1, -1, 1].map(Rational::from)),
        ];
        assert_eq!(k, expect);
        assert_eq!(kernel_basis_exact(&m), expect);
    }

    #[test]
    fn solve_examples() {
        let e = |i| SparseVector::unit(2, i);
        let target = SparseVector::from_dense(&[Rational::from(3), Rational::from(-1)]);
        assert_eq!(
            solve_in_span(&[e(0), e(1)], &target).unwrap(),
            vec![Rational::from(3), Rational::from(-1)]
        );
        assert_eq!(solve_in_span(&[e(0)], &e(1)), Err(LinalgError::NotInSpan));
    }

    #[test]
    fn solve_non_echelon_basis() {
        let b1 = SparseVector::from_dense(&[1, 1, 0].map(Rational::from));
        let b2 = SparseVector::from_dense(&[0, 2, 1].map(Rational::from));
        let mut t = b1.scale(&Rational::new(1, 3));
        t.add_scaled(&Rational::from(-5), &b2);
        let c = solve_in_span(&[b1.clone(), b2.clone()], &t).unwrap();
        assert_eq!(c, vec![Rational::new(1, 3), Rational::from(-5)]);
        assert_eq!(
            solve_in_span(&[b1.clone(), b1.scale(&Rational::from(2))], &t),
            Err(LinalgError::DependentBasis)
        );
    }

    #[test]
    fn dense_oracle_agrees_on_examples() {
        assert_eq!(rank_dense_oracle(&paper_a()), 4);
        assert_eq!(rank_dense_oracle(&SparseMatrix::identity(5)), 5);
    }
}
