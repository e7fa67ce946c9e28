//! Sparse right-looking elimination shared by the modular and the exact
//! integer routines.
//!
//! Pivots are chosen with a Markowitz-style rule: the shortest active row, and
//! within it the column with the fewest active entries. A caller may also
//! supply a predicted pivot sequence (for instance from a modular run); entries
//! of the sequence that turn out to be zero are skipped and the remaining rows
//! are finished with the Markowitz rule, so the result never depends on the
//! prediction being right.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type Row<S> = Vec<(u32, S)>;

pub(crate) trait PivotField {
    type Scalar: Clone;

    /// Rescales a freshly chosen pivot row.
    fn prepare_pivot(&self, row: &mut Row<Self::Scalar>, col: u32);

    /// Returns `target` with column `col` cleared using `pivot`.
    fn eliminate(
        &self,
        target: &Row<Self::Scalar>,
        pivot: &Row<Self::Scalar>,
        col: u32,
    ) -> Row<Self::Scalar>;
}

pub(crate) struct Pivot<S> {
    pub row: usize,
    pub col: u32,
    pub data: Row<S>,
}

pub(crate) fn entry<S>(row: &Row<S>, col: u32) -> Option<&S> {
    row.binary_search_by_key(&col, |(j, _)| *j)
        .ok()
        .map(|k| &row[k].1)
}

/// Arithmetic in GF(p) for p < 2^63.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ModP {
    pub p: u64,
}

impl ModP {
    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    pub fn reduce(self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = x.mod_floor(&m);
        r.try_into().expect("residue fits in u64")
    }
}

impl PivotField for ModP {
    type Scalar = u64;

    fn prepare_pivot(&self, row: &mut Row<u64>, col: u32) {
        let lead = *entry(row, col).expect("pivot entry present");
        let inv = self.inv(lead);
        for (_, x) in row.iter_mut() {
            *x = self.mul(*x, inv);
        }
    }

    fn eliminate(&self, target: &Row<u64>, pivot: &Row<u64>, col: u32) -> Row<u64> {
        // pivot is monic at `col`
        let f = *entry(target, col).expect("target has the pivot column");
        let mut out = Vec::with_capacity(target.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < target.len() || j < pivot.len() {
            let ci = target.get(i).map_or(u32::MAX, |e| e.0);
            let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
            if ci < cj {
                out.push(target[i]);
                i += 1;
            } else if cj < ci {
                let v = self.sub(0, self.mul(f, pivot[j].1));
                if v != 0 {
                    out.push((cj, v));
                }
                j += 1;
            } else {
                let v = self.sub(target[i].1, self.mul(f, pivot[j].1));
                if v != 0 {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }
}

/// Fraction-free elimination over the integers: each update forms
/// `a * target - b * pivot` with `a/b` the reduced ratio of the two entries in the
/// pivot column, then divides the result by its content.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Integers;

pub(crate) fn make_primitive(row: &mut Row<BigInt>) {
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, x) in row.iter_mut() {
        *x /= &g;
    }
}

impl PivotField for Integers {
    type Scalar = BigInt;

    fn prepare_pivot(&self, row: &mut Row<BigInt>, col: u32) {
        make_primitive(row);
        if entry(row, col).is_some_and(|x| x.is_negative()) {
            for (_, x) in row.iter_mut() {
                *x = -&*x;
            }
        }
    }

    fn eliminate(&self, target: &Row<BigInt>, pivot: &Row<BigInt>, col: u32) -> Row<BigInt> {
        let t = entry(target, col).expect("target has the pivot column");
        let p = entry(pivot, col).expect("pivot entry present");
        let g = t.gcd(p);
        let a = p / &g;
        let b = t / &g;
        let mut out = Vec::with_capacity(target.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < target.len() || j < pivot.len() {
            let ci = target.get(i).map_or(u32::MAX, |e| e.0);
            let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
            if ci < cj {
                out.push((ci, &a * &target[i].1));
                i += 1;
            } else if cj < ci {
                out.push((cj, -(&b * &pivot[j].1)));
                j += 1;
            } else {
                let v = &a * &target[i].1 - &b * &pivot[j].1;
                if !v.is_zero() {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        make_primitive(&mut out);
        out
    }
}

struct State<'f, F: PivotField> {
    field: &'f F,
    rows: Vec<Option<Row<F::Scalar>>>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
    pivots: Vec<Pivot<F::Scalar>>,
}

impl<'f, F: PivotField> State<'f, F> {
    fn new(field: &'f F, n_cols: usize, rows: Vec<Row<F::Scalar>>) -> Self {
        let mut col_rows = vec![Vec::new(); n_cols];
        let mut col_count = vec![0u32; n_cols];
        let mut heap = BinaryHeap::with_capacity(rows.len());
        let rows: Vec<Option<Row<F::Scalar>>> = rows
            .into_iter()
            .enumerate()
            .map(|(r, row)| {
                if row.is_empty() {
                    return None;
                }
                for (c, _) in &row {
                    col_rows[*c as usize].push(r as u32);
                    col_count[*c as usize] += 1;
                }
                heap.push(Reverse((row.len(), r)));
                Some(row)
            })
            .collect();
        State {
            field,
            rows,
            col_rows,
            col_count,
            heap,
            pivots: Vec::new(),
        }
    }

    fn select(&mut self) -> Option<(usize, u32)> {
        while let Some(Reverse((len, r))) = self.heap.pop() {
            let Some(row) = &self.rows[r] else { continue };
            if row.len() != len {
                continue;
            }
            let col = row
                .iter()
                .map(|(c, _)| *c)
                .min_by_key(|c| (self.col_count[*c as usize], *c))
                .expect("active rows are nonempty");
            return Some((r, col));
        }
        None
    }

    fn pivot_on(&mut self, r: usize, col: u32) {
        let mut prow = self.rows[r].take().expect("pivot row is active");
        self.field.prepare_pivot(&mut prow, col);
        for (c, _) in &prow {
            self.col_count[*c as usize] -= 1;
        }
        let candidates = std::mem::take(&mut self.col_rows[col as usize]);
        for t in candidates {
            let t = t as usize;
            if t == r {
                continue;
            }
            let Some(trow) = self.rows[t].as_ref() else {
                continue;
            };
            if entry(trow, col).is_none() {
                continue;
            }
            let new = self.field.eliminate(trow, &prow, col);
            let (mut i, mut j) = (0, 0);
            while i < trow.len() || j < new.len() {
                let ci = trow.get(i).map_or(u32::MAX, |e| e.0);
                let cj = new.get(j).map_or(u32::MAX, |e| e.0);
                if ci < cj {
                    self.col_count[ci as usize] -= 1;
                    i += 1;
                } else if cj < ci {
                    self.col_count[cj as usize] += 1;
                    self.col_rows[cj as usize].push(t as u32);
                    j += 1;
                } else {
                    i += 1;
                    j += 1;
                }
            }
            if new.is_empty() {
                self.rows[t] = None;
            } else {
                self.heap.push(Reverse((new.len(), t)));
                self.rows[t] = Some(new);
            }
        }
        self.pivots.push(Pivot {
            row: r,
            col,
            data: prow,
        });
    }
}

/// Runs elimination to completion and returns the pivots in elimination order.
///
/// Each returned pivot row contains its own pivot column plus only free columns
/// and pivot columns of later steps, which is what back-substitution relies on.
pub(crate) fn eliminate<F: PivotField>(
    field: &F,
    n_cols: usize,
    rows: Vec<Row<F::Scalar>>,
    predicted: Option<&[(usize, u32)]>,
) -> Vec<Pivot<F::Scalar>> {
    let mut state = State::new(field, n_cols, rows);
    if let Some(order) = predicted {
        for &(r, c) in order {
            let usable = state.rows[r]
                .as_ref()
                .is_some_and(|row| entry(row, c).is_some());
            if usable {
                state.pivot_on(r, c);
            }
        }
    }
    while let Some((r, c)) = state.select() {
        state.pivot_on(r, c);
    }
    state.pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modp_inverse() {
        let f = ModP { p: 101 };
        for a in 1..101 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.reduce(&BigInt::from(-1)), 100);
    }

    #[test]
    fn integer_rank_of_small_matrix() {
        let rows: Vec<Row<BigInt>> = vec![
            vec![(0, 2.into()), (1, 4.into())],
            vec![(0, 1.into()), (1, 2.into())],
            vec![(1, 3.into()), (2, 1.into())],
        ];
        let pivots = eliminate(&Integers, 3, rows, None);
        assert_eq!(pivots.len(), 2);
    }

    #[test]
    fn bogus_prediction_is_ignored() {
        let rows: Vec<Row<u64>> = vec![vec![(0, 1)], vec![(0, 2), (1, 1)]];
        let pivots = eliminate(&ModP { p: 7 }, 2, rows, Some(&[(0, 1), (1, 1)]));
        assert_eq!(pivots.len(), 2);
    }
}
