use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{LinalgError, Rational};

/// Sparse vector over the rationals. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVector {
    dim: usize,
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    pub fn zero(dim: usize) -> Self {
        SparseVector {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = SparseVector::zero(dim);
        v.set(index, Rational::one());
        v
    }

    /// Builds a vector from `(index, value)` pairs; repeated indices are summed.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Self, LinalgError> {
        let mut v = SparseVector::zero(dim);
        for (i, x) in entries {
            if i >= dim {
                return Err(LinalgError::OutOfBounds {
                    index: (i, 0),
                    shape: (dim, 1),
                });
            }
            v.add_at(i, &x);
        }
        Ok(v)
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        SparseVector {
            dim: values.len(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Rational {
        self.entries.get(&i).cloned().unwrap_or_default()
    }

    /// Panics if `i` is out of bounds.
    pub fn set(&mut self, i: usize, x: Rational) {
        assert!(i < self.dim, "index {i} out of bounds for dim {}", self.dim);
        if x.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    pub fn add_at(&mut self, i: usize, x: &Rational) {
        if x.is_zero() {
            return;
        }
        let slot = self.entries.entry(i).or_default();
        *slot += x;
        if slot.is_zero() {
            self.entries.remove(&i);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    /// First stored index, the leading coordinate of the vector.
    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.iter().next().map(|(&i, x)| (i, x))
    }

    pub fn scale(&self, c: &Rational) -> SparseVector {
        if c.is_zero() {
            return SparseVector::zero(self.dim);
        }
        SparseVector {
            dim: self.dim,
            entries: self.entries.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Rational, other: &SparseVector) {
        debug_assert_eq!(self.dim, other.dim);
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_at(i, &(x * c));
        }
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, x) in self.iter() {
            out[i] = x.clone();
        }
        out
    }
}

/// Sparse matrix over the rationals, stored by rows with sorted column indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zeros(n, n);
        for (i, row) in m.rows.iter_mut().enumerate() {
            row.push((i, Rational::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions are summed
    /// and entries that cancel to zero are dropped.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self, LinalgError> {
        let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n_rows];
        for (r, c, x) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(LinalgError::OutOfBounds {
                    index: (r, c),
                    shape: (n_rows, n_cols),
                });
            }
            *rows[r].entry(c).or_default() += x;
        }
        Ok(SparseMatrix {
            n_rows,
            n_cols,
            rows: rows
                .into_iter()
                .map(|row| row.into_iter().filter(|(_, x)| !x.is_zero()).collect())
                .collect(),
        })
    }

    pub fn from_dense(n_cols: usize, dense: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let triplets = dense
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, x)| (r, c, x.clone())));
        SparseMatrix::from_triplets(dense.len(), n_cols, triplets)
    }

    /// Small-integer convenience constructor, mostly for tests.
    pub fn from_i64_rows(n_cols: usize, rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
            .collect();
        SparseMatrix::from_dense(n_cols, &dense).expect("row length exceeds n_cols")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, columns: &[SparseVector]) -> Result<Self, LinalgError> {
        let mut triplets = Vec::new();
        for (c, v) in columns.iter().enumerate() {
            if v.dim() != n_rows {
                return Err(LinalgError::DimensionMismatch {
                    left: (n_rows, columns.len()),
                    right: (v.dim(), 1),
                });
            }
            triplets.extend(v.iter().map(|(r, x)| (r, c, x.clone())));
        }
        SparseMatrix::from_triplets(n_rows, columns.len(), triplets)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.rows[r]
            .binary_search_by_key(&c, |(j, _)| *j)
            .map(|k| self.rows[r][k].1.clone())
            .unwrap_or_default()
    }

    /// All nonzero entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, x)| (r, *c, x)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.n_cols];
        for (r, c, x) in self.triplets() {
            rows[c].push((r, x.clone()));
        }
        SparseMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        }
    }

    pub fn column(&self, c: usize) -> SparseVector {
        let mut v = SparseVector::zero(self.n_rows);
        for (r, row) in self.rows.iter().enumerate() {
            if let Ok(k) = row.binary_search_by_key(&c, |(j, _)| *j) {
                v.set(r, row[k].1.clone());
            }
        }
        v
    }

    pub fn mul_vec(&self, v: &SparseVector) -> Result<SparseVector, LinalgError> {
        if v.dim() != self.n_cols {
            return Err(LinalgError::DimensionMismatch {
                left: self.shape(),
                right: (v.dim(), 1),
            });
        }
        let mut out = SparseVector::zero(self.n_rows);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = Rational::zero();
            for (c, x) in row {
                if let Some(y) = v.entries.get(c) {
                    acc += x * y;
                }
            }
            out.set(r, acc);
        }
        Ok(out)
    }

    /// Serializes as a header line `rows cols nnz` followed by one `row col num/den`
    /// line per entry, in row-major order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {} {}", self.n_rows, self.n_cols, self.nnz()).unwrap();
        for (r, c, x) in self.triplets() {
            writeln!(s, "{r} {c} {x}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, LinalgError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LinalgError::Parse("missing header line".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(LinalgError::Parse(format!("bad header `{header}`")));
        }
        let parse_usize = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| LinalgError::Parse(format!("bad integer `{s}`")))
        };
        let (n_rows, n_cols, nnz) = (
            parse_usize(fields[0])?,
            parse_usize(fields[1])?,
            parse_usize(fields[2])?,
        );
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(LinalgError::Parse(format!("bad entry line `{line}`")));
            }
            let x: Rational = f[2].parse()?;
            if x.is_zero() {
                return Err(LinalgError::Parse(format!("stored zero in `{line}`")));
            }
            triplets.push((parse_usize(f[0])?, parse_usize(f[1])?, x));
        }
        if triplets.len() != nnz {
            return Err(LinalgError::Parse(format!(
                "header announces {nnz} entries, found {}",
                triplets.len()
            )));
        }
        SparseMatrix::from_triplets(n_rows, n_cols, triplets)
    }
}

impl SparseVector {
    /// Same layout as [`SparseMatrix::to_text`], as a `dim x 1` column.
    pub fn to_text(&self) -> String {
        SparseMatrix::from_columns(self.dim, std::slice::from_ref(self))
            .expect("column has matching dimension")
            .to_text()
    }

    pub fn from_text(text: &str) -> Result<Self, LinalgError> {
        let m = SparseMatrix::from_text(text)?;
        if m.n_cols() != 1 {
            return Err(LinalgError::Parse(format!(
                "expected a single column, found {}",
                m.n_cols()
            )));
        }
        Ok(m.column(0))
    }
}

/// Exact product `a * b`.
pub fn matmul(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
    if a.n_cols != b.n_rows {
        return Err(LinalgError::DimensionMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut rows = Vec::with_capacity(a.n_rows);
    for arow in &a.rows {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (k, x) in arow {
            for (c, y) in &b.rows[*k] {
                *acc.entry(*c).or_default() += x * y;
            }
        }
        rows.push(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
    }
    Ok(SparseMatrix {
        n_rows: a.n_rows,
        n_cols: b.n_cols,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![
                (0, 0, Rational::from(1)),
                (0, 0, Rational::from(-1)),
                (1, 1, Rational::from(2)),
                (1, 1, Rational::from(3)),
            ],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), Rational::from(5));
    }

    #[test]
    fn out_of_bounds_rejected() {
        let err = SparseMatrix::from_triplets(1, 1, vec![(0, 1, Rational::one())]).unwrap_err();
        assert!(matches!(err, LinalgError::OutOfBounds { .. }));
    }

    #[test]
    fn matmul_identity_and_zero() {
        let m = SparseMatrix::from_i64_rows(3, &[&[1, 2, 0], &[0, -1, 4]]);
        assert_eq!(matmul(&SparseMatrix::identity(2), &m).unwrap(), m);
        let z = matmul(&m, &SparseMatrix::zeros(3, 5)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.shape(), (2, 5));
        assert!(matches!(
            matmul(&m, &m),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn text_format_layout() {
        let m = SparseMatrix::from_dense(
            3,
            &[vec![
                Rational::zero(),
                Rational::new(-3, 4),
                Rational::zero(),
            ]],
        )
        .unwrap();
        assert_eq!(m.to_text(), "1 3 1\n0 1 -3/4\n");
        assert_eq!(SparseMatrix::from_text(&m.to_text()).unwrap(), m);
        assert!(SparseMatrix::from_text("1 3 2\n0 1 -3/4\n").is_err());
    }

    #[test]
    fn vector_text_round_trip() {
        let v = SparseVector::from_entries(4, vec![(3, Rational::new(9, 2))]).unwrap();
        assert_eq!(SparseVector::from_text(&v.to_text()).unwrap(), v);
    }
}
