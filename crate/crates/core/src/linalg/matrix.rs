use std::collections::BTreeMap;
use std::fmt;

use super::scalar::Scalar;
use super::LinalgError;

/// Sparse vector: index → nonzero coefficient.
pub type SparseVec<S> = BTreeMap<usize, S>;

/// `dst += c · src`, dropping entries that cancel.
pub fn axpy<S: Scalar>(dst: &mut SparseVec<S>, c: &S, src: &SparseVec<S>) {
    if c.is_zero() {
        return;
    }
    for (&i, v) in src {
        add_entry(dst, i, c.clone() * v.clone());
    }
}

pub fn add_entry<S: Scalar>(dst: &mut SparseVec<S>, i: usize, v: S) {
    if v.is_zero() {
        return;
    }
    match dst.entry(i) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().clone() + v;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub fn scaled<S: Scalar>(v: &SparseVec<S>, c: &S) -> SparseVec<S> {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&i, x)| (i, c.clone() * x.clone())).filter(|(_, x)| !x.is_zero()).collect()
}

pub fn unit_vec<S: Scalar>(i: usize) -> SparseVec<S> {
    let mut v = SparseVec::new();
    v.insert(i, S::one());
    v
}

/// Sparse column-major matrix. Column `j` is the image of basis vector `j`.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: Vec<SparseVec<S>>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            rows: n,
            cols: (0..n).map(unit_vec).collect(),
        }
    }

    /// Entries given as `(row, col, value)`; duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, S)>,
    {
        let mut m = Matrix::zeros(rows, cols);
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfBounds { row: r, col: c, rows, cols });
            }
            add_entry(&mut m.cols[c], r, v);
        }
        Ok(m)
    }

    /// Build from columns; zero entries are dropped.
    pub fn from_columns(rows: usize, cols: Vec<SparseVec<S>>) -> Self {
        let cols = cols
            .into_iter()
            .map(|c| {
                debug_assert!(c.keys().all(|&i| i < rows));
                c.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Matrix { rows, cols }
    }

    pub fn from_dense(rows: &[Vec<S>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(nr, nc);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                add_entry(&mut m.cols[j], i, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec<S> {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec<S>] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<SparseVec<S>> {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        self.cols[c].get(&r).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        assert!(r < self.rows && c < self.cols.len());
        if v.is_zero() {
            self.cols[c].remove(&r);
        } else {
            self.cols[c].insert(r, v);
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(&i, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut d = vec![vec![S::zero(); self.cols()]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols(), self.rows);
        for (i, j, v) in self.triplets() {
            t.cols[i].insert(j, v.clone());
        }
        t
    }

    /// Rows as sparse vectors (row `i` maps column index → entry).
    pub fn row_vectors(&self) -> Vec<SparseVec<S>> {
        self.transpose().cols
    }

    pub fn apply(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::new();
        for (&j, c) in v {
            axpy(&mut out, c, &self.cols[j]);
        }
        out
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch in product");
        Matrix {
            rows: self.rows,
            cols: rhs.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.combine(rhs, &S::one())
    }

    pub fn sub(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.combine(rhs, &-S::one())
    }

    /// `self + c · rhs`.
    pub fn combine(&self, rhs: &Matrix<S>, c: &S) -> Matrix<S> {
        assert_eq!((self.rows, self.cols()), (rhs.rows, rhs.cols()), "shape mismatch");
        let mut out = self.clone();
        for (dst, src) in out.cols.iter_mut().zip(&rhs.cols) {
            axpy(dst, c, src);
        }
        out
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().map(|col| scaled(col, c)).collect(),
        }
    }

    pub fn neg(&self) -> Matrix<S> {
        self.scale(&-S::one())
    }

    /// Keep the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    /// Keep the listed rows, renumbered in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix<S> {
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        Matrix {
            rows: idx.len(),
            cols: self
                .cols
                .iter()
                .map(|c| c.iter().filter_map(|(i, v)| pos.get(i).map(|&k| (k, v.clone()))).collect())
                .collect(),
        }
    }

    pub fn hstack(parts: &[&Matrix<S>]) -> Matrix<S> {
        let rows = parts.first().map_or(0, |m| m.rows);
        let mut cols = Vec::new();
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            cols.extend(m.cols.iter().cloned());
        }
        Matrix { rows, cols }
    }

    pub fn vstack(parts: &[&Matrix<S>]) -> Matrix<S> {
        let ncols = parts.first().map_or(0, |m| m.cols());
        let mut out = Matrix::zeros(parts.iter().map(|m| m.rows).sum(), ncols);
        let mut offset = 0;
        for m in parts {
            assert_eq!(m.cols(), ncols, "vstack column mismatch");
            for (i, j, v) in m.triplets() {
                out.cols[j].insert(offset + i, v.clone());
            }
            offset += m.rows;
        }
        out
    }

    pub fn block_diag(parts: &[&Matrix<S>]) -> Matrix<S> {
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let mut cols = Vec::new();
        let mut offset = 0;
        for m in parts {
            for c in &m.cols {
                cols.push(c.iter().map(|(&i, v)| (offset + i, v.clone())).collect());
            }
            offset += m.rows;
        }
        Matrix { rows, cols }
    }

    /// Kronecker product with row-major flattening of index pairs:
    /// `(i, k) ↦ i · rhs.rows + k`.
    pub fn kron(&self, rhs: &Matrix<S>) -> Matrix<S> {
        let mut out = Matrix::zeros(self.rows * rhs.rows, self.cols() * rhs.cols());
        for (i, j, a) in self.triplets() {
            for (k, l, b) in rhs.triplets() {
                out.cols[j * rhs.cols() + l].insert(i * rhs.rows + k, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<S: fmt::Display> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} {{", self.rows, self.cols.len())?;
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                write!(f, " ({i},{j}):{v}")?;
            }
        }
        write!(f, " }}")
    }
}
