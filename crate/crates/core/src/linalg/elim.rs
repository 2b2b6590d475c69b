use std::collections::BTreeMap;

use super::matrix::{add_entry, axpy, scaled, unit_vec, Matrix, SparseVec};
use super::scalar::Scalar;
use super::LinalgError;

/// Fully reduced row-echelon basis of a subspace, built incrementally.
///
/// Every stored row has a leading 1 at its pivot and zeros at all other pivots.
/// Each row also remembers which combination of inserted vectors produced it.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    rows: BTreeMap<usize, (SparseVec<S>, SparseVec<S>)>,
    inserted: usize,
}

impl<S: Scalar> Default for Echelon<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Echelon {
            rows: BTreeMap::new(),
            inserted: 0,
        }
    }

    pub fn from_vectors<'a, I>(vs: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<S>>,
    {
        let mut e = Echelon::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Basis rows in pivot order.
    pub fn basis(&self) -> Vec<SparseVec<S>> {
        self.rows.values().map(|(r, _)| r.clone()).collect()
    }

    /// Reduce `v` against the basis. Returns the remainder and the
    /// combination of inserted vectors that was subtracted.
    pub fn reduce(&self, v: &SparseVec<S>) -> (SparseVec<S>, SparseVec<S>) {
        let mut r = v.clone();
        let mut combo = SparseVec::new();
        let hits: Vec<(usize, S)> = r
            .iter()
            .filter(|(k, _)| self.rows.contains_key(k))
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        for (p, c) in hits {
            let (row, how) = &self.rows[&p];
            axpy(&mut r, &-c.clone(), row);
            axpy(&mut combo, &c, how);
        }
        (r, combo)
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coefficients expressing `v` in the inserted vectors, if `v` is in the span.
    pub fn coordinates(&self, v: &SparseVec<S>) -> Option<SparseVec<S>> {
        let (r, combo) = self.reduce(v);
        r.is_empty().then_some(combo)
    }

    /// Insert a vector; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec<S>) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (mut r, mut combo) = self.reduce(v);
        combo = scaled(&combo, &-S::one());
        add_entry(&mut combo, id, S::one());
        let Some((&p, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.inverse().expect("nonzero pivot");
        r = scaled(&r, &inv);
        combo = scaled(&combo, &inv);
        for (row, how) in self.rows.values_mut() {
            if let Some(c) = row.get(&p).cloned() {
                axpy(row, &-c.clone(), &r);
                axpy(how, &-c, &combo);
            }
        }
        self.rows.insert(p, (r, combo));
        true
    }
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    Echelon::from_vectors(m.columns()).rank()
}

/// Kernel and image of a matrix, both in reduced column-echelon form.
#[derive(Clone)]
pub struct KernelImage<S> {
    pub kernel: Matrix<S>,
    pub image: Matrix<S>,
    pub rank: usize,
}

pub fn kernel_image<S: Scalar>(m: &Matrix<S>) -> KernelImage<S> {
    let image_ech = Echelon::from_vectors(m.columns());
    let image = Matrix::from_columns(m.rows(), image_ech.basis());
    let row_ech = Echelon::from_vectors(m.row_vectors().iter());
    let pivots: Vec<usize> = row_ech.pivots().collect();
    let mut kernel_vecs = Vec::new();
    for f in (0..m.cols()).filter(|j| !pivots.contains(j)) {
        let mut k = unit_vec::<S>(f);
        for (p, row) in pivots.iter().zip(row_ech.basis()) {
            if let Some(c) = row.get(&f) {
                k.insert(*p, -c.clone());
            }
        }
        kernel_vecs.push(k);
    }
    let kernel = Matrix::from_columns(m.cols(), Echelon::from_vectors(kernel_vecs.iter()).basis());
    KernelImage {
        kernel,
        image,
        rank: image_ech.rank(),
    }
}

/// Solve `m · x = b`. Free variables are set to zero.
pub fn solve<S: Scalar>(m: &Matrix<S>, b: &SparseVec<S>) -> Result<Option<SparseVec<S>>, LinalgError> {
    if let Some((&i, _)) = b.iter().next_back() {
        if i >= m.rows() {
            return Err(LinalgError::DimensionMismatch {
                expected: m.rows(),
                found: i + 1,
            });
        }
    }
    let n = m.cols();
    let mut rows = m.row_vectors();
    for (i, v) in b {
        rows[*i].insert(n, v.clone());
    }
    let ech = Echelon::from_vectors(rows.iter());
    let mut x = SparseVec::new();
    for (p, row) in ech.pivots().zip(ech.basis()) {
        if p == n {
            return Ok(None);
        }
        if let Some(v) = row.get(&n) {
            x.insert(p, v.clone());
        }
    }
    Ok(Some(x))
}

/// Dense-length check helper for callers holding explicit vectors.
pub fn solve_dense<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Result<Option<SparseVec<S>>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let sb = b.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect();
    solve(m, &sb)
}

/// Quotient of `k^n` by a span of relations, with a canonical basis of
/// standard vectors.
#[derive(Clone)]
pub struct Quotient<S> {
    total: usize,
    reps: Vec<usize>,
    position: Vec<Option<usize>>,
    projection: Matrix<S>,
}

impl<S: Scalar> Quotient<S> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Indices of the standard basis vectors chosen as representatives.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// Quotient coordinate of a representative index.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.position[i]
    }

    pub fn projection(&self) -> &Matrix<S> {
        &self.projection
    }

    pub fn section(&self) -> Matrix<S> {
        Matrix::from_columns(self.total, self.reps.iter().map(|&r| unit_vec(r)).collect())
    }

    pub fn project(&self, v: &SparseVec<S>) -> SparseVec<S> {
        self.projection.apply(v)
    }

    pub fn project_basis(&self, i: usize) -> &SparseVec<S> {
        self.projection.column(i)
    }
}

/// Canonical quotient of `k^total` by the column span of `relations`.
///
/// Representatives are the lexicographically first standard vectors that are
/// independent modulo the relations. These are exactly the indices that are not
/// trailing pivots of a reduced echelon form built with the last nonzero
/// index as pivot.
pub fn quotient_basis<S: Scalar>(total: usize, relations: &Matrix<S>) -> Quotient<S> {
    assert_eq!(relations.rows(), total, "relations must have total-dim rows");
    let flip = |v: &SparseVec<S>| -> SparseVec<S> { v.iter().map(|(&i, c)| (total - 1 - i, c.clone())).collect() };
    let flipped: Vec<SparseVec<S>> = relations.columns().iter().map(flip).collect();
    let ech = Echelon::from_vectors(flipped.iter());
    let mut trailing: BTreeMap<usize, SparseVec<S>> = BTreeMap::new();
    for (p, row) in ech.pivots().zip(ech.basis()) {
        trailing.insert(total - 1 - p, flip(&row));
    }
    let reps: Vec<usize> = (0..total).filter(|i| !trailing.contains_key(i)).collect();
    let mut position = vec![None; total];
    for (k, &r) in reps.iter().enumerate() {
        position[r] = Some(k);
    }
    let cols = (0..total)
        .map(|i| match trailing.get(&i) {
            None => unit_vec(position[i].unwrap()),
            Some(row) => row
                .iter()
                .filter(|(&j, _)| j != i)
                .map(|(&j, c)| (position[j].expect("reduced row touches only representatives"), -c.clone()))
                .collect(),
        })
        .collect();
    Quotient {
        total,
        reps: reps.clone(),
        position,
        projection: Matrix::from_columns(reps.len(), cols),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar::{Fp, ScalarField};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n, &ScalarField::Rationals)
    }

    #[test]
    fn kernel_of_all_ones() {
        let m = Matrix::from_dense(&[vec![q(1), q(1)], vec![q(1), q(1)]]);
        let ki = kernel_image(&m);
        assert_eq!(ki.rank, 1);
        assert_eq!(ki.kernel.to_dense(), vec![vec![q(1)], vec![q(-1)]]);
        assert_eq!(ki.image.to_dense(), vec![vec![q(1)], vec![q(1)]]);
    }

    #[test]
    fn identity_and_zero() {
        let f5 = ScalarField::prime(5).unwrap();
        let ki = kernel_image(&Matrix::<Fp>::identity(3));
        assert_eq!((ki.kernel.cols(), ki.rank), (0, 3));
        let _ = f5;
        let ki = kernel_image(&Matrix::<Q>::zeros(2, 3));
        assert_eq!((ki.kernel.cols(), ki.rank), (3, 0));
    }

    #[test]
    fn solve_examples() {
        let m = Matrix::from_dense(&[vec![q(2)]]);
        let x = solve_dense(&m, &[q(1)]).unwrap().unwrap();
        assert_eq!(x.get(&0), Some(&(q(1) / q(2))));

        let m = Matrix::from_dense(&[vec![q(1)], vec![q(1)]]);
        assert_eq!(solve_dense(&m, &[q(1), q(0)]).unwrap(), None);

        let f2 = ScalarField::prime(2).unwrap();
        let one = Fp::from_int(1, &f2);
        let m = Matrix::from_dense(&[vec![one, one]]);
        let x = solve_dense(&m, &[one]).unwrap().unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(x.get(&0), Some(&one));

        assert!(matches!(
            solve_dense(&m, &[one, one]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quotient_examples() {
        let rel = Matrix::from_dense(&[vec![q(1)], vec![q(-1)]]);
        let quo = quotient_basis(2, &rel);
        assert_eq!(quo.representatives(), &[0]);
        assert_eq!(quo.project(&unit_vec(1)), unit_vec(0));

        let quo = quotient_basis(3, &Matrix::<Q>::zeros(3, 0));
        assert_eq!(quo.projection(), &Matrix::identity(3));

        let quo = quotient_basis(2, &Matrix::<Q>::identity(2));
        assert_eq!(quo.dim(), 0);
    }
}
