//! Finite-dimensional chain complexes with homological grading.
//!
//! A complex is stored as one basis (name, degree) list and a single
//! differential matrix on the whole space, homogeneous of degree −1.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::check::Validation;
use crate::linalg::{kernel_image, quotient_basis, Echelon, Matrix, Quotient, Scalar, ScalarField, SparseVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(ScalarField, ScalarField),
    #[error("matrix shape {found:?} does not match {expected:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("map entry sends {from} (degree {from_degree}) to {to} (degree {to_degree}), expected shift {shift}")]
    Inhomogeneous { from: String, from_degree: i32, to: String, to_degree: i32, shift: i32 },
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("mapping cone needs a strict degree-0 map")]
    NotStrict,
}

#[derive(Clone, PartialEq)]
pub struct ChainComplex<S> {
    field: ScalarField,
    names: Vec<String>,
    degrees: Vec<i32>,
    d: Matrix<S>,
}

impl<S: Scalar> std::fmt::Debug for ChainComplex<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChainComplex")
            .field("basis", &self.names.iter().zip(&self.degrees).collect::<Vec<_>>())
            .field("d", &self.d)
            .finish()
    }
}

impl<S: Scalar> ChainComplex<S> {
    /// The differential is taken as given; use [`ChainComplex::validate`] to
    /// check homogeneity and `d² = 0`.
    pub fn new(field: ScalarField, basis: Vec<(String, i32)>, d: Matrix<S>) -> Result<Self, ComplexError> {
        let n = basis.len();
        if (d.rows(), d.cols()) != (n, n) {
            return Err(ComplexError::Shape {
                expected: (n, n),
                found: (d.rows(), d.cols()),
            });
        }
        let (names, degrees) = basis.into_iter().unzip();
        Ok(ChainComplex { field, names, degrees, d })
    }

    /// Zero differential.
    pub fn graded(field: ScalarField, basis: Vec<(String, i32)>) -> Self {
        let n = basis.len();
        Self::new(field, basis, Matrix::zeros(n, n)).unwrap()
    }

    pub fn zero(field: ScalarField) -> Self {
        Self::graded(field, vec![])
    }

    /// The ground field in degree 0.
    pub fn unit(field: ScalarField) -> Self {
        Self::graded(field, vec![("1".into(), 0)])
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn basis(&self) -> Vec<(String, i32)> {
        self.names.iter().cloned().zip(self.degrees.iter().copied()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn differential(&self) -> &Matrix<S> {
        &self.d
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim());
        self.names = names;
        self
    }

    pub fn with_differential(&self, d: Matrix<S>) -> Result<Self, ComplexError> {
        Self::new(self.field, self.basis(), d)
    }

    /// Distinct degrees carrying basis elements, ascending.
    pub fn support(&self) -> Vec<i32> {
        let mut s: Vec<i32> = self.degrees.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn indices_in_degree(&self, n: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == n).collect()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    /// Degree of a homogeneous vector, `None` if zero or mixed.
    pub fn degree_of(&self, v: &SparseVec<S>) -> Option<i32> {
        let mut it = v.keys().map(|&i| self.degrees[i]);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn name_vector(&self, v: &SparseVec<S>) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter()
            .map(|(&i, c)| format!("{}·{}", c, self.names[i]))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("chain complex");
        let bad = self
            .d
            .triplets()
            .find(|&(i, j, _)| self.degrees[i] != self.degrees[j] - 1)
            .map(|(i, j, _)| format!("d({}) has a component on {} outside degree {}", self.names[j], self.names[i], self.degrees[j] - 1));
        v.record("differential lowers degree by one", bad);
        let dd = self.d.mul(&self.d);
        let bad = dd
            .triplets()
            .next()
            .map(|(_, j, _)| format!("d∘d ≠ 0 in degree {} (on {})", self.degrees[j], self.names[j]));
        v.record("d∘d = 0", bad);
        v
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn homology(&self) -> Homology<S> {
        let mut groups = BTreeMap::new();
        for n in self.support() {
            groups.insert(n, DegreeHomology::compute(self, n));
        }
        Homology { groups }
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology().total_dim() == 0
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, ComplexError> {
        same_field(self, other)?;
        let mut basis = self.basis();
        basis.extend(other.basis());
        Self::new(self.field, basis, Matrix::block_diag(&[&self.d, &other.d]))
    }

    /// Shift by `k`: `(ΣᵏX)_n = X_{n−k}` with differential `(−1)^k d`.
    pub fn shift(&self, k: i32, prefix: &str) -> Self {
        let basis = self.basis().into_iter().map(|(n, d)| (format!("{prefix}{n}"), d + k)).collect();
        let d = if k.rem_euclid(2) == 1 { self.d.neg() } else { self.d.clone() };
        Self::new(self.field, basis, d).unwrap()
    }
}

fn same_field<S: Scalar>(x: &ChainComplex<S>, y: &ChainComplex<S>) -> Result<(), ComplexError> {
    if x.field != y.field {
        return Err(ComplexError::FieldMismatch(x.field, y.field));
    }
    Ok(())
}

/// Homology in one degree with the data needed to compute classes.
#[derive(Clone)]
pub struct DegreeHomology<S> {
    pub degree: i32,
    /// Basis of cycles, in the ambient coordinates.
    cycles: Vec<SparseVec<S>>,
    cycle_coords: Echelon<S>,
    quotient: Quotient<S>,
    representatives: Vec<SparseVec<S>>,
}

impl<S: Scalar> DegreeHomology<S> {
    fn compute(x: &ChainComplex<S>, n: i32) -> Self {
        let here = x.indices_in_degree(n);
        let above = x.indices_in_degree(n + 1);
        let block = x.d.select_columns(&here);
        let ker = kernel_image(&block).kernel;
        let cycles: Vec<SparseVec<S>> = ker
            .columns()
            .iter()
            .map(|c| c.iter().map(|(&k, v)| (here[k], v.clone())).collect())
            .collect();
        let cycle_coords = Echelon::from_vectors(cycles.iter());
        let boundaries: Vec<SparseVec<S>> = above
            .iter()
            .map(|&j| cycle_coords.coordinates(x.d.column(j)).expect("boundaries are cycles"))
            .collect();
        let quotient = quotient_basis(cycles.len(), &Matrix::from_columns(cycles.len(), boundaries));
        let representatives = quotient.representatives().iter().map(|&r| cycles[r].clone()).collect();
        DegreeHomology {
            degree: n,
            cycles,
            cycle_coords,
            quotient,
            representatives,
        }
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn cycle_dim(&self) -> usize {
        self.cycles.len()
    }

    /// Cycles whose classes form the chosen basis.
    pub fn representatives(&self) -> &[SparseVec<S>] {
        &self.representatives
    }

    /// Class of a cycle in the chosen basis; `None` if `z` is not a cycle.
    pub fn class_of(&self, z: &SparseVec<S>) -> Option<SparseVec<S>> {
        self.cycle_coords.coordinates(z).map(|c| self.quotient.project(&c))
    }
}

#[derive(Clone)]
pub struct Homology<S> {
    groups: BTreeMap<i32, DegreeHomology<S>>,
}

impl<S: Scalar> Homology<S> {
    pub fn get(&self, n: i32) -> Option<&DegreeHomology<S>> {
        self.groups.get(&n)
    }

    pub fn dim(&self, n: i32) -> usize {
        self.groups.get(&n).map_or(0, |g| g.dim())
    }

    /// Nonzero homology dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.groups.iter().filter(|(_, g)| g.dim() > 0).map(|(&n, g)| (n, g.dim())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.groups.values().map(|g| g.dim()).sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = (&i32, &DegreeHomology<S>)> {
        self.groups.iter()
    }
}

/// Graded linear map `X → Y` of degree `shift`, stored as one matrix.
#[derive(Clone, PartialEq)]
pub struct ChainMap<S> {
    source: ChainComplex<S>,
    target: ChainComplex<S>,
    shift: i32,
    matrix: Matrix<S>,
}

impl<S: Scalar> std::fmt::Debug for ChainMap<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChainMap(shift {}, {:?})", self.shift, self.matrix)
    }
}

impl<S: Scalar> ChainMap<S> {
    /// Checks shape and that every entry has the declared degree shift.
    pub fn new(source: ChainComplex<S>, target: ChainComplex<S>, shift: i32, matrix: Matrix<S>) -> Result<Self, ComplexError> {
        same_field(&source, &target)?;
        if (matrix.rows(), matrix.cols()) != (target.dim(), source.dim()) {
            return Err(ComplexError::Shape {
                expected: (target.dim(), source.dim()),
                found: (matrix.rows(), matrix.cols()),
            });
        }
        if let Some((i, j, _)) = matrix.triplets().find(|&(i, j, _)| target.degree(i) != source.degree(j) + shift) {
            return Err(ComplexError::Inhomogeneous {
                from: source.name(j).to_string(),
                from_degree: source.degree(j),
                to: target.name(i).to_string(),
                to_degree: target.degree(i),
                shift,
            });
        }
        Ok(ChainMap {
            source,
            target,
            shift,
            matrix,
        })
    }

    /// Strict degree-0 map; fails unless it commutes with the differentials.
    pub fn strict(source: ChainComplex<S>, target: ChainComplex<S>, matrix: Matrix<S>) -> Result<Self, ComplexError> {
        let f = Self::new(source, target, 0, matrix)?;
        if let Some(msg) = f.chain_law_failure() {
            return Err(ComplexError::NotChainMap(msg));
        }
        Ok(f)
    }

    pub fn identity(x: &ChainComplex<S>) -> Self {
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            shift: 0,
            matrix: Matrix::identity(x.dim()),
        }
    }

    pub fn zero(source: &ChainComplex<S>, target: &ChainComplex<S>) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            shift: 0,
            matrix: Matrix::zeros(target.dim(), source.dim()),
        }
    }

    pub fn source(&self) -> &ChainComplex<S> {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex<S> {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    /// `d∘f − (−1)^k f∘d`, which vanishes exactly for chain maps.
    pub fn chain_defect(&self) -> Matrix<S> {
        let lhs = self.target.d.mul(&self.matrix);
        let rhs = self.matrix.mul(&self.source.d);
        lhs.combine(&rhs, &-S::sign(self.shift.rem_euclid(2) == 1))
    }

    pub fn chain_law_failure(&self) -> Option<String> {
        self.chain_defect()
            .triplets()
            .next()
            .map(|(_, j, _)| format!("d∘f ≠ ±f∘d on {}", self.source.name(j)))
    }

    pub fn is_chain_map(&self) -> bool {
        self.chain_defect().is_zero()
    }

    pub fn compose(&self, first: &ChainMap<S>) -> ChainMap<S> {
        ChainMap {
            source: first.source.clone(),
            target: self.target.clone(),
            shift: self.shift + first.shift,
            matrix: self.matrix.mul(&first.matrix),
        }
    }

    pub fn is_degreewise_surjective(&self) -> bool {
        crate::linalg::rank(&self.matrix) == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.shift == 0 && self.source.dim() == self.target.dim() && crate::linalg::rank(&self.matrix) == self.source.dim()
    }

    /// Induced maps on homology, in the chosen homology bases.
    pub fn on_homology(&self) -> BTreeMap<i32, Matrix<S>> {
        let hx = self.source.homology();
        let hy = self.target.homology();
        let mut out = BTreeMap::new();
        for (&n, gx) in hx.degrees() {
            let rows = hy.dim(n + self.shift);
            let cols: Vec<SparseVec<S>> = gx
                .representatives()
                .iter()
                .map(|z| {
                    let fz = self.matrix.apply(z);
                    match hy.get(n + self.shift) {
                        Some(gy) => gy.class_of(&fz).expect("chain maps send cycles to cycles"),
                        None => SparseVec::new(),
                    }
                })
                .collect();
            out.insert(n, Matrix::from_columns(rows, cols));
        }
        out
    }

    /// Whether `H(f)` is an isomorphism in every degree.
    pub fn weak_equivalence(&self) -> WeakEquivalence {
        let hx = self.source.homology();
        let hy = self.target.homology();
        let mut degrees: Vec<i32> = self.source.support();
        degrees.extend(self.target.support());
        degrees.sort_unstable();
        degrees.dedup();
        let induced = self.on_homology();
        for n in degrees {
            let (dx, dy) = (hx.dim(n), hy.dim(n));
            if dx != dy {
                return WeakEquivalence::fails(n, format!("dim H_{n}: {dx} vs {dy}"));
            }
            if dx == 0 {
                continue;
            }
            let r = crate::linalg::rank(&induced[&n]);
            if r != dx {
                return WeakEquivalence::fails(n, format!("H_{n}(f) has rank {r} < {dx}"));
            }
        }
        WeakEquivalence {
            holds: true,
            failing_degree: None,
            detail: "H(f) is an isomorphism in every degree".into(),
        }
    }
}

/// Verdict of a homology comparison with the first failing degree.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct WeakEquivalence {
    pub holds: bool,
    pub failing_degree: Option<i32>,
    pub detail: String,
}

impl WeakEquivalence {
    fn fails(n: i32, detail: String) -> Self {
        WeakEquivalence {
            holds: false,
            failing_degree: Some(n),
            detail,
        }
    }
}

pub fn is_weak_equivalence<S: Scalar>(f: &ChainMap<S>) -> WeakEquivalence {
    f.weak_equivalence()
}

/// `cone_n = Y_n ⊕ X_{n−1}` with `d(y, x) = (dy + f x, −dx)`.
pub fn mapping_cone<S: Scalar>(f: &ChainMap<S>) -> Result<ChainComplex<S>, ComplexError> {
    if f.shift != 0 || !f.is_chain_map() {
        return Err(ComplexError::NotStrict);
    }
    let (x, y) = (&f.source, &f.target);
    let mut basis = y.basis();
    basis.extend(x.basis().into_iter().map(|(n, d)| (format!("s{n}"), d + 1)));
    let top = Matrix::hstack(&[&y.d, &f.matrix]);
    let bottom = Matrix::hstack(&[&Matrix::zeros(x.dim(), y.dim()), &x.d.neg()]);
    ChainComplex::new(y.field, basis, Matrix::vstack(&[&top, &bottom]))
}

/// `(s⁻¹X)_n = X_{n+1}` with `d(s⁻¹x) = −s⁻¹(dx)`.
pub fn desuspend<S: Scalar>(x: &ChainComplex<S>) -> ChainComplex<S> {
    x.shift(-1, "s⁻¹")
}

/// `Path(M) = M ⊕ s⁻¹M` with `Dx = dx − s⁻¹x`, `D(s⁻¹x) = −s⁻¹(dx)`, and
/// the projection onto `M`.
pub fn path_object<S: Scalar>(m: &ChainComplex<S>) -> (ChainComplex<S>, ChainMap<S>) {
    let n = m.dim();
    let sm = desuspend(m);
    let mut basis = m.basis();
    basis.extend(sm.basis());
    let top = Matrix::hstack(&[&m.d, &Matrix::zeros(n, n)]);
    let bottom = Matrix::hstack(&[&Matrix::<S>::identity(n).neg(), &sm.d]);
    let path = ChainComplex::new(m.field, basis, Matrix::vstack(&[&top, &bottom])).unwrap();
    let proj = Matrix::hstack(&[&Matrix::identity(n), &Matrix::zeros(n, n)]);
    let p = ChainMap::new(path.clone(), m.clone(), 0, proj).unwrap();
    (path, p)
}

/// Index of `a ⊗ b` in the field tensor of spaces with `right_dim` second factor.
pub fn pair_index(a: usize, b: usize, right_dim: usize) -> usize {
    a * right_dim + b
}

/// `d(a⊗b) = da⊗b + (−1)^{|a|} a⊗db`; basis `a⊗b` at index `a·dim(Y) + b`.
pub fn tensor_complexes<S: Scalar>(x: &ChainComplex<S>, y: &ChainComplex<S>) -> Result<ChainComplex<S>, ComplexError> {
    same_field(x, y)?;
    let ny = y.dim();
    let mut basis = Vec::with_capacity(x.dim() * ny);
    for i in 0..x.dim() {
        for j in 0..ny {
            basis.push((format!("{}⊗{}", x.names[i], y.names[j]), x.degrees[i] + y.degrees[j]));
        }
    }
    let mut cols = Vec::with_capacity(basis.len());
    for i in 0..x.dim() {
        let sign = S::sign(x.degrees[i].rem_euclid(2) == 1);
        for j in 0..ny {
            let mut col = SparseVec::new();
            for (&k, c) in x.d.column(i) {
                crate::linalg::add_entry(&mut col, pair_index(k, j, ny), c.clone());
            }
            for (&l, c) in y.d.column(j) {
                crate::linalg::add_entry(&mut col, pair_index(i, l, ny), sign.clone() * c.clone());
            }
            cols.push(col);
        }
    }
    let n = basis.len();
    ChainComplex::new(x.field, basis, Matrix::from_columns(n, cols))
}

/// Index of the elementary map `x_i ↦ y_j` in [`hom_complex`].
pub fn hom_index(source_index: usize, target_index: usize, source_dim: usize) -> usize {
    target_index * source_dim + source_index
}

/// Graded maps `X → Y` with `∂f = d_Y∘f − (−1)^k f∘d_X`.
pub fn hom_complex<S: Scalar>(x: &ChainComplex<S>, y: &ChainComplex<S>) -> Result<ChainComplex<S>, ComplexError> {
    same_field(x, y)?;
    let nx = x.dim();
    let mut basis = Vec::with_capacity(nx * y.dim());
    for j in 0..y.dim() {
        for i in 0..nx {
            basis.push((format!("[{}↦{}]", x.names[i], y.names[j]), y.degrees[j] - x.degrees[i]));
        }
    }
    // Rows of d_X: entries (d_X)_{i m} for fixed i.
    let dx_rows = x.d.row_vectors();
    let mut cols = Vec::with_capacity(basis.len());
    for j in 0..y.dim() {
        for i in 0..nx {
            let k = y.degrees[j] - x.degrees[i];
            let sign = S::sign(k.rem_euclid(2) == 1);
            let mut col = SparseVec::new();
            for (&l, c) in y.d.column(j) {
                crate::linalg::add_entry(&mut col, hom_index(i, l, nx), c.clone());
            }
            for (&m, c) in &dx_rows[i] {
                crate::linalg::add_entry(&mut col, hom_index(m, j, nx), -(sign.clone() * c.clone()));
            }
            cols.push(col);
        }
    }
    let n = basis.len();
    ChainComplex::new(x.field, basis, Matrix::from_columns(n, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(n: i64) -> Q {
        Q::from_int(n, &ScalarField::Rationals)
    }

    fn two_term_identity() -> ChainComplex<Q> {
        let d = Matrix::from_triplets(2, 2, [(0, 1, q(1))]).unwrap();
        ChainComplex::new(ScalarField::Rationals, vec![("a".into(), 0), ("b".into(), 1)], d).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(two_term_identity().is_valid());
        // d² = id on a single space in one degree breaks homogeneity and d² = 0.
        let d = Matrix::from_triplets(2, 2, [(0, 1, q(1)), (1, 0, q(1))]).unwrap();
        let bad = ChainComplex::new(ScalarField::Rationals, vec![("a".into(), 0), ("b".into(), 1)], d).unwrap();
        let v = bad.validate();
        assert!(v.failures.iter().any(|f| f.check == "d∘d = 0"));
        let f4 = ChainComplex::<Q>::graded(ScalarField::Rationals, vec![("1".into(), 0), ("x".into(), 2)]);
        assert!(f4.is_valid());
    }

    #[test]
    fn homology_small() {
        assert_eq!(two_term_identity().homology().total_dim(), 0);
        let g = ChainComplex::<Q>::graded(ScalarField::Rationals, vec![("a".into(), 0), ("b".into(), 1)]);
        assert_eq!(g.homology().dims(), BTreeMap::from([(0, 1), (1, 1)]));
    }

    #[test]
    fn rank_nullity_three_term() {
        // 0 → ℚ → ℚ² → ℚ → 0 in degrees 2, 1, 0: d(c) = a1 − a2, d(a1) = d(a2) = z.
        let basis = vec![("c".into(), 2), ("a1".into(), 1), ("a2".into(), 1), ("z".into(), 0)];
        let d = Matrix::from_triplets(4, 4, [(1, 0, q(1)), (2, 0, q(-1)), (3, 1, q(1)), (3, 2, q(1))]).unwrap();
        let x = ChainComplex::new(ScalarField::Rationals, basis, d).unwrap();
        assert!(x.is_valid());
        // rank d_2 = 1, rank d_1 = 1: H_2 = 0, H_1 = 2 − 1 − 1 = 0, H_0 = 1 − 1 = 0.
        assert_eq!(x.homology().total_dim(), 0);
    }

    #[test]
    fn cone_and_path() {
        let x = ChainComplex::<Q>::unit(ScalarField::Rationals);
        let cone = mapping_cone(&ChainMap::identity(&x)).unwrap();
        assert!(cone.is_valid() && cone.is_acyclic());
        assert!(desuspend(&cone).is_acyclic());
        let (path, p) = path_object(&x);
        assert_eq!(path.dims_by_degree(), BTreeMap::from([(-1, 1), (0, 1)]));
        assert!(path.is_valid() && path.is_acyclic());
        assert!(p.is_chain_map() && p.is_degreewise_surjective());
    }

    #[test]
    fn desuspension_negates() {
        let x = two_term_identity();
        let s = desuspend(&x);
        assert_eq!(s.degrees(), &[-1, 0]);
        assert_eq!(s.differential(), &x.differential().neg());
    }

    #[test]
    fn koszul_sign_in_tensor() {
        let a = ChainComplex::<Q>::graded(ScalarField::Rationals, vec![("a".into(), 1)]);
        let y = two_term_identity();
        let t = tensor_complexes(&a, &y).unwrap();
        assert!(t.is_valid());
        // d(a⊗b) = −a⊗a'
        assert_eq!(t.differential().get(0, 1), q(-1));
        let unit = ChainComplex::<Q>::unit(ScalarField::Rationals);
        assert_eq!(tensor_complexes(&unit, &y).unwrap().differential(), y.differential());
    }

    #[test]
    fn hom_cycles_are_chain_maps() {
        let x = two_term_identity();
        let h = hom_complex(&x, &x).unwrap();
        assert!(h.is_valid());
        let zero_deg = h.indices_in_degree(0);
        let block = h.differential().select_columns(&zero_deg);
        let cycles = kernel_image(&block).kernel.cols();
        // Chain maps of the two-term identity complex: f = diag(α, β) with α = β.
        assert_eq!(cycles, 1);
        let unit = ChainComplex::<Q>::unit(ScalarField::Rationals);
        let hu = hom_complex(&unit, &x).unwrap();
        assert_eq!(hu.degrees(), x.degrees());
        assert_eq!(hu.differential(), x.differential());
    }
}
