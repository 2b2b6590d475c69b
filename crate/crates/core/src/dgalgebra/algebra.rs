use std::sync::Arc;

use crate::check::Validation;
use crate::complexes::{ChainComplex, ComplexError};
use crate::linalg::{axpy, Matrix, Scalar, ScalarField, SparseVec};

use super::DgError;

/// Dg algebra given by structure constants.
///
/// `mult` has one column per basis pair `(a, b)` at index `a · dim + b`.
#[derive(Clone, PartialEq)]
pub struct DgAlgebra<S> {
    carrier: ChainComplex<S>,
    unit: SparseVec<S>,
    mult: Matrix<S>,
}

impl<S: Scalar> std::fmt::Debug for DgAlgebra<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DgAlgebra({:?})", self.carrier.names())
    }
}

impl<S: Scalar> DgAlgebra<S> {
    pub fn new(carrier: ChainComplex<S>, unit: SparseVec<S>, mult: Matrix<S>) -> Result<Self, DgError> {
        let n = carrier.dim();
        if (mult.rows(), mult.cols()) != (n, n * n) {
            return Err(DgError::Complex(ComplexError::Shape {
                expected: (n, n * n),
                found: (mult.rows(), mult.cols()),
            }));
        }
        if unit.keys().any(|&i| i >= n) {
            return Err(DgError::Shape("unit vector out of range".into()));
        }
        Ok(DgAlgebra { carrier, unit, mult })
    }

    /// The ground field as an algebra.
    pub fn ground(field: ScalarField) -> Self {
        DgAlgebra {
            carrier: ChainComplex::unit(field),
            unit: crate::linalg::unit_vec(0),
            mult: Matrix::identity(1),
        }
    }

    pub fn carrier(&self) -> &ChainComplex<S> {
        &self.carrier
    }

    pub fn field(&self) -> ScalarField {
        self.carrier.field()
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn unit(&self) -> &SparseVec<S> {
        &self.unit
    }

    pub fn mult(&self) -> &Matrix<S> {
        &self.mult
    }

    pub fn product(&self, a: usize, b: usize) -> &SparseVec<S> {
        self.mult.column(a * self.dim() + b)
    }

    pub fn multiply(&self, u: &SparseVec<S>, v: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::new();
        for (&a, x) in u {
            for (&b, y) in v {
                axpy(&mut out, &(x.clone() * y.clone()), self.product(a, b));
            }
        }
        out
    }

    /// One-dimensional in degree 0 with unit the basis vector.
    pub fn is_ground_field(&self) -> bool {
        self.dim() == 1 && self.carrier.degree(0) == 0 && self.unit == crate::linalg::unit_vec(0)
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("dg algebra");
        v.absorb("carrier", self.carrier.validate());
        let x = &self.carrier;
        let n = self.dim();
        let deg = |i: usize| x.degree(i);
        v.record(
            "multiplication has degree 0",
            self.mult.triplets().find(|&(k, c, _)| deg(k) != deg(c / n) + deg(c % n)).map(|(k, c, _)| {
                format!("{}·{} has a component on {}", x.name(c / n), x.name(c % n), x.name(k))
            }),
        );
        v.record(
            "unit is a degree-0 cycle",
            match (x.degree_of(&self.unit), x.differential().apply(&self.unit).is_empty()) {
                (Some(0), true) => None,
                _ if self.unit.is_empty() => Some("unit is zero".into()),
                (Some(0), false) => Some("d(1) ≠ 0".into()),
                _ => Some("unit is not homogeneous of degree 0".into()),
            },
        );
        let mut unit_fail = None;
        for a in 0..n {
            let e = crate::linalg::unit_vec(a);
            if self.multiply(&self.unit, &e) != e {
                unit_fail = Some(format!("1·{} ≠ {}", x.name(a), x.name(a)));
                break;
            }
            if self.multiply(&e, &self.unit) != e {
                unit_fail = Some(format!("{}·1 ≠ {}", x.name(a), x.name(a)));
                break;
            }
        }
        v.record("two-sided unit", unit_fail);
        let mut assoc_fail = None;
        'outer: for a in 0..n {
            for b in 0..n {
                let ab = self.product(a, b);
                for c in 0..n {
                    let lhs = self.multiply(ab, &crate::linalg::unit_vec(c));
                    let rhs = self.multiply(&crate::linalg::unit_vec(a), self.product(b, c));
                    if lhs != rhs {
                        assoc_fail = Some(format!("({}·{})·{} ≠ {}·({}·{})", x.name(a), x.name(b), x.name(c), x.name(a), x.name(b), x.name(c)));
                        break 'outer;
                    }
                }
            }
        }
        v.record("associativity", assoc_fail);
        let d = x.differential();
        let mut leibniz = None;
        'outer2: for a in 0..n {
            for b in 0..n {
                let lhs = d.apply(self.product(a, b));
                let mut rhs = self.multiply(d.column(a), &crate::linalg::unit_vec(b));
                let s = S::sign(deg(a).rem_euclid(2) == 1);
                axpy(&mut rhs, &s, &self.multiply(&crate::linalg::unit_vec(a), d.column(b)));
                if lhs != rhs {
                    leibniz = Some(format!("d({}·{}) ≠ d{}·{} ± {}·d{}", x.name(a), x.name(b), x.name(a), x.name(b), x.name(a), x.name(b)));
                    break 'outer2;
                }
            }
        }
        v.record("Leibniz rule", leibniz);
        v
    }
}

/// Whether two algebra handles denote the same algebra.
pub fn same_algebra<S: Scalar>(a: &Arc<DgAlgebra<S>>, b: &Arc<DgAlgebra<S>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Algebra map `A → B` given by its matrix on bases.
#[derive(Clone, PartialEq)]
pub struct AlgebraMorphism<S> {
    source: Arc<DgAlgebra<S>>,
    target: Arc<DgAlgebra<S>>,
    map: Matrix<S>,
}

impl<S: Scalar> AlgebraMorphism<S> {
    pub fn new(source: Arc<DgAlgebra<S>>, target: Arc<DgAlgebra<S>>, map: Matrix<S>) -> Result<Self, DgError> {
        if (map.rows(), map.cols()) != (target.dim(), source.dim()) {
            return Err(DgError::Shape(format!(
                "algebra map is {}x{}, expected {}x{}",
                map.rows(),
                map.cols(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(AlgebraMorphism { source, target, map })
    }

    pub fn identity(a: &Arc<DgAlgebra<S>>) -> Self {
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            map: Matrix::identity(a.dim()),
        }
    }

    /// The unit map `k → A`.
    pub fn from_ground(a: &Arc<DgAlgebra<S>>) -> Self {
        let k = Arc::new(DgAlgebra::ground(a.field()));
        AlgebraMorphism {
            source: k,
            target: a.clone(),
            map: Matrix::from_columns(a.dim(), vec![a.unit().clone()]),
        }
    }

    pub fn source(&self) -> &Arc<DgAlgebra<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgAlgebra<S>> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.map
    }

    pub fn apply(&self, v: &SparseVec<S>) -> SparseVec<S> {
        self.map.apply(v)
    }

    pub fn image_of(&self, a: usize) -> &SparseVec<S> {
        self.map.column(a)
    }

    pub fn compose(&self, first: &AlgebraMorphism<S>) -> AlgebraMorphism<S> {
        AlgebraMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            map: self.map.mul(&first.map),
        }
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("algebra morphism");
        let (a, b) = (&self.source, &self.target);
        match crate::complexes::ChainMap::new(a.carrier().clone(), b.carrier().clone(), 0, self.map.clone()) {
            Err(e) => v.fail("degree 0", e.to_string()),
            Ok(f) => v.record("chain map", f.chain_law_failure()),
        }
        v.record(
            "preserves unit",
            (self.map.apply(a.unit()) != *b.unit()).then(|| "φ(1) ≠ 1".to_string()),
        );
        let mut fail = None;
        'outer: for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.map.apply(a.product(i, j));
                let rhs = b.multiply(self.map.column(i), self.map.column(j));
                if lhs != rhs {
                    fail = Some(format!("φ({}·{}) ≠ φ({})·φ({})", a.carrier().name(i), a.carrier().name(j), a.carrier().name(i), a.carrier().name(j)));
                    break 'outer;
                }
            }
        }
        v.record("preserves multiplication", fail);
        v
    }
}
