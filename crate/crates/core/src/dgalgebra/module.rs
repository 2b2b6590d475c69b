use std::sync::Arc;

use crate::check::Validation;
use crate::complexes::{ChainComplex, ChainMap};
use crate::linalg::{axpy, unit_vec, Matrix, Scalar, SparseVec};

use super::algebra::{same_algebra, AlgebraMorphism, DgAlgebra};
use super::DgError;

/// Action table of an algebra on a module.
///
/// Left actions index columns by `a · dim(M) + x`, right actions by
/// `x · dim(A) + a`.
#[derive(Clone, PartialEq)]
pub struct Action<S> {
    pub algebra: Arc<DgAlgebra<S>>,
    pub table: Matrix<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sidedness {
    Plain,
    Left,
    Right,
    Bimodule,
}

/// Dg module: a complex with a left action, a right action, or both.
#[derive(Clone, PartialEq)]
pub struct DgModule<S> {
    carrier: ChainComplex<S>,
    left: Option<Action<S>>,
    right: Option<Action<S>>,
}

impl<S: Scalar> std::fmt::Debug for DgModule<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DgModule({:?}, {:?})", self.sidedness(), self.carrier.names())
    }
}

impl<S: Scalar> DgModule<S> {
    pub fn new(carrier: ChainComplex<S>, left: Option<Action<S>>, right: Option<Action<S>>) -> Result<Self, DgError> {
        let n = carrier.dim();
        if let Some(l) = &left {
            let want = (n, l.algebra.dim() * n);
            if (l.table.rows(), l.table.cols()) != want {
                return Err(DgError::Shape(format!("left action table should be {}x{}", want.0, want.1)));
            }
        }
        if let Some(r) = &right {
            let want = (n, r.algebra.dim() * n);
            if (r.table.rows(), r.table.cols()) != want {
                return Err(DgError::Shape(format!("right action table should be {}x{}", want.0, want.1)));
            }
        }
        Ok(DgModule { carrier, left, right })
    }

    /// A complex with no actions.
    pub fn plain(carrier: ChainComplex<S>) -> Self {
        DgModule {
            carrier,
            left: None,
            right: None,
        }
    }

    /// `A` as an `A`-bimodule.
    pub fn regular(a: &Arc<DgAlgebra<S>>) -> Self {
        let mult = a.mult().clone();
        // Column x·dim + a of the multiplication table is already x·a.
        DgModule {
            carrier: a.carrier().clone(),
            left: Some(Action {
                algebra: a.clone(),
                table: mult.clone(),
            }),
            right: Some(Action {
                algebra: a.clone(),
                table: mult,
            }),
        }
    }

    pub fn carrier(&self) -> &ChainComplex<S> {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn degrees(&self) -> &[i32] {
        self.carrier.degrees()
    }

    pub fn left(&self) -> Option<&Action<S>> {
        self.left.as_ref()
    }

    pub fn right(&self) -> Option<&Action<S>> {
        self.right.as_ref()
    }

    pub fn left_algebra(&self) -> Option<&Arc<DgAlgebra<S>>> {
        self.left.as_ref().map(|a| &a.algebra)
    }

    pub fn right_algebra(&self) -> Option<&Arc<DgAlgebra<S>>> {
        self.right.as_ref().map(|a| &a.algebra)
    }

    pub fn sidedness(&self) -> Sidedness {
        match (&self.left, &self.right) {
            (None, None) => Sidedness::Plain,
            (Some(_), None) => Sidedness::Left,
            (None, Some(_)) => Sidedness::Right,
            (Some(_), Some(_)) => Sidedness::Bimodule,
        }
    }

    pub fn act_left(&self, a: usize, x: usize) -> &SparseVec<S> {
        let l = self.left.as_ref().expect("module has no left action");
        l.table.column(a * self.dim() + x)
    }

    pub fn act_right(&self, x: usize, a: usize) -> &SparseVec<S> {
        let r = self.right.as_ref().expect("module has no right action");
        r.table.column(x * r.algebra.dim() + a)
    }

    pub fn left_multiply(&self, a: &SparseVec<S>, x: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::new();
        for (&i, c) in a {
            for (&j, e) in x {
                axpy(&mut out, &(c.clone() * e.clone()), self.act_left(i, j));
            }
        }
        out
    }

    pub fn right_multiply(&self, x: &SparseVec<S>, a: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::new();
        for (&i, c) in x {
            for (&j, e) in a {
                axpy(&mut out, &(c.clone() * e.clone()), self.act_right(i, j));
            }
        }
        out
    }

    pub fn without_left(&self) -> Self {
        DgModule {
            carrier: self.carrier.clone(),
            left: None,
            right: self.right.clone(),
        }
    }

    pub fn without_right(&self) -> Self {
        DgModule {
            carrier: self.carrier.clone(),
            left: self.left.clone(),
            right: None,
        }
    }

    pub fn with_left(&self, left: Option<Action<S>>) -> Self {
        DgModule {
            carrier: self.carrier.clone(),
            left,
            right: self.right.clone(),
        }
    }

    pub fn with_right(&self, right: Option<Action<S>>) -> Self {
        DgModule {
            carrier: self.carrier.clone(),
            left: self.left.clone(),
            right,
        }
    }

    pub fn with_carrier(&self, carrier: ChainComplex<S>) -> Self {
        assert_eq!(carrier.dim(), self.dim());
        DgModule {
            carrier,
            left: self.left.clone(),
            right: self.right.clone(),
        }
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("dg module");
        v.absorb("carrier", self.carrier.validate());
        if let Some(l) = &self.left {
            self.check_action(&mut v, Side::Left, l);
        }
        if let Some(r) = &self.right {
            self.check_action(&mut v, Side::Right, r);
        }
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            let mut fail = None;
            'outer: for a in 0..l.algebra.dim() {
                for x in 0..self.dim() {
                    for b in 0..r.algebra.dim() {
                        let lhs = self.right_multiply(self.act_left(a, x), &unit_vec(b));
                        let rhs = self.left_multiply(&unit_vec(a), self.act_right(x, b));
                        if lhs != rhs {
                            fail = Some(format!(
                                "({}·{})·{} ≠ {}·({}·{})",
                                l.algebra.carrier().name(a),
                                self.carrier.name(x),
                                r.algebra.carrier().name(b),
                                l.algebra.carrier().name(a),
                                self.carrier.name(x),
                                r.algebra.carrier().name(b)
                            ));
                            break 'outer;
                        }
                    }
                }
            }
            v.record("actions commute", fail);
        }
        v
    }

    fn check_action(&self, v: &mut Validation, side: Side, act: &Action<S>) {
        let a = &act.algebra;
        let x = &self.carrier;
        let (na, nm) = (a.dim(), self.dim());
        let tag = match side {
            Side::Left => "left",
            Side::Right => "right",
        };
        let split = |c: usize| match side {
            Side::Left => (c / nm, c % nm),
            Side::Right => (c % na, c / na),
        };
        v.record(
            &format!("{tag} action has degree 0"),
            act.table
                .triplets()
                .find(|&(k, c, _)| {
                    let (ai, xi) = split(c);
                    x.degree(k) != a.carrier().degree(ai) + x.degree(xi)
                })
                .map(|(k, c, _)| {
                    let (ai, xi) = split(c);
                    format!("{} acting on {} hits {}", a.carrier().name(ai), x.name(xi), x.name(k))
                }),
        );
        let act_vec = |s: &SparseVec<S>, m: &SparseVec<S>| match side {
            Side::Left => self.left_multiply(s, m),
            Side::Right => self.right_multiply(m, s),
        };
        let unit_fail = (0..nm).find(|&i| act_vec(a.unit(), &unit_vec(i)) != unit_vec(i)).map(|i| format!("1 does not act as identity on {}", x.name(i)));
        v.record(&format!("{tag} unit"), unit_fail);
        let mut assoc = None;
        'outer: for p in 0..na {
            for q in 0..na {
                for i in 0..nm {
                    let (lhs, rhs) = match side {
                        Side::Left => (
                            self.left_multiply(a.product(p, q), &unit_vec(i)),
                            self.left_multiply(&unit_vec(p), self.act_left(q, i)),
                        ),
                        Side::Right => (
                            self.right_multiply(&unit_vec(i), a.product(p, q)),
                            self.right_multiply(self.act_right(i, p), &unit_vec(q)),
                        ),
                    };
                    if lhs != rhs {
                        assoc = Some(format!("action of {}·{} on {}", a.carrier().name(p), a.carrier().name(q), x.name(i)));
                        break 'outer;
                    }
                }
            }
        }
        v.record(&format!("{tag} associativity"), assoc);
        let (da, dm) = (a.carrier().differential(), x.differential());
        let mut leibniz = None;
        'outer2: for p in 0..na {
            for i in 0..nm {
                let (lhs, rhs) = match side {
                    Side::Left => {
                        let lhs = dm.apply(self.act_left(p, i));
                        let mut rhs = self.left_multiply(da.column(p), &unit_vec(i));
                        let s = S::sign(a.carrier().degree(p).rem_euclid(2) == 1);
                        axpy(&mut rhs, &s, &self.left_multiply(&unit_vec(p), dm.column(i)));
                        (lhs, rhs)
                    }
                    Side::Right => {
                        let lhs = dm.apply(self.act_right(i, p));
                        let mut rhs = self.right_multiply(dm.column(i), &unit_vec(p));
                        let s = S::sign(x.degree(i).rem_euclid(2) == 1);
                        axpy(&mut rhs, &s, &self.right_multiply(&unit_vec(i), da.column(p)));
                        (lhs, rhs)
                    }
                };
                if lhs != rhs {
                    leibniz = Some(format!("d of {} acting on {}", a.carrier().name(p), x.name(i)));
                    break 'outer2;
                }
            }
        }
        v.record(&format!("{tag} Leibniz rule"), leibniz);
    }

    /// Restrict the action on `side` along `φ: A' → A`.
    pub fn restrict(&self, side: Side, phi: &AlgebraMorphism<S>) -> Result<Self, DgError> {
        let act = match side {
            Side::Left => self.left.as_ref(),
            Side::Right => self.right.as_ref(),
        }
        .ok_or(DgError::MissingAction(side))?;
        if !same_algebra(&act.algebra, phi.target()) {
            return Err(DgError::AlgebraMismatch("restriction along a map with the wrong target".into()));
        }
        let src = phi.source();
        let nm = self.dim();
        let mut cols = Vec::with_capacity(nm * src.dim());
        match side {
            Side::Left => {
                for a in 0..src.dim() {
                    for x in 0..nm {
                        cols.push(self.left_multiply(phi.image_of(a), &unit_vec(x)));
                    }
                }
            }
            Side::Right => {
                for x in 0..nm {
                    for a in 0..src.dim() {
                        cols.push(self.right_multiply(&unit_vec(x), phi.image_of(a)));
                    }
                }
            }
        }
        let new = Action {
            algebra: src.clone(),
            table: Matrix::from_columns(nm, cols),
        };
        Ok(match side {
            Side::Left => self.with_left(Some(new)),
            Side::Right => self.with_right(Some(new)),
        })
    }

    /// Direct sum of modules over the same algebras.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, DgError> {
        let carrier = self.carrier.direct_sum(&other.carrier)?;
        let (n1, n2) = (self.dim(), other.dim());
        let n = n1 + n2;
        let shift = |v: &SparseVec<S>, off: usize| -> SparseVec<S> { v.iter().map(|(&i, c)| (i + off, c.clone())).collect() };
        let left = match (&self.left, &other.left) {
            (None, None) => None,
            (Some(l1), Some(l2)) if same_algebra(&l1.algebra, &l2.algebra) => {
                let na = l1.algebra.dim();
                let mut cols = Vec::with_capacity(na * n);
                for a in 0..na {
                    for x in 0..n1 {
                        cols.push(self.act_left(a, x).clone());
                    }
                    for x in 0..n2 {
                        cols.push(shift(other.act_left(a, x), n1));
                    }
                }
                Some(Action {
                    algebra: l1.algebra.clone(),
                    table: Matrix::from_columns(n, cols),
                })
            }
            _ => return Err(DgError::AlgebraMismatch("direct sum of modules with different left actions".into())),
        };
        let right = match (&self.right, &other.right) {
            (None, None) => None,
            (Some(r1), Some(r2)) if same_algebra(&r1.algebra, &r2.algebra) => {
                let na = r1.algebra.dim();
                let mut cols = Vec::with_capacity(na * n);
                for x in 0..n1 {
                    for a in 0..na {
                        cols.push(self.act_right(x, a).clone());
                    }
                }
                for x in 0..n2 {
                    for a in 0..na {
                        cols.push(shift(other.act_right(x, a), n1));
                    }
                }
                Some(Action {
                    algebra: r1.algebra.clone(),
                    table: Matrix::from_columns(n, cols),
                })
            }
            _ => return Err(DgError::AlgebraMismatch("direct sum of modules with different right actions".into())),
        };
        Ok(DgModule { carrier, left, right })
    }

    /// `s⁻¹M` for a right module: `(s⁻¹x)·a = s⁻¹(x·a)`, differential negated.
    pub fn desuspend_right(&self) -> Result<Self, DgError> {
        if self.left.is_some() {
            return Err(DgError::Shape("desuspension is offered for right modules only".into()));
        }
        Ok(DgModule {
            carrier: crate::complexes::desuspend(&self.carrier),
            left: None,
            right: self.right.clone(),
        })
    }

    /// Path object of a right module: `M ⊕ s⁻¹M` with `Dx = dx − s⁻¹x`,
    /// together with the projection onto `M`.
    pub fn path_right(&self) -> Result<(Self, ModuleMap<S>), DgError> {
        let s = self.desuspend_right()?;
        let sum = self.direct_sum(&s)?;
        let (path_complex, proj) = crate::complexes::path_object(&self.carrier);
        let path = sum.with_carrier(path_complex);
        let p = ModuleMap::new(Arc::new(path.clone()), Arc::new(self.clone()), proj.matrix().clone())?;
        Ok((path, p))
    }
}

/// Degree-0 map of modules over the same algebras.
#[derive(Clone)]
pub struct ModuleMap<S> {
    source: Arc<DgModule<S>>,
    target: Arc<DgModule<S>>,
    matrix: Matrix<S>,
}

impl<S: Scalar> ModuleMap<S> {
    pub fn new(source: Arc<DgModule<S>>, target: Arc<DgModule<S>>, matrix: Matrix<S>) -> Result<Self, DgError> {
        if (matrix.rows(), matrix.cols()) != (target.dim(), source.dim()) {
            return Err(DgError::Shape("module map has the wrong shape".into()));
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: &Arc<DgModule<S>>) -> Self {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.dim()),
        }
    }

    pub fn source(&self) -> &Arc<DgModule<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgModule<S>> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn chain_map(&self) -> Result<ChainMap<S>, DgError> {
        Ok(ChainMap::new(self.source.carrier().clone(), self.target.carrier().clone(), 0, self.matrix.clone())?)
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("module map");
        match self.chain_map() {
            Err(e) => v.fail("degree 0", e.to_string()),
            Ok(f) => v.record("chain map", f.chain_law_failure()),
        }
        if let (Some(l), Some(_)) = (self.source.left(), self.target.left()) {
            let fail = (0..l.algebra.dim())
                .flat_map(|a| (0..self.source.dim()).map(move |x| (a, x)))
                .find(|&(a, x)| self.matrix.apply(self.source.act_left(a, x)) != self.target.left_multiply(&unit_vec(a), self.matrix.column(x)))
                .map(|(a, x)| format!("f({}·{}) ≠ {}·f({})", l.algebra.carrier().name(a), self.source.carrier().name(x), l.algebra.carrier().name(a), self.source.carrier().name(x)));
            v.record("left linear", fail);
        }
        if let (Some(r), Some(_)) = (self.source.right(), self.target.right()) {
            let fail = (0..self.source.dim())
                .flat_map(|x| (0..r.algebra.dim()).map(move |a| (x, a)))
                .find(|&(x, a)| self.matrix.apply(self.source.act_right(x, a)) != self.target.right_multiply(self.matrix.column(x), &unit_vec(a)))
                .map(|(x, a)| format!("f({}·{}) ≠ f({})·{}", self.source.carrier().name(x), r.algebra.carrier().name(a), self.source.carrier().name(x), r.algebra.carrier().name(a)));
            v.record("right linear", fail);
        }
        v
    }
}
