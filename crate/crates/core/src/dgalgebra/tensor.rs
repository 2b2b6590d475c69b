//! Tensor products over an algebra and the multilinear word engine.
//!
//! A [`TensorTree`] records how an iterated tensor product over algebras was
//! bracketed. Its elements lift to sums of flat tuples of leaf basis indices
//! ("words"), and any sum of flat tuples projects back to the canonical
//! quotient basis. Structure maps are applied to words as [`Block`]s that
//! replace a run of adjacent factors, with Koszul signs.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::complexes::{pair_index, tensor_complexes, ChainComplex};
use crate::linalg::{add_entry, axpy, quotient_basis, unit_vec, Matrix, Quotient, Scalar, SparseVec};

use super::algebra::{same_algebra, DgAlgebra};
use super::module::{Action, DgModule, Side};
use super::DgError;

/// `M ⊗_A N` with its canonical quotient data.
#[derive(Clone)]
pub struct TensorProduct<S> {
    pub module: DgModule<S>,
    pub quotient: Quotient<S>,
    pub right_dim: usize,
}

/// Quotient of the field tensor of `m` and `n` by `m·a ⊗ n − m ⊗ a·n`.
///
/// The differential and any outer actions descend; both are checked on the
/// relation span.
pub fn tensor_over<S: Scalar>(m: &DgModule<S>, n: &DgModule<S>) -> Result<TensorProduct<S>, DgError> {
    let ra = m.right().ok_or(DgError::MissingAction(Side::Right))?;
    let la = n.left().ok_or(DgError::MissingAction(Side::Left))?;
    if !same_algebra(&ra.algebra, &la.algebra) {
        return Err(DgError::AlgebraMismatch("tensor over different algebras".into()));
    }
    let a = &ra.algebra;
    let (nm, nn, na) = (m.dim(), n.dim(), a.dim());
    let total = tensor_complexes(m.carrier(), n.carrier())?;
    let mut relations = Vec::new();
    for i in 0..nm {
        for b in 0..na {
            let ma = m.act_right(i, b);
            for j in 0..nn {
                let mut r = SparseVec::new();
                for (&k, c) in ma {
                    add_entry(&mut r, pair_index(k, j, nn), c.clone());
                }
                for (&l, c) in n.act_left(b, j) {
                    add_entry(&mut r, pair_index(i, l, nn), -c.clone());
                }
                if !r.is_empty() {
                    relations.push(r);
                }
            }
        }
    }
    let rel = Matrix::from_columns(nm * nn, relations);
    let quotient = quotient_basis(nm * nn, &rel);
    let d = total.differential();
    for r in rel.columns() {
        if !quotient.project(&d.apply(r)).is_empty() {
            return Err(DgError::NonDescending("differential".into()));
        }
    }
    let reps = quotient.representatives().to_vec();
    let basis = reps.iter().map(|&r| (total.name(r).to_string(), total.degree(r))).collect();
    let dq = Matrix::from_columns(reps.len(), reps.iter().map(|&r| quotient.project(d.column(r))).collect());
    let carrier = ChainComplex::new(total.field(), basis, dq)?;
    let q = reps.len();

    let left = match m.left() {
        None => None,
        Some(l) => {
            let nb = l.algebra.dim();
            let act = |b: usize, t: usize| -> SparseVec<S> {
                let (i, j) = (t / nn, t % nn);
                let mut v = SparseVec::new();
                for (&k, c) in m.act_left(b, i) {
                    add_entry(&mut v, pair_index(k, j, nn), c.clone());
                }
                v
            };
            for b in 0..nb {
                for r in rel.columns() {
                    let mut img = SparseVec::new();
                    for (&t, c) in r {
                        axpy(&mut img, c, &act(b, t));
                    }
                    if !quotient.project(&img).is_empty() {
                        return Err(DgError::NonDescending("left action".into()));
                    }
                }
            }
            let mut cols = Vec::with_capacity(nb * q);
            for b in 0..nb {
                for &r in &reps {
                    cols.push(quotient.project(&act(b, r)));
                }
            }
            Some(Action {
                algebra: l.algebra.clone(),
                table: Matrix::from_columns(q, cols),
            })
        }
    };
    let right = match n.right() {
        None => None,
        Some(r_act) => {
            let nb = r_act.algebra.dim();
            let act = |t: usize, b: usize| -> SparseVec<S> {
                let (i, j) = (t / nn, t % nn);
                let mut v = SparseVec::new();
                for (&l, c) in n.act_right(j, b) {
                    add_entry(&mut v, pair_index(i, l, nn), c.clone());
                }
                v
            };
            for b in 0..nb {
                for r in rel.columns() {
                    let mut img = SparseVec::new();
                    for (&t, c) in r {
                        axpy(&mut img, c, &act(t, b));
                    }
                    if !quotient.project(&img).is_empty() {
                        return Err(DgError::NonDescending("right action".into()));
                    }
                }
            }
            let mut cols = Vec::with_capacity(nb * q);
            for &r in &reps {
                for b in 0..nb {
                    cols.push(quotient.project(&act(r, b)));
                }
            }
            Some(Action {
                algebra: r_act.algebra.clone(),
                table: Matrix::from_columns(q, cols),
            })
        }
    };
    Ok(TensorProduct {
        module: DgModule::new(carrier, left, right)?,
        quotient,
        right_dim: nn,
    })
}

/// Degrees of the basis of one tensor factor.
pub type Degrees = Arc<[i32]>;

pub struct TensorNode<S> {
    left: TensorTree<S>,
    right: TensorTree<S>,
    product: TensorProduct<S>,
    module: Arc<DgModule<S>>,
}

/// A bracketed iterated tensor product over algebras.
#[derive(Clone)]
pub enum TensorTree<S> {
    Leaf(Arc<DgModule<S>>, Degrees),
    Node(Arc<TensorNode<S>>),
}

impl<S: Scalar> TensorTree<S> {
    pub fn leaf(m: Arc<DgModule<S>>) -> Self {
        let d: Degrees = m.degrees().into();
        TensorTree::Leaf(m, d)
    }

    pub fn over(left: TensorTree<S>, right: TensorTree<S>) -> Result<Self, DgError> {
        let product = tensor_over(left.module(), right.module())?;
        let module = Arc::new(product.module.clone());
        Ok(TensorTree::Node(Arc::new(TensorNode {
            left,
            right,
            product,
            module,
        })))
    }

    /// Left-bracketed product `((M₁ ⊗ M₂) ⊗ M₃) ⊗ …`.
    pub fn chain(factors: &[Arc<DgModule<S>>]) -> Result<Self, DgError> {
        let mut it = factors.iter();
        let mut t = TensorTree::leaf(it.next().expect("at least one factor").clone());
        for m in it {
            t = TensorTree::over(t, TensorTree::leaf(m.clone()))?;
        }
        Ok(t)
    }

    pub fn module(&self) -> &Arc<DgModule<S>> {
        match self {
            TensorTree::Leaf(m, _) => m,
            TensorTree::Node(n) => &n.module,
        }
    }

    pub fn dim(&self) -> usize {
        self.module().dim()
    }

    pub fn arity(&self) -> usize {
        match self {
            TensorTree::Leaf(..) => 1,
            TensorTree::Node(n) => n.left.arity() + n.right.arity(),
        }
    }

    pub fn leaf_degrees(&self) -> Vec<Degrees> {
        match self {
            TensorTree::Leaf(_, d) => vec![d.clone()],
            TensorTree::Node(n) => {
                let mut v = n.left.leaf_degrees();
                v.extend(n.right.leaf_degrees());
                v
            }
        }
    }

    pub fn leaves(&self) -> Vec<Arc<DgModule<S>>> {
        match self {
            TensorTree::Leaf(m, _) => vec![m.clone()],
            TensorTree::Node(n) => {
                let mut v = n.left.leaves();
                v.extend(n.right.leaves());
                v
            }
        }
    }

    pub fn product(&self) -> Option<&TensorProduct<S>> {
        match self {
            TensorTree::Leaf(..) => None,
            TensorTree::Node(n) => Some(&n.product),
        }
    }

    pub fn children(&self) -> Option<(&TensorTree<S>, &TensorTree<S>)> {
        match self {
            TensorTree::Leaf(..) => None,
            TensorTree::Node(n) => Some((&n.left, &n.right)),
        }
    }

    /// The flat tuple representing basis element `q`; its lift has coefficient 1.
    pub fn rep_tuple(&self, q: usize) -> Vec<usize> {
        match self {
            TensorTree::Leaf(..) => vec![q],
            TensorTree::Node(n) => {
                let r = n.product.quotient.representatives()[q];
                let (a, b) = (r / n.product.right_dim, r % n.product.right_dim);
                let mut t = n.left.rep_tuple(a);
                t.extend(n.right.rep_tuple(b));
                t
            }
        }
    }

    pub fn word(&self, q: usize) -> Word<S> {
        let mut terms = Terms::new();
        terms.insert(self.rep_tuple(q), S::one());
        Word {
            degrees: self.leaf_degrees(),
            terms,
        }
    }

    pub fn word_of(&self, v: &SparseVec<S>) -> Word<S> {
        let mut terms = Terms::new();
        for (&q, c) in v {
            terms.insert(self.rep_tuple(q), c.clone());
        }
        Word {
            degrees: self.leaf_degrees(),
            terms,
        }
    }

    pub fn project_tuple(&self, t: &[usize]) -> SparseVec<S> {
        match self {
            TensorTree::Leaf(..) => unit_vec(t[0]),
            TensorTree::Node(n) => {
                let k = n.left.arity();
                let l = n.left.project_tuple(&t[..k]);
                let r = n.right.project_tuple(&t[k..]);
                let mut out = SparseVec::new();
                for (&a, x) in &l {
                    for (&b, y) in &r {
                        let col = n.product.quotient.project_basis(a * n.product.right_dim + b);
                        axpy(&mut out, &(x.clone() * y.clone()), col);
                    }
                }
                out
            }
        }
    }

    pub fn project(&self, w: &Word<S>) -> SparseVec<S> {
        assert_eq!(w.degrees.len(), self.arity(), "word arity does not match the tensor tree");
        let mut out = SparseVec::new();
        let mut cache: HashMap<&[usize], SparseVec<S>> = HashMap::new();
        for (t, c) in &w.terms {
            let p = cache.entry(t.as_slice()).or_insert_with(|| self.project_tuple(t));
            axpy(&mut out, c, p);
        }
        out
    }

    /// Matrix of the linear map `self → target` given on words.
    pub fn map_to<F>(&self, target: &TensorTree<S>, f: F) -> Matrix<S>
    where
        F: Fn(Word<S>) -> Word<S>,
    {
        let cols = (0..self.dim()).map(|q| target.project(&f(self.word(q)))).collect();
        Matrix::from_columns(target.dim(), cols)
    }
}

pub type Terms<S> = BTreeMap<Vec<usize>, S>;

/// Linear combination of flat tuples over a fixed list of factors.
#[derive(Clone, Debug, PartialEq)]
pub struct Word<S> {
    pub degrees: Vec<Degrees>,
    pub terms: Terms<S>,
}

impl<S: Scalar> Word<S> {
    pub fn zero(degrees: Vec<Degrees>) -> Self {
        Word {
            degrees,
            terms: Terms::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: Vec<usize>, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(mut self, other: &Word<S>, c: &S) -> Self {
        assert_eq!(self.degrees.len(), other.degrees.len());
        for (t, v) in &other.terms {
            self.add_term(t.clone(), c.clone() * v.clone());
        }
        self
    }

    /// Total degree of a tuple.
    pub fn tuple_degree(&self, t: &[usize]) -> i32 {
        t.iter().zip(&self.degrees).map(|(&i, d)| d[i]).sum()
    }

    /// Replace factors `pos .. pos + block.arity` using `block`, with the
    /// Koszul sign `(−1)^{deg(block) · (degrees before pos)}`.
    pub fn apply(&self, pos: usize, block: &Block<'_, S>) -> Word<S> {
        assert!(pos + block.arity <= self.arity(), "block does not fit the word");
        let mut degrees = self.degrees[..pos].to_vec();
        degrees.extend(block.outputs.iter().cloned());
        degrees.extend(self.degrees[pos + block.arity..].iter().cloned());
        let mut out = Word::zero(degrees);
        let odd_block = block.degree.rem_euclid(2) == 1;
        let mut cache: HashMap<Vec<usize>, Vec<(Vec<usize>, S)>> = HashMap::new();
        for (t, c) in &self.terms {
            let inner = t[pos..pos + block.arity].to_vec();
            let img = cache.entry(inner.clone()).or_insert_with(|| (block.image)(&inner));
            if img.is_empty() {
                continue;
            }
            let before: i32 = t[..pos].iter().zip(&self.degrees).map(|(&i, d)| d[i]).sum();
            let sign = S::sign(odd_block && before.rem_euclid(2) == 1);
            let coeff = sign * c.clone();
            for (o, v) in img.iter() {
                let mut nt = t[..pos].to_vec();
                nt.extend_from_slice(o);
                nt.extend_from_slice(&t[pos + block.arity..]);
                out.add_term(nt, coeff.clone() * v.clone());
            }
        }
        out
    }

    /// Sum over every factor of the differential on that factor.
    pub fn differentiate(&self, differentials: &[&Matrix<S>]) -> Word<S> {
        assert_eq!(differentials.len(), self.arity());
        let mut out = Word::zero(self.degrees.clone());
        for (k, d) in differentials.iter().enumerate() {
            let b = Block::linear_on_factor(d, self.degrees[k].clone(), -1);
            out = out.add(&self.apply(k, &b), &S::one());
        }
        out
    }
}

type Image<'a, S> = Box<dyn Fn(&[usize]) -> Vec<(Vec<usize>, S)> + 'a>;

/// A multilinear map replacing `arity` adjacent factors by `outputs`.
pub struct Block<'a, S> {
    pub arity: usize,
    pub outputs: Vec<Degrees>,
    pub degree: i32,
    pub image: Image<'a, S>,
}

impl<'a, S: Scalar> Block<'a, S> {
    /// Map on one factor given by a matrix (columns = images of basis vectors).
    pub fn linear_on_factor(m: &'a Matrix<S>, output: Degrees, degree: i32) -> Self {
        Block {
            arity: 1,
            outputs: vec![output],
            degree,
            image: Box::new(move |t: &[usize]| m.column(t[0]).iter().map(|(&i, c)| (vec![i], c.clone())).collect()),
        }
    }

    /// Map between tensor trees given in their quotient bases.
    ///
    /// The input tuple is projected through `source`, the matrix is applied,
    /// and the result is lifted through `target`.
    pub fn through(source: &'a TensorTree<S>, m: &'a Matrix<S>, target: &'a TensorTree<S>, degree: i32) -> Self {
        Block {
            arity: source.arity(),
            outputs: target.leaf_degrees(),
            degree,
            image: Box::new(move |t: &[usize]| {
                let v = m.apply(&source.project_tuple(t));
                v.into_iter().map(|(q, c)| (target.rep_tuple(q), c)).collect()
            }),
        }
    }

    /// Map out of a plain field tensor: the tuple is flattened row-major
    /// using `dims`, and the matrix column is lifted through `target`.
    pub fn field(dims: Vec<usize>, m: &'a Matrix<S>, target: &'a TensorTree<S>, degree: i32) -> Self {
        Block {
            arity: dims.len(),
            outputs: target.leaf_degrees(),
            degree,
            image: Box::new(move |t: &[usize]| {
                let mut idx = 0;
                for (&i, &n) in t.iter().zip(&dims) {
                    idx = idx * n + i;
                }
                m.column(idx).iter().map(|(&q, c)| (target.rep_tuple(q), c.clone())).collect()
            }),
        }
    }

    /// Insert a fixed element (arity 0).
    pub fn constant(outputs: Vec<Degrees>, terms: Vec<(Vec<usize>, S)>) -> Self {
        Block {
            arity: 0,
            outputs,
            degree: 0,
            image: Box::new(move |_| terms.clone()),
        }
    }

    /// Insert the lift of an element of a tensor tree.
    pub fn element(tree: &TensorTree<S>, v: &SparseVec<S>) -> Self {
        let terms = v.iter().map(|(&q, c)| (tree.rep_tuple(q), c.clone())).collect();
        Block::constant(tree.leaf_degrees(), terms)
    }

    /// `[x, a] ↦ [x·a]` for the right action of `m`.
    pub fn right_action(m: &'a DgModule<S>) -> Self {
        let d: Degrees = m.degrees().into();
        Block {
            arity: 2,
            outputs: vec![d],
            degree: 0,
            image: Box::new(move |t: &[usize]| m.act_right(t[0], t[1]).iter().map(|(&i, c)| (vec![i], c.clone())).collect()),
        }
    }

    /// `[a, x] ↦ [a·x]` for the left action of `m`.
    pub fn left_action(m: &'a DgModule<S>) -> Self {
        let d: Degrees = m.degrees().into();
        Block {
            arity: 2,
            outputs: vec![d],
            degree: 0,
            image: Box::new(move |t: &[usize]| m.act_left(t[0], t[1]).iter().map(|(&i, c)| (vec![i], c.clone())).collect()),
        }
    }

    /// `[a, b] ↦ [a·b]` in an algebra.
    pub fn multiplication(a: &'a DgAlgebra<S>) -> Self {
        let d: Degrees = a.carrier().degrees().into();
        Block {
            arity: 2,
            outputs: vec![d],
            degree: 0,
            image: Box::new(move |t: &[usize]| a.product(t[0], t[1]).iter().map(|(&i, c)| (vec![i], c.clone())).collect()),
        }
    }

    /// Insert the unit of an algebra as a new factor.
    pub fn unit(a: &DgAlgebra<S>) -> Self {
        let d: Degrees = a.carrier().degrees().into();
        Block::constant(vec![d], a.unit().iter().map(|(&i, c)| (vec![i], c.clone())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ScalarField;
    use crate::Q;

    fn q(n: i64) -> Q {
        Q::from_int(n, &ScalarField::Rationals)
    }

    /// k[t]/t² with |t| = 0.
    fn dual_numbers() -> Arc<DgAlgebra<Q>> {
        let c = ChainComplex::graded(ScalarField::Rationals, vec![("1".into(), 0), ("t".into(), 0)]);
        let mult = Matrix::from_triplets(2, 4, [(0, 0, q(1)), (1, 1, q(1)), (1, 2, q(1))]).unwrap();
        Arc::new(DgAlgebra::new(c, unit_vec(0), mult).unwrap())
    }

    #[test]
    fn regular_tensor_regular() {
        let b = dual_numbers();
        assert!(b.validate().is_ok());
        let reg = DgModule::regular(&b);
        assert!(reg.validate().is_ok());
        let t = tensor_over(&reg, &reg).unwrap();
        assert_eq!(t.module.dim(), 2);
        assert!(t.module.validate().is_ok());
    }

    #[test]
    fn word_projection_matches_quotient() {
        let b = dual_numbers();
        let reg = Arc::new(DgModule::regular(&b));
        let tree = TensorTree::chain(&[reg.clone(), reg.clone(), reg.clone()]).unwrap();
        assert_eq!(tree.dim(), 2);
        for q in 0..tree.dim() {
            assert_eq!(tree.project(&tree.word(q)), unit_vec(q));
        }
        // t ⊗ 1 ⊗ t = 1 ⊗ t·t ⊗ … = 0
        let mut w = Word::zero(tree.leaf_degrees());
        w.add_term(vec![1, 0, 1], Q::from_int(1, &ScalarField::Rationals));
        assert!(tree.project(&w).is_empty());
    }
}
