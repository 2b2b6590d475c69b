//! Corings over dg algebras, their comodules, cotensor products and
//! change-of-corings functors.

mod comodule;
mod flat;

pub use comodule::{cofree_comodule, cotensor, map_comodule, pullback, pushforward, Comodule, Cotensor, LeftComodule, MapComodule, Pullback};
pub use flat::{descent_certificate, is_flat_coring, kernel_exactness, trivial_certificate, FlatnessReport};

use std::sync::Arc;

use crate::check::Validation;
use crate::complexes::ChainMap;
use crate::dgalgebra::{module_map_failure, same_algebra, AlgebraMorphism, Block, Degrees, DgAlgebra, DgError, DgModule, Side, TensorTree, Word};
use crate::linalg::{unit_vec, Matrix, Scalar, SparseVec};

/// Project the columns of a pre-quotient map into a two-factor tree.
///
/// Column `j` of `pairs` lists coefficients of `(u, v)` at index `u · right_dim + v`.
pub fn project_pairs<S: Scalar>(tree: &TensorTree<S>, pairs: &Matrix<S>, right_dim: usize) -> Matrix<S> {
    let degrees = tree.leaf_degrees();
    let cols = pairs
        .columns()
        .iter()
        .map(|col| {
            let mut w = Word::zero(degrees.clone());
            for (&k, c) in col {
                w.add_term(vec![k / right_dim, k % right_dim], c.clone());
            }
            tree.project(&w)
        })
        .collect();
    Matrix::from_columns(tree.dim(), cols)
}

/// Word of a single factor.
pub fn single<S: Scalar>(degrees: &Degrees, v: &SparseVec<S>) -> Word<S> {
    let mut w = Word::zero(vec![degrees.clone()]);
    for (&i, c) in v {
        w.add_term(vec![i], c.clone());
    }
    w
}

pub(crate) fn degrees_of<S: Scalar>(m: &DgModule<S>) -> Degrees {
    m.degrees().into()
}

/// An `A`-coring: a comonoid among `A`-bimodules.
#[derive(Clone)]
pub struct Coring<S> {
    algebra: Arc<DgAlgebra<S>>,
    carrier: Arc<DgModule<S>>,
    leaf: TensorTree<S>,
    cc: TensorTree<S>,
    delta: Matrix<S>,
    counit: Matrix<S>,
    coaugmentation: Option<Matrix<S>>,
}

impl<S: Scalar> Coring<S> {
    /// Build from a comultiplication written against the field tensor
    /// `C ⊗ C` (pair index `i · dim C + j`).
    pub fn new(
        algebra: Arc<DgAlgebra<S>>,
        carrier: Arc<DgModule<S>>,
        delta_pairs: Matrix<S>,
        counit: Matrix<S>,
        coaugmentation: Option<Matrix<S>>,
    ) -> Result<Self, DgError> {
        let n = carrier.dim();
        if (delta_pairs.rows(), delta_pairs.cols()) != (n * n, n) {
            return Err(DgError::Shape(format!("comultiplication must be {}x{}", n * n, n)));
        }
        let (leaf, cc) = Self::trees(&algebra, &carrier)?;
        let delta = project_pairs(&cc, &delta_pairs, n);
        Self::assemble(algebra, carrier, leaf, cc, delta, counit, coaugmentation)
    }

    /// Build from a comultiplication already in the basis of `C ⊗_A C`.
    pub fn from_projected(
        algebra: Arc<DgAlgebra<S>>,
        carrier: Arc<DgModule<S>>,
        delta: Matrix<S>,
        counit: Matrix<S>,
        coaugmentation: Option<Matrix<S>>,
    ) -> Result<Self, DgError> {
        let (leaf, cc) = Self::trees(&algebra, &carrier)?;
        if (delta.rows(), delta.cols()) != (cc.dim(), carrier.dim()) {
            return Err(DgError::Shape(format!("comultiplication must be {}x{}", cc.dim(), carrier.dim())));
        }
        Self::assemble(algebra, carrier, leaf, cc, delta, counit, coaugmentation)
    }

    fn trees(algebra: &Arc<DgAlgebra<S>>, carrier: &Arc<DgModule<S>>) -> Result<(TensorTree<S>, TensorTree<S>), DgError> {
        for (side, act) in [(Side::Left, carrier.left_algebra()), (Side::Right, carrier.right_algebra())] {
            match act {
                None => return Err(DgError::MissingAction(side)),
                Some(b) if !same_algebra(b, algebra) => {
                    return Err(DgError::AlgebraMismatch(format!("{side:?} action of the carrier is not over the coring's algebra")))
                }
                _ => {}
            }
        }
        let leaf = TensorTree::leaf(carrier.clone());
        let cc = TensorTree::over(leaf.clone(), leaf.clone())?;
        Ok((leaf, cc))
    }

    fn assemble(
        algebra: Arc<DgAlgebra<S>>,
        carrier: Arc<DgModule<S>>,
        leaf: TensorTree<S>,
        cc: TensorTree<S>,
        delta: Matrix<S>,
        counit: Matrix<S>,
        coaugmentation: Option<Matrix<S>>,
    ) -> Result<Self, DgError> {
        if (counit.rows(), counit.cols()) != (algebra.dim(), carrier.dim()) {
            return Err(DgError::Shape(format!("counit must be {}x{}", algebra.dim(), carrier.dim())));
        }
        if let Some(eta) = &coaugmentation {
            if (eta.rows(), eta.cols()) != (carrier.dim(), algebra.dim()) {
                return Err(DgError::Shape(format!("coaugmentation must be {}x{}", carrier.dim(), algebra.dim())));
            }
        }
        Ok(Coring {
            algebra,
            carrier,
            leaf,
            cc,
            delta,
            counit,
            coaugmentation,
        })
    }

    /// The trivial coring `(A, A)`.
    pub fn trivial(a: &Arc<DgAlgebra<S>>) -> Self {
        let carrier = Arc::new(DgModule::regular(a));
        let (leaf, cc) = Self::trees(a, &carrier).expect("regular bimodule");
        let unit = Block::unit(a);
        let delta = leaf.map_to(&cc, |w| w.apply(1, &unit));
        Coring {
            algebra: a.clone(),
            carrier,
            leaf,
            cc,
            delta,
            counit: Matrix::identity(a.dim()),
            coaugmentation: Some(Matrix::identity(a.dim())),
        }
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra<S>> {
        &self.algebra
    }

    pub fn carrier(&self) -> &Arc<DgModule<S>> {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn leaf(&self) -> &TensorTree<S> {
        &self.leaf
    }

    /// `C ⊗_A C`.
    pub fn square(&self) -> &TensorTree<S> {
        &self.cc
    }

    pub fn delta(&self) -> &Matrix<S> {
        &self.delta
    }

    pub fn counit(&self) -> &Matrix<S> {
        &self.counit
    }

    pub fn coaugmentation(&self) -> Option<&Matrix<S>> {
        self.coaugmentation.as_ref()
    }

    pub fn with_coaugmentation(&self, eta: Option<Matrix<S>>) -> Result<Self, DgError> {
        let mut c = self.clone();
        if let Some(e) = &eta {
            if (e.rows(), e.cols()) != (self.dim(), self.algebra.dim()) {
                return Err(DgError::Shape("coaugmentation has the wrong shape".into()));
            }
        }
        c.coaugmentation = eta;
        Ok(c)
    }

    /// Replace the structure maps (used by perturbation tests and parsers).
    pub fn with_structure(&self, delta: Matrix<S>, counit: Matrix<S>) -> Result<Self, DgError> {
        Self::assemble(self.algebra.clone(), self.carrier.clone(), self.leaf.clone(), self.cc.clone(), delta, counit, self.coaugmentation.clone())
    }

    /// Block applying `Δ` to one factor.
    pub fn delta_block(&self) -> Block<'_, S> {
        Block::through(&self.leaf, &self.delta, &self.cc, 0)
    }

    /// Block applying `ε` to one factor.
    pub fn counit_block(&self) -> Block<'_, S> {
        Block::linear_on_factor(&self.counit, self.algebra.carrier().degrees().into(), 0)
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("coring");
        v.absorb("algebra", self.algebra.validate());
        v.absorb("carrier", self.carrier.validate());
        let a_mod = DgModule::regular(&self.algebra);
        v.record("counit is a bimodule chain map", module_map_failure(&self.carrier, &a_mod, &self.counit));
        v.record(
            "comultiplication is a bimodule chain map",
            module_map_failure(&self.carrier, self.cc.module(), &self.delta),
        );
        let ccc = match TensorTree::over(self.cc.clone(), self.leaf.clone()) {
            Ok(t) => t,
            Err(e) => {
                v.fail("C ⊗ C ⊗ C", e.to_string());
                return v;
            }
        };
        let x = self.carrier.carrier();
        let db = self.delta_block();
        let eb = self.counit_block();
        let mut coassoc = None;
        let mut left_counit = None;
        let mut right_counit = None;
        for q in 0..self.dim() {
            let w = self.cc.word_of(self.delta.column(q));
            if coassoc.is_none() && ccc.project(&w.apply(0, &db)) != ccc.project(&w.apply(1, &db)) {
                coassoc = Some(format!("(Δ⊗1)Δ({0}) ≠ (1⊗Δ)Δ({0})", x.name(q)));
            }
            let l = self.leaf.project(&w.apply(0, &eb).apply(0, &Block::left_action(&self.carrier)));
            if left_counit.is_none() && l != unit_vec(q) {
                left_counit = Some(format!("(ε⊗1)Δ({0}) = {1}", x.name(q), x.name_vector(&l)));
            }
            let r = self.leaf.project(&w.apply(1, &eb).apply(0, &Block::right_action(&self.carrier)));
            if right_counit.is_none() && r != unit_vec(q) {
                right_counit = Some(format!("(1⊗ε)Δ({0}) = {1}", x.name(q), x.name_vector(&r)));
            }
        }
        v.record("coassociativity", coassoc);
        v.record("left counit", left_counit);
        v.record("right counit", right_counit);
        if let Some(eta) = &self.coaugmentation {
            v.record("coaugmentation is a bimodule chain map", module_map_failure(&a_mod, &self.carrier, eta));
            let ee = self.counit.mul(eta);
            v.record(
                "ε∘η = id",
                (ee != Matrix::identity(self.algebra.dim())).then(|| "ε∘η differs from the identity".to_string()),
            );
            let adeg: Degrees = self.algebra.carrier().degrees().into();
            let eb = Block::linear_on_factor(eta, degrees_of(&self.carrier), 0);
            let unit = Block::unit(&self.algebra);
            let mut fail = None;
            for a in 0..self.algebra.dim() {
                let lhs = self.delta.apply(eta.column(a));
                let w = single(&adeg, &unit_vec(a)).apply(1, &unit).apply(0, &eb).apply(1, &eb);
                if lhs != self.cc.project(&w) {
                    fail = Some(format!("Δη({0}) ≠ η({0})⊗η(1)", self.algebra.carrier().name(a)));
                    break;
                }
            }
            v.record("coaugmentation is a coring map", fail);
        }
        v
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `C` as a right comodule over itself.
    pub fn as_right_comodule(self: &Arc<Self>) -> Comodule<S> {
        Comodule::from_projected(self.clone(), self.carrier.clone(), self.delta.clone()).expect("C ⊗_A C")
    }

    /// `C` as a left comodule over itself.
    pub fn as_left_comodule(self: &Arc<Self>) -> LeftComodule<S> {
        LeftComodule::from_projected(self.clone(), self.carrier.clone(), self.delta.clone()).expect("C ⊗_A C")
    }
}

/// `(φ, f)`: a coring map over an algebra map, stored through its adjoint
/// `f♯: C → D` with `f♯(a·c·a') = φ(a)·f♯(c)·φ(a')`.
#[derive(Clone)]
pub struct CoringMorphism<S> {
    phi: AlgebraMorphism<S>,
    source: Arc<Coring<S>>,
    target: Arc<Coring<S>>,
    sharp: Matrix<S>,
}

impl<S: Scalar> CoringMorphism<S> {
    pub fn new(phi: AlgebraMorphism<S>, source: Arc<Coring<S>>, target: Arc<Coring<S>>, sharp: Matrix<S>) -> Result<Self, DgError> {
        if !same_algebra(phi.source(), source.algebra()) || !same_algebra(phi.target(), target.algebra()) {
            return Err(DgError::AlgebraMismatch("algebra map does not join the corings' algebras".into()));
        }
        if (sharp.rows(), sharp.cols()) != (target.dim(), source.dim()) {
            return Err(DgError::Shape(format!("coring map must be {}x{}", target.dim(), source.dim())));
        }
        Ok(CoringMorphism { phi, source, target, sharp })
    }

    /// A map of `A`-corings (`φ` the identity).
    pub fn over_identity(source: Arc<Coring<S>>, target: Arc<Coring<S>>, sharp: Matrix<S>) -> Result<Self, DgError> {
        let phi = AlgebraMorphism::identity(source.algebra());
        Self::new(phi, source, target, sharp)
    }

    pub fn identity(c: &Arc<Coring<S>>) -> Self {
        CoringMorphism {
            phi: AlgebraMorphism::identity(c.algebra()),
            source: c.clone(),
            target: c.clone(),
            sharp: Matrix::identity(c.dim()),
        }
    }

    /// `ε_C` as a map of `A`-corings into the trivial coring.
    pub fn counit_of(c: &Arc<Coring<S>>, trivial: &Arc<Coring<S>>) -> Result<Self, DgError> {
        Self::over_identity(c.clone(), trivial.clone(), c.counit().clone())
    }

    pub fn phi(&self) -> &AlgebraMorphism<S> {
        &self.phi
    }

    pub fn source(&self) -> &Arc<Coring<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Coring<S>> {
        &self.target
    }

    pub fn sharp(&self) -> &Matrix<S> {
        &self.sharp
    }

    /// Whether `φ` is an identity, so that this is a map of `A`-corings.
    pub fn is_over_identity(&self) -> bool {
        same_algebra(self.phi.source(), self.phi.target()) && *self.phi.matrix() == Matrix::identity(self.phi.source().dim())
    }

    pub fn compose(&self, first: &CoringMorphism<S>) -> CoringMorphism<S> {
        CoringMorphism {
            phi: self.phi.compose(&first.phi),
            source: first.source.clone(),
            target: self.target.clone(),
            sharp: self.sharp.mul(&first.sharp),
        }
    }

    /// `B ⊗_A C ⊗_A B` as a `B`-bimodule, with the map `b⊗c⊗b' ↦ b·f♯(c)·b'`.
    pub fn extended(&self) -> Result<(TensorTree<S>, Matrix<S>), DgError> {
        let b = self.phi.target();
        let reg = DgModule::regular(b);
        let bl = Arc::new(reg.restrict(Side::Right, &self.phi)?);
        let br = Arc::new(reg.restrict(Side::Left, &self.phi)?);
        let tree = TensorTree::over(TensorTree::over(TensorTree::leaf(bl), self.source.leaf.clone())?, TensorTree::leaf(br))?;
        let d = self.target.carrier();
        let fb = Block::linear_on_factor(&self.sharp, degrees_of(d), 0);
        let m = tree.map_to(&self.target.leaf, |w| {
            w.apply(1, &fb).apply(0, &Block::left_action(d)).apply(0, &Block::right_action(d))
        });
        Ok((tree, m))
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("coring morphism");
        v.absorb("algebra map", self.phi.validate());
        let (c, d) = (&self.source, &self.target);
        let (xc, xd) = (c.carrier(), d.carrier());
        match ChainMap::strict(xc.carrier().clone(), xd.carrier().clone(), self.sharp.clone()) {
            Err(e) => v.fail("chain map", e.to_string()),
            Ok(f) => v.record("chain map", f.chain_law_failure()),
        }
        let na = c.algebra().dim();
        let mut lin = None;
        'outer: for a in 0..na {
            let pa = self.phi.image_of(a);
            for q in 0..c.dim() {
                let lhs = self.sharp.apply(xc.act_left(a, q));
                let rhs = xd.left_multiply(pa, self.sharp.column(q));
                if lhs != rhs {
                    lin = Some(format!("f({0}·{1}) ≠ φ({0})·f({1})", c.algebra().carrier().name(a), xc.carrier().name(q)));
                    break 'outer;
                }
                let lhs = self.sharp.apply(xc.act_right(q, a));
                let rhs = xd.right_multiply(self.sharp.column(q), pa);
                if lhs != rhs {
                    lin = Some(format!("f({1}·{0}) ≠ f({1})·φ({0})", c.algebra().carrier().name(a), xc.carrier().name(q)));
                    break 'outer;
                }
            }
        }
        v.record("bimodule map along φ", lin);
        let lhs = d.counit().mul(&self.sharp);
        let rhs = self.phi.matrix().mul(c.counit());
        v.record(
            "preserves counit",
            lhs.sub(&rhs).triplets().next().map(|(_, q, _)| format!("ε_D f({0}) ≠ φ ε_C({0})", xc.carrier().name(q))),
        );
        let fb = Block::linear_on_factor(&self.sharp, degrees_of(xd), 0);
        let mut comult = None;
        for q in 0..c.dim() {
            let w = c.cc.word_of(c.delta.column(q)).apply(0, &fb).apply(1, &fb);
            if d.cc.project(&w) != d.delta.apply(self.sharp.column(q)) {
                comult = Some(format!("Δ_D f({0}) ≠ (f⊗f)Δ_C({0})", xc.carrier().name(q)));
                break;
            }
        }
        v.record("preserves comultiplication", comult);
        v
    }
}

/// The descent coring of `φ: A → B` with its canonical comodule and the
/// coring map from the trivial coring.
pub struct Descent<S> {
    pub coring: Arc<Coring<S>>,
    /// `B` with coaction `b ↦ 1 ⊗ b`.
    pub comodule: Comodule<S>,
    /// `(φ, a ↦ φ(a) ⊗ 1)` out of `(A, A)`.
    pub morphism: CoringMorphism<S>,
    /// `B ⊗_A B` as the tree `B ⊗_A B`.
    pub tree: TensorTree<S>,
}

/// Carrier `B ⊗_A B`, comultiplication `b⊗b' ↦ b⊗1⊗1⊗b'`, counit by multiplication.
pub fn descent_coring<S: Scalar>(phi: &AlgebraMorphism<S>) -> Result<Descent<S>, DgError> {
    let b = phi.target();
    let reg = DgModule::regular(b);
    let bl = Arc::new(reg.restrict(Side::Right, phi)?);
    let br = Arc::new(reg.restrict(Side::Left, phi)?);
    let bb = TensorTree::over(TensorTree::leaf(bl), TensorTree::leaf(br))?;
    let carrier = bb.module().clone();
    let four = TensorTree::over(bb.clone(), bb.clone())?;
    let unit = Block::unit(b);
    let delta = bb.map_to(&four, |w| w.apply(1, &unit).apply(2, &unit));
    let bleaf = TensorTree::leaf(Arc::new(DgModule::regular(b)));
    let counit = bb.map_to(&bleaf, |w| w.apply(0, &Block::multiplication(b)));
    let coring = Arc::new(Coring::from_projected(b.clone(), carrier, delta, counit, None)?);

    let bright = Arc::new(reg.without_left());
    let bdeg: Degrees = b.carrier().degrees().into();
    let target = TensorTree::over(TensorTree::leaf(bright.clone()), bb.clone())?;
    let coaction = Matrix::from_columns(
        target.dim(),
        (0..b.dim()).map(|i| target.project(&single(&bdeg, &unit_vec(i)).apply(0, &unit).apply(0, &unit))).collect(),
    );
    let comodule = Comodule::from_projected(coring.clone(), bright, coaction)?;

    let a = phi.source();
    let adeg: Degrees = a.carrier().degrees().into();
    let pb = Block::linear_on_factor(phi.matrix(), bdeg.clone(), 0);
    let sharp = Matrix::from_columns(bb.dim(), (0..a.dim()).map(|i| bb.project(&single(&adeg, &unit_vec(i)).apply(0, &pb).apply(1, &unit))).collect());
    let morphism = CoringMorphism::new(phi.clone(), Arc::new(Coring::trivial(a)), coring.clone(), sharp)?;
    Ok(Descent {
        coring,
        comodule,
        morphism,
        tree: bb,
    })
}

#[cfg(test)]
mod tests;

/// Search for a coring isomorphism `C → D` over one algebra.
///
/// Candidates are bimodule chain maps compatible with the counits (an affine
/// space); points are tried for invertibility and
/// compatibility with the comultiplications: first every point with
/// coordinates in `{0, ±1}` when there are few free directions, then 64
/// seeded random points.
pub fn find_coring_isomorphism<S: Scalar>(c: &Arc<Coring<S>>, d: &Arc<Coring<S>>, seed: u64) -> Option<Matrix<S>> {
    use rand::{Rng, SeedableRng};
    if !same_algebra(c.algebra(), d.algebra()) || c.dim() != d.dim() {
        return None;
    }
    let space = crate::dgalgebra::module_maps(c.carrier(), d.carrier());
    if space.is_empty() {
        return None;
    }
    let counit_of = |f: &Matrix<S>| crate::dgalgebra::flatten(&[d.counit().mul(f)]);
    let system = Matrix::from_columns(c.algebra().dim() * c.dim(), space.iter().map(counit_of).collect());
    let target = crate::dgalgebra::flatten(&[c.counit().clone()]);
    let particular = crate::linalg::solve(&system, &target).ok()??;
    let combine = |coefs: &SparseVec<S>| {
        coefs
            .iter()
            .fold(Matrix::zeros(d.dim(), c.dim()), |acc, (&i, x)| acc.combine(&space[i], x))
    };
    let base = combine(&particular);
    let free: Vec<Matrix<S>> = crate::linalg::kernel_image(&system).kernel.columns().iter().map(|v| combine(v)).collect();
    let field = c.algebra().field();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let accept = |f: &Matrix<S>| {
        if crate::linalg::rank(f) != c.dim() {
            return false;
        }
        let ff = Block::linear_on_factor(f, degrees_of(d.carrier()), 0);
        let db = c.delta_block();
        (0..c.dim()).all(|i| {
            let lhs = d.square().project(&c.leaf().word(i).apply(0, &db).apply(0, &ff).apply(1, &ff));
            lhs == d.delta().apply(f.column(i))
        })
    };
    // Canonical isomorphisms tend to have coefficients in {0, ±1}.
    if free.len() <= 6 {
        let signs = [S::zero(), S::one(), -S::one()];
        for code in 0..3usize.pow(free.len() as u32) {
            let mut rest = code;
            let mut f = base.clone();
            for k in &free {
                f = f.combine(k, &signs[rest % 3]);
                rest /= 3;
            }
            if accept(&f) {
                return Some(f);
            }
        }
    } else if accept(&base) {
        return Some(base);
    }
    for _ in 0..64 {
        let f = free
            .iter()
            .fold(base.clone(), |acc, k| acc.combine(k, &S::from_int(rng.gen_range(-7..=7), &field)));
        if accept(&f) {
            return Some(f);
        }
    }
    None
}
