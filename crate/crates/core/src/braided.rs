//! Braided bimodules between corings and the functors they induce.

use std::sync::Arc;

use crate::check::Validation;
use crate::corings::{Comodule, Coring, CoringMorphism};
use crate::dgalgebra::{module_map_failure, same_algebra, Block, DgError, DgModule, Side, TensorTree, Word};
use crate::linalg::{Matrix, Scalar};

/// `(X, T)` with `X` an `A`-`B`-bimodule and `T: C ⊗_A X → X ⊗_B D`.
#[derive(Clone)]
pub struct BraidedBimodule<S> {
    source: Arc<Coring<S>>,
    target: Arc<Coring<S>>,
    carrier: Arc<DgModule<S>>,
    leaf: TensorTree<S>,
    cx: TensorTree<S>,
    xd: TensorTree<S>,
    braiding: Matrix<S>,
}

fn same_coring<S: Scalar>(a: &Arc<Coring<S>>, b: &Arc<Coring<S>>) -> bool {
    Arc::ptr_eq(a, b)
        || (same_algebra(a.algebra(), b.algebra())
            && a.carrier() == b.carrier()
            && a.delta() == b.delta()
            && a.counit() == b.counit())
}

impl<S: Scalar> BraidedBimodule<S> {
    /// Braiding written between field tensors: column `c · dim X + x`, row
    /// `x' · dim D + d`. Fails unless it descends to the quotients.
    pub fn new(source: Arc<Coring<S>>, target: Arc<Coring<S>>, carrier: Arc<DgModule<S>>, pairs: Matrix<S>) -> Result<Self, DgError> {
        let (leaf, cx, xd) = Self::trees(&source, &target, &carrier)?;
        let (nc, nx, nd) = (source.dim(), carrier.dim(), target.dim());
        if (pairs.rows(), pairs.cols()) != (nx * nd, nc * nx) {
            return Err(DgError::Shape(format!("braiding must be {}x{}", nx * nd, nc * nx)));
        }
        let lift = |col: usize| {
            let mut w = Word::zero(xd.leaf_degrees());
            for (&k, c) in pairs.column(col) {
                w.add_term(vec![k / nd, k % nd], c.clone());
            }
            xd.project(&w)
        };
        let braiding = Matrix::from_columns(
            xd.dim(),
            (0..cx.dim())
                .map(|q| {
                    let t = cx.rep_tuple(q);
                    lift(t[0] * nx + t[1])
                })
                .collect(),
        );
        for c in 0..nc {
            for x in 0..nx {
                let v = cx.project_tuple(&[c, x]);
                if braiding.apply(&v) != lift(c * nx + x) {
                    return Err(DgError::NonDescending(format!(
                        "braiding of {}⊗{}",
                        source.carrier().carrier().name(c),
                        carrier.carrier().name(x)
                    )));
                }
            }
        }
        Ok(BraidedBimodule {
            source,
            target,
            carrier,
            leaf,
            cx,
            xd,
            braiding,
        })
    }

    pub fn from_projected(source: Arc<Coring<S>>, target: Arc<Coring<S>>, carrier: Arc<DgModule<S>>, braiding: Matrix<S>) -> Result<Self, DgError> {
        let (leaf, cx, xd) = Self::trees(&source, &target, &carrier)?;
        if (braiding.rows(), braiding.cols()) != (xd.dim(), cx.dim()) {
            return Err(DgError::Shape(format!("braiding must be {}x{}", xd.dim(), cx.dim())));
        }
        Ok(BraidedBimodule {
            source,
            target,
            carrier,
            leaf,
            cx,
            xd,
            braiding,
        })
    }

    fn trees(source: &Arc<Coring<S>>, target: &Arc<Coring<S>>, carrier: &Arc<DgModule<S>>) -> Result<(TensorTree<S>, TensorTree<S>, TensorTree<S>), DgError> {
        match (carrier.left_algebra(), carrier.right_algebra()) {
            (Some(a), Some(b)) if same_algebra(a, source.algebra()) && same_algebra(b, target.algebra()) => {}
            (None, _) => return Err(DgError::MissingAction(Side::Left)),
            (_, None) => return Err(DgError::MissingAction(Side::Right)),
            _ => return Err(DgError::AlgebraMismatch("carrier is not a bimodule over the corings' algebras".into())),
        }
        let leaf = TensorTree::leaf(carrier.clone());
        let cx = TensorTree::over(source.leaf().clone(), leaf.clone())?;
        let xd = TensorTree::over(leaf.clone(), target.leaf().clone())?;
        Ok((leaf, cx, xd))
    }

    pub fn source(&self) -> &Arc<Coring<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Coring<S>> {
        &self.target
    }

    pub fn carrier(&self) -> &Arc<DgModule<S>> {
        &self.carrier
    }

    pub fn leaf(&self) -> &TensorTree<S> {
        &self.leaf
    }

    /// `C ⊗_A X`.
    pub fn domain_tree(&self) -> &TensorTree<S> {
        &self.cx
    }

    /// `X ⊗_B D`.
    pub fn codomain_tree(&self) -> &TensorTree<S> {
        &self.xd
    }

    pub fn braiding(&self) -> &Matrix<S> {
        &self.braiding
    }

    pub fn with_braiding(&self, braiding: Matrix<S>) -> Result<Self, DgError> {
        Self::from_projected(self.source.clone(), self.target.clone(), self.carrier.clone(), braiding)
    }

    pub fn braiding_block(&self) -> Block<'_, S> {
        Block::through(&self.cx, &self.braiding, &self.xd, 0)
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("braided bimodule");
        v.absorb("carrier", self.carrier.validate());
        v.record("braiding is a bimodule chain map", module_map_failure(self.cx.module(), self.xd.module(), &self.braiding));
        let (c, d) = (&self.source, &self.target);
        let xdd = match TensorTree::over(self.xd.clone(), d.leaf().clone()) {
            Ok(t) => t,
            Err(e) => {
                v.fail("X ⊗ D ⊗ D", e.to_string());
                return v;
            }
        };
        let tb = self.braiding_block();
        let (dc, dd) = (c.delta_block(), d.delta_block());
        let (ec, ed) = (c.counit_block(), d.counit_block());
        let mut pentagon = None;
        let mut counit = None;
        for q in 0..self.cx.dim() {
            let w = self.cx.word(q);
            let lhs = xdd.project(&w.apply(0, &dc).apply(1, &tb).apply(0, &tb));
            let rhs = xdd.project(&w.apply(0, &tb).apply(1, &dd));
            if pentagon.is_none() && lhs != rhs {
                pentagon = Some(format!("pentagon fails on {}", self.cx.module().carrier().name(q)));
            }
            let lhs = self.leaf.project(&w.apply(0, &tb).apply(1, &ed).apply(0, &Block::right_action(&self.carrier)));
            let rhs = self.leaf.project(&w.apply(0, &ec).apply(0, &Block::left_action(&self.carrier)));
            if counit.is_none() && lhs != rhs {
                counit = Some(format!("counit axiom fails on {}", self.cx.module().carrier().name(q)));
            }
        }
        v.record("pentagon", pentagon);
        v.record("counit", counit);
        v
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// The unit 1-cell on `(A, C)`: carrier `A`, braiding `c ⊗ a ↦ 1 ⊗ c·a`.
pub fn identity_braided<S: Scalar>(c: &Arc<Coring<S>>) -> BraidedBimodule<S> {
    let a = c.algebra();
    let carrier = Arc::new(DgModule::regular(a));
    let (leaf, cx, xd) = BraidedBimodule::trees(c, c, &carrier).expect("regular bimodule");
    let unit = Block::unit(a);
    let braiding = cx.map_to(&xd, |w| w.apply(0, &Block::right_action(c.carrier())).apply(0, &unit));
    BraidedBimodule {
        source: c.clone(),
        target: c.clone(),
        carrier,
        leaf,
        cx,
        xd,
        braiding,
    }
}

/// Composite `(X ⊗ X', (1 ⊗ T')(T ⊗ 1))`.
pub fn compose_braided<S: Scalar>(first: &BraidedBimodule<S>, second: &BraidedBimodule<S>) -> Result<BraidedBimodule<S>, DgError> {
    if !same_coring(&first.target, &second.source) {
        return Err(DgError::AlgebraMismatch("middle corings differ".into()));
    }
    let xx = TensorTree::over(first.leaf.clone(), second.leaf.clone())?;
    let source = TensorTree::over(first.source.leaf().clone(), xx.clone())?;
    let target = TensorTree::over(xx.clone(), second.target.leaf().clone())?;
    let (t1, t2) = (first.braiding_block(), second.braiding_block());
    let braiding = source.map_to(&target, |w| w.apply(0, &t1).apply(1, &t2));
    BraidedBimodule::from_projected(first.source.clone(), second.target.clone(), xx.module().clone(), braiding)
}

/// `(ₐB_B, c ⊗ b ↦ 1 ⊗ f♯(c)·b)` for a coring map `(φ, f)`.
pub fn braided_from_coring_morphism<S: Scalar>(m: &CoringMorphism<S>) -> Result<BraidedBimodule<S>, DgError> {
    let b = m.phi().target();
    let carrier = Arc::new(DgModule::regular(b).restrict(Side::Left, m.phi())?);
    let (leaf, cx, xd) = BraidedBimodule::trees(m.source(), m.target(), &carrier)?;
    let d = m.target().carrier();
    let fb = Block::linear_on_factor(m.sharp(), d.degrees().into(), 0);
    let unit = Block::unit(b);
    let braiding = cx.map_to(&xd, |w| w.apply(0, &fb).apply(0, &Block::right_action(d)).apply(0, &unit));
    Ok(BraidedBimodule {
        source: m.source().clone(),
        target: m.target().clone(),
        carrier,
        leaf,
        cx,
        xd,
        braiding,
    })
}

/// `T_*(M) = (M ⊗_A X, (1 ⊗ T)(δ ⊗ 1))`.
pub fn induce_comodule<S: Scalar>(b: &BraidedBimodule<S>, m: &Comodule<S>) -> Result<Comodule<S>, DgError> {
    if !same_coring(m.coring(), &b.source) {
        return Err(DgError::AlgebraMismatch("comodule is not over the source coring".into()));
    }
    let mx = TensorTree::over(m.leaf().clone(), b.leaf.clone())?;
    let mxd = TensorTree::over(mx.clone(), b.target.leaf().clone())?;
    let (mb, tb) = (m.coaction_block(), b.braiding_block());
    let coaction = mx.map_to(&mxd, |w| w.apply(0, &mb).apply(1, &tb));
    Comodule::from_projected(b.target.clone(), mx.module().clone(), coaction)
}

/// `T_*` together with the tree `M ⊗_A X` it was computed on.
pub fn induce_comodule_tree<S: Scalar>(b: &BraidedBimodule<S>, m: &Comodule<S>) -> Result<(Comodule<S>, TensorTree<S>), DgError> {
    let c = induce_comodule(b, m)?;
    let mx = TensorTree::over(m.leaf().clone(), b.leaf.clone())?;
    Ok((c, mx))
}

/// Compare two braided bimodules on the same corings through a module
/// isomorphism `φ: X → X'` of carriers: `(φ ⊗ 1)T = T'(1 ⊗ φ)`.
pub fn braidings_agree<S: Scalar>(b: &BraidedBimodule<S>, other: &BraidedBimodule<S>, phi: &Matrix<S>) -> bool {
    let pb = Block::linear_on_factor(phi, other.carrier.degrees().into(), 0);
    let (t, t2) = (b.braiding_block(), other.braiding_block());
    (0..b.cx.dim()).all(|q| {
        let w = b.cx.word(q);
        other.xd.project(&w.apply(0, &t).apply(0, &pb)) == other.xd.project(&w.apply(1, &pb).apply(0, &t2))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corings::{cofree_comodule, CoringMorphism};
    use crate::fixtures::*;
    use crate::linalg::ScalarField;
    use crate::Q;

    fn qf() -> ScalarField {
        ScalarField::Rationals
    }

    #[test]
    fn identity_and_morphism_braidings_validate() {
        let c = primitive_coalgebra::<Q>(&qf());
        let id = identity_braided(&c);
        assert!(id.is_valid(), "{}", id.validate());
        let pair = copure_pair::<Q>(&qf());
        let b = braided_from_coring_morphism(&pair.inclusion).unwrap();
        assert!(b.is_valid(), "{}", b.validate());
        let f5 = split_descent::<Q>(&qf());
        let b5 = braided_from_coring_morphism(&f5.descent.morphism).unwrap();
        assert!(b5.is_valid(), "{}", b5.validate());
    }

    #[test]
    fn perturbed_braiding_breaks_an_axiom() {
        let pair = copure_pair::<Q>(&qf());
        let b = braided_from_coring_morphism(&pair.inclusion).unwrap();
        let mut t = b.braiding().clone();
        let (r, c, v) = t.triplets().next().map(|(r, c, v)| (r, c, v.clone())).unwrap();
        t.set(r, c, v + Q::from_int(2, &qf()));
        assert!(!b.with_braiding(t).unwrap().is_valid());
    }

    #[test]
    fn composing_with_identity() {
        let pair = copure_pair::<Q>(&qf());
        let b = braided_from_coring_morphism(&pair.inclusion).unwrap();
        let id = identity_braided(&pair.small);
        let comp = compose_braided(&id, &b).unwrap();
        assert!(comp.is_valid(), "{}", comp.validate());
        assert_eq!(comp.carrier().dim(), b.carrier().dim());
        let iso = crate::dgalgebra::find_module_isomorphism(comp.carrier(), b.carrier(), 1).unwrap();
        assert!(braidings_agree(&comp, &b, &iso));
    }

    #[test]
    fn composite_of_morphisms() {
        let pair = copure_pair::<Q>(&qf());
        let f = &pair.coaugmentation;
        let g = &pair.inclusion;
        let gf = g.compose(f);
        let comp = compose_braided(&braided_from_coring_morphism(f).unwrap(), &braided_from_coring_morphism(g).unwrap()).unwrap();
        let direct = braided_from_coring_morphism(&gf).unwrap();
        let iso = crate::dgalgebra::find_module_isomorphism(comp.carrier(), direct.carrier(), 3).unwrap();
        assert!(braidings_agree(&comp, &direct, &iso));
    }

    #[test]
    fn induce_along_counit_is_forgetful() {
        let c = primitive_coalgebra::<Q>(&qf());
        let k = c.algebra().clone();
        let triv = Arc::new(crate::corings::Coring::trivial(&k));
        let eps = CoringMorphism::counit_of(&c, &triv).unwrap();
        let b = braided_from_coring_morphism(&eps).unwrap();
        let m = cofree_comodule(&ground_samples(&k)[1], &c).unwrap();
        let u = induce_comodule(&b, &m).unwrap();
        assert!(u.is_valid());
        assert_eq!(u.dim(), m.dim());
    }
}
