use std::sync::Arc;

use crate::check::{Validation, Verdict};
use crate::complexes::ChainComplex;
use crate::dgalgebra::{
    kernel_submodule, map_module, module_map_failure, same_algebra, submodule, Block, DgError, DgModule, MapModule, Side, Submodule,
    TensorTree,
};
use crate::linalg::{kernel_image, unit_vec, Echelon, Matrix, Scalar};

use super::{degrees_of, project_pairs, Coring, CoringMorphism};

/// Right comodule: a right `A`-module `M` with `δ: M → M ⊗_A C`.
///
/// The carrier may also carry a left action, which `δ` must respect.
#[derive(Clone)]
pub struct Comodule<S> {
    coring: Arc<Coring<S>>,
    carrier: Arc<DgModule<S>>,
    leaf: TensorTree<S>,
    mc: TensorTree<S>,
    coaction: Matrix<S>,
}

impl<S: Scalar> Comodule<S> {
    /// Coaction written against the field tensor `M ⊗ C` (index `m · dim C + c`).
    pub fn new(coring: Arc<Coring<S>>, carrier: Arc<DgModule<S>>, coaction_pairs: Matrix<S>) -> Result<Self, DgError> {
        let (leaf, mc) = Self::trees(&coring, &carrier)?;
        let n = coring.dim();
        if (coaction_pairs.rows(), coaction_pairs.cols()) != (carrier.dim() * n, carrier.dim()) {
            return Err(DgError::Shape(format!("coaction must be {}x{}", carrier.dim() * n, carrier.dim())));
        }
        let coaction = project_pairs(&mc, &coaction_pairs, n);
        Ok(Comodule { coring, carrier, leaf, mc, coaction })
    }

    pub fn from_projected(coring: Arc<Coring<S>>, carrier: Arc<DgModule<S>>, coaction: Matrix<S>) -> Result<Self, DgError> {
        let (leaf, mc) = Self::trees(&coring, &carrier)?;
        if (coaction.rows(), coaction.cols()) != (mc.dim(), carrier.dim()) {
            return Err(DgError::Shape(format!("coaction must be {}x{}", mc.dim(), carrier.dim())));
        }
        Ok(Comodule { coring, carrier, leaf, mc, coaction })
    }

    fn trees(coring: &Arc<Coring<S>>, carrier: &Arc<DgModule<S>>) -> Result<(TensorTree<S>, TensorTree<S>), DgError> {
        match carrier.right_algebra() {
            None => return Err(DgError::MissingAction(Side::Right)),
            Some(a) if !same_algebra(a, coring.algebra()) => return Err(DgError::AlgebraMismatch("comodule over a different algebra".into())),
            _ => {}
        }
        let leaf = TensorTree::leaf(carrier.clone());
        let mc = TensorTree::over(leaf.clone(), coring.leaf().clone())?;
        Ok((leaf, mc))
    }

    pub fn coring(&self) -> &Arc<Coring<S>> {
        &self.coring
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

    /// `M ⊗_A C`.
    pub fn target_tree(&self) -> &TensorTree<S> {
        &self.mc
    }

    pub fn coaction(&self) -> &Matrix<S> {
        &self.coaction
    }

    pub fn with_coaction(&self, coaction: Matrix<S>) -> Result<Self, DgError> {
        Self::from_projected(self.coring.clone(), self.carrier.clone(), coaction)
    }

    pub fn coaction_block(&self) -> Block<'_, S> {
        Block::through(&self.leaf, &self.coaction, &self.mc, 0)
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("right comodule");
        v.absorb("carrier", self.carrier.validate());
        v.record("coaction is a module chain map", module_map_failure(&self.carrier, self.mc.module(), &self.coaction));
        let c = &self.coring;
        let x = self.carrier.carrier();
        let mcc = match TensorTree::over(self.mc.clone(), c.leaf().clone()) {
            Ok(t) => t,
            Err(e) => {
                v.fail("M ⊗ C ⊗ C", e.to_string());
                return v;
            }
        };
        let (db, mb, eb) = (c.delta_block(), self.coaction_block(), c.counit_block());
        let mut coassoc = None;
        let mut counit = None;
        for q in 0..self.dim() {
            let w = self.mc.word_of(self.coaction.column(q));
            if coassoc.is_none() && mcc.project(&w.apply(0, &mb)) != mcc.project(&w.apply(1, &db)) {
                coassoc = Some(format!("(δ⊗1)δ({0}) ≠ (1⊗Δ)δ({0})", x.name(q)));
            }
            let r = self.leaf.project(&w.apply(1, &eb).apply(0, &Block::right_action(&self.carrier)));
            if counit.is_none() && r != unit_vec(q) {
                counit = Some(format!("(1⊗ε)δ({0}) = {1}", x.name(q), x.name_vector(&r)));
            }
        }
        v.record("coassociativity", coassoc);
        v.record("counit", counit);
        v
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// Left comodule: a left `A`-module `N` with `δ: N → C ⊗_A N`.
#[derive(Clone)]
pub struct LeftComodule<S> {
    coring: Arc<Coring<S>>,
    carrier: Arc<DgModule<S>>,
    leaf: TensorTree<S>,
    cn: TensorTree<S>,
    coaction: Matrix<S>,
}

impl<S: Scalar> LeftComodule<S> {
    /// Coaction written against the field tensor `C ⊗ N` (index `c · dim N + n`).
    pub fn new(coring: Arc<Coring<S>>, carrier: Arc<DgModule<S>>, coaction_pairs: Matrix<S>) -> Result<Self, DgError> {
        let (leaf, cn) = Self::trees(&coring, &carrier)?;
        let n = carrier.dim();
        if (coaction_pairs.rows(), coaction_pairs.cols()) != (coring.dim() * n, n) {
            return Err(DgError::Shape(format!("coaction must be {}x{}", coring.dim() * n, n)));
        }
        let coaction = project_pairs(&cn, &coaction_pairs, n);
        Ok(LeftComodule { coring, carrier, leaf, cn, coaction })
    }

    pub fn from_projected(coring: Arc<Coring<S>>, carrier: Arc<DgModule<S>>, coaction: Matrix<S>) -> Result<Self, DgError> {
        let (leaf, cn) = Self::trees(&coring, &carrier)?;
        if (coaction.rows(), coaction.cols()) != (cn.dim(), carrier.dim()) {
            return Err(DgError::Shape(format!("coaction must be {}x{}", cn.dim(), carrier.dim())));
        }
        Ok(LeftComodule { coring, carrier, leaf, cn, coaction })
    }

    fn trees(coring: &Arc<Coring<S>>, carrier: &Arc<DgModule<S>>) -> Result<(TensorTree<S>, TensorTree<S>), DgError> {
        match carrier.left_algebra() {
            None => return Err(DgError::MissingAction(Side::Left)),
            Some(a) if !same_algebra(a, coring.algebra()) => return Err(DgError::AlgebraMismatch("comodule over a different algebra".into())),
            _ => {}
        }
        let leaf = TensorTree::leaf(carrier.clone());
        let cn = TensorTree::over(coring.leaf().clone(), leaf.clone())?;
        Ok((leaf, cn))
    }

    pub fn coring(&self) -> &Arc<Coring<S>> {
        &self.coring
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

    /// `C ⊗_A N`.
    pub fn target_tree(&self) -> &TensorTree<S> {
        &self.cn
    }

    pub fn coaction(&self) -> &Matrix<S> {
        &self.coaction
    }

    pub fn with_coaction(&self, coaction: Matrix<S>) -> Result<Self, DgError> {
        Self::from_projected(self.coring.clone(), self.carrier.clone(), coaction)
    }

    pub fn coaction_block(&self) -> Block<'_, S> {
        Block::through(&self.leaf, &self.coaction, &self.cn, 0)
    }

    pub fn validate(&self) -> Validation {
        let mut v = Validation::new("left comodule");
        v.absorb("carrier", self.carrier.validate());
        v.record("coaction is a module chain map", module_map_failure(&self.carrier, self.cn.module(), &self.coaction));
        let c = &self.coring;
        let x = self.carrier.carrier();
        let ccn = match TensorTree::over(c.square().clone(), self.leaf.clone()) {
            Ok(t) => t,
            Err(e) => {
                v.fail("C ⊗ C ⊗ N", e.to_string());
                return v;
            }
        };
        let (db, nb, eb) = (c.delta_block(), self.coaction_block(), c.counit_block());
        let mut coassoc = None;
        let mut counit = None;
        for q in 0..self.dim() {
            let w = self.cn.word_of(self.coaction.column(q));
            if coassoc.is_none() && ccn.project(&w.apply(0, &db)) != ccn.project(&w.apply(1, &nb)) {
                coassoc = Some(format!("(Δ⊗1)δ({0}) ≠ (1⊗δ)δ({0})", x.name(q)));
            }
            let r = self.leaf.project(&w.apply(0, &eb).apply(0, &Block::left_action(&self.carrier)));
            if counit.is_none() && r != unit_vec(q) {
                counit = Some(format!("(ε⊗1)δ({0}) = {1}", x.name(q), x.name_vector(&r)));
            }
        }
        v.record("coassociativity", coassoc);
        v.record("counit", counit);
        v
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// `M □_C N` inside `M ⊗_A N`, with the right coaction it inherits from a
/// right coaction on `N` when one is supplied.
#[derive(Clone)]
pub struct Cotensor<S> {
    pub tensor: TensorTree<S>,
    pub kernel: Submodule<S>,
    pub comodule: Option<Comodule<S>>,
}

impl<S: Scalar> Cotensor<S> {
    pub fn complex(&self) -> &ChainComplex<S> {
        self.kernel.module.carrier()
    }

    pub fn dim(&self) -> usize {
        self.kernel.module.dim()
    }
}

/// Equalizer of `δ_M ⊗ 1` and `1 ⊗ δ_N`.
///
/// `residual` is a right comodule structure on the carrier of `n` (over some
/// other coring); it induces one on the cotensor product.
pub fn cotensor<S: Scalar>(m: &Comodule<S>, n: &LeftComodule<S>, residual: Option<&Comodule<S>>) -> Result<Cotensor<S>, DgError> {
    if !Arc::ptr_eq(m.coring(), n.coring()) && !same_algebra(m.coring().algebra(), n.coring().algebra()) {
        return Err(DgError::AlgebraMismatch("cotensor over different corings".into()));
    }
    let mn = TensorTree::over(m.leaf().clone(), n.leaf().clone())?;
    let mcn = TensorTree::over(m.target_tree().clone(), n.leaf().clone())?;
    let (mb, nb) = (m.coaction_block(), n.coaction_block());
    let diff = mn.map_to(&mcn, |w| w.apply(0, &mb).add(&w.apply(1, &nb), &-S::one()));
    let kernel = kernel_submodule(mn.module(), &diff)?;
    let comodule = match residual {
        None => None,
        Some(r) => {
            if r.carrier().dim() != n.dim() || r.carrier().carrier() != n.carrier().carrier() {
                return Err(DgError::Shape("residual coaction lives on a different carrier".into()));
            }
            Some(residual_coaction(&mn, &kernel, r)?)
        }
    };
    Ok(Cotensor { tensor: mn, kernel, comodule })
}

/// Restrict `1 ⊗ ρ` on `M ⊗_A N` to a submodule `K`, landing in `K ⊗ E`.
fn residual_coaction<S: Scalar>(mn: &TensorTree<S>, k: &Submodule<S>, r: &Comodule<S>) -> Result<Comodule<S>, DgError> {
    let e = r.coring();
    let kmod = k.module.clone();
    let n_leaf = TensorTree::leaf(r.carrier().clone());
    let n_right = TensorTree::over(n_leaf.clone(), e.leaf().clone())?;
    // (M ⊗ N) ⊗ E, once with M ⊗ N flattened and once as a single factor.
    let nested = TensorTree::over(mn.clone(), e.leaf().clone())?;
    let flat = TensorTree::over(TensorTree::leaf(mn.module().clone()), e.leaf().clone())?;
    let ke = TensorTree::over(TensorTree::leaf(kmod.clone()), e.leaf().clone())?;
    let inc = Block::linear_on_factor(&k.inclusion, degrees_of(mn.module()), 0);
    let iota = ke.map_to(&flat, |w| w.apply(0, &inc));
    let image = Echelon::<S>::from_vectors(iota.columns());
    if image.rank() != ke.dim() {
        return Err(DgError::NonDescending("K ⊗ E → (M ⊗ N) ⊗ E is not injective".into()));
    }
    let rho = Block::through(&n_leaf, r.coaction(), &n_right, 0);
    let mut cols = Vec::with_capacity(kmod.dim());
    for v in k.inclusion.columns() {
        let img = nested.project(&mn.word_of(v).apply(1, &rho));
        match image.coordinates(&img) {
            Some(x) => cols.push(x),
            None => return Err(DgError::NonDescending("residual coaction leaves the cotensor product".into())),
        }
    }
    Comodule::from_projected(e.clone(), kmod, Matrix::from_columns(ke.dim(), cols))
}

/// `M ⊗_A C` with coaction `1 ⊗ Δ`.
pub fn cofree_comodule<S: Scalar>(m: &Arc<DgModule<S>>, c: &Arc<Coring<S>>) -> Result<Comodule<S>, DgError> {
    let mc = TensorTree::over(TensorTree::leaf(m.clone()), c.leaf().clone())?;
    let mcc = TensorTree::over(mc.clone(), c.leaf().clone())?;
    let db = c.delta_block();
    let coaction = mc.map_to(&mcc, |w| w.apply(1, &db));
    Comodule::from_projected(c.clone(), mc.module().clone(), coaction)
}

/// `f_*(M, δ) = (M, (1 ⊗ f)δ)` for a map of `A`-corings.
pub fn pushforward<S: Scalar>(f: &CoringMorphism<S>, m: &Comodule<S>) -> Result<Comodule<S>, DgError> {
    if !f.is_over_identity() {
        return Err(DgError::AlgebraMismatch("pushforward needs a map of corings over one algebra".into()));
    }
    let d = f.target();
    let md = TensorTree::over(m.leaf().clone(), d.leaf().clone())?;
    let fb = Block::linear_on_factor(f.sharp(), degrees_of(d.carrier()), 0);
    let coaction = m.target_tree().map_to(&md, |w| w.apply(1, &fb)).mul(m.coaction());
    Comodule::from_projected(d.clone(), m.carrier().clone(), coaction)
}

/// `N □_D C` with `C` a left `D`-comodule through `(f ⊗ 1)Δ`.
#[derive(Clone)]
pub struct Pullback<S> {
    pub comodule: Comodule<S>,
    pub cotensor: Cotensor<S>,
    /// `Certified` when the source coring was certified flat, so the formula
    /// computes the right adjoint; otherwise the value is formula-level only.
    pub level: Verdict,
}

pub fn pullback<S: Scalar>(f: &CoringMorphism<S>, n: &Comodule<S>, flatness: Verdict) -> Result<Pullback<S>, DgError> {
    if !f.is_over_identity() {
        return Err(DgError::AlgebraMismatch("pullback needs a map of corings over one algebra".into()));
    }
    let (c, d) = (f.source(), f.target());
    let dc = TensorTree::over(d.leaf().clone(), c.leaf().clone())?;
    let fb = Block::linear_on_factor(f.sharp(), degrees_of(d.carrier()), 0);
    let left = c.square().map_to(&dc, |w| w.apply(0, &fb)).mul(c.delta());
    let c_left = LeftComodule::from_projected(d.clone(), c.carrier().clone(), left)?;
    let right = c.as_right_comodule();
    let cot = cotensor(n, &c_left, Some(&right))?;
    let comodule = cot.comodule.clone().expect("residual coaction requested");
    Ok(Pullback {
        comodule,
        cotensor: cot,
        level: if flatness == Verdict::Certified { Verdict::Certified } else { Verdict::Conditional },
    })
}

/// `Map_A^C(M, N)`: the `A`-linear maps commuting with the coactions.
#[derive(Clone)]
pub struct MapComodule<S> {
    pub maps: MapModule<S>,
    /// Columns span the equalizer in `Map_A(M, N)` coordinates.
    pub kernel: Submodule<S>,
}

impl<S: Scalar> MapComodule<S> {
    pub fn complex(&self) -> &ChainComplex<S> {
        self.kernel.module.carrier()
    }

    /// Matrix (target × source) of the `i`-th basis map.
    pub fn map_matrix(&self, i: usize, target_dim: usize) -> Matrix<S> {
        self.maps.as_matrix(self.kernel.inclusion.column(i), target_dim)
    }
}

pub fn map_comodule<S: Scalar>(m: &Comodule<S>, n: &Comodule<S>) -> Result<MapComodule<S>, DgError> {
    if !same_algebra(m.coring().algebra(), n.coring().algebra()) {
        return Err(DgError::AlgebraMismatch("comodules over different corings".into()));
    }
    let ms = Arc::new(m.carrier().without_left());
    let ns = Arc::new(n.carrier().without_left());
    let maps = map_module(&ms, &ns)?;
    let nd = n.dim();
    let ncd = n.target_tree().dim();
    let n_deg = degrees_of(n.carrier());
    let mut cols = Vec::with_capacity(maps.dim());
    for i in 0..maps.dim() {
        let f = maps.as_matrix(&unit_vec(i), nd);
        let k = maps.module.carrier().degree(i);
        let fb = Block::linear_on_factor(&f, n_deg.clone(), k);
        let mut defect = n.coaction().mul(&f);
        let pushed = Matrix::from_columns(
            ncd,
            (0..m.dim()).map(|q| n.target_tree().project(&m.target_tree().word_of(m.coaction().column(q)).apply(0, &fb))).collect(),
        );
        defect = defect.sub(&pushed);
        cols.push(crate::dgalgebra::flatten(&[defect]));
    }
    let height = ncd * m.dim();
    let eq = kernel_image(&Matrix::from_columns(height, cols)).kernel.into_columns();
    let plain = DgModule::plain(maps.module.carrier().clone());
    let kernel = submodule(&plain, eq)?;
    Ok(MapComodule { maps, kernel })
}
