//! The bundled example structures, built directly.
//!
//! `F1` trivial algebra and coring, `F2` `k[t]/t²`, `F3` the 2×2 matrix
//! Morita context, `F4` the coalgebra on one primitive of degree 2, `F5` the
//! descent data of `k → k × k`, `F6` dual numbers in degree 1 with a path
//! object. [`copure_pair`] adds an acyclic summand to `F4`.

use std::sync::Arc;

use crate::complexes::ChainComplex;
use crate::corings::{descent_coring, Comodule, Coring, CoringMorphism, Descent, LeftComodule};
use crate::dgalgebra::{Action, AlgebraMorphism, DgAlgebra, DgError, DgModule, ModuleMap};
use crate::linalg::{Matrix, Scalar, ScalarField};

fn s<S: Scalar>(n: i64, field: &ScalarField) -> S {
    S::from_int(n, field)
}

fn complex<S: Scalar>(field: &ScalarField, basis: &[(&str, i32)], d: &[(usize, usize, i64)]) -> ChainComplex<S> {
    let n = basis.len();
    let dm = Matrix::from_triplets(n, n, d.iter().map(|&(r, c, v)| (r, c, s(v, field)))).expect("fixture differential");
    ChainComplex::new(field.clone(), basis.iter().map(|(a, b)| (a.to_string(), *b)).collect(), dm).expect("fixture complex")
}

/// Algebra from products `a·b = coef·c` listed as `(a, b, c, coef)`.
pub fn algebra<S: Scalar>(
    field: &ScalarField,
    basis: &[(&str, i32)],
    d: &[(usize, usize, i64)],
    unit: &[(usize, i64)],
    products: &[(usize, usize, usize, i64)],
) -> Arc<DgAlgebra<S>> {
    let n = basis.len();
    let c = complex(field, basis, d);
    let mult = Matrix::from_triplets(n, n * n, products.iter().map(|&(a, b, r, v)| (r, a * n + b, s(v, field)))).expect("fixture product");
    let unit = unit.iter().map(|&(i, v)| (i, s(v, field))).collect();
    Arc::new(DgAlgebra::new(c, unit, mult).expect("fixture algebra"))
}

/// A complex as a bimodule over the ground field.
pub fn ground_bimodule<S: Scalar>(k: &Arc<DgAlgebra<S>>, carrier: ChainComplex<S>) -> DgModule<S> {
    let n = carrier.dim();
    let act = Action {
        algebra: k.clone(),
        table: Matrix::identity(n),
    };
    DgModule::new(carrier, Some(act.clone()), Some(act)).expect("ground bimodule")
}

/// A complex as a right module over the ground field.
pub fn ground_right<S: Scalar>(k: &Arc<DgAlgebra<S>>, carrier: ChainComplex<S>) -> DgModule<S> {
    ground_bimodule(k, carrier).without_left()
}

pub fn ground<S: Scalar>(field: &ScalarField) -> Arc<DgAlgebra<S>> {
    Arc::new(DgAlgebra::ground(field.clone()))
}

/// `F2`: `k[t]/t²` with `|t| = 0`.
pub fn dual_numbers<S: Scalar>(field: &ScalarField) -> Arc<DgAlgebra<S>> {
    algebra(field, &[("1", 0), ("t", 0)], &[], &[(0, 1)], &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)])
}

/// `F6`: `k[ε]/ε²` with `|ε| = 1`.
pub fn odd_dual_numbers<S: Scalar>(field: &ScalarField) -> Arc<DgAlgebra<S>> {
    algebra(field, &[("1", 0), ("e", 1)], &[], &[(0, 1)], &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)])
}

/// `F3`: `A = M₂(k)` acting on `X = k²` from the left, `B = k` on the right.
pub struct MatrixMorita<S> {
    pub a: Arc<DgAlgebra<S>>,
    pub b: Arc<DgAlgebra<S>>,
    pub x: Arc<DgModule<S>>,
}

pub fn matrix_morita<S: Scalar>(field: &ScalarField) -> MatrixMorita<S> {
    let idx = |i: usize, j: usize| 2 * i + j;
    let mut products = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for l in 0..2 {
                products.push((idx(i, j), idx(j, l), idx(i, l), 1));
            }
        }
    }
    let a = algebra(field, &[("e11", 0), ("e12", 0), ("e21", 0), ("e22", 0)], &[], &[(0, 1), (3, 1)], &products);
    let b = ground(field);
    let carrier = complex(field, &[("v1", 0), ("v2", 0)], &[]);
    // e_ij · v_j = v_i, column e·2 + v
    let mut left = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            left.push((i, idx(i, j) * 2 + j, s(1, field)));
        }
    }
    let left = Action {
        algebra: a.clone(),
        table: Matrix::from_triplets(2, 8, left).unwrap(),
    };
    let right = Action {
        algebra: b.clone(),
        table: Matrix::identity(2),
    };
    let x = Arc::new(DgModule::new(carrier, Some(left), Some(right)).unwrap());
    MatrixMorita { a, b, x }
}

/// `F4`: `k⟨1, x⟩` with `|x| = 2` and `x` primitive, coaugmented.
pub fn primitive_coalgebra<S: Scalar>(field: &ScalarField) -> Arc<Coring<S>> {
    let k = ground(field);
    let carrier = Arc::new(ground_bimodule(&k, complex(field, &[("1", 0), ("x", 2)], &[])));
    let one = s::<S>(1, field);
    let delta = Matrix::from_triplets(4, 2, [(0, 0, one.clone()), (2, 1, one.clone()), (1, 1, one.clone())]).unwrap();
    let counit = Matrix::from_triplets(1, 2, [(0, 0, one.clone())]).unwrap();
    let eta = Matrix::from_triplets(2, 1, [(0, 0, one)]).unwrap();
    Arc::new(Coring::new(k, carrier, delta, counit, Some(eta)).expect("F4"))
}

/// `k⟨1, x, y, z⟩` with `|x| = |z| = 2`, `|y| = 3`, `dy = z`, all primitive.
pub fn acyclic_extension<S: Scalar>(field: &ScalarField, k: &Arc<DgAlgebra<S>>) -> Arc<Coring<S>> {
    let carrier = Arc::new(ground_bimodule(k, complex(field, &[("1", 0), ("x", 2), ("y", 3), ("z", 2)], &[(3, 2, 1)])));
    let one = s::<S>(1, field);
    let mut delta = vec![(0, 0, one.clone())];
    for g in 1..4 {
        delta.push((g * 4, g, one.clone()));
        delta.push((g, g, one.clone()));
    }
    let delta = Matrix::from_triplets(16, 4, delta).unwrap();
    let counit = Matrix::from_triplets(1, 4, [(0, 0, one.clone())]).unwrap();
    let eta = Matrix::from_triplets(4, 1, [(0, 0, one)]).unwrap();
    Arc::new(Coring::new(k.clone(), carrier, delta, counit, Some(eta)).expect("acyclic extension"))
}

/// The inclusion `F4 → F4 ⊕ ⟨y, z⟩` (a quasi-isomorphism of corings) and
/// the coaugmentation `k → F4` (not one).
pub struct CopurePair<S> {
    pub small: Arc<Coring<S>>,
    pub large: Arc<Coring<S>>,
    pub inclusion: CoringMorphism<S>,
    pub trivial: Arc<Coring<S>>,
    pub coaugmentation: CoringMorphism<S>,
}

pub fn copure_pair<S: Scalar>(field: &ScalarField) -> CopurePair<S> {
    let small = primitive_coalgebra(field);
    let k = small.algebra().clone();
    let large = acyclic_extension(field, &k);
    let one = s::<S>(1, field);
    let inc = Matrix::from_triplets(4, 2, [(0, 0, one.clone()), (1, 1, one)]).unwrap();
    let inclusion = CoringMorphism::over_identity(small.clone(), large.clone(), inc).unwrap();
    let trivial = Arc::new(Coring::trivial(&k));
    let coaugmentation = CoringMorphism::over_identity(trivial.clone(), small.clone(), small.coaugmentation().unwrap().clone()).unwrap();
    CopurePair {
        small,
        large,
        inclusion,
        trivial,
        coaugmentation,
    }
}

/// `k` as a right and a left comodule over a coaugmented coalgebra over `k`,
/// with coaction `1 ↦ 1 ⊗ 1`.
pub fn trivial_comodules<S: Scalar>(c: &Arc<Coring<S>>) -> Result<(Comodule<S>, LeftComodule<S>), DgError> {
    let field = c.algebra().field();
    let k = c.algebra().clone();
    let eta = c.coaugmentation().ok_or_else(|| DgError::Shape("coring is not coaugmented".into()))?;
    let unit = complex::<S>(&field, &[("1", 0)], &[]);
    let m = Arc::new(ground_bimodule(&k, unit));
    let pairs = Matrix::from_columns(c.dim(), vec![eta.column(0).clone()]);
    let right = Comodule::new(c.clone(), Arc::new(m.without_left()), pairs.clone())?;
    let left = LeftComodule::new(c.clone(), Arc::new(m.without_right()), pairs)?;
    Ok((right, left))
}

/// `F5`: `φ: k → k × k`.
pub struct DescentFixture<S> {
    pub a: Arc<DgAlgebra<S>>,
    pub b: Arc<DgAlgebra<S>>,
    pub phi: AlgebraMorphism<S>,
    pub descent: Descent<S>,
}

pub fn split_descent<S: Scalar>(field: &ScalarField) -> DescentFixture<S> {
    let a = ground(field);
    let b = algebra(field, &[("e1", 0), ("e2", 0)], &[], &[(0, 1), (1, 1)], &[(0, 0, 0, 1), (1, 1, 1, 1)]);
    let one = s::<S>(1, field);
    let phi = AlgebraMorphism::new(a.clone(), b.clone(), Matrix::from_triplets(2, 1, [(0, 0, one.clone()), (1, 0, one)]).unwrap()).unwrap();
    let descent = descent_coring(&phi).expect("F5 descent coring");
    DescentFixture { a, b, phi, descent }
}

/// `F6`: the path object of `A = k[ε]/ε²` as a right module over itself.
pub struct PathFixture<S> {
    pub a: Arc<DgAlgebra<S>>,
    pub module: Arc<DgModule<S>>,
    pub path: Arc<DgModule<S>>,
    pub projection: ModuleMap<S>,
}

pub fn path_fixture<S: Scalar>(field: &ScalarField) -> PathFixture<S> {
    let a = odd_dual_numbers(field);
    let module = Arc::new(DgModule::regular(&a).without_left());
    let (path, projection) = module.path_right().expect("path object");
    PathFixture {
        a,
        module,
        path: Arc::new(path),
        projection,
    }
}

/// `k`, `k²` and `cone(id_k)` as right modules over the ground field.
pub fn ground_samples<S: Scalar>(k: &Arc<DgAlgebra<S>>) -> Vec<Arc<DgModule<S>>> {
    let field = k.field();
    vec![
        Arc::new(ground_right(k, complex(&field, &[("u", 0)], &[]))),
        Arc::new(ground_right(k, complex(&field, &[("u1", 0), ("u2", 0)], &[]))),
        Arc::new(ground_right(k, complex(&field, &[("u", 0), ("su", 1)], &[(0, 1, -1)]))),
    ]
}

/// `A`, `A ⊕ s⁻¹A` and a seeded random complex of dimension 3, as right
/// modules over the ground field.
pub fn descent_samples<S: Scalar>(k: &Arc<DgAlgebra<S>>, seed: u64) -> Vec<Arc<DgModule<S>>> {
    use rand::{Rng, SeedableRng};
    let field = k.field();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let degs: Vec<i32> = (0..3).map(|_| rng.gen_range(0..3)).collect();
    let names = ["r0", "r1", "r2"];
    let basis: Vec<(&str, i32)> = names.iter().copied().zip(degs.iter().copied()).collect();
    // A random differential of rank at most one between adjacent degrees.
    let mut d = Vec::new();
    if let Some((i, j)) = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).find(|&(i, j)| degs[j] == degs[i] + 1) {
        d.push((i, j, rng.gen_range(1..5)));
    }
    vec![
        Arc::new(ground_right(k, complex(&field, &[("1", 0)], &[]))),
        Arc::new(ground_right(k, complex(&field, &[("1", 0), ("s⁻¹1", -1)], &[]))),
        Arc::new(ground_right(k, complex(&field, &basis, &d))),
    ]
}

/// Over `A = k[t]/t²`, `C = A ⊕ kz` with `z` primitive and `t·z = z·t = 0`,
/// together with `g = t·−: A → A`, whose kernel `C` fails to preserve.
pub fn non_flat_example<S: Scalar>(field: &ScalarField) -> (Coring<S>, ModuleMap<S>) {
    let a = dual_numbers::<S>(field);
    let one = s::<S>(1, field);
    let carrier = complex(field, &[("1", 0), ("t", 0), ("z", 0)], &[]);
    // left: column a·3 + x; right: column x·2 + a
    let left = [(0, 0), (1, 1), (2, 2), (1, 3)].map(|(r, c)| (r, c, one.clone()));
    let right = [(0, 0), (1, 2), (2, 4), (1, 1)].map(|(r, c)| (r, c, one.clone()));
    let m = DgModule::new(
        carrier,
        Some(Action {
            algebra: a.clone(),
            table: Matrix::from_triplets(3, 6, left).unwrap(),
        }),
        Some(Action {
            algebra: a.clone(),
            table: Matrix::from_triplets(3, 6, right).unwrap(),
        }),
    )
    .unwrap();
    let delta = Matrix::from_triplets(9, 3, [(0, 0), (3, 1), (6, 2), (2, 2)].map(|(r, c)| (r, c, one.clone()))).unwrap();
    let counit = Matrix::from_triplets(2, 3, [(0, 0, one.clone()), (1, 1, one.clone())]).unwrap();
    let c = Coring::new(a.clone(), Arc::new(m), delta, counit, None).unwrap();
    let reg = Arc::new(DgModule::regular(&a).without_left());
    let g = ModuleMap::new(reg.clone(), reg, Matrix::from_triplets(2, 2, [(1, 0, one)]).unwrap()).unwrap();
    (c, g)
}

/// `k` as a `k`-`k[t]/t²`-bimodule with `t` acting by zero; it has no right dual.
pub fn residue_bimodule<S: Scalar>(field: &ScalarField) -> Arc<DgModule<S>> {
    let k = ground(field);
    let b = dual_numbers::<S>(field);
    let carrier = complex(field, &[("v", 0)], &[]);
    let left = Action {
        algebra: k,
        table: Matrix::identity(1),
    };
    let right = Action {
        algebra: b,
        table: Matrix::from_triplets(1, 2, [(0, 0, s::<S>(1, field))]).unwrap(),
    };
    Arc::new(DgModule::new(carrier, Some(left), Some(right)).unwrap())
}

/// `k⟨1, a, b, e⟩` with `|a| = 2`, `|b| = 3`, `|e| = 5`, `db = a`,
/// `a`, `b` primitive and `Δe = e⊗1 + 1⊗e + a⊗b − b⊗a`; coaugmented.
pub fn dg_coalgebra<S: Scalar>(field: &ScalarField) -> Arc<Coring<S>> {
    let k = ground(field);
    let carrier = Arc::new(ground_bimodule(&k, complex(field, &[("1", 0), ("a", 2), ("b", 3), ("e", 5)], &[(1, 2, 1)])));
    let pair = |i: usize, j: usize| i * 4 + j;
    let mut delta = vec![(pair(0, 0), 0, 1)];
    for g in 1..4 {
        delta.push((pair(g, 0), g, 1));
        delta.push((pair(0, g), g, 1));
    }
    delta.push((pair(1, 2), 3, 1));
    delta.push((pair(2, 1), 3, -1));
    let delta = Matrix::from_triplets(16, 4, delta.into_iter().map(|(r, c, v)| (r, c, s(v, field)))).unwrap();
    let counit = Matrix::from_triplets(1, 4, [(0, 0, s::<S>(1, field))]).unwrap();
    let eta = Matrix::from_triplets(4, 1, [(0, 0, s::<S>(1, field))]).unwrap();
    Arc::new(Coring::new(k, carrier, delta, counit, Some(eta)).expect("dg coalgebra"))
}

/// The six bundled documents, in order, as exporters ready to build or save.
pub fn bundled<S: Scalar>(field: &ScalarField) -> Vec<(&'static str, crate::document::Exporter<S>)> {
    use crate::braided::identity_braided;
    use crate::corings::cofree_comodule;
    use crate::document::Exporter;
    use crate::duality::{extension_witness, find_dual_witness, DualSearch};

    let mut out = Vec::new();
    let k = ground::<S>(field);

    // F1: the ground field as algebra and coring.
    let mut e = Exporter::new(field.clone());
    e.algebra("k", &k);
    let c = Arc::new(Coring::trivial(&k));
    e.coring("C", &c);
    for (i, n) in ground_samples(&k).iter().enumerate() {
        e.module(&format!("N{}", i + 1), n);
    }
    let (r, l) = trivial_comodules(&c).expect("F1 comodules");
    e.comodule("K", &r);
    e.left_comodule("KL", &l);
    e.comodule("CR", &c.as_right_comodule());
    e.left_comodule("CL", &c.as_left_comodule());
    e.coring_map("id", &CoringMorphism::identity(&c));
    e.braiding("T", &identity_braided(&c));
    let w = extension_witness(&AlgebraMorphism::identity(&k)).expect("F1 witness");
    e.module("X", &w.x);
    e.module("Y", &w.y);
    e.witness("W", &w);
    out.push(("F1", e));

    // F2: k[t]/t² with its trivial coring and a non-flat coring.
    let mut e = Exporter::new(field.clone());
    let a = dual_numbers::<S>(field);
    e.algebra("A", &a);
    let c = Arc::new(Coring::trivial(&a));
    e.coring("C", &c);
    let reg = Arc::new(DgModule::regular(&a).without_left());
    e.module("Reg", &reg);
    let aa = Arc::new(DgModule::regular(&a));
    e.module("AA", &aa);
    e.module("Res", &residue_bimodule::<S>(field));
    e.comodule("RegC", &cofree_comodule(&reg, &c).expect("F2 cofree"));
    e.comodule("CR", &c.as_right_comodule());
    e.left_comodule("CL", &c.as_left_comodule());
    e.filtration(
        "cells",
        &aa,
        &crate::dgalgebra::FiltrationCertificate {
            side: crate::dgalgebra::Side::Right,
            stages: vec![vec![a.unit().clone()]],
        },
    );
    let (z, t) = non_flat_example::<S>(field);
    e.coring("Z", &Arc::new(z));
    e.module_map("t", &t);
    out.push(("F2", e));

    // F3: matrix Morita context.
    let mut e = Exporter::new(field.clone());
    let f3 = matrix_morita::<S>(field);
    e.algebra("A", &f3.a);
    e.algebra("k", &f3.b);
    e.module("X", &f3.x);
    let y = match find_dual_witness(&f3.x).expect("F3 dual") {
        DualSearch::Found(w) => {
            e.module("Y", &w.y);
            e.witness("W", &w);
            w.y
        }
        DualSearch::Refuted(r) => panic!("F3 has a dual: {}", r.reason),
    };
    // The trivial coring of M₂(k), with Y cofree on the right and X on the left.
    let ca = Arc::new(Coring::trivial(&f3.a));
    e.coring("CA", &ca);
    e.comodule("CR", &ca.as_right_comodule());
    e.left_comodule("CL", &ca.as_left_comodule());
    e.comodule("YC", &cofree_comodule(&Arc::new(y.without_left()), &ca).expect("F3 cofree"));
    let unit: Vec<usize> = f3.a.unit().keys().copied().collect();
    let nx = f3.x.dim();
    let pairs = Matrix::from_columns(
        ca.dim() * nx,
        (0..nx).map(|j| unit.iter().map(|&i| (i * nx + j, f3.a.unit()[&i].clone())).collect()).collect(),
    );
    e.left_comodule("XC", &LeftComodule::new(ca.clone(), Arc::new(f3.x.without_right()), pairs).expect("F3 left comodule"));
    let samples = ground_samples(&f3.b);
    for (i, n) in samples.iter().enumerate() {
        e.module(&format!("N{}", i + 1), n);
    }
    e.module_map("zero", &ModuleMap::new(samples[0].clone(), samples[2].clone(), Matrix::zeros(2, 1)).expect("zero map"));
    out.push(("F3", e));

    // F4: primitive coalgebra, its acyclic extension, and a dg coalgebra.
    let mut e = Exporter::new(field.clone());
    let pair = copure_pair::<S>(field);
    e.algebra("k", pair.small.algebra());
    e.coring("F", &pair.small);
    e.coring("Large", &pair.large);
    e.coring("Triv", &pair.trivial);
    e.coring_map("inc", &pair.inclusion);
    e.coring_map("coaug", &pair.coaugmentation);
    let (r, l) = trivial_comodules(&pair.small).expect("F4 comodules");
    e.comodule("K", &r);
    e.left_comodule("KL", &l);
    e.comodule("FR", &pair.small.as_right_comodule());
    e.left_comodule("FL", &pair.small.as_left_comodule());
    let dg = dg_coalgebra::<S>(field);
    e.coring("DG", &dg);
    let (r, l) = trivial_comodules(&dg).expect("dg comodules");
    e.comodule("KD", &r);
    e.left_comodule("KDL", &l);
    out.push(("F4", e));

    // F5: descent along k → k × k.
    let mut e = Exporter::new(field.clone());
    let f5 = split_descent::<S>(field);
    e.algebra("k", &f5.a);
    e.algebra("B", &f5.b);
    e.algebra_map("phi", &f5.phi);
    let ta = f5.descent.morphism.source().clone();
    e.coring("TA", &ta);
    e.coring("D", &f5.descent.coring);
    if let Some(cert) = crate::corings::descent_certificate(&f5.phi, &f5.descent.tree) {
        e.filtration("Dflat", f5.descent.coring.carrier(), &cert);
    }
    e.coring_map("phi_f", &f5.descent.morphism);
    e.comodule("Bdesc", &f5.descent.comodule);
    e.comodule("DR", &f5.descent.coring.as_right_comodule());
    e.left_comodule("DL", &f5.descent.coring.as_left_comodule());
    let tb = Arc::new(Coring::trivial(&f5.b));
    e.coring("TB", &tb);
    e.coring_map("to_TB", &CoringMorphism::new(f5.phi.clone(), ta, tb, f5.phi.matrix().clone()).expect("F5 map"));
    let w = extension_witness(&f5.phi).expect("F5 witness");
    e.module("X", &w.x);
    e.module("Y", &w.y);
    e.witness("W", &w);
    for (i, n) in descent_samples(&f5.a, 7).iter().enumerate() {
        e.module(&format!("S{}", i + 1), n);
    }
    out.push(("F5", e));

    // F6: dual numbers in degree 1 with a path object.
    let mut e = Exporter::new(field.clone());
    let f6 = path_fixture::<S>(field);
    e.algebra("A", &f6.a);
    e.module("Reg", &f6.module);
    e.module("Path", &f6.path);
    e.module_map("proj", &f6.projection);
    let c = Arc::new(Coring::trivial(&f6.a));
    e.coring("C", &c);
    e.comodule("RegC", &cofree_comodule(&f6.module, &c).expect("F6 cofree"));
    e.comodule("CR", &c.as_right_comodule());
    e.left_comodule("CL", &c.as_left_comodule());
    out.push(("F6", e));

    out
}
