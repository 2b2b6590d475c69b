//! Randomized invariants of the linear algebra, chain complex and document layers.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use dgmorita::complexes::{hom_complex, mapping_cone, tensor_complexes, ChainComplex, ChainMap};
use dgmorita::dgalgebra::{map_module, tensor_over, DgAlgebra, DgModule};
use dgmorita::document::{load, AnyWorkspace, Exporter};
use dgmorita::linalg::{kernel_image, quotient_basis, rank, solve};
use dgmorita::{Fp, Matrix, Scalar, ScalarField, Q};

const QF: ScalarField = ScalarField::Rationals;
const F7: ScalarField = ScalarField::Prime(7);

fn matrix<S: Scalar>(rows: usize, cols: usize, entries: &[i64], field: &ScalarField) -> Matrix<S> {
    let t = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).zip(entries).filter(|(_, &v)| v != 0).map(|((r, c), &v)| (r, c, S::from_int(v, field)));
    Matrix::from_triplets(rows, cols, t).unwrap()
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c)))
}

fn kernel_laws<S: Scalar>(m: &Matrix<S>) -> Result<(), TestCaseError> {
    let ki = kernel_image(m);
    prop_assert!(m.mul(&ki.kernel).is_zero());
    prop_assert_eq!(ki.rank + ki.kernel.cols(), m.cols());
    prop_assert_eq!(ki.rank, ki.image.cols());
    prop_assert_eq!(rank(m), rank(&m.transpose()));
    Ok(())
}

/// A complex in degrees 0, 1, 2 with `d₂` factored through `ker d₁`.
fn complex_from(dims: [usize; 3], d1: &[i64], d2: &[i64], prefix: &str) -> ChainComplex<Q> {
    let [a, b, c] = dims;
    let d1m: Matrix<Q> = matrix(a, b, d1, &QF);
    let ker = kernel_image(&d1m).kernel;
    let coeffs: Matrix<Q> = matrix(ker.cols(), c, d2, &QF);
    let d2m = ker.mul(&coeffs);
    let n = a + b + c;
    let mut t = Vec::new();
    for (r, col, x) in d1m.triplets() {
        t.push((r, a + col, x.clone()));
    }
    for (r, col, x) in d2m.triplets() {
        t.push((a + r, a + b + col, x.clone()));
    }
    let basis = (0..n).map(|i| (format!("{prefix}{i}"), if i < a { 0 } else if i < a + b { 1 } else { 2 })).collect();
    ChainComplex::new(QF, basis, Matrix::from_triplets(n, n, t).unwrap()).unwrap()
}

fn complex_strategy() -> impl Strategy<Value = ([usize; 3], Vec<i64>, Vec<i64>)> {
    (0usize..3, 0usize..3, 0usize..3).prop_flat_map(|(a, b, c)| (Just([a, b, c]), prop::collection::vec(-2i64..=2, a * b), prop::collection::vec(-2i64..=2, b * c)))
}

fn convolve(h: &BTreeMap<i32, usize>, k: &BTreeMap<i32, usize>, shift: impl Fn(i32, i32) -> i32) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for (&p, &x) in h {
        for (&q, &y) in k {
            *out.entry(shift(p, q)).or_insert(0) += x * y;
        }
    }
    out.retain(|_, v| *v > 0);
    out
}

fn nonzero(h: BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    h.into_iter().filter(|(_, v)| *v > 0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_and_rank_over_q((r, c, e) in small_matrix()) {
        kernel_laws(&matrix::<Q>(r, c, &e, &QF))?;
    }

    #[test]
    fn kernel_and_rank_over_f7((r, c, e) in small_matrix()) {
        kernel_laws(&matrix::<Fp>(r, c, &e, &F7))?;
    }

    #[test]
    fn solve_recovers_consistent_systems((r, c, e) in small_matrix(), x in prop::collection::vec(-3i64..=3, 5)) {
        let m: Matrix<Q> = matrix(r, c, &e, &QF);
        let xv = (0..c).filter(|&i| x[i] != 0).map(|i| (i, Q::from_int(x[i], &QF))).collect();
        let b = m.apply(&xv);
        let y = solve(&m, &b).unwrap().expect("consistent system");
        prop_assert_eq!(m.apply(&y), b);
    }

    #[test]
    fn quotient_section_splits_projection((r, c, e) in small_matrix()) {
        let rel: Matrix<Q> = matrix(r, c, &e, &QF);
        let quo = quotient_basis(r, &rel);
        let sec = quo.section();
        prop_assert_eq!(quo.projection().mul(&sec), Matrix::identity(quo.dim()));
        prop_assert_eq!(quo.dim() + rank(&rel), r);
        let defect = sec.mul(quo.projection()).sub(&Matrix::identity(r));
        prop_assert_eq!(rank(&Matrix::hstack(&[&rel, &defect])), rank(&rel));
    }

    #[test]
    fn tensor_of_complexes_obeys_kunneth((dx, x1, x2) in complex_strategy(), (dy, y1, y2) in complex_strategy()) {
        let x = complex_from(dx, &x1, &x2, "x");
        let y = complex_from(dy, &y1, &y2, "y");
        let t = tensor_complexes(&x, &y).unwrap();
        prop_assert!(t.differential().mul(t.differential()).is_zero());
        let expect = convolve(&x.homology().dims(), &y.homology().dims(), |p, q| p + q);
        prop_assert_eq!(nonzero(t.homology().dims()), expect);
    }

    #[test]
    fn hom_complex_homology_is_hom_of_homology((dx, x1, x2) in complex_strategy(), (dy, y1, y2) in complex_strategy()) {
        let x = complex_from(dx, &x1, &x2, "x");
        let y = complex_from(dy, &y1, &y2, "y");
        let h = hom_complex(&x, &y).unwrap();
        prop_assert!(h.differential().mul(h.differential()).is_zero());
        let expect = convolve(&x.homology().dims(), &y.homology().dims(), |p, q| q - p);
        prop_assert_eq!(nonzero(h.homology().dims()), expect);
    }

    #[test]
    fn cone_of_identity_is_acyclic((dx, x1, x2) in complex_strategy()) {
        let x = complex_from(dx, &x1, &x2, "x");
        let id = ChainMap::strict(x.clone(), x.clone(), Matrix::identity(x.dim())).unwrap();
        prop_assert!(id.is_chain_map());
        prop_assert!(mapping_cone(&id).unwrap().is_acyclic());
    }

    #[test]
    fn modules_over_the_ground_field((dx, x1, x2) in complex_strategy(), (dy, y1, y2) in complex_strategy()) {
        let k = std::sync::Arc::new(DgAlgebra::<Q>::ground(QF));
        let x = dgmorita::fixtures::ground_bimodule(&k, complex_from(dx, &x1, &x2, "x"));
        let y = dgmorita::fixtures::ground_bimodule(&k, complex_from(dy, &y1, &y2, "y"));
        let t = tensor_over(&x, &y).unwrap();
        prop_assert!(t.module.validate().is_ok());
        prop_assert_eq!(t.module.dim(), x.dim() * y.dim());
        let m = map_module(&x, &y).unwrap();
        prop_assert!(m.module.validate().is_ok());
        prop_assert_eq!(m.dim(), x.dim() * y.dim());
    }

    #[test]
    fn documents_round_trip(
        names in prop::collection::btree_set("[a-zA-Z0-9 _#;:*()\"\\\\{}|,⊗-]{1,6}", 1..5),
        degs in prop::collection::vec(-2i32..3, 5),
        item in "[a-z\"# ]{1,5}",
    ) {
        let names: Vec<String> = names.into_iter().collect();
        let basis: Vec<(String, i32)> = names.iter().cloned().zip(degs).collect();
        let n = basis.len();
        // At most one differential entry, between the first pair of adjacent degrees.
        let d: Vec<(usize, usize, Q)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| basis[i].1 + 1 == basis[j].1)
            .map(|(i, j)| (i, j, Q::from_int(2, &QF)))
            .into_iter()
            .collect();
        let c = ChainComplex::new(QF, basis, Matrix::from_triplets(n, n, d).unwrap()).unwrap();
        let mut ex = Exporter::new(QF);
        let name = ex.complex(&item, &c);
        let ws = ex.finish().unwrap();
        let text = ws.save();
        let AnyWorkspace::Rational(back) = load(&text).unwrap() else { panic!("field changed") };
        prop_assert_eq!(&back.complexes[&name], &c);
        prop_assert_eq!(back.save(), text);
    }

    #[test]
    fn modules_by_distinct_names(names in prop::collection::btree_set("[a-z]{1,3}", 1..4)) {
        let names: BTreeSet<String> = names;
        let k = std::sync::Arc::new(DgAlgebra::<Q>::ground(QF));
        let mut ex = Exporter::new(QF);
        for (i, n) in names.iter().enumerate() {
            let c = ChainComplex::graded(QF, (0..=i).map(|j| (format!("v{j}"), 0)).collect());
            ex.module(n, &std::sync::Arc::new(DgModule::new(c, None, Some(dgmorita::dgalgebra::Action { algebra: k.clone(), table: Matrix::identity(i + 1) })).unwrap()));
        }
        let ws = ex.finish().unwrap();
        for (i, n) in names.iter().enumerate() {
            prop_assert_eq!(ws.modules[n].dim(), i + 1);
        }
    }
}
