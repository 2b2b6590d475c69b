use std::sync::Arc;

use super::*;
use crate::check::Verdict;
use crate::fixtures::*;
use crate::linalg::ScalarField;
use crate::{Fp, Q};

fn qf() -> ScalarField {
    ScalarField::Rationals
}

#[test]
fn trivial_corings_validate() {
    let k = ground::<Q>(&qf());
    let t = Coring::trivial(&k);
    assert_eq!(t.dim(), 1);
    assert!(t.is_valid(), "{}", t.validate());
    let f2 = Coring::trivial(&dual_numbers::<Q>(&qf()));
    assert!(f2.is_valid(), "{}", f2.validate());
    let p = ScalarField::prime(5).unwrap();
    assert!(Coring::trivial(&dual_numbers::<Fp>(&p)).is_valid());
}

#[test]
fn primitive_coalgebra_validates() {
    let c = primitive_coalgebra::<Q>(&qf());
    assert!(c.is_valid(), "{}", c.validate());
    let pair = copure_pair::<Q>(&qf());
    assert!(pair.large.is_valid(), "{}", pair.large.validate());
    assert!(pair.inclusion.validate().is_ok(), "{}", pair.inclusion.validate());
    assert!(pair.coaugmentation.validate().is_ok(), "{}", pair.coaugmentation.validate());
}

#[test]
fn perturbed_comultiplication_fails() {
    let c = primitive_coalgebra::<Q>(&qf());
    let mut delta = c.delta().clone();
    let (r, col, v) = delta.triplets().last().map(|(r, c, v)| (r, c, v.clone())).unwrap();
    delta.set(r, col, v + Q::from_int(1, &qf()));
    let bad = c.with_structure(delta, c.counit().clone()).unwrap();
    assert!(!bad.is_valid());
}

#[test]
fn descent_coring_of_split_map() {
    let f5 = split_descent::<Q>(&qf());
    let d = &f5.descent;
    assert_eq!(d.coring.dim(), 4);
    assert!(d.coring.is_valid(), "{}", d.coring.validate());
    assert!(d.comodule.is_valid(), "{}", d.comodule.validate());
    assert!(d.morphism.validate().is_ok(), "{}", d.morphism.validate());
    // B □ (B ⊗ B) ≅ B
    let cot = cotensor(&d.comodule, &d.coring.as_left_comodule(), None).unwrap();
    assert_eq!(cot.dim(), 2);
}

#[test]
fn descent_along_identity_is_trivial() {
    let a = dual_numbers::<Q>(&qf());
    let id = crate::dgalgebra::AlgebraMorphism::identity(&a);
    let d = descent_coring(&id).unwrap();
    assert_eq!(d.coring.dim(), a.dim());
    assert!(d.coring.is_valid());
}

#[test]
fn cofree_and_counit_pushforward() {
    let c = primitive_coalgebra::<Q>(&qf());
    let k = c.algebra().clone();
    let m = Arc::new(ground_samples(&k)[1].as_ref().clone());
    let cf = cofree_comodule(&m, &c).unwrap();
    assert!(cf.is_valid(), "{}", cf.validate());
    assert_eq!(cf.dim(), 4);
    let triv = Arc::new(Coring::trivial(&k));
    let eps = CoringMorphism::counit_of(&c, &triv).unwrap();
    assert!(eps.validate().is_ok(), "{}", eps.validate());
    let u = pushforward(&eps, &cf).unwrap();
    assert!(u.is_valid());
    // cotensor with C itself returns M ⊗ C
    let cot = cotensor(&cf, &c.as_left_comodule(), Some(&c.as_right_comodule())).unwrap();
    assert_eq!(cot.dim(), cf.dim());
    assert!(cot.comodule.unwrap().is_valid());
}

#[test]
fn pullback_along_identity() {
    let c = primitive_coalgebra::<Q>(&qf());
    let (m, _) = trivial_comodules(&c).unwrap();
    let id = CoringMorphism::identity(&c);
    let p = pullback(&id, &m, Verdict::Certified).unwrap();
    assert_eq!(p.comodule.dim(), 1);
    assert!(p.comodule.is_valid());
}

#[test]
fn map_comodule_contains_identity() {
    let c = primitive_coalgebra::<Q>(&qf());
    let k = c.algebra().clone();
    let cf = cofree_comodule(&Arc::new(ground_samples(&k)[0].as_ref().clone()), &c).unwrap();
    let mc = map_comodule(&cf, &cf).unwrap();
    // Comodule endomorphisms of C over a field: the dual algebra k[x*], dim 2.
    assert_eq!(mc.complex().dim(), 2);
}

#[test]
fn flatness_verdicts() {
    let k = ground::<Q>(&qf());
    let t = Coring::trivial(&k);
    assert_eq!(is_flat_coring(&t, Some(&trivial_certificate(&t)), &[]).unwrap().verdict, Verdict::Certified);
    let f5 = split_descent::<Q>(&qf());
    let cert = descent_certificate(&f5.phi, &f5.descent.tree).unwrap();
    let left = f5.descent.coring.carrier().without_right();
    assert!(crate::dgalgebra::verify_cellular_filtration(&left, &cert).holds());
}

#[test]
fn non_flat_coring_is_refuted() {
    let (c, g) = non_flat_example::<Q>(&qf());
    assert!(c.is_valid(), "{}", c.validate());
    let rep = is_flat_coring(&c, None, &[g]).unwrap();
    assert_eq!(rep.verdict, Verdict::Refuted, "{:?}", rep.evidence);
}
