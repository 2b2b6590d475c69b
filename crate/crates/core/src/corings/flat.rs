use std::sync::Arc;

use serde::Serialize;

use crate::check::Verdict;
use crate::dgalgebra::{
    cycle_filtration, kernel_submodule, verify_cellular_filtration, AlgebraMorphism, Block, DgError, FiltrationCertificate, ModuleMap,
    Side, TensorTree,
};
use crate::linalg::{kernel_image, unit_vec, Echelon, Scalar, SparseVec};

use super::{degrees_of, Coring};

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessReport {
    pub verdict: Verdict,
    pub evidence: Vec<String>,
}

/// One-stage certificate for the trivial coring: `A` is free on `1`.
pub fn trivial_certificate<S: Scalar>(c: &Coring<S>) -> FiltrationCertificate<S> {
    FiltrationCertificate {
        side: Side::Left,
        stages: vec![vec![c.algebra().unit().clone()]],
    }
}

/// For `φ: k → B`, the left `B`-module `B ⊗ B` is filtered by `1 ⊗ Z(B)` and
/// then `1 ⊗` a complement of the cycles.
pub fn descent_certificate<S: Scalar>(phi: &AlgebraMorphism<S>, tree: &TensorTree<S>) -> Option<FiltrationCertificate<S>> {
    if !phi.source().is_ground_field() {
        return None;
    }
    let b = phi.target();
    let cycles = kernel_image(b.carrier().differential()).kernel.into_columns();
    let mut span = Echelon::from_vectors(&cycles);
    let rest: Vec<SparseVec<S>> = (0..b.dim()).map(unit_vec).filter(|e| span.insert(e)).collect();
    let unit = Block::unit(b);
    let bdeg = degrees_of(&tree.leaves()[1]);
    let lift = |v: &SparseVec<S>| tree.project(&super::single(&bdeg, v).apply(0, &unit));
    Some(FiltrationCertificate {
        side: Side::Left,
        stages: vec![cycles.iter().map(lift).collect(), rest.iter().map(lift).collect()],
    })
}

/// Whether `ker(g) ⊗_A C → ker(g ⊗_A C)` is an isomorphism for a map of
/// right `A`-modules `g`.
pub fn kernel_exactness<S: Scalar>(c: &Coring<S>, g: &ModuleMap<S>) -> Result<Result<(), String>, DgError> {
    let p = Arc::new(g.source().without_left());
    let q = Arc::new(g.target().without_left());
    let k = kernel_submodule(&p, g.matrix())?;
    let kc = TensorTree::over(TensorTree::leaf(k.module.clone()), c.leaf().clone())?;
    let pc = TensorTree::over(TensorTree::leaf(p.clone()), c.leaf().clone())?;
    let qc = TensorTree::over(TensorTree::leaf(q.clone()), c.leaf().clone())?;
    let inc = Block::linear_on_factor(&k.inclusion, degrees_of(&p), 0);
    let iota = kc.map_to(&pc, |w| w.apply(0, &inc));
    let gb = Block::linear_on_factor(g.matrix(), degrees_of(&q), 0);
    let gc = pc.map_to(&qc, |w| w.apply(0, &gb));
    let rank = kernel_image(&iota).rank;
    let ker = kernel_image(&gc).kernel.cols();
    Ok(if rank != kc.dim() {
        Err(format!("ker(g) ⊗ C → P ⊗ C has rank {rank} on a space of dimension {}", kc.dim()))
    } else if rank != ker {
        Err(format!("ker(g) ⊗ C has dimension {rank} but ker(g ⊗ C) has dimension {ker}"))
    } else {
        Ok(())
    })
}

/// Flatness of `C` as a left `A`-module: certified by a verified filtration,
/// refuted or spot-checked by kernel diagrams, and otherwise conditional.
pub fn is_flat_coring<S: Scalar>(
    c: &Coring<S>,
    certificate: Option<&FiltrationCertificate<S>>,
    diagrams: &[ModuleMap<S>],
) -> Result<FlatnessReport, DgError> {
    let mut evidence = Vec::new();
    let left = c.carrier().without_right();
    let auto = if c.algebra().is_ground_field() { cycle_filtration(&left, Side::Left) } else { None };
    for (label, cert) in [("supplied", certificate.cloned()), ("cycle", auto)] {
        if let Some(cert) = cert {
            let rep = verify_cellular_filtration(&left, &cert);
            if rep.holds() {
                evidence.push(format!("{label} filtration verified, stage dimensions {:?}", rep.dims));
                return Ok(FlatnessReport {
                    verdict: Verdict::Certified,
                    evidence,
                });
            }
            let f = rep.validation.first_failure().map(|f| format!("{}: {}", f.check, f.detail)).unwrap_or_default();
            evidence.push(format!("{label} filtration rejected ({f})"));
        }
    }
    let mut refuted = false;
    for (i, g) in diagrams.iter().enumerate() {
        match kernel_exactness(c, g)? {
            Ok(()) => evidence.push(format!("kernel diagram {i}: exact")),
            Err(e) => {
                refuted = true;
                evidence.push(format!("kernel diagram {i}: {e}"));
            }
        }
    }
    let verdict = if refuted {
        Verdict::Refuted
    } else if diagrams.is_empty() {
        Verdict::Conditional
    } else {
        Verdict::SpotChecked
    };
    Ok(FlatnessReport { verdict, evidence })
}
