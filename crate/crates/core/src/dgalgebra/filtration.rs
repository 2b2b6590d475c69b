use std::sync::Arc;

use crate::check::Validation;
use crate::linalg::{kernel_image, solve, unit_vec, Echelon, Matrix, Scalar, SparseVec};

use super::maps::module_maps;
use super::module::{DgModule, Side};

/// Generators added at each stage of an exhaustive filtration
/// `0 = F_{-1} ⊆ F_0 ⊆ …` by submodules with free quotients `A ⊗ X(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationCertificate<S> {
    pub side: Side,
    pub stages: Vec<Vec<SparseVec<S>>>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FiltrationReport {
    pub validation: Validation,
    /// Dimensions of `F_k`.
    pub dims: Vec<usize>,
}

impl FiltrationReport {
    pub fn holds(&self) -> bool {
        self.validation.is_ok()
    }
}

fn act<S: Scalar>(m: &DgModule<S>, side: Side, a: usize, g: &SparseVec<S>) -> SparseVec<S> {
    match side {
        Side::Left => m.left_multiply(&unit_vec(a), g),
        Side::Right => m.right_multiply(g, &unit_vec(a)),
    }
}

/// Check a filtration certificate: each generator is homogeneous with
/// boundary in the previous stage, `A ⊗ X(k) → F_k / F_{k-1}` is bijective and
/// the last stage is everything.
pub fn verify_cellular_filtration<S: Scalar>(m: &DgModule<S>, cert: &FiltrationCertificate<S>) -> FiltrationReport {
    let mut v = Validation::new("cellular filtration");
    let algebra = match cert.side {
        Side::Left => m.left_algebra(),
        Side::Right => m.right_algebra(),
    };
    let Some(algebra) = algebra else {
        v.fail("action present", format!("module has no {:?} action", cert.side));
        return FiltrationReport { validation: v, dims: vec![] };
    };
    let x = m.carrier();
    let mut span = Echelon::new();
    let mut dims = Vec::new();
    for (k, gens) in cert.stages.iter().enumerate() {
        for (i, g) in gens.iter().enumerate() {
            v.record(
                &format!("stage {k} generator {i} homogeneous"),
                (!g.is_empty() && x.degree_of(g).is_none()).then(|| "mixed degrees".to_string()),
            );
            v.record(
                &format!("stage {k} generator {i} boundary in previous stage"),
                (!span.contains(&x.differential().apply(g))).then(|| "d(g) ∉ F_{k-1}".to_string()),
            );
        }
        let mut independent = None;
        for (i, g) in gens.iter().enumerate() {
            for a in 0..algebra.dim() {
                if !span.insert(&act(m, cert.side, a, g)) && independent.is_none() {
                    independent = Some(format!(
                        "{}·g{} is dependent modulo F_{{k-1}}",
                        algebra.carrier().name(a),
                        i
                    ));
                }
            }
        }
        v.record(&format!("stage {k} quotient is free on its generators"), independent);
        dims.push(span.rank());
    }
    v.record(
        "exhaustive",
        (span.rank() != m.dim()).then(|| format!("last stage has dimension {} of {}", span.rank(), m.dim())),
    );
    FiltrationReport { validation: v, dims }
}

/// Two-stage filtration for a module over the ground field: cycles, then a
/// complement.
pub fn cycle_filtration<S: Scalar>(m: &DgModule<S>, side: Side) -> Option<FiltrationCertificate<S>> {
    let algebra = match side {
        Side::Left => m.left_algebra()?,
        Side::Right => m.right_algebra()?,
    };
    if !algebra.is_ground_field() {
        return None;
    }
    let cycles = kernel_image(m.carrier().differential()).kernel.into_columns();
    let mut span = Echelon::from_vectors(&cycles);
    let mut rest = Vec::new();
    for i in 0..m.dim() {
        if span.insert(&unit_vec(i)) {
            rest.push(unit_vec(i));
        }
    }
    Some(FiltrationCertificate {
        side,
        stages: vec![cycles, rest],
    })
}

/// `A` as a retract of a left `A`-module: `a ↦ a·g` split by `r`.
#[derive(Clone)]
pub struct Retract<S> {
    pub generator: SparseVec<S>,
    pub retraction: Matrix<S>,
}

/// Search for `A` as a retract of `x` as left `A`-modules.
pub fn find_left_retract<S: Scalar>(x: &DgModule<S>) -> Option<Retract<S>> {
    let a = x.left_algebra()?;
    let target = DgModule::regular(&Arc::clone(a)).without_right();
    let source = x.without_right();
    let maps = module_maps(&source, &target);
    if maps.is_empty() {
        return None;
    }
    let z0: Vec<SparseVec<S>> = kernel_image(x.carrier().differential())
        .kernel
        .into_columns()
        .into_iter()
        .filter(|v| x.carrier().degree_of(v) == Some(0))
        .collect();
    let unit = a.unit().clone();
    let combine = |ms: &[Matrix<S>], c: &SparseVec<S>| {
        let mut r = Matrix::zeros(a.dim(), x.dim());
        for (&i, s) in c {
            r = r.combine(&ms[i], s);
        }
        r
    };
    // Fix g, solve linearly for r; then fix r, solve for g.
    for g in &z0 {
        let images = Matrix::from_columns(a.dim(), maps.iter().map(|r| r.apply(g)).collect());
        if let Ok(Some(c)) = solve(&images, &unit) {
            return Some(Retract {
                generator: g.clone(),
                retraction: combine(&maps, &c),
            });
        }
    }
    for r in &maps {
        let images = Matrix::from_columns(a.dim(), z0.iter().map(|g| r.apply(g)).collect());
        if let Ok(Some(c)) = solve(&images, &unit) {
            let mut g = SparseVec::new();
            for (&i, s) in &c {
                crate::linalg::axpy(&mut g, s, &z0[i]);
            }
            return Some(Retract {
                generator: g,
                retraction: r.clone(),
            });
        }
    }
    None
}
