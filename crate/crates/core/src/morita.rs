//! Per-instance reports for Morita equivalence of algebras, effective
//! descent along a dualizable bimodule, and equivalence of corings.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::braided::{braided_from_coring_morphism, induce_comodule, BraidedBimodule};
use crate::check::Verdict;
use crate::cobar::{copure_spot_check, CobarError, Window};
use crate::complexes::{ChainMap, WeakEquivalence};
use crate::corings::{cofree_comodule, Comodule, Coring, CoringMorphism};
use crate::dgalgebra::{
    cycle_filtration, find_left_retract, map_module, verify_cellular_filtration, DgError, DgModule, FiltrationCertificate, ModuleMap,
    Side,
};
use crate::duality::{adjunction_counit, adjunction_unit, canonical_coring, ell_map, extension_witness, g_of_t, DualityError, DualityWitness};
use crate::linalg::{kernel_image, Matrix, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    Cobar(#[from] CobarError),
}

type Result<T> = std::result::Result<T, ReportError>;

/// One row of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub name: String,
    /// Which condition of which criterion this row instantiates.
    pub anchor: String,
    pub verdict: Verdict,
    pub evidence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub subject: String,
    pub criteria: Vec<Criterion>,
    pub overall: Verdict,
    pub caveats: Vec<String>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            criteria: Vec::new(),
            overall: Verdict::Pass,
            caveats: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, anchor: &str, verdict: Verdict, evidence: Vec<String>) {
        self.criteria.push(Criterion {
            name: name.into(),
            anchor: anchor.to_string(),
            verdict,
            evidence,
        });
    }

    /// Fail if any row fails, else conditional if any row is, else pass.
    pub fn finish(mut self) -> Self {
        let vs: Vec<Verdict> = self.criteria.iter().map(|c| c.verdict).collect();
        self.overall = if vs.iter().any(|v| matches!(v, Verdict::Fail | Verdict::Refuted)) {
            Verdict::Fail
        } else if vs.contains(&Verdict::Conditional) {
            Verdict::Conditional
        } else {
            Verdict::Pass
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }

    /// Rows of another report, prefixed, plus its caveats.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.criteria {
            c.name = format!("{prefix}: {}", c.name);
            self.criteria.push(c);
        }
        for c in other.caveats {
            if !self.caveats.contains(&c) {
                self.caveats.push(c);
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.criteria {
            writeln!(f, "  [{}] {}", c.verdict, c.name)?;
            writeln!(f, "      ({})", c.anchor)?;
            for e in &c.evidence {
                writeln!(f, "      - {e}")?;
            }
        }
        writeln!(f, "overall: {}", self.overall)?;
        for c in &self.caveats {
            writeln!(f, "  note: {c}")?;
        }
        Ok(())
    }
}

const PER_INSTANCE: &str = "no Quillen equivalence is asserted: every verdict is per instance on the supplied samples, and certificates are sufficient conditions only";

fn describe(we: &WeakEquivalence) -> String {
    if we.holds {
        format!("homology isomorphism ({})", we.detail)
    } else {
        match we.failing_degree {
            Some(n) => format!("not a homology isomorphism in degree {n}: {}", we.detail),
            None => format!("not a homology isomorphism: {}", we.detail),
        }
    }
}

fn shape<S: Scalar>(m: &Matrix<S>) -> String {
    format!("{}x{} matrix of rank {}", m.rows(), m.cols(), kernel_image(m).rank)
}

/// Certificates and samples backing a Morita report.
#[derive(Clone, Default)]
pub struct MoritaInputs<S> {
    /// Right `B`-modules `N` on which `ℓ_N` is tested.
    pub samples: Vec<Arc<DgModule<S>>>,
    /// Maps of right `B`-modules on which reflection by `Map_B(X, −)` is tested.
    pub reflection: Vec<ModuleMap<S>>,
    /// Cellular filtration of `X` as a right `B`-module.
    pub cofibrancy: Option<FiltrationCertificate<S>>,
}

/// `η_A: A → Map_B(X, X)`, `a ↦ (x ↦ a·x)`, in `Map` coordinates.
pub fn unit_to_endomorphisms<S: Scalar>(x: &Arc<DgModule<S>>) -> Result<(ChainMap<S>, Matrix<S>)> {
    let a = x.left_algebra().ok_or(DgError::MissingAction(Side::Left))?.clone();
    let end = map_module(x, &x.without_left())?;
    let n = x.dim();
    let mut cols = Vec::with_capacity(a.dim());
    for g in 0..a.dim() {
        let la = Matrix::from_columns(n, (0..n).map(|i| x.act_left(g, i).clone()).collect());
        let v = end
            .coordinates(&end.hom_vector(&la))
            .ok_or_else(|| DgError::NonDescending("left multiplication is not B-linear".into()))?;
        cols.push(v);
    }
    let m = Matrix::from_columns(end.dim(), cols);
    let cm = ChainMap::strict(a.carrier().clone(), end.module.carrier().clone(), m.clone()).map_err(DgError::from)?;
    Ok((cm, m))
}

/// `Map_B(X, g): Map_B(X, N) → Map_B(X, N')`, `f ↦ g∘f`.
pub fn post_compose<S: Scalar>(x: &DgModule<S>, g: &ModuleMap<S>) -> Result<ChainMap<S>> {
    let src = map_module(x, &g.source().without_left())?;
    let tgt = map_module(x, &g.target().without_left())?;
    let n = g.source().dim();
    let mut cols = Vec::with_capacity(src.dim());
    for i in 0..src.dim() {
        let f = src.as_matrix(&crate::linalg::unit_vec(i), n);
        let v = tgt
            .coordinates(&tgt.hom_vector(&g.matrix().mul(&f)))
            .ok_or_else(|| DgError::NonDescending("g∘f is not B-linear".into()))?;
        cols.push(v);
    }
    let m = Matrix::from_columns(tgt.dim(), cols);
    Ok(ChainMap::strict(src.module.carrier().clone(), tgt.module.carrier().clone(), m).map_err(DgError::from)?)
}

pub fn morita_report<S: Scalar>(x: &Arc<DgModule<S>>, inputs: &MoritaInputs<S>) -> Result<Report> {
    let mut r = Report::new(format!("Morita criteria for a bimodule of dimension {}", x.dim()));
    r.caveats.push(PER_INSTANCE.into());

    let (eta, m) = unit_to_endomorphisms(x)?;
    let we = eta.weak_equivalence();
    let ok = eta.is_chain_map() && we.holds;
    r.push(
        "η_A: A → Map_B(X, X) is a weak equivalence",
        "Morita condition (1): unit into the endomorphisms of X",
        Verdict::from_bool(ok),
        vec![format!("η_A is a {}", shape(&m)), format!("chain map: {}", eta.is_chain_map()), describe(&we)],
    );

    let anchor = "Morita condition (2): Map_B(X, −) reflects weak equivalences";
    if inputs.reflection.is_empty() {
        r.push("reflection of weak equivalences", anchor, Verdict::Conditional, vec!["no sample maps supplied".into()]);
    } else {
        let mut evidence = Vec::new();
        let mut ok = true;
        for (i, g) in inputs.reflection.iter().enumerate() {
            let mapped = post_compose(x, g)?.weak_equivalence();
            let plain = g.chain_map()?.weak_equivalence();
            let reflected = !mapped.holds || plain.holds;
            ok &= reflected;
            evidence.push(format!(
                "map {i}: Map_B(X, g) {}, g {}",
                if mapped.holds { "is a weak equivalence" } else { "is not a weak equivalence" },
                if plain.holds { "is a weak equivalence" } else { "is not a weak equivalence" }
            ));
        }
        r.push("reflection of weak equivalences", anchor, if ok { Verdict::SpotChecked } else { Verdict::Fail }, evidence);
    }

    let anchor = "Morita condition (3): ℓ_N: N ⊗_B Map_B(X, B) → Map_B(X, N) is a weak equivalence";
    for (i, n) in inputs.samples.iter().enumerate() {
        let ell = ell_map(x, n)?;
        let ok = ell.chain_map && ell.weak_equivalence.holds;
        r.push(
            format!("ℓ_N on sample {i} (dimension {})", n.dim()),
            anchor,
            Verdict::from_bool(ok),
            vec![
                format!("ℓ_N is a {}", shape(&ell.matrix)),
                format!("isomorphism: {}", ell.isomorphism),
                describe(&ell.weak_equivalence),
            ],
        );
    }
    if inputs.samples.is_empty() {
        r.push("ℓ_N on samples", anchor, Verdict::Conditional, vec!["no samples supplied".into()]);
    }

    let right = x.without_left();
    let cert = inputs.cofibrancy.clone().or_else(|| if x.right_algebra().is_some_and(|b| b.is_ground_field()) { cycle_filtration(&right, Side::Right) } else { None });
    let (verdict, evidence) = match cert {
        Some(c) => {
            let rep = verify_cellular_filtration(&right, &c);
            if rep.holds() {
                (Verdict::Certified, vec![format!("cellular filtration with stage dimensions {:?}", rep.dims)])
            } else {
                (Verdict::Conditional, vec![format!("filtration rejected: {}", rep.validation)])
            }
        }
        None => (Verdict::Conditional, vec!["no cellular filtration supplied".into()]),
    };
    r.push("X is cofibrant as a right B-module", "standing hypothesis: X cofibrant as a right module", verdict, evidence);
    Ok(r.finish())
}

/// Certificates backing a descent report.
#[derive(Clone, Default)]
pub struct DescentInputs<S> {
    /// Comodules over `(A, C)` on which the unit is tested.
    pub samples: Vec<Comodule<S>>,
    /// Comodules over the canonical coring on which the counit is tested, in
    /// addition to the images of the samples.
    pub comodules: Vec<Comodule<S>>,
    /// Cellular filtration of `X` as a left `A`-module.
    pub flatness: Option<FiltrationCertificate<S>>,
}

pub fn descent_report<S: Scalar>(w: &DualityWitness<S>, c: &Arc<Coring<S>>, inputs: &DescentInputs<S>) -> Result<Report> {
    let mut r = Report::new(format!("effective descent along a bimodule of dimension {} for a coring of dimension {}", w.x.dim(), c.dim()));
    r.caveats.push(PER_INSTANCE.into());
    let v = w.validate();
    r.push(
        "duality witness",
        "X is strictly dualizable: triangle identities",
        Verdict::from_bool(v.is_ok()),
        vec![v.to_string()],
    );
    let can = canonical_coring(w, c)?;
    let cv = can.coring.validate();
    r.push(
        "canonical coring",
        "canonical coring Y ⊗_A C ⊗_A X and universal braiding",
        Verdict::from_bool(cv.is_ok() && can.universal.is_valid()),
        vec![format!("carrier dimension {}", can.coring.dim()), cv.to_string(), can.universal.validate().to_string()],
    );

    let left = w.x.without_right();
    let cert = inputs.flatness.clone().or_else(|| if c.algebra().is_ground_field() { cycle_filtration(&left, Side::Left) } else { None });
    let flatness = match cert {
        Some(cert) => {
            let rep = verify_cellular_filtration(&left, &cert);
            let (v, e) = if rep.holds() {
                (Verdict::Certified, format!("cellular filtration with stage dimensions {:?}", rep.dims))
            } else {
                (Verdict::Conditional, format!("filtration rejected: {}", rep.validation))
            };
            r.push("X is flat-cofibrant as a left A-module", "sufficient condition: flat-cofibrant", v, vec![e]);
            v
        }
        None => {
            r.push("X is flat-cofibrant as a left A-module", "sufficient condition: flat-cofibrant", Verdict::Conditional, vec!["no certificate".into()]);
            Verdict::Conditional
        }
    };
    let (v, e) = match find_left_retract(&w.x) {
        Some(ret) => {
            let g = &ret.generator;
            let a = c.algebra();
            let orbit = Matrix::from_columns(w.x.dim(), (0..a.dim()).map(|i| w.x.left_multiply(&crate::linalg::unit_vec(i), g)).collect());
            let ok = ret.retraction.mul(&orbit) == Matrix::identity(a.dim());
            (if ok { Verdict::Certified } else { Verdict::Conditional }, format!("retraction r with r(a·g) = a verified: {ok}"))
        }
        None => (Verdict::Conditional, "no retraction found".into()),
    };
    r.push("A is a retract of X as left A-modules", "sufficient condition: contains A as a retract", v, vec![e]);

    let anchor = "effective descent: unit M → Prim(Can(M)) is a weak equivalence";
    let b = &can.universal;
    for (i, m) in inputs.samples.iter().enumerate() {
        let (_, unit) = adjunction_unit(b, w, m, flatness)?;
        let ok = unit.chain_map && unit.weak_equivalence.holds;
        r.push(
            format!("unit on sample {i} (dimension {})", m.dim()),
            anchor,
            Verdict::from_bool(ok),
            vec![format!("unit is a {}", shape(&unit.matrix)), format!("isomorphism: {}", unit.isomorphism), describe(&unit.weak_equivalence)],
        );
    }
    let anchor = "effective descent: counit Can(Prim(N)) → N is a weak equivalence";
    let mut tests = Vec::new();
    for m in &inputs.samples {
        tests.push(("image of a sample", induce_comodule(b, m)?));
    }
    tests.push(("the canonical coring", can.coring.as_right_comodule()));
    for n in &inputs.comodules {
        tests.push(("supplied comodule", n.clone()));
    }
    for (i, (what, n)) in tests.iter().enumerate() {
        let (_, counit) = adjunction_counit(b, w, n, flatness)?;
        let ok = counit.chain_map && counit.weak_equivalence.holds;
        r.push(
            format!("counit on comodule {i}, {what} (dimension {})", n.dim()),
            anchor,
            Verdict::from_bool(ok),
            vec![format!("counit is a {}", shape(&counit.matrix)), format!("isomorphism: {}", counit.isomorphism), describe(&counit.weak_equivalence)],
        );
    }
    Ok(r.finish())
}

/// What an equivalence report is about.
pub enum EquivalenceSubject<'a, S> {
    Morphism(&'a CoringMorphism<S>),
    Braided(&'a BraidedBimodule<S>, &'a DualityWitness<S>),
}

#[derive(Clone)]
pub struct EquivalenceInputs<S> {
    /// Right `A`-modules; their cofree comodules over the source coring are
    /// the descent samples.
    pub samples: Vec<Arc<DgModule<S>>>,
    pub window: Window,
    /// Flatness verdict for the copurity check.
    pub flatness: Verdict,
}

pub fn coring_equivalence_report<S: Scalar>(subject: EquivalenceSubject<'_, S>, inputs: &EquivalenceInputs<S>) -> Result<Report> {
    let (b, w) = match subject {
        EquivalenceSubject::Morphism(m) => (braided_from_coring_morphism(m)?, extension_witness(m.phi())?),
        EquivalenceSubject::Braided(b, w) => (b.clone(), w.clone()),
    };
    let (c, d) = (b.source().clone(), b.target().clone());
    let mut r = Report::new(format!("equivalence of corings of dimensions {} and {}", c.dim(), d.dim()));
    r.caveats.push(PER_INSTANCE.into());
    r.caveats.push("the converse direction needs strong homotopy flatness and is conditional on a flatness certificate".into());
    let bv = b.validate();
    r.push("braided bimodule", "braided bimodule axioms", Verdict::from_bool(bv.is_ok()), vec![bv.to_string()]);

    let g = g_of_t(&w, &b)?;
    r.push(
        "factorization through the canonical coring",
        "T = universal braiding followed by g_T",
        Verdict::Pass,
        vec!["g_T is a coring map and reproduces T".into()],
    );
    let sharp = g.morphism.sharp().clone();
    let gm = ChainMap::strict(g.canonical.coring.carrier().carrier().clone(), d.carrier().carrier().clone(), sharp.clone()).map_err(DgError::from)?;
    let we = gm.weak_equivalence();
    r.push(
        "g_T is a weak equivalence",
        "coring condition: g_T is a weak equivalence of corings",
        Verdict::from_bool(gm.is_chain_map() && we.holds),
        vec![format!("g_T is a {}", shape(&sharp)), describe(&we)],
    );

    let anchor = "coring condition: g_T is copure";
    let invertible = sharp.rows() == sharp.cols() && kernel_image(&sharp).rank == sharp.rows();
    if invertible {
        r.push("copurity of g_T", anchor, Verdict::Pass, vec!["g_T is an isomorphism of corings, so change of corings along it is an isomorphism".into()]);
    } else if !we.holds {
        r.push("copurity of g_T", anchor, Verdict::NotApplicable, vec!["g_T is not a weak equivalence".into()]);
    } else {
        let mut tests = vec![d.as_right_comodule()];
        for n in &inputs.samples {
            tests.push(induce_comodule(&b, &cofree_comodule(n, &c)?)?);
        }
        match copure_spot_check(&g.morphism, &tests, inputs.window, inputs.flatness) {
            Ok(checks) => {
                let ok = checks.iter().all(|c| c.verdict == Verdict::Pass);
                let evidence = checks
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("test comodule {i}: counit {}x{}, {}", c.dims.1, c.dims.0, describe(&c.equivalence)))
                    .collect();
                r.push("copurity of g_T", anchor, if ok { Verdict::SpotChecked } else { Verdict::Fail }, evidence);
            }
            Err(CobarError::ConnectivityViolation(name, deg)) => r.push(
                "copurity of g_T",
                anchor,
                Verdict::Conditional,
                vec![format!("no cobar resolution: coideal element {name} in degree {deg}")],
            ),
            Err(CobarError::MissingCoaugmentation) => {
                r.push("copurity of g_T", anchor, Verdict::Conditional, vec!["no cobar resolution: target coring is not coaugmented".into()])
            }
            Err(e) => return Err(e.into()),
        }
    }

    let samples = inputs.samples.iter().map(|n| cofree_comodule(n, &c)).collect::<std::result::Result<Vec<_>, _>>()?;
    let descent = descent_report(
        &w,
        &c,
        &DescentInputs {
            samples,
            comodules: Vec::new(),
            flatness: None,
        },
    )?;
    r.absorb("descent", descent);
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corings::descent_coring;
    use crate::dgalgebra::{AlgebraMorphism, DgAlgebra};
    use crate::fixtures::*;
    use crate::linalg::ScalarField;
    use crate::Q;

    fn qf() -> ScalarField {
        ScalarField::Rationals
    }

    fn zero_map(k: &Arc<DgAlgebra<Q>>) -> ModuleMap<Q> {
        let s = ground_samples(k);
        ModuleMap::new(s[0].clone(), s[2].clone(), Matrix::zeros(2, 1)).unwrap()
    }

    #[test]
    fn matrix_morita_passes() {
        let f3 = matrix_morita::<Q>(&qf());
        let inputs = MoritaInputs {
            samples: ground_samples(&f3.b),
            reflection: vec![zero_map(&f3.b)],
            cofibrancy: None,
        };
        let r = morita_report(&f3.x, &inputs).unwrap();
        assert_eq!(r.overall, Verdict::Pass, "{r}");
        assert_eq!(r.criteria.len(), 6);
        let (eta, m) = unit_to_endomorphisms(&f3.x).unwrap();
        assert!(eta.is_chain_map());
        assert_eq!((m.rows(), m.cols(), kernel_image(&m).rank), (4, 4, 4));
    }

    #[test]
    fn identity_bimodule_passes() {
        let a = dual_numbers::<Q>(&qf());
        let x = Arc::new(DgModule::regular(&a));
        let n = Arc::new(DgModule::regular(&a).without_left());
        let inputs = MoritaInputs {
            samples: vec![n],
            reflection: Vec::new(),
            cofibrancy: Some(FiltrationCertificate {
                side: Side::Right,
                stages: vec![vec![a.unit().clone()]],
            }),
        };
        let r = morita_report(&x, &inputs).unwrap();
        // Reflection has no samples, so the report is conditional, not failed.
        assert_eq!(r.overall, Verdict::Conditional, "{r}");
        assert!(r.criteria.iter().filter(|c| c.verdict != Verdict::Conditional).all(|c| c.verdict.is_positive()));
    }

    #[test]
    fn zero_bimodule_fails() {
        let f3 = matrix_morita::<Q>(&qf());
        let zero = crate::complexes::ChainComplex::new(qf(), Vec::new(), Matrix::zeros(0, 0)).unwrap();
        let x = Arc::new(
            DgModule::new(
                zero,
                Some(crate::dgalgebra::Action {
                    algebra: f3.a.clone(),
                    table: Matrix::zeros(0, 0),
                }),
                Some(crate::dgalgebra::Action {
                    algebra: f3.b.clone(),
                    table: Matrix::zeros(0, 0),
                }),
            )
            .unwrap(),
        );
        let inputs = MoritaInputs {
            samples: ground_samples(&f3.b),
            reflection: vec![zero_map(&f3.b)],
            cofibrancy: None,
        };
        let r = morita_report(&x, &inputs).unwrap();
        assert_eq!(r.overall, Verdict::Fail);
        assert_eq!(r.criteria[0].verdict, Verdict::Fail);
        assert_eq!(r.criteria[1].verdict, Verdict::Fail);
    }

    #[test]
    fn split_descent_passes() {
        let f5 = split_descent::<Q>(&qf());
        let w = extension_witness(&f5.phi).unwrap();
        let triv = Arc::new(Coring::trivial(&f5.a));
        let samples = descent_samples(&f5.a, 7).iter().map(|n| cofree_comodule(n, &triv).unwrap()).collect();
        let r = descent_report(&w, &triv, &DescentInputs { samples, ..Default::default() }).unwrap();
        assert_eq!(r.overall, Verdict::Pass, "{r}");
        // Strict isomorphisms throughout.
        assert!(r.criteria.iter().filter(|c| c.name.starts_with("unit") || c.name.starts_with("counit")).all(|c| c.evidence[1] == "isomorphism: true"));
    }

    #[test]
    fn identity_descent_passes() {
        let k = ground::<Q>(&qf());
        let w = extension_witness(&AlgebraMorphism::identity(&k)).unwrap();
        let triv = Arc::new(Coring::trivial(&k));
        let samples = ground_samples(&k).iter().map(|n| cofree_comodule(n, &triv).unwrap()).collect();
        let r = descent_report(&w, &triv, &DescentInputs { samples, ..Default::default() }).unwrap();
        assert_eq!(r.overall, Verdict::Pass, "{r}");
    }

    #[test]
    fn unfaithful_descent_fails() {
        // A = k × k → k, e₂ ↦ 0: X = k does not see the second factor.
        let f5 = split_descent::<Q>(&qf());
        let k = ground::<Q>(&qf());
        let one = Q::from_int(1, &qf());
        let proj = AlgebraMorphism::new(f5.b.clone(), k, Matrix::from_triplets(1, 2, [(0, 0, one)]).unwrap()).unwrap();
        let w = extension_witness(&proj).unwrap();
        let triv = Arc::new(Coring::trivial(&f5.b));
        let reg = Arc::new(DgModule::regular(&f5.b).without_left());
        let samples = vec![cofree_comodule(&reg, &triv).unwrap()];
        let r = descent_report(&w, &triv, &DescentInputs { samples, ..Default::default() }).unwrap();
        assert_eq!(r.overall, Verdict::Fail, "{r}");
        assert!(r.criteria.iter().any(|c| c.name.starts_with("unit") && c.verdict == Verdict::Fail));
    }

    #[test]
    fn equivalence_reports() {
        let f5 = split_descent::<Q>(&qf());
        let inputs = EquivalenceInputs {
            samples: descent_samples(&f5.a, 3),
            window: Window::new(0, 6),
            flatness: Verdict::Certified,
        };
        let r = coring_equivalence_report(EquivalenceSubject::Morphism(&f5.descent.morphism), &inputs).unwrap();
        assert_eq!(r.overall, Verdict::Pass, "{r}");

        // Into the trivial coring of B: g_T is multiplication B ⊗ B → B.
        let tb = Arc::new(Coring::trivial(&f5.b));
        let triv = Arc::new(Coring::trivial(&f5.a));
        let f = CoringMorphism::new(f5.phi.clone(), triv, tb, f5.phi.matrix().clone()).unwrap();
        let r = coring_equivalence_report(EquivalenceSubject::Morphism(&f), &inputs).unwrap();
        assert_eq!(r.overall, Verdict::Fail, "{r}");

        let k = ground::<Q>(&qf());
        let id = CoringMorphism::identity(&Arc::new(Coring::trivial(&k)));
        let r = coring_equivalence_report(EquivalenceSubject::Morphism(&id), &EquivalenceInputs { samples: ground_samples(&k), ..inputs.clone() }).unwrap();
        assert_eq!(r.overall, Verdict::Pass, "{r}");
    }

    #[test]
    fn onto_canonical_coring_reduces_to_descent() {
        let f5 = split_descent::<Q>(&qf());
        let w = extension_witness(&f5.phi).unwrap();
        let triv = Arc::new(Coring::trivial(&f5.a));
        let can = canonical_coring(&w, &triv).unwrap();
        let inputs = EquivalenceInputs {
            samples: descent_samples(&f5.a, 5),
            window: Window::new(0, 4),
            flatness: Verdict::Certified,
        };
        let r = coring_equivalence_report(EquivalenceSubject::Braided(&can.universal, &w), &inputs).unwrap();
        assert_eq!(r.overall, Verdict::Pass, "{r}");
        let g = r.criteria.iter().find(|c| c.name == "copurity of g_T").unwrap();
        assert!(g.evidence[0].contains("isomorphism"));
        let _ = descent_coring(&f5.phi).unwrap();
    }

    #[test]
    fn report_is_deterministic() {
        let f5 = split_descent::<Q>(&qf());
        let inputs = EquivalenceInputs {
            samples: descent_samples(&f5.a, 9),
            window: Window::new(0, 4),
            flatness: Verdict::Certified,
        };
        let a = coring_equivalence_report(EquivalenceSubject::Morphism(&f5.descent.morphism), &inputs).unwrap();
        let b = coring_equivalence_report(EquivalenceSubject::Morphism(&f5.descent.morphism), &inputs).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
