//! The `dgmorita` command line: load a `.cf` document, run one command,
//! print a report. Exit status 0 on an overall PASS, 1 otherwise, 2 on bad
//! input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dgmorita::braided::{braided_from_coring_morphism, compose_braided, BraidedBimodule};
use dgmorita::check::{Validation, Verdict};
use dgmorita::cobar::{cobar, cobar_comodule, resolution_report, Window};
use dgmorita::complexes::ChainComplex;
use dgmorita::corings::{cofree_comodule, cotensor, descent_coring, find_coring_isomorphism, is_flat_coring, Comodule, Coring, LeftComodule};
use dgmorita::dgalgebra::{map_module, tensor_over, DgModule, FiltrationCertificate, ModuleMap, TensorTree};
use dgmorita::document::{load, AnyWorkspace, Exporter, LoadError, Scope, Workspace};
use dgmorita::duality::canonical_coring;
use dgmorita::linalg::{kernel_image, Matrix};
use dgmorita::morita::{
    coring_equivalence_report, descent_report, morita_report, DescentInputs, EquivalenceInputs, EquivalenceSubject, MoritaInputs, Report,
};
use dgmorita::Scalar;

#[derive(Parser, Debug)]
#[command(name = "dgmorita", version, about = "Exact checks for dg algebras, corings and braided bimodules")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Degree window `lo:hi` for truncated constructions.
    #[arg(long, global = true, default_value = "0:6")]
    pub window: Window,
    /// Seed for randomized searches and perturbations.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    ReportDoc,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load and validate every object; optionally check that perturbations are caught.
    Validate {
        file: PathBuf,
        /// Number of seeded single-entry perturbations to try.
        #[arg(long, default_value_t = 0)]
        perturb: usize,
        /// Also perturb actions, coactions, braidings and witnesses.
        #[arg(long)]
        perturb_all: bool,
    },
    /// Homology of a complex or of a module's underlying complex.
    Homology {
        file: PathBuf,
        #[arg(long, conflicts_with = "module", required_unless_present = "module")]
        complex: Option<String>,
        #[arg(long)]
        module: Option<String>,
    },
    /// Tensor product over the shared algebra.
    Tensor {
        file: PathBuf,
        /// Left factor (a right module).
        #[arg(long)]
        left: String,
        /// Right factor (a left module).
        #[arg(long)]
        right: String,
        #[command(flatten)]
        emit: Emit,
    },
    /// Module of maps between right modules.
    Map {
        file: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        emit: Emit,
    },
    /// Cotensor product; without `--with`, checks the counit against the coring itself.
    Cotensor {
        file: PathBuf,
        /// Right comodule.
        #[arg(long)]
        comodule: String,
        /// Left comodule.
        #[arg(long = "with")]
        with: Option<String>,
    },
    /// Descent coring of an algebra map.
    DescentCoring {
        file: PathBuf,
        #[arg(long)]
        morphism: String,
        /// Coring to compare against (an isomorphism is searched for).
        #[arg(long)]
        compare: Option<String>,
        #[command(flatten)]
        emit: Emit,
    },
    /// Canonical coring attached to a duality witness.
    CanonicalCoring {
        file: PathBuf,
        #[arg(long)]
        witness: String,
        #[arg(long)]
        coring: String,
        #[arg(long)]
        compare: Option<String>,
        #[command(flatten)]
        emit: Emit,
    },
    /// Compose two braided bimodules (coring maps are converted first).
    Compose {
        file: PathBuf,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        #[command(flatten)]
        emit: Emit,
    },
    /// Cobar complex of a right and a left comodule within the window.
    Cobar {
        file: PathBuf,
        #[arg(long)]
        comodule: String,
        /// Must be the comodule's coring, if given.
        #[arg(long)]
        coring: Option<String>,
        /// Left comodule; defaults to the ground field through the coaugmentation.
        #[arg(long = "with")]
        with: Option<String>,
        /// Also check the cobar resolution of the right comodule.
        #[arg(long)]
        resolution: bool,
    },
    /// Per-instance criterion reports.
    Report {
        #[command(subcommand)]
        kind: ReportKind,
    },
}

#[derive(Args, Debug, Default)]
pub struct Emit {
    /// Write the constructed object as a document.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ReportKind {
    /// Morita conditions for a bimodule.
    Morita {
        file: PathBuf,
        #[arg(long)]
        bimodule: String,
        #[arg(long, value_delimiter = ',')]
        samples: Vec<String>,
        /// Module maps used to spot-check reflection of weak equivalences.
        #[arg(long, value_delimiter = ',')]
        reflection: Vec<String>,
        /// Cellular filtration certifying cofibrancy.
        #[arg(long)]
        cofibrancy: Option<String>,
    },
    /// Effective descent along a duality witness.
    Descent {
        file: PathBuf,
        #[arg(long)]
        witness: String,
        #[arg(long)]
        coring: String,
        /// Right modules, made cofree over the coring.
        #[arg(long, value_delimiter = ',')]
        samples: Vec<String>,
        /// Comodules over the canonical coring for the counit check.
        #[arg(long, value_delimiter = ',')]
        comodules: Vec<String>,
        #[arg(long)]
        flatness: Option<String>,
    },
    /// Equivalence of comodule categories along a coring map or braiding.
    Equivalence {
        file: PathBuf,
        #[arg(long, conflicts_with_all = ["braiding", "witness"], required_unless_present = "braiding")]
        morphism: Option<String>,
        #[arg(long, requires = "witness")]
        braiding: Option<String>,
        #[arg(long)]
        witness: Option<String>,
        #[arg(long, value_delimiter = ',')]
        samples: Vec<String>,
        /// Filtrations certifying flatness of the corings involved.
        #[arg(long, value_delimiter = ',')]
        flatness: Vec<String>,
    },
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    /// Bad input: exit 2.
    Input(String),
    /// A validation failure on load, reported as a failing report.
    Invalid(Vec<LoadError>),
}

type Res<T> = Result<T, Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

/// Parse arguments (including the program name) and run.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            Outcome { code, stdout, stderr }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = file_of(&cli.command).and_then(|path| {
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        match load(&text) {
            Ok(AnyWorkspace::Rational(w)) => dispatch(&w, cli),
            Ok(AnyWorkspace::Prime(w)) => dispatch(&w, cli),
            Err(errs) => {
                if matches!(cli.command, Command::Validate { .. }) && errs.iter().all(|e| matches!(e, LoadError::Invalid { .. })) {
                    Err(Failure::Invalid(errs))
                } else {
                    Err(input(errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")))
                }
            }
        }
    });
    match result {
        Ok(report) => render(cli, &report),
        Err(Failure::Invalid(errs)) => {
            let mut r = Report::new("validation");
            for e in errs {
                if let LoadError::Invalid { object, check, detail } = e {
                    r.push(object, "axioms checked on load", Verdict::Fail, vec![format!("{check}: {detail}")]);
                }
            }
            render(cli, &r.finish())
        }
        Err(Failure::Input(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn render(cli: &Cli, report: &Report) -> Outcome {
    let stdout = match cli.format {
        Format::Text => report.to_string(),
        Format::ReportDoc => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
    };
    Outcome {
        code: if report.passed() { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    }
}

fn file_of(c: &Command) -> Res<&Path> {
    Ok(match c {
        Command::Validate { file, .. }
        | Command::Homology { file, .. }
        | Command::Tensor { file, .. }
        | Command::Map { file, .. }
        | Command::Cotensor { file, .. }
        | Command::DescentCoring { file, .. }
        | Command::CanonicalCoring { file, .. }
        | Command::Compose { file, .. }
        | Command::Cobar { file, .. } => file,
        Command::Report { kind } => match kind {
            ReportKind::Morita { file, .. } | ReportKind::Descent { file, .. } | ReportKind::Equivalence { file, .. } => file,
        },
    })
}

fn get<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Res<&'a T> {
    map.get(name).ok_or_else(|| input(format!("no {kind} named `{name}`")))
}

fn dims(c: &ChainComplex<impl Scalar>) -> String {
    let d = c.dims_by_degree();
    if d.is_empty() {
        return "zero".into();
    }
    d.iter().map(|(n, k)| format!("{n}:{k}")).collect::<Vec<_>>().join(" ")
}

fn homology_line(c: &ChainComplex<impl Scalar>) -> String {
    let h = c.homology().dims();
    let nz: Vec<String> = h.iter().filter(|(_, k)| **k > 0).map(|(n, k)| format!("H_{n} = {k}")).collect();
    if nz.is_empty() {
        "acyclic".into()
    } else {
        nz.join(", ")
    }
}

fn validation_row(r: &mut Report, name: &str, v: &Validation) {
    let evidence = if v.is_ok() {
        vec![format!("{} checks hold", v.checks.len())]
    } else {
        v.failures.iter().map(|f| format!("{}: {}", f.check, f.detail)).collect()
    };
    r.push(name, "structure axioms", Verdict::from_bool(v.is_ok()), evidence);
}

fn emit<S: Scalar>(r: &mut Report, e: &Emit, build: impl FnOnce(&mut Exporter<S>), field: dgmorita::ScalarField) -> Res<()> {
    let Some(path) = &e.emit else { return Ok(()) };
    let mut ex = Exporter::new(field);
    build(&mut ex);
    let ws = ex.finish().map_err(|errs| input(format!("constructed object does not export: {errs:?}")))?;
    std::fs::write(path, ws.save()).map_err(|err| input(format!("{}: {err}", path.display())))?;
    r.caveats.push(format!("written to {}", path.display()));
    Ok(())
}

fn dispatch<S: Scalar>(ws: &Workspace<S>, cli: &Cli) -> Res<Report> {
    let window = cli.window;
    match &cli.command {
        Command::Validate { perturb, perturb_all, .. } => {
            let scope = if *perturb_all { Scope::All } else { Scope::StructureConstants };
            validate(ws, *perturb, scope, cli.seed)
        }
        Command::Homology { complex, module, .. } => {
            let (name, c) = match (complex, module) {
                (Some(n), _) => (n, get(&ws.complexes, "complex", n)?.clone()),
                (_, Some(n)) => (n, get(&ws.modules, "module", n)?.carrier().clone()),
                _ => return Err(input("give --complex or --module")),
            };
            let mut r = Report::new(format!("homology of {name}"));
            let h = c.homology();
            let mut ev = vec![format!("chains: {}", dims(&c))];
            ev.extend(h.dims().iter().map(|(n, k)| format!("H_{n} = {k}")));
            r.push("homology", "rank of cycles modulo boundaries", Verdict::from_bool(c.validate().is_ok()), ev);
            Ok(r.finish())
        }
        Command::Tensor { left, right, emit: e, .. } => {
            let (m, n) = (get(&ws.modules, "module", left)?, get(&ws.modules, "module", right)?);
            let t = tensor_over(m, n).map_err(|e| input(e.to_string()))?;
            let mut r = Report::new(format!("{left} ⊗ {right}"));
            validation_row(&mut r, "tensor product", &t.module.validate());
            r.criteria[0].evidence.push(format!("chains: {}", dims(t.module.carrier())));
            r.criteria[0].evidence.push(homology_line(t.module.carrier()));
            let module = Arc::new(t.module);
            emit(&mut r, e, |ex| drop(ex.module("product", &module)), ws.field)?;
            Ok(r.finish())
        }
        Command::Map { source, target, emit: e, .. } => {
            let (x, n) = (get(&ws.modules, "module", source)?, get(&ws.modules, "module", target)?);
            let mm = map_module(x, n).map_err(|e| input(e.to_string()))?;
            let mut r = Report::new(format!("Map({source}, {target})"));
            validation_row(&mut r, "module of maps", &mm.module.validate());
            r.criteria[0].evidence.push(format!("chains: {}", dims(mm.module.carrier())));
            r.criteria[0].evidence.push(homology_line(mm.module.carrier()));
            emit(&mut r, e, |ex| drop(ex.module("maps", &mm.module)), ws.field)?;
            Ok(r.finish())
        }
        Command::Cotensor { comodule, with, .. } => {
            let m = get(&ws.comodules, "comodule", comodule)?;
            match with {
                Some(n) => {
                    let n = get(&ws.left_comodules, "left comodule", n)?;
                    let cot = cotensor(m, n, None).map_err(|e| input(e.to_string()))?;
                    let mut r = Report::new(format!("{comodule} □ {}", with.as_deref().unwrap_or_default()));
                    validation_row(&mut r, "cotensor product", &cot.kernel.module.validate());
                    r.criteria[0].evidence.push(format!("chains: {}", dims(cot.complex())));
                    Ok(r.finish())
                }
                None => Ok(counit_report(comodule, m)?),
            }
        }
        Command::DescentCoring { morphism, compare, emit: e, .. } => {
            let phi = get(&ws.algebra_maps, "algebra map", morphism)?;
            let d = descent_coring(phi).map_err(|e| input(e.to_string()))?;
            let mut r = Report::new(format!("descent coring of {morphism}"));
            coring_rows(&mut r, &d.coring, compare.as_deref(), ws, cli.seed)?;
            emit(&mut r, e, |ex| drop(ex.coring("descent", &d.coring)), ws.field)?;
            Ok(r.finish())
        }
        Command::CanonicalCoring { witness, coring, compare, emit: e, .. } => {
            let w = get(&ws.witnesses, "witness", witness)?;
            let c = get(&ws.corings, "coring", coring)?;
            let can = canonical_coring(w, c).map_err(|e| input(e.to_string()))?;
            let mut r = Report::new(format!("canonical coring of {coring} along {witness}"));
            coring_rows(&mut r, &can.coring, compare.as_deref(), ws, cli.seed)?;
            validation_row(&mut r, "universal braiding", &can.universal.validate());
            emit(&mut r, e, |ex| drop(ex.coring("canonical", &can.coring)), ws.field)?;
            Ok(r.finish())
        }
        Command::Compose { first, second, emit: e, .. } => {
            let (a, b) = (braiding_of(ws, first)?, braiding_of(ws, second)?);
            let t = compose_braided(&a, &b).map_err(|e| input(e.to_string()))?;
            let mut r = Report::new(format!("{second} ∘ {first}"));
            validation_row(&mut r, "composite braided bimodule", &t.validate());
            r.criteria[0].evidence.push(format!("carrier chains: {}", dims(t.carrier().carrier())));
            emit(&mut r, e, |ex| drop(ex.braiding("composite", &t)), ws.field)?;
            Ok(r.finish())
        }
        Command::Cobar { comodule, coring, with, resolution, .. } => {
            let m = get(&ws.comodules, "comodule", comodule)?;
            if let Some(c) = coring {
                if !Arc::ptr_eq(get(&ws.corings, "coring", c)?, m.coring()) {
                    return Err(input(format!("`{comodule}` is not a comodule over `{c}`")));
                }
            }
            let n = match with {
                Some(n) => get(&ws.left_comodules, "left comodule", n)?.clone(),
                None => ground_left_comodule(m.coring())?,
            };
            let omega = cobar(m, &n, window).map_err(|e| input(e.to_string()))?;
            let mut r = Report::new(format!("cobar complex of {comodule} in window {window}"));
            let sq = omega.d_squared_zero();
            r.push("d² = 0", "differential squares to zero", Verdict::from_bool(sq), vec![format!("chains: {}", dims(omega.complex()))]);
            let h = omega.interior_homology();
            let list: Vec<String> = h.values().map(|k| k.to_string()).collect();
            r.push(
                "interior homology",
                "homology in degrees unaffected by truncation",
                Verdict::Pass,
                vec![
                    format!("degrees {}..{}", window.interior().start(), window.interior().end()),
                    format!("dims ({})", list.join(",")),
                ],
            );
            r.push(
                "word filtration",
                "differential preserves or raises word length",
                Verdict::from_bool(omega.word_filtration_holds()),
                vec![],
            );
            if *resolution {
                let om = cobar_comodule(m, window).map_err(|e| input(e.to_string()))?;
                let rep = resolution_report(m, &om);
                r.push(
                    "cobar resolution",
                    "(1 ⊗ ε) ∘ q is a homology isomorphism on the interior",
                    rep.verdict,
                    vec![
                        format!("d² = 0: {}", rep.d_squared_zero),
                        format!("coaction factors through q: {}", rep.factorization),
                        format!("chain maps: {}", rep.chain_maps),
                        format!("comodule valid: {}", rep.comodule_valid),
                        format!("equivalence: {} ({})", rep.equivalence.holds, rep.equivalence.detail),
                    ],
                );
            }
            r.caveats.push("degrees at or below the window's lower end are complete; the top degree is truncated".into());
            Ok(r.finish())
        }
        Command::Report { kind } => report(ws, kind, window),
    }
}

fn validate<S: Scalar>(ws: &Workspace<S>, perturb: usize, scope: Scope, seed: u64) -> Res<Report> {
    let mut r = Report::new(format!("validation over {}", ws.field));
    for it in ws.items() {
        r.push(format!("{} {}", it.decl.kind(), it.name), "structure axioms", Verdict::Pass, vec!["validated on load".into()]);
    }
    for i in 0..perturb {
        let s = seed.wrapping_add(i as u64);
        let Some(p) = ws.perturb(s, scope) else {
            r.push("perturbation", "perturbed structure is rejected", Verdict::NotApplicable, vec!["no structure constants".into()]);
            break;
        };
        let (verdict, ev) = match Workspace::build(ws.field, p.items) {
            Ok(_) => (Verdict::Fail, "still validates".to_string()),
            Err(errs) => (Verdict::Pass, errs[0].to_string()),
        };
        r.push(format!("perturbation {s}: {}", p.description), "perturbed structure is rejected", verdict, vec![ev]);
    }
    Ok(r.finish())
}

/// `M □_C C ≅ M` through the coaction.
fn counit_report<S: Scalar>(name: &str, m: &Comodule<S>) -> Res<Report> {
    let c = m.coring().as_left_comodule();
    let cot = cotensor(m, &c, None).map_err(|e| input(e.to_string()))?;
    let mut r = Report::new(format!("{name} □ C ≅ {name}"));
    let mut cols = Vec::new();
    let mut inside = true;
    for j in 0..m.dim() {
        let word = m.target_tree().word_of(m.coaction().column(j));
        let v = cot.tensor.project(&word);
        match cot.kernel.coordinates(&v) {
            Some(x) => cols.push(x),
            None => {
                inside = false;
                cols.push(Default::default());
            }
        }
    }
    let coords = Matrix::from_columns(cot.dim(), cols);
    let rank = kernel_image(&coords).rank;
    let iso = inside && rank == m.dim() && cot.dim() == m.dim();
    r.push(
        "cotensor counit",
        "the coaction identifies M with M □_C C",
        Verdict::from_bool(iso),
        vec![
            format!("dim M = {}, dim M □ C = {}", m.dim(), cot.dim()),
            format!("coaction lands in the cotensor: {inside}"),
            format!("rank of the comparison: {rank}"),
        ],
    );
    Ok(r.finish())
}

fn coring_rows<S: Scalar>(r: &mut Report, c: &Arc<Coring<S>>, compare: Option<&str>, ws: &Workspace<S>, seed: u64) -> Res<()> {
    validation_row(r, "coring axioms", &c.validate());
    let k = r.criteria.len() - 1;
    r.criteria[k].evidence.push(format!("carrier chains: {}", dims(c.carrier().carrier())));
    if let Some(name) = compare {
        let d = get(&ws.corings, "coring", name)?;
        let found = find_coring_isomorphism(c, d, seed);
        let ev = match &found {
            Some(m) => vec![format!("isomorphism found: {}x{} of rank {}", m.rows(), m.cols(), kernel_image(m).rank)],
            None => vec!["no isomorphism found by the search".into()],
        };
        r.push(format!("isomorphic to {name}"), "solver-found coring isomorphism", Verdict::from_bool(found.is_some()), ev);
    }
    Ok(())
}

fn braiding_of<S: Scalar>(ws: &Workspace<S>, name: &str) -> Res<BraidedBimodule<S>> {
    if let Some(b) = ws.braidings.get(name) {
        return Ok(b.clone());
    }
    let f = get(&ws.coring_maps, "braiding or coring map", name)?;
    braided_from_coring_morphism(f).map_err(|e| input(e.to_string()))
}

/// The ground field as a left comodule through the coaugmentation.
fn ground_left_comodule<S: Scalar>(c: &Arc<Coring<S>>) -> Res<LeftComodule<S>> {
    dgmorita::fixtures::trivial_comodules(c)
        .map(|(_, l)| l)
        .map_err(|e| input(format!("give --with: {e}")))
}

fn filtration_for<'a, S: Scalar>(ws: &'a Workspace<S>, names: &[String], carrier: &DgModule<S>) -> Res<Option<&'a FiltrationCertificate<S>>> {
    for n in names {
        let f = get(&ws.filtrations, "filtration", n)?;
        let item = ws.item(n).expect("named filtration has an item");
        if let dgmorita::document::Decl::Filtration { module, .. } = &item.decl {
            if ws.modules.get(module).map(|m| m.as_ref() == carrier).unwrap_or(false) {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

fn modules<S: Scalar>(ws: &Workspace<S>, names: &[String]) -> Res<Vec<Arc<DgModule<S>>>> {
    names.iter().map(|n| get(&ws.modules, "module", n).cloned()).collect()
}

fn report<S: Scalar>(ws: &Workspace<S>, kind: &ReportKind, window: Window) -> Res<Report> {
    match kind {
        ReportKind::Morita { bimodule, samples, reflection, cofibrancy, .. } => {
            let x = get(&ws.modules, "module", bimodule)?;
            let reflection: Vec<ModuleMap<S>> = reflection
                .iter()
                .map(|n| get(&ws.module_maps, "module map", n).cloned())
                .collect::<Res<_>>()?;
            let cofibrancy = cofibrancy.as_ref().map(|n| get(&ws.filtrations, "filtration", n).cloned()).transpose()?;
            let inputs = MoritaInputs {
                samples: modules(ws, samples)?,
                reflection,
                cofibrancy,
            };
            morita_report(x, &inputs).map_err(|e| input(e.to_string()))
        }
        ReportKind::Descent { witness, coring, samples, comodules, flatness, .. } => {
            let w = get(&ws.witnesses, "witness", witness)?;
            let c = get(&ws.corings, "coring", coring)?;
            let samples = modules(ws, samples)?
                .iter()
                .map(|n| cofree_comodule(n, c))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| input(e.to_string()))?;
            let comodules = comodules.iter().map(|n| get(&ws.comodules, "comodule", n).cloned()).collect::<Res<_>>()?;
            let flatness = flatness.as_ref().map(|n| get(&ws.filtrations, "filtration", n).cloned()).transpose()?;
            descent_report(w, c, &DescentInputs { samples, comodules, flatness }).map_err(|e| input(e.to_string()))
        }
        ReportKind::Equivalence { morphism, braiding, witness, samples, flatness, .. } => {
            let samples = modules(ws, samples)?;
            let mut corings: Vec<Arc<Coring<S>>> = Vec::new();
            let subject_morphism;
            let subject_braided;
            let subject = match (morphism, braiding, witness) {
                (Some(f), _, _) => {
                    subject_morphism = get(&ws.coring_maps, "coring map", f)?;
                    corings.push(subject_morphism.source().clone());
                    corings.push(subject_morphism.target().clone());
                    EquivalenceSubject::Morphism(subject_morphism)
                }
                (None, Some(b), Some(w)) => {
                    subject_braided = (get(&ws.braidings, "braiding", b)?, get(&ws.witnesses, "witness", w)?);
                    corings.push(subject_braided.0.source().clone());
                    corings.push(subject_braided.0.target().clone());
                    EquivalenceSubject::Braided(subject_braided.0, subject_braided.1)
                }
                _ => return Err(input("give --morphism, or --braiding with --witness")),
            };
            // Flatness of every coring involved; the weakest verdict wins.
            let mut verdict = Verdict::Certified;
            for c in &corings {
                let cert = filtration_for(ws, flatness, c.carrier())?;
                let rep = is_flat_coring(c, cert, &[]).map_err(|e| input(e.to_string()))?;
                verdict = match (verdict, rep.verdict) {
                    (_, Verdict::Refuted) | (Verdict::Refuted, _) => Verdict::Refuted,
                    (Verdict::Certified, v) => v,
                    (v, _) => v,
                };
            }
            let inputs = EquivalenceInputs { samples, window, flatness: verdict };
            let mut r = coring_equivalence_report(subject, &inputs).map_err(|e| input(e.to_string()))?;
            r.caveats.push(format!("flatness of the corings: {verdict}"));
            Ok(r)
        }
    }
}

/// Dimensions of a tensor tree's module, for callers that want them directly.
pub fn tree_dims<S: Scalar>(t: &TensorTree<S>) -> String {
    dims(t.module().carrier())
}
