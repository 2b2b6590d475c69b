//! Plain-text workspace documents (`.cf`).
//!
//! A document declares a ground field and a set of named items. Matrices are
//! written as sparse triples `(row, col, scalar)` over basis names; a key into a
//! field tensor is written `a*b`. Structure maps landing in a tensor over an
//! algebra are written against the plain field tensor and projected on load.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braided::BraidedBimodule;
use crate::check::Validation;
use crate::complexes::ChainComplex;
use crate::corings::{Comodule, Coring, CoringMorphism, LeftComodule};
use crate::dgalgebra::{verify_cellular_filtration, Action, AlgebraMorphism, DgAlgebra, DgModule, FiltrationCertificate, ModuleMap, Side, TensorTree};
use crate::duality::DualityWitness;
use crate::linalg::{add_entry, Fp, Matrix, Scalar, ScalarField, SparseVec};
use crate::Q;

/// A basis tuple: one name per tensor factor.
pub type Key = Vec<String>;
/// Sparse matrix keyed by (row, col).
pub type Table<S> = BTreeMap<(Key, Key), S>;
/// Sparse vector keyed by basis tuple.
pub type Vector<S> = BTreeMap<Key, S>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{object}: unresolved reference `{name}` (expected {expected})")]
    Unresolved { object: String, name: String, expected: String },
    #[error("{object}: {check}: {detail}")]
    Invalid { object: String, check: String, detail: String },
    #[error("field: {0}")]
    Field(String),
}

impl LoadError {
    fn invalid(object: &str, check: &str, detail: impl Into<String>) -> Self {
        LoadError::Invalid {
            object: object.to_string(),
            check: check.to_string(),
            detail: detail.into(),
        }
    }
}

/// Item kinds, in the order they are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Complex,
    Algebra,
    AlgebraMap,
    Module,
    ModuleMap,
    Filtration,
    Coring,
    CoringMap,
    Comodule,
    LeftComodule,
    Braiding,
    Witness,
}

const KINDS: [(Kind, &str); 12] = [
    (Kind::Complex, "complex"),
    (Kind::Algebra, "algebra"),
    (Kind::AlgebraMap, "algebra_map"),
    (Kind::Module, "module"),
    (Kind::ModuleMap, "module_map"),
    (Kind::Filtration, "filtration"),
    (Kind::Coring, "coring"),
    (Kind::CoringMap, "coring_map"),
    (Kind::Comodule, "comodule"),
    (Kind::LeftComodule, "left_comodule"),
    (Kind::Braiding, "braiding"),
    (Kind::Witness, "witness"),
];

impl Kind {
    pub fn keyword(self) -> &'static str {
        KINDS.iter().find(|(k, _)| *k == self).unwrap().1
    }

    fn from_keyword(s: &str) -> Option<Kind> {
        KINDS.iter().find(|(_, w)| *w == s).map(|(k, _)| *k)
    }

    fn has_arrow(self) -> bool {
        matches!(self, Kind::AlgebraMap | Kind::ModuleMap | Kind::CoringMap | Kind::Braiding)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl<S> {
    Complex { basis: Vec<(String, i32)>, d: Table<S> },
    Algebra { carrier: String, unit: Vector<S>, mult: Table<S> },
    AlgebraMap { source: String, target: String, map: Table<S> },
    Module { carrier: String, left: Option<(String, Table<S>)>, right: Option<(String, Table<S>)> },
    ModuleMap { source: String, target: String, map: Table<S> },
    Filtration { module: String, side: Side, stages: Vec<Vec<Vector<S>>> },
    Coring { algebra: String, carrier: String, delta: Table<S>, counit: Table<S>, coaugmentation: Option<Table<S>> },
    CoringMap { source: String, target: String, along: Option<String>, map: Table<S> },
    Comodule { side: Side, coring: String, carrier: String, coaction: Table<S> },
    Braiding { source: String, target: String, carrier: String, map: Table<S> },
    Witness { bimodule: String, dual: String, coevaluation: Vector<S>, evaluation: Table<S> },
}

impl<S> Decl<S> {
    pub fn kind(&self) -> Kind {
        match self {
            Decl::Complex { .. } => Kind::Complex,
            Decl::Algebra { .. } => Kind::Algebra,
            Decl::AlgebraMap { .. } => Kind::AlgebraMap,
            Decl::Module { .. } => Kind::Module,
            Decl::ModuleMap { .. } => Kind::ModuleMap,
            Decl::Filtration { .. } => Kind::Filtration,
            Decl::Coring { .. } => Kind::Coring,
            Decl::CoringMap { .. } => Kind::CoringMap,
            Decl::Comodule { side: Side::Right, .. } => Kind::Comodule,
            Decl::Comodule { side: Side::Left, .. } => Kind::LeftComodule,
            Decl::Braiding { .. } => Kind::Braiding,
            Decl::Witness { .. } => Kind::Witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Item<S> {
    pub name: String,
    pub decl: Decl<S>,
}

// ---------------------------------------------------------------------------
// Lexing and raw parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Sym(char),
}

const SYMBOLS: &str = "{}();:,*|";

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LoadError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let mut chars = line.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                chars.next();
            } else if SYMBOLS.contains(c) {
                chars.next();
                out.push((Tok::Sym(c), ln));
            } else if c == '"' {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(parse_err(ln, "unterminated quoted name")),
                        Some('"') => break,
                        Some('\\') => match chars.next() {
                            Some(e) => s.push(e),
                            None => return Err(parse_err(ln, "unterminated quoted name")),
                        },
                        Some(e) => s.push(e),
                    }
                }
                out.push((Tok::Word(s), ln));
            } else {
                let mut s = String::new();
                while let Some(&e) = chars.peek() {
                    if e.is_whitespace() || SYMBOLS.contains(e) || e == '"' || e == '#' {
                        break;
                    }
                    s.push(e);
                    chars.next();
                }
                out.push((Tok::Word(s), ln));
            }
        }
    }
    Ok(out)
}

fn parse_err(line: usize, message: impl Into<String>) -> LoadError {
    LoadError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Debug)]
enum Atom {
    Word(String),
    Gen(String, String),
    Tuple(Vec<Key>),
    Bar,
}

#[derive(Clone, Debug)]
struct Clause {
    keyword: String,
    line: usize,
    atoms: Vec<Atom>,
}

#[derive(Clone, Debug)]
struct RawItem {
    kind: Kind,
    name: String,
    line: usize,
    arrow: Option<(String, String)>,
    clauses: Vec<Clause>,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map(|t| t.1)
            .unwrap_or(1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn sym(&mut self, c: char) -> Result<(), LoadError> {
        if self.at_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(parse_err(self.line(), format!("expected `{c}`, found {}", self.describe())))
        }
    }

    fn word(&mut self) -> Result<String, LoadError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(parse_err(self.line(), format!("expected a name, found {}", self.describe()))),
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Word(w)) => format!("`{w}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        }
    }

    fn field(&mut self) -> Result<ScalarField, LoadError> {
        let line = self.line();
        let kw = self.word()?;
        if kw != "field" {
            return Err(parse_err(line, "a document starts with a field declaration"));
        }
        let f = self.word()?;
        let field = match f.as_str() {
            "Q" => ScalarField::Rationals,
            "GF" => {
                self.sym('(')?;
                let line = self.line();
                let p = self.word()?;
                self.sym(')')?;
                let p: u64 = p.parse().map_err(|_| parse_err(line, format!("bad modulus `{p}`")))?;
                ScalarField::prime(p).map_err(|e| LoadError::Field(e.to_string()))?
            }
            other => return Err(parse_err(line, format!("unknown field `{other}`"))),
        };
        self.sym(';')?;
        Ok(field)
    }

    fn key(&mut self) -> Result<Key, LoadError> {
        let mut k = vec![self.word()?];
        while self.at_sym('*') {
            self.pos += 1;
            k.push(self.word()?);
        }
        Ok(k)
    }

    fn item(&mut self) -> Result<RawItem, LoadError> {
        let line = self.line();
        let kw = self.word()?;
        let kind = Kind::from_keyword(&kw).ok_or_else(|| parse_err(line, format!("unknown item kind `{kw}`")))?;
        let name = self.word()?;
        let arrow = if kind.has_arrow() {
            self.sym(':')?;
            let src = self.word()?;
            let l = self.line();
            if self.word()? != "->" {
                return Err(parse_err(l, "expected `->`"));
            }
            Some((src, self.word()?))
        } else {
            None
        };
        self.sym('{')?;
        let mut clauses = Vec::new();
        while !self.at_sym('}') {
            let line = self.line();
            let keyword = self.word()?;
            let mut atoms = Vec::new();
            while !self.at_sym(';') {
                match self.peek() {
                    None => return Err(parse_err(self.line(), "unexpected end of input")),
                    Some(Tok::Sym('(')) => {
                        self.pos += 1;
                        let mut keys = vec![self.key()?];
                        while self.at_sym(',') {
                            self.pos += 1;
                            keys.push(self.key()?);
                        }
                        self.sym(')')?;
                        atoms.push(Atom::Tuple(keys));
                    }
                    Some(Tok::Sym('|')) => {
                        self.pos += 1;
                        atoms.push(Atom::Bar);
                    }
                    Some(Tok::Word(_)) => {
                        let w = self.word()?;
                        if self.at_sym(':') {
                            self.pos += 1;
                            atoms.push(Atom::Gen(w, self.word()?));
                        } else {
                            atoms.push(Atom::Word(w));
                        }
                    }
                    Some(_) => return Err(parse_err(self.line(), format!("unexpected {}", self.describe()))),
                }
            }
            self.sym(';')?;
            clauses.push(Clause { keyword, line, atoms });
        }
        self.sym('}')?;
        Ok(RawItem {
            kind,
            name,
            line,
            arrow,
            clauses,
        })
    }
}

fn parse_raw(text: &str) -> Result<(ScalarField, Vec<RawItem>), LoadError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let field = p.field()?;
    let mut items = Vec::new();
    let mut seen = BTreeSet::new();
    while p.peek().is_some() {
        let it = p.item()?;
        if !seen.insert(it.name.clone()) {
            return Err(parse_err(it.line, format!("duplicate name `{}`", it.name)));
        }
        items.push(it);
    }
    Ok((field, items))
}

// ---------------------------------------------------------------------------
// Raw items to declarations

struct Clauses {
    item: String,
    line: usize,
    map: Vec<Clause>,
}

impl Clauses {
    fn take(&mut self, kw: &str) -> Option<Clause> {
        let i = self.map.iter().position(|c| c.keyword == kw)?;
        Some(self.map.remove(i))
    }

    fn take_all(&mut self, kw: &str) -> Vec<Clause> {
        let (hit, rest) = self.map.drain(..).partition(|c| c.keyword == kw);
        self.map = rest;
        hit
    }

    fn require(&mut self, kw: &str) -> Result<Clause, LoadError> {
        self.take(kw)
            .ok_or_else(|| parse_err(self.line, format!("{} is missing its `{kw}` clause", self.item)))
    }

    fn finish(self) -> Result<(), LoadError> {
        match self.map.first() {
            None => Ok(()),
            Some(c) => Err(parse_err(c.line, format!("unexpected or repeated clause `{}` in {}", c.keyword, self.item))),
        }
    }
}

fn single_name(c: &Clause) -> Result<String, LoadError> {
    match c.atoms.as_slice() {
        [Atom::Word(w)] => Ok(w.clone()),
        _ => Err(parse_err(c.line, format!("`{}` takes a single name", c.keyword))),
    }
}

fn scalar<S: Scalar>(key: &Key, line: usize, field: &ScalarField) -> Result<S, LoadError> {
    match key.as_slice() {
        [w] => S::parse(w, field).map_err(|e| parse_err(line, e.to_string())),
        _ => Err(parse_err(line, "a scalar cannot be a tuple")),
    }
}

fn table<S: Scalar>(atoms: &[Atom], line: usize, field: &ScalarField) -> Result<Table<S>, LoadError> {
    let mut t: Table<S> = BTreeMap::new();
    for a in atoms {
        match a {
            Atom::Tuple(k) if k.len() == 3 => {
                let v: S = scalar(&k[2], line, field)?;
                let slot = t.entry((k[0].clone(), k[1].clone())).or_insert_with(S::zero);
                *slot = slot.clone() + v;
            }
            _ => return Err(parse_err(line, "expected entries `(row, col, scalar)`")),
        }
    }
    t.retain(|_, v| !v.is_zero());
    Ok(t)
}

fn vector<S: Scalar>(atoms: &[Atom], line: usize, field: &ScalarField) -> Result<Vector<S>, LoadError> {
    let mut t: Vector<S> = BTreeMap::new();
    for a in atoms {
        match a {
            Atom::Tuple(k) if k.len() == 2 => {
                let v: S = scalar(&k[1], line, field)?;
                let slot = t.entry(k[0].clone()).or_insert_with(S::zero);
                *slot = slot.clone() + v;
            }
            _ => return Err(parse_err(line, "expected entries `(basis, scalar)`")),
        }
    }
    t.retain(|_, v| !v.is_zero());
    Ok(t)
}

fn clause_table<S: Scalar>(c: &Clause, field: &ScalarField) -> Result<Table<S>, LoadError> {
    table(&c.atoms, c.line, field)
}

/// `left A (..)` style: a leading name, then entries.
fn named_table<S: Scalar>(c: &Clause, field: &ScalarField) -> Result<(String, Table<S>), LoadError> {
    match c.atoms.split_first() {
        Some((Atom::Word(w), rest)) => Ok((w.clone(), table(rest, c.line, field)?)),
        _ => Err(parse_err(c.line, format!("`{}` starts with an algebra name", c.keyword))),
    }
}

fn side_of(c: &Clause) -> Result<Side, LoadError> {
    match single_name(c)?.as_str() {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(parse_err(c.line, format!("side must be `left` or `right`, not `{other}`"))),
    }
}

fn to_decl<S: Scalar>(raw: RawItem, field: &ScalarField) -> Result<Item<S>, LoadError> {
    let f = field;
    let mut cs = Clauses {
        item: format!("{} `{}`", raw.kind, raw.name),
        line: raw.line,
        map: raw.clauses,
    };
    let (source, target) = raw.arrow.unwrap_or_default();
    let decl = match raw.kind {
        Kind::Complex => {
            let b = cs.require("basis")?;
            let mut basis = Vec::new();
            for a in &b.atoms {
                match a {
                    Atom::Gen(n, d) => {
                        let d: i32 = d.parse().map_err(|_| parse_err(b.line, format!("bad degree `{d}`")))?;
                        if basis.iter().any(|(m, _)| m == n) {
                            return Err(parse_err(b.line, format!("repeated basis name `{n}`")));
                        }
                        basis.push((n.clone(), d));
                    }
                    _ => return Err(parse_err(b.line, "basis entries are `name:degree`")),
                }
            }
            let d = match cs.take("d") {
                Some(c) => clause_table(&c, f)?,
                None => Table::new(),
            };
            Decl::Complex { basis, d }
        }
        Kind::Algebra => Decl::Algebra {
            carrier: single_name(&cs.require("carrier")?)?,
            unit: {
                let c = cs.require("unit")?;
                vector(&c.atoms, c.line, f)?
            },
            mult: clause_table(&cs.require("mult")?, f)?,
        },
        Kind::AlgebraMap => Decl::AlgebraMap {
            source,
            target,
            map: clause_table(&cs.require("map")?, f)?,
        },
        Kind::Module => Decl::Module {
            carrier: single_name(&cs.require("carrier")?)?,
            left: cs.take("left").map(|c| named_table(&c, f)).transpose()?,
            right: cs.take("right").map(|c| named_table(&c, f)).transpose()?,
        },
        Kind::ModuleMap => Decl::ModuleMap {
            source,
            target,
            map: clause_table(&cs.require("map")?, f)?,
        },
        Kind::Filtration => {
            let module = single_name(&cs.require("module")?)?;
            let side = side_of(&cs.require("side")?)?;
            let mut stages = Vec::new();
            for c in cs.take_all("stage") {
                let mut vecs = Vec::new();
                for group in c.atoms.split(|a| matches!(a, Atom::Bar)) {
                    let v = vector(group, c.line, f)?;
                    if !v.is_empty() {
                        vecs.push(v);
                    }
                }
                stages.push(vecs);
            }
            Decl::Filtration { module, side, stages }
        }
        Kind::Coring => Decl::Coring {
            algebra: single_name(&cs.require("algebra")?)?,
            carrier: single_name(&cs.require("carrier")?)?,
            delta: clause_table(&cs.require("delta")?, f)?,
            counit: clause_table(&cs.require("counit")?, f)?,
            coaugmentation: cs.take("coaugmentation").map(|c| clause_table(&c, f)).transpose()?,
        },
        Kind::CoringMap => Decl::CoringMap {
            source,
            target,
            along: cs.take("along").map(|c| single_name(&c)).transpose()?,
            map: clause_table(&cs.require("map")?, f)?,
        },
        Kind::Comodule | Kind::LeftComodule => Decl::Comodule {
            side: if raw.kind == Kind::Comodule { Side::Right } else { Side::Left },
            coring: single_name(&cs.require("coring")?)?,
            carrier: single_name(&cs.require("carrier")?)?,
            coaction: clause_table(&cs.require("coaction")?, f)?,
        },
        Kind::Braiding => Decl::Braiding {
            source,
            target,
            carrier: single_name(&cs.require("carrier")?)?,
            map: clause_table(&cs.require("map")?, f)?,
        },
        Kind::Witness => Decl::Witness {
            bimodule: single_name(&cs.require("bimodule")?)?,
            dual: single_name(&cs.require("dual")?)?,
            coevaluation: {
                let c = cs.require("coevaluation")?;
                vector(&c.atoms, c.line, f)?
            },
            evaluation: clause_table(&cs.require("evaluation")?, f)?,
        },
    };
    cs.finish()?;
    Ok(Item { name: raw.name, decl })
}

// ---------------------------------------------------------------------------
// Workspace

/// A loaded document: canonical declarations plus the validated objects.
#[derive(Clone)]
pub struct Workspace<S> {
    pub field: ScalarField,
    items: Vec<Item<S>>,
    pub complexes: BTreeMap<String, ChainComplex<S>>,
    pub algebras: BTreeMap<String, Arc<DgAlgebra<S>>>,
    pub algebra_maps: BTreeMap<String, AlgebraMorphism<S>>,
    pub modules: BTreeMap<String, Arc<DgModule<S>>>,
    pub module_maps: BTreeMap<String, ModuleMap<S>>,
    pub filtrations: BTreeMap<String, FiltrationCertificate<S>>,
    pub corings: BTreeMap<String, Arc<Coring<S>>>,
    pub coring_maps: BTreeMap<String, CoringMorphism<S>>,
    pub comodules: BTreeMap<String, Comodule<S>>,
    pub left_comodules: BTreeMap<String, LeftComodule<S>>,
    pub braidings: BTreeMap<String, BraidedBimodule<S>>,
    pub witnesses: BTreeMap<String, DualityWitness<S>>,
}

/// A workspace over whichever field the document declares.
pub enum AnyWorkspace {
    Rational(Workspace<Q>),
    Prime(Workspace<Fp>),
}

impl AnyWorkspace {
    pub fn field(&self) -> ScalarField {
        match self {
            AnyWorkspace::Rational(w) => w.field,
            AnyWorkspace::Prime(w) => w.field,
        }
    }

    pub fn save(&self) -> String {
        match self {
            AnyWorkspace::Rational(w) => w.save(),
            AnyWorkspace::Prime(w) => w.save(),
        }
    }
}

/// Parse and validate a document over the field it declares.
pub fn load(text: &str) -> Result<AnyWorkspace, Vec<LoadError>> {
    let (field, raw) = parse_raw(text).map_err(|e| vec![e])?;
    match field {
        ScalarField::Rationals => Workspace::from_raw(field, raw).map(AnyWorkspace::Rational),
        ScalarField::Prime(_) => Workspace::from_raw(field, raw).map(AnyWorkspace::Prime),
    }
}

/// Which entry of a declaration a perturbation touched.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation<S> {
    pub description: String,
    pub items: Vec<Item<S>>,
}

impl<S: Scalar> Workspace<S> {
    /// Parse a document whose field matches `S`.
    pub fn parse(text: &str) -> Result<Self, Vec<LoadError>> {
        let (field, raw) = parse_raw(text).map_err(|e| vec![e])?;
        Self::from_raw(field, raw)
    }

    fn from_raw(field: ScalarField, raw: Vec<RawItem>) -> Result<Self, Vec<LoadError>> {
        if !S::supports(&field) {
            return Err(vec![LoadError::Field(format!("scalar type does not support {field}"))]);
        }
        let items = raw
            .into_iter()
            .map(|r| to_decl(r, &field))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| vec![e])?;
        Self::build(field, items)
    }

    /// Build and validate every declaration; collects one error per failing item.
    pub fn build(field: ScalarField, mut items: Vec<Item<S>>) -> Result<Self, Vec<LoadError>> {
        items.sort_by(|a, b| (a.decl.kind(), &a.name).cmp(&(b.decl.kind(), &b.name)));
        let mut ws = Workspace {
            field,
            items: Vec::new(),
            complexes: BTreeMap::new(),
            algebras: BTreeMap::new(),
            algebra_maps: BTreeMap::new(),
            modules: BTreeMap::new(),
            module_maps: BTreeMap::new(),
            filtrations: BTreeMap::new(),
            corings: BTreeMap::new(),
            coring_maps: BTreeMap::new(),
            comodules: BTreeMap::new(),
            left_comodules: BTreeMap::new(),
            braidings: BTreeMap::new(),
            witnesses: BTreeMap::new(),
        };
        let mut names = BTreeSet::new();
        let mut errors = Vec::new();
        let mut failed = BTreeSet::new();
        for it in &items {
            if !names.insert(it.name.clone()) {
                errors.push(LoadError::invalid(&it.name, "name", "declared twice"));
                continue;
            }
            let mut b = Builder {
                ws: &mut ws,
                failed: &failed,
                object: &it.name,
            };
            if let Err(e) = b.build(&it.decl) {
                errors.push(e);
                failed.insert(it.name.clone());
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        ws.items = items;
        Ok(ws)
    }

    pub fn items(&self) -> &[Item<S>] {
        &self.items
    }

    pub fn item(&self, name: &str) -> Option<&Item<S>> {
        self.items.iter().find(|i| i.name == name)
    }

    /// Canonical text: items by kind then name, entries sorted, zeros dropped.
    pub fn save(&self) -> String {
        let mut out = String::new();
        match self.field {
            ScalarField::Rationals => out.push_str("field Q;\n"),
            ScalarField::Prime(p) => writeln!(out, "field GF({p});").unwrap(),
        }
        for it in &self.items {
            out.push('\n');
            write_item(&mut out, it);
        }
        out
    }

    /// Change one nonzero entry in `scope` by a seeded nonzero amount.
    pub fn perturb(&self, seed: u64, scope: Scope) -> Option<Perturbation<S>> {
        let mut sites: Vec<(usize, &'static str, usize)> = Vec::new();
        for (i, it) in self.items.iter().enumerate() {
            for (label, n) in structure_tables(&it.decl, scope) {
                for k in 0..n {
                    sites.push((i, label, k));
                }
            }
        }
        if sites.is_empty() {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, label, k) = sites[rng.gen_range(0..sites.len())];
        let delta = loop {
            let c = S::from_int(rng.gen_range(1..=5), &self.field);
            if !c.is_zero() {
                break c;
            }
        };
        let mut items = self.items.clone();
        let name = items[i].name.clone();
        let description = perturb_entry(&mut items[i].decl, label, k, delta);
        Some(Perturbation {
            description: format!("{name}.{label}: {description}"),
            items,
        })
    }
}

/// Which entries a perturbation may touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scope {
    /// Unit, multiplication, comultiplication, counit and coaugmentation.
    #[default]
    StructureConstants,
    /// Also actions, coactions, braidings and witnesses. A change there can
    /// land on another valid structure, e.g. a module twisted by `t ↦ c·t`.
    All,
}

/// Tables eligible for perturbation: (label, number of nonzero entries).
/// Differentials, morphisms and filtrations are never touched.
fn structure_tables<S>(d: &Decl<S>, scope: Scope) -> Vec<(&'static str, usize)> {
    match d {
        Decl::Algebra { unit, mult, .. } => vec![("unit", unit.len()), ("mult", mult.len())],
        Decl::Coring { delta, counit, coaugmentation, .. } => vec![
            ("delta", delta.len()),
            ("counit", counit.len()),
            ("coaugmentation", coaugmentation.as_ref().map_or(0, |t| t.len())),
        ],
        _ if scope == Scope::StructureConstants => vec![],
        Decl::Braiding { map, .. } => vec![("map", map.len())],
        Decl::Module { left, right, .. } => vec![
            ("left", left.as_ref().map_or(0, |l| l.1.len())),
            ("right", right.as_ref().map_or(0, |r| r.1.len())),
        ],
        Decl::Comodule { coaction, .. } => vec![("coaction", coaction.len())],
        Decl::Witness { coevaluation, evaluation, .. } => vec![("coevaluation", coevaluation.len()), ("evaluation", evaluation.len())],
        _ => vec![],
    }
}

fn bump_table<S: Scalar>(t: &mut Table<S>, k: usize, delta: S) -> String {
    let key = t.keys().nth(k).unwrap().clone();
    let v = t.get_mut(&key).unwrap();
    let old = v.clone();
    *v = old.clone() + delta;
    let new = v.clone();
    if new.is_zero() {
        t.remove(&key);
    }
    format!("({}, {}) {old} -> {new}", key_text(&key.0), key_text(&key.1))
}

fn perturb_entry<S: Scalar>(d: &mut Decl<S>, label: &str, k: usize, delta: S) -> String {
    match (d, label) {
        (Decl::Algebra { unit, .. }, "unit") | (Decl::Witness { coevaluation: unit, .. }, "coevaluation") => {
            let key = unit.keys().nth(k).unwrap().clone();
            let v = unit.get_mut(&key).unwrap();
            let old = v.clone();
            *v = old.clone() + delta;
            let new = v.clone();
            if new.is_zero() {
                unit.remove(&key);
            }
            format!("({}) {old} -> {new}", key_text(&key))
        }
        (Decl::Algebra { mult: t, .. }, _)
        | (Decl::Braiding { map: t, .. }, _)
        | (Decl::Coring { delta: t, .. }, "delta")
        | (Decl::Coring { counit: t, .. }, "counit")
        | (Decl::Comodule { coaction: t, .. }, _)
        | (Decl::Witness { evaluation: t, .. }, _) => bump_table(t, k, delta),
        (Decl::Coring { coaugmentation: Some(t), .. }, _) => bump_table(t, k, delta),
        (Decl::Module { left: Some((_, t)), .. }, "left") => bump_table(t, k, delta),
        (Decl::Module { right: Some((_, t)), .. }, _) => bump_table(t, k, delta),
        _ => unreachable!("perturbation site out of range"),
    }
}

// ---------------------------------------------------------------------------
// Building

struct Builder<'a, S> {
    ws: &'a mut Workspace<S>,
    failed: &'a BTreeSet<String>,
    object: &'a str,
}

fn lookup<'m, T>(map: &'m BTreeMap<String, T>, failed: &BTreeSet<String>, object: &str, name: &str, expected: &str) -> Result<&'m T, LoadError> {
    if failed.contains(name) {
        return Err(LoadError::invalid(object, "reference", format!("depends on invalid `{name}`")));
    }
    map.get(name).ok_or_else(|| LoadError::Unresolved {
        object: object.to_string(),
        name: name.to_string(),
        expected: expected.to_string(),
    })
}

/// Index of a basis tuple in the field tensor of `spaces` (row-major).
fn tuple_index(object: &str, spaces: &[(&str, &ChainComplex<impl Scalar>)], key: &Key) -> Result<usize, LoadError> {
    if key.len() != spaces.len() {
        return Err(LoadError::invalid(
            object,
            "entry",
            format!("`{}` should have {} factor(s)", key_text(key), spaces.len()),
        ));
    }
    let mut idx = 0;
    for ((label, c), name) in spaces.iter().zip(key) {
        let i = c.index_of(name).ok_or_else(|| LoadError::Unresolved {
            object: object.to_string(),
            name: name.clone(),
            expected: format!("basis element of {label}"),
        })?;
        idx = idx * c.dim() + i;
    }
    Ok(idx)
}

fn space_dim<S: Scalar>(spaces: &[(&str, &ChainComplex<S>)]) -> usize {
    spaces.iter().map(|(_, c)| c.dim()).product()
}

fn to_matrix<S: Scalar>(object: &str, t: &Table<S>, rows: &[(&str, &ChainComplex<S>)], cols: &[(&str, &ChainComplex<S>)]) -> Result<Matrix<S>, LoadError> {
    let mut trip = Vec::with_capacity(t.len());
    for ((r, c), v) in t {
        trip.push((tuple_index(object, rows, r)?, tuple_index(object, cols, c)?, v.clone()));
    }
    Matrix::from_triplets(space_dim(rows), space_dim(cols), trip).map_err(|e| LoadError::invalid(object, "entry", e.to_string()))
}

fn to_vector<S: Scalar>(object: &str, v: &Vector<S>, spaces: &[(&str, &ChainComplex<S>)]) -> Result<SparseVec<S>, LoadError> {
    let mut out = SparseVec::new();
    for (k, c) in v {
        add_entry(&mut out, tuple_index(object, spaces, k)?, c.clone());
    }
    Ok(out)
}

fn check(object: &str, v: Validation) -> Result<(), LoadError> {
    match v.failures.first() {
        None => Ok(()),
        Some(f) => Err(LoadError::invalid(object, &f.check, f.detail.clone())),
    }
}

impl<S: Scalar> Builder<'_, S> {
    fn construct<E: fmt::Display>(&self, what: &str, e: E) -> LoadError {
        LoadError::invalid(self.object, what, e.to_string())
    }

    fn complex(&self, name: &str) -> Result<ChainComplex<S>, LoadError> {
        lookup(&self.ws.complexes, self.failed, self.object, name, "complex").cloned()
    }

    fn algebra(&self, name: &str) -> Result<Arc<DgAlgebra<S>>, LoadError> {
        lookup(&self.ws.algebras, self.failed, self.object, name, "algebra").cloned()
    }

    fn module(&self, name: &str) -> Result<Arc<DgModule<S>>, LoadError> {
        lookup(&self.ws.modules, self.failed, self.object, name, "module").cloned()
    }

    fn coring(&self, name: &str) -> Result<Arc<Coring<S>>, LoadError> {
        lookup(&self.ws.corings, self.failed, self.object, name, "coring").cloned()
    }

    fn build(&mut self, decl: &Decl<S>) -> Result<(), LoadError> {
        let o = self.object;
        let name = o.to_string();
        let field = self.ws.field;
        match decl {
            Decl::Complex { basis, d } => {
                let g = ChainComplex::graded(field, basis.clone());
                let m = to_matrix(o, d, &[(o, &g)], &[(o, &g)])?;
                let c = g.with_differential(m).map_err(|e| self.construct("complex", e))?;
                check(o, c.validate())?;
                self.ws.complexes.insert(name, c);
            }
            Decl::Algebra { carrier, unit, mult } => {
                let k = self.complex(carrier)?;
                let sp = [(carrier.as_str(), &k)];
                let u = to_vector(o, unit, &sp)?;
                let m = to_matrix(o, mult, &sp, &[(carrier, &k), (carrier, &k)])?;
                let a = DgAlgebra::new(k.clone(), u, m).map_err(|e| self.construct("algebra", e))?;
                check(o, a.validate())?;
                self.ws.algebras.insert(name, Arc::new(a));
            }
            Decl::AlgebraMap { source, target, map } => {
                let (a, b) = (self.algebra(source)?, self.algebra(target)?);
                let m = to_matrix(o, map, &[(target, b.carrier())], &[(source, a.carrier())])?;
                let f = AlgebraMorphism::new(a, b, m).map_err(|e| self.construct("algebra map", e))?;
                check(o, f.validate())?;
                self.ws.algebra_maps.insert(name, f);
            }
            Decl::Module { carrier, left, right } => {
                let k = self.complex(carrier)?;
                let left = match left {
                    None => None,
                    Some((an, t)) => {
                        let a = self.algebra(an)?;
                        let table = to_matrix(o, t, &[(carrier, &k)], &[(an, a.carrier()), (carrier, &k)])?;
                        Some(Action { algebra: a, table })
                    }
                };
                let right = match right {
                    None => None,
                    Some((bn, t)) => {
                        let b = self.algebra(bn)?;
                        let table = to_matrix(o, t, &[(carrier, &k)], &[(carrier, &k), (bn, b.carrier())])?;
                        Some(Action { algebra: b, table })
                    }
                };
                let m = DgModule::new(k, left, right).map_err(|e| self.construct("module", e))?;
                check(o, m.validate())?;
                self.ws.modules.insert(name, Arc::new(m));
            }
            Decl::ModuleMap { source, target, map } => {
                let (s, t) = (self.module(source)?, self.module(target)?);
                let m = to_matrix(o, map, &[(target, t.carrier())], &[(source, s.carrier())])?;
                let f = ModuleMap::new(s, t, m).map_err(|e| self.construct("module map", e))?;
                check(o, f.validate())?;
                self.ws.module_maps.insert(name, f);
            }
            Decl::Filtration { module, side, stages } => {
                let m = self.module(module)?;
                let sp = [(module.as_str(), m.carrier())];
                let stages = stages
                    .iter()
                    .map(|st| st.iter().map(|v| to_vector(o, v, &sp)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let cert = FiltrationCertificate { side: *side, stages };
                check(o, verify_cellular_filtration(&m, &cert).validation)?;
                self.ws.filtrations.insert(name, cert);
            }
            Decl::Coring { algebra, carrier, delta, counit, coaugmentation } => {
                let a = self.algebra(algebra)?;
                let m = self.module(carrier)?;
                let mc = m.carrier();
                let d = to_matrix(o, delta, &[(carrier, mc), (carrier, mc)], &[(carrier, mc)])?;
                let e = to_matrix(o, counit, &[(algebra, a.carrier())], &[(carrier, mc)])?;
                let eta = coaugmentation
                    .as_ref()
                    .map(|t| to_matrix(o, t, &[(carrier, mc)], &[(algebra, a.carrier())]))
                    .transpose()?;
                let c = Coring::new(a.clone(), m.clone(), d, e, eta).map_err(|e| self.construct("coring", e))?;
                check(o, c.validate())?;
                self.ws.corings.insert(name, Arc::new(c));
            }
            Decl::CoringMap { source, target, along, map } => {
                let (c, d) = (self.coring(source)?, self.coring(target)?);
                let m = to_matrix(o, map, &[(target, d.carrier().carrier())], &[(source, c.carrier().carrier())])?;
                let f = match along {
                    None => CoringMorphism::over_identity(c, d, m),
                    Some(p) => {
                        let phi = lookup(&self.ws.algebra_maps, self.failed, o, p, "algebra map")?.clone();
                        CoringMorphism::new(phi, c, d, m)
                    }
                }
                .map_err(|e| self.construct("coring map", e))?;
                check(o, f.validate())?;
                self.ws.coring_maps.insert(name, f);
            }
            Decl::Comodule { side, coring, carrier, coaction } => {
                let c = self.coring(coring)?;
                let n = self.module(carrier)?;
                let (nc, cc) = (n.carrier(), c.carrier().carrier());
                match side {
                    Side::Right => {
                        let m = to_matrix(o, coaction, &[(carrier, nc), (coring, cc)], &[(carrier, nc)])?;
                        let x = Comodule::new(c.clone(), n.clone(), m).map_err(|e| self.construct("comodule", e))?;
                        check(o, x.validate())?;
                        self.ws.comodules.insert(name, x);
                    }
                    Side::Left => {
                        let m = to_matrix(o, coaction, &[(coring, cc), (carrier, nc)], &[(carrier, nc)])?;
                        let x = LeftComodule::new(c.clone(), n.clone(), m).map_err(|e| self.construct("left comodule", e))?;
                        check(o, x.validate())?;
                        self.ws.left_comodules.insert(name, x);
                    }
                }
            }
            Decl::Braiding { source, target, carrier, map } => {
                let (c, d) = (self.coring(source)?, self.coring(target)?);
                let x = self.module(carrier)?;
                let xc = x.carrier();
                let m = to_matrix(
                    o,
                    map,
                    &[(carrier, xc), (target, d.carrier().carrier())],
                    &[(source, c.carrier().carrier()), (carrier, xc)],
                )?;
                let t = BraidedBimodule::new(c.clone(), d.clone(), x.clone(), m).map_err(|e| self.construct("braiding", e))?;
                check(o, t.validate())?;
                self.ws.braidings.insert(name, t);
            }
            Decl::Witness { bimodule, dual, coevaluation, evaluation } => {
                let (x, y) = (self.module(bimodule)?, self.module(dual)?);
                let b = x
                    .right_algebra()
                    .ok_or_else(|| LoadError::invalid(o, "bimodule", "needs a right action"))?
                    .clone();
                let xl = TensorTree::leaf(x.clone());
                let yl = TensorTree::leaf(y.clone());
                let xy = TensorTree::over(xl.clone(), yl.clone()).map_err(|e| self.construct("coevaluation", e))?;
                let yx = TensorTree::over(yl, xl).map_err(|e| self.construct("evaluation", e))?;
                let (xc, yc) = (x.carrier(), y.carrier());
                let nx = xc.dim();
                let mut u = SparseVec::new();
                for (k, c) in coevaluation {
                    let i = tuple_index(o, &[(bimodule, xc), (dual, yc)], k)?;
                    for (q, w) in xy.project_tuple(&[i / yc.dim(), i % yc.dim()]) {
                        add_entry(&mut u, q, w * c.clone());
                    }
                }
                let pairs = to_matrix(o, evaluation, &[("B", b.carrier())], &[(dual, yc), (bimodule, xc)])?;
                // The evaluation must factor through the quotient Y ⊗_A X.
                let mut quotient = Matrix::zeros(b.dim(), yx.dim());
                for q in 0..yx.dim() {
                    let t = yx.rep_tuple(q);
                    for (r, v) in pairs.column(t[0] * nx + t[1]) {
                        quotient.set(*r, q, v.clone());
                    }
                }
                for col in 0..pairs.cols() {
                    let (j, i) = (col / nx, col % nx);
                    let mut expect = SparseVec::new();
                    for (q, w) in yx.project_tuple(&[j, i]) {
                        for (r, v) in quotient.column(q) {
                            add_entry(&mut expect, *r, v.clone() * w.clone());
                        }
                    }
                    if &expect != pairs.column(col) {
                        return Err(LoadError::invalid(
                            o,
                            "evaluation descends",
                            format!("not balanced at {}*{}", yc.name(j), xc.name(i)),
                        ));
                    }
                }
                let w = DualityWitness::new(x.clone(), y.clone(), u, quotient).map_err(|e| self.construct("witness", e))?;
                self.ws.witnesses.insert(name, w);
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Printing

fn needs_quotes(s: &str) -> bool {
    s.is_empty() || s == "->" || s.chars().any(|c| c.is_whitespace() || SYMBOLS.contains(c) || c == '"' || c == '#' || c == '\\')
}

fn name_text(s: &str) -> String {
    if needs_quotes(s) {
        let mut out = String::from('"');
        for c in s.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
        out
    } else {
        s.to_string()
    }
}

fn key_text(k: &Key) -> String {
    k.iter().map(|n| name_text(n)).collect::<Vec<_>>().join("*")
}

fn table_atoms<S: Scalar>(t: &Table<S>) -> Vec<String> {
    t.iter()
        .map(|((r, c), v)| format!("({}, {}, {v})", key_text(r), key_text(c)))
        .collect()
}

fn vector_atoms<S: Scalar>(v: &Vector<S>) -> Vec<String> {
    v.iter().map(|(k, s)| format!("({}, {s})", key_text(k))).collect()
}

fn clause(out: &mut String, keyword: &str, head: Option<&str>, atoms: Vec<String>) {
    out.push_str("  ");
    out.push_str(keyword);
    if let Some(h) = head {
        out.push(' ');
        out.push_str(&name_text(h));
    }
    if atoms.len() <= 4 {
        for a in atoms {
            out.push(' ');
            out.push_str(&a);
        }
    } else {
        for a in atoms {
            out.push_str("\n    ");
            out.push_str(&a);
        }
    }
    out.push_str(";\n");
}

fn write_item<S: Scalar>(out: &mut String, it: &Item<S>) {
    let kind = it.decl.kind();
    out.push_str(kind.keyword());
    out.push(' ');
    out.push_str(&name_text(&it.name));
    let arrow = match &it.decl {
        Decl::AlgebraMap { source, target, .. } | Decl::ModuleMap { source, target, .. } | Decl::CoringMap { source, target, .. } | Decl::Braiding { source, target, .. } => {
            Some((source, target))
        }
        _ => None,
    };
    if let Some((s, t)) = arrow {
        write!(out, " : {} -> {}", name_text(s), name_text(t)).unwrap();
    }
    out.push_str(" {\n");
    let single = |out: &mut String, kw: &str, v: &str| clause(out, kw, Some(v), vec![]);
    match &it.decl {
        Decl::Complex { basis, d } => {
            let atoms = basis.iter().map(|(n, g)| format!("{}:{g}", name_text(n))).collect();
            clause(out, "basis", None, atoms);
            if !d.is_empty() {
                clause(out, "d", None, table_atoms(d));
            }
        }
        Decl::Algebra { carrier, unit, mult } => {
            single(out, "carrier", carrier);
            clause(out, "unit", None, vector_atoms(unit));
            clause(out, "mult", None, table_atoms(mult));
        }
        Decl::AlgebraMap { map, .. } | Decl::ModuleMap { map, .. } => clause(out, "map", None, table_atoms(map)),
        Decl::Module { carrier, left, right } => {
            single(out, "carrier", carrier);
            if let Some((a, t)) = left {
                clause(out, "left", Some(a), table_atoms(t));
            }
            if let Some((b, t)) = right {
                clause(out, "right", Some(b), table_atoms(t));
            }
        }
        Decl::Filtration { module, side, stages } => {
            single(out, "module", module);
            single(out, "side", if *side == Side::Left { "left" } else { "right" });
            for st in stages {
                let mut atoms = Vec::new();
                for (i, v) in st.iter().enumerate() {
                    if i > 0 {
                        atoms.push("|".to_string());
                    }
                    atoms.extend(vector_atoms(v));
                }
                clause(out, "stage", None, atoms);
            }
        }
        Decl::Coring { algebra, carrier, delta, counit, coaugmentation } => {
            single(out, "algebra", algebra);
            single(out, "carrier", carrier);
            clause(out, "delta", None, table_atoms(delta));
            clause(out, "counit", None, table_atoms(counit));
            if let Some(t) = coaugmentation {
                clause(out, "coaugmentation", None, table_atoms(t));
            }
        }
        Decl::CoringMap { along, map, .. } => {
            if let Some(p) = along {
                single(out, "along", p);
            }
            clause(out, "map", None, table_atoms(map));
        }
        Decl::Comodule { coring, carrier, coaction, .. } => {
            single(out, "coring", coring);
            single(out, "carrier", carrier);
            clause(out, "coaction", None, table_atoms(coaction));
        }
        Decl::Braiding { carrier, map, .. } => {
            single(out, "carrier", carrier);
            clause(out, "map", None, table_atoms(map));
        }
        Decl::Witness { bimodule, dual, coevaluation, evaluation } => {
            single(out, "bimodule", bimodule);
            single(out, "dual", dual);
            clause(out, "coevaluation", None, vector_atoms(coevaluation));
            clause(out, "evaluation", None, table_atoms(evaluation));
        }
    }
    out.push_str("}\n");
}

// ---------------------------------------------------------------------------
// Exporting built objects

/// Writes built objects back out as declarations, reusing equal dependencies.
pub struct Exporter<S> {
    field: ScalarField,
    items: Vec<Item<S>>,
    names: BTreeSet<String>,
    complexes: Vec<(ChainComplex<S>, String)>,
    algebras: Vec<(Arc<DgAlgebra<S>>, String)>,
    modules: Vec<(Arc<DgModule<S>>, String)>,
    corings: Vec<(Arc<Coring<S>>, String)>,
    algebra_maps: Vec<(AlgebraMorphism<S>, String)>,
}

fn key_of<S: Scalar>(spaces: &[&ChainComplex<S>], mut idx: usize) -> Key {
    let mut key = vec![String::new(); spaces.len()];
    for (slot, c) in key.iter_mut().zip(spaces).rev() {
        *slot = c.name(idx % c.dim()).to_string();
        idx /= c.dim();
    }
    key
}

fn table_of<S: Scalar>(m: &Matrix<S>, rows: &[&ChainComplex<S>], cols: &[&ChainComplex<S>]) -> Table<S> {
    m.triplets().map(|(r, c, v)| ((key_of(rows, r), key_of(cols, c)), v.clone())).collect()
}

fn vector_of<S: Scalar>(v: &SparseVec<S>, spaces: &[&ChainComplex<S>]) -> Vector<S> {
    v.iter().filter(|(_, c)| !c.is_zero()).map(|(&i, c)| (key_of(spaces, i), c.clone())).collect()
}

/// Matrix whose columns are quotient vectors, rewritten on representative tuples.
fn lift_columns<S: Scalar>(m: &Matrix<S>, tree: &TensorTree<S>, leaves: &[&ChainComplex<S>], cols: &[&ChainComplex<S>]) -> Table<S> {
    let mut t = Table::new();
    for (q, c, v) in m.triplets() {
        let key = tree.rep_tuple(q).iter().zip(leaves).map(|(&i, k)| k.name(i).to_string()).collect();
        t.insert((key, key_of(cols, c)), v.clone());
    }
    t
}

impl<S: Scalar> Exporter<S> {
    pub fn new(field: ScalarField) -> Self {
        Exporter {
            field,
            items: Vec::new(),
            names: BTreeSet::new(),
            complexes: Vec::new(),
            algebras: Vec::new(),
            modules: Vec::new(),
            corings: Vec::new(),
            algebra_maps: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, decl: Decl<S>) -> String {
        let mut n = name.to_string();
        let mut i = 2;
        while self.names.contains(&n) {
            n = format!("{name}.{i}");
            i += 1;
        }
        self.names.insert(n.clone());
        self.items.push(Item { name: n.clone(), decl });
        n
    }

    pub fn complex(&mut self, name: &str, c: &ChainComplex<S>) -> String {
        if let Some((_, n)) = self.complexes.iter().find(|(k, _)| k == c) {
            return n.clone();
        }
        let decl = Decl::Complex {
            basis: c.basis(),
            d: table_of(c.differential(), &[c], &[c]),
        };
        let n = self.push(name, decl);
        self.complexes.push((c.clone(), n.clone()));
        n
    }

    pub fn algebra(&mut self, name: &str, a: &Arc<DgAlgebra<S>>) -> String {
        if let Some((_, n)) = self.algebras.iter().find(|(b, _)| b == a) {
            return n.clone();
        }
        let k = a.carrier();
        let carrier = self.complex(&format!("{name}.carrier"), k);
        let decl = Decl::Algebra {
            carrier,
            unit: vector_of(a.unit(), &[k]),
            mult: table_of(a.mult(), &[k], &[k, k]),
        };
        let n = self.push(name, decl);
        self.algebras.push((a.clone(), n.clone()));
        n
    }

    pub fn module(&mut self, name: &str, m: &Arc<DgModule<S>>) -> String {
        if let Some((_, n)) = self.modules.iter().find(|(x, _)| x == m) {
            return n.clone();
        }
        let k = m.carrier();
        let carrier = self.complex(&format!("{name}.carrier"), k);
        let left = m.left().map(|act| {
            let a = self.algebra(&format!("{name}.left"), &act.algebra);
            (a, table_of(&act.table, &[k], &[act.algebra.carrier(), k]))
        });
        let right = m.right().map(|act| {
            let b = self.algebra(&format!("{name}.right"), &act.algebra);
            (b, table_of(&act.table, &[k], &[k, act.algebra.carrier()]))
        });
        let n = self.push(name, Decl::Module { carrier, left, right });
        self.modules.push((m.clone(), n.clone()));
        n
    }

    pub fn coring(&mut self, name: &str, c: &Arc<Coring<S>>) -> String {
        if let Some((_, n)) = self.corings.iter().find(|(d, _)| Arc::ptr_eq(d, c)) {
            return n.clone();
        }
        let algebra = self.algebra(&format!("{name}.algebra"), c.algebra());
        let carrier = self.module(&format!("{name}.carrier"), c.carrier());
        let (k, ak) = (c.carrier().carrier(), c.algebra().carrier());
        let decl = Decl::Coring {
            algebra,
            carrier,
            delta: lift_columns(c.delta(), c.square(), &[k, k], &[k]),
            counit: table_of(c.counit(), &[ak], &[k]),
            coaugmentation: c.coaugmentation().map(|e| table_of(e, &[k], &[ak])),
        };
        let n = self.push(name, decl);
        self.corings.push((c.clone(), n.clone()));
        n
    }

    pub fn algebra_map(&mut self, name: &str, f: &AlgebraMorphism<S>) -> String {
        if let Some((_, n)) = self.algebra_maps.iter().find(|(g, _)| g == f) {
            return n.clone();
        }
        let source = self.algebra(&format!("{name}.source"), f.source());
        let target = self.algebra(&format!("{name}.target"), f.target());
        let map = table_of(f.matrix(), &[f.target().carrier()], &[f.source().carrier()]);
        let n = self.push(name, Decl::AlgebraMap { source, target, map });
        self.algebra_maps.push((f.clone(), n.clone()));
        n
    }

    pub fn module_map(&mut self, name: &str, f: &ModuleMap<S>) -> String {
        let source = self.module(&format!("{name}.source"), f.source());
        let target = self.module(&format!("{name}.target"), f.target());
        let map = table_of(f.matrix(), &[f.target().carrier()], &[f.source().carrier()]);
        self.push(name, Decl::ModuleMap { source, target, map })
    }

    pub fn coring_map(&mut self, name: &str, f: &CoringMorphism<S>) -> String {
        let source = self.coring(&format!("{name}.source"), f.source());
        let target = self.coring(&format!("{name}.target"), f.target());
        let along = (!f.is_over_identity()).then(|| self.algebra_map(&format!("{name}.along"), f.phi()));
        let map = table_of(f.sharp(), &[f.target().carrier().carrier()], &[f.source().carrier().carrier()]);
        self.push(name, Decl::CoringMap { source, target, along, map })
    }

    pub fn comodule(&mut self, name: &str, m: &Comodule<S>) -> String {
        let coring = self.coring(&format!("{name}.coring"), m.coring());
        let carrier = self.module(&format!("{name}.carrier"), m.carrier());
        let (k, ck) = (m.carrier().carrier(), m.coring().carrier().carrier());
        let coaction = lift_columns(m.coaction(), m.target_tree(), &[k, ck], &[k]);
        self.push(name, Decl::Comodule { side: Side::Right, coring, carrier, coaction })
    }

    pub fn left_comodule(&mut self, name: &str, m: &LeftComodule<S>) -> String {
        let coring = self.coring(&format!("{name}.coring"), m.coring());
        let carrier = self.module(&format!("{name}.carrier"), m.carrier());
        let (k, ck) = (m.carrier().carrier(), m.coring().carrier().carrier());
        let coaction = lift_columns(m.coaction(), m.target_tree(), &[ck, k], &[k]);
        self.push(name, Decl::Comodule { side: Side::Left, coring, carrier, coaction })
    }

    pub fn braiding(&mut self, name: &str, b: &BraidedBimodule<S>) -> String {
        let source = self.coring(&format!("{name}.source"), b.source());
        let target = self.coring(&format!("{name}.target"), b.target());
        let carrier = self.module(&format!("{name}.carrier"), b.carrier());
        let (ck, xk, dk) = (b.source().carrier().carrier(), b.carrier().carrier(), b.target().carrier().carrier());
        let nx = xk.dim();
        let mut pairs = Vec::new();
        for c in 0..ck.dim() {
            for x in 0..nx {
                let img = b.braiding().apply(&b.domain_tree().project_tuple(&[c, x]));
                pairs.push(img);
            }
        }
        let m = Matrix::from_columns(b.codomain_tree().dim(), pairs);
        let map = lift_columns(&m, b.codomain_tree(), &[xk, dk], &[ck, xk]);
        self.push(name, Decl::Braiding { source, target, carrier, map })
    }

    pub fn witness(&mut self, name: &str, w: &DualityWitness<S>) -> String {
        let bimodule = self.module(&format!("{name}.bimodule"), &w.x);
        let dual = self.module(&format!("{name}.dual"), &w.y);
        let (xk, yk) = (w.x.carrier(), w.y.carrier());
        let u = Matrix::from_columns(w.xy_tree().dim(), vec![w.coevaluation.clone()]);
        let coevaluation = lift_columns(&u, w.xy_tree(), &[xk, yk], &[xk]).into_iter().map(|((k, _), v)| (k, v)).collect();
        let b = w.right_algebra().carrier();
        let mut cols = Vec::new();
        for y in 0..yk.dim() {
            for x in 0..xk.dim() {
                cols.push(w.evaluation.apply(&w.yx_tree().project_tuple(&[y, x])));
            }
        }
        let evaluation = table_of(&Matrix::from_columns(b.dim(), cols), &[b], &[yk, xk]);
        self.push(name, Decl::Witness { bimodule, dual, coevaluation, evaluation })
    }

    pub fn filtration(&mut self, name: &str, module: &Arc<DgModule<S>>, cert: &FiltrationCertificate<S>) -> String {
        let m = self.module(&format!("{name}.module"), module);
        let k = module.carrier();
        let stages = cert.stages.iter().map(|st| st.iter().map(|v| vector_of(v, &[k])).filter(|v| !v.is_empty()).collect()).collect();
        self.push(name, Decl::Filtration { module: m, side: cert.side, stages })
    }

    pub fn items(&self) -> &[Item<S>] {
        &self.items
    }

    /// Build and validate the exported declarations.
    pub fn finish(self) -> Result<Workspace<S>, Vec<LoadError>> {
        Workspace::build(self.field, self.items)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUAL: &str = r#"
# dual numbers k[t]/t^2 and the regular coring
field Q;
complex K { basis 1:0 t:0; }
algebra A {
  carrier K;
  unit (1, 1);
  mult (1, 1*1, 1) (t, 1*t, 1) (t, t*1, 1);
}
complex KM { basis m:0; }
module Res { carrier KM; right A (m, m*1, 1); }
module Reg { carrier K; right A (1, 1*1, 1) (t, 1*t, 1) (t, t*1, 1); }
"#;

    fn q(w: &Workspace<Q>) -> String {
        w.save()
    }

    #[test]
    fn loads_and_round_trips() {
        let w = Workspace::<Q>::parse(DUAL).unwrap();
        assert_eq!(w.algebras["A"].dim(), 2);
        assert_eq!(w.modules["Res"].dim(), 1);
        let text = q(&w);
        let again = Workspace::<Q>::parse(&text).unwrap();
        assert_eq!(again.items(), w.items());
        assert_eq!(q(&again), text);
    }

    #[test]
    fn dangling_reference_is_named() {
        let bad = DUAL.replace("carrier KM", "carrier KX");
        let errs = Workspace::<Q>::parse(&bad).err().unwrap();
        assert!(errs.iter().any(|e| matches!(e, LoadError::Unresolved { name, .. } if name == "KX")), "{errs:?}");
    }

    #[test]
    fn non_prime_modulus() {
        let errs = load("field GF(4);\n").err().unwrap();
        assert!(matches!(&errs[0], LoadError::Field(m) if m.contains("not prime")));
    }

    #[test]
    fn broken_axiom_reports_first_failure() {
        let bad = DUAL.replace("(t, t*1, 1);\n}", "(t, t*1, 2);\n}");
        let errs = Workspace::<Q>::parse(&bad).err().unwrap();
        assert!(errs.iter().any(|e| matches!(e, LoadError::Invalid { object, .. } if object == "A")), "{errs:?}");
    }

    #[test]
    fn entries_merge_and_zeros_drop() {
        let text = DUAL.replace("(t, t*1, 1);\n}", "(t, t*1, 1/2) (t, t*1, 1/2) (1, t*t, 0);\n}");
        let w = Workspace::<Q>::parse(&text).unwrap();
        let base = Workspace::<Q>::parse(DUAL).unwrap();
        assert_eq!(w.save(), base.save());
    }

    #[test]
    fn parse_errors_carry_lines() {
        let errs = Workspace::<Q>::parse("field Q;\ncomplex K {\n basis a:x;\n}\n").err().unwrap();
        assert_eq!(errs[0], parse_err(3, "bad degree `x`"));
    }

    #[test]
    fn quoted_names_round_trip() {
        let text = "field GF(5);\ncomplex \"my K\" { basis \"a*b\":0 c:1; d (\"a*b\", c, 3); }\n";
        let w = Workspace::<Fp>::parse(text).unwrap();
        let saved = w.save();
        assert!(saved.contains("\"a*b\""));
        assert_eq!(Workspace::<Fp>::parse(&saved).unwrap().save(), saved);
    }

    #[test]
    fn perturbation_is_seeded() {
        let w = Workspace::<Q>::parse(DUAL).unwrap();
        let a = w.perturb(7, Scope::StructureConstants).unwrap();
        let b = w.perturb(7, Scope::StructureConstants).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.items, w.items().to_vec());
    }

    #[test]
    fn bundled_fixtures_build_and_round_trip() {
        for (name, e) in crate::fixtures::bundled::<Q>(&ScalarField::Rationals) {
            let w = e.finish().unwrap_or_else(|errs| panic!("{name}: {errs:?}"));
            let text = w.save();
            let again = Workspace::<Q>::parse(&text).unwrap_or_else(|errs| panic!("{name}: {errs:?}\n{text}"));
            assert_eq!(again.save(), text, "{name}");
        }
    }
}
