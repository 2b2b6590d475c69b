use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{hom_complex, hom_index, ChainComplex, WeakEquivalence};
use crate::linalg::{add_entry, axpy, kernel_image, unit_vec, Echelon, Matrix, Scalar, SparseVec};

use super::algebra::same_algebra;
use super::module::{Action, DgModule, ModuleMap, Side};
use super::tensor::{Block, TensorTree};
use super::DgError;

/// `Map_B(X, N)` inside the hom complex, with residual actions.
#[derive(Clone)]
pub struct MapModule<S> {
    pub module: Arc<DgModule<S>>,
    pub hom: ChainComplex<S>,
    /// Columns are the basis of `Map_B(X, N)` in hom-complex coordinates.
    pub inclusion: Matrix<S>,
    coords: Echelon<S>,
    source_dim: usize,
}

impl<S: Scalar> MapModule<S> {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Coordinates of a hom-complex vector, if it is `B`-linear.
    pub fn coordinates(&self, f: &SparseVec<S>) -> Option<SparseVec<S>> {
        self.coords.coordinates(f)
    }

    /// The graded map with matrix `m` (target × source) as a hom vector.
    pub fn hom_vector(&self, m: &Matrix<S>) -> SparseVec<S> {
        m.triplets().map(|(j, i, c)| (hom_index(i, j, self.source_dim), c.clone())).collect()
    }

    /// Matrix (target × source) of a map given in `Map` coordinates.
    pub fn as_matrix(&self, f: &SparseVec<S>, target_dim: usize) -> Matrix<S> {
        let h = self.inclusion.apply(f);
        let nx = self.source_dim;
        Matrix::from_triplets(target_dim, nx, h.into_iter().map(|(k, c)| (k / nx, k % nx, c))).unwrap()
    }

    /// `f(x_i)` for `f` in `Map` coordinates.
    pub fn evaluate(&self, f: &SparseVec<S>, x: usize) -> SparseVec<S> {
        let nx = self.source_dim;
        self.inclusion
            .apply(f)
            .into_iter()
            .filter(|(k, _)| k % nx == x)
            .map(|(k, c)| (k / nx, c))
            .collect()
    }
}

/// `Map_B(X, N)` for right `B`-modules: graded maps with `f(x·b) = f(x)·b`.
///
/// If `X` has a left `A`-action the result is a right `A`-module via
/// `(f·a)(x) = f(a·x)`; if `N` has a left `C`-action it is a left `C`-module via
/// `(c·f)(x) = c·f(x)`.
pub fn map_module<S: Scalar>(x: &DgModule<S>, n: &DgModule<S>) -> Result<MapModule<S>, DgError> {
    let rx = x.right().ok_or(DgError::MissingAction(Side::Right))?;
    let rn = n.right().ok_or(DgError::MissingAction(Side::Right))?;
    if !same_algebra(&rx.algebra, &rn.algebra) {
        return Err(DgError::AlgebraMismatch("Map_B between modules over different algebras".into()));
    }
    let (nx, nn, nb) = (x.dim(), n.dim(), rx.algebra.dim());
    let hom = hom_complex(x.carrier(), n.carrier())?;
    // Constraint (i', b, l): coefficient of n_l in f(x_{i'}·b) − f(x_{i'})·b.
    let cidx = |i: usize, b: usize, l: usize| (i * nb + b) * nn + l;
    let mut cols = vec![SparseVec::new(); hom.dim()];
    for ip in 0..nx {
        for b in 0..nb {
            for (&k, c) in x.act_right(ip, b) {
                for j in 0..nn {
                    add_entry(&mut cols[hom_index(k, j, nx)], cidx(ip, b, j), c.clone());
                }
            }
        }
    }
    for j in 0..nn {
        for b in 0..nb {
            for (&l, c) in n.act_right(j, b) {
                for i in 0..nx {
                    add_entry(&mut cols[hom_index(i, j, nx)], cidx(i, b, l), -c.clone());
                }
            }
        }
    }
    let constraints = Matrix::from_columns(nx * nb * nn, cols);
    let kernel = kernel_image(&constraints).kernel;
    let coords = Echelon::from_vectors(kernel.columns());
    let basis: Vec<(String, i32)> = kernel
        .columns()
        .iter()
        .map(|v| {
            let (&lead, _) = v.iter().next().expect("nonzero kernel vector");
            let name = if v.len() == 1 {
                hom.name(lead).to_string()
            } else {
                format!("{}+…", hom.name(lead))
            };
            (name, hom.degree_of(v).expect("B-linear maps split by degree"))
        })
        .collect();
    let to_coords = |h: &SparseVec<S>| coords.coordinates(h).expect("subcomplex is closed");
    let dh = hom.differential();
    let d = Matrix::from_columns(kernel.cols(), kernel.columns().iter().map(|v| to_coords(&dh.apply(v))).collect());
    let carrier = ChainComplex::new(hom.field(), basis, d)?;
    let q = kernel.cols();

    let right = match x.left() {
        None => None,
        Some(l) => {
            let na = l.algebra.dim();
            let mut table = Vec::with_capacity(q * na);
            for f in kernel.columns() {
                for a in 0..na {
                    // (E_{ji}·a) = Σ_m λ(a, x_m)[i] E_{jm}
                    let mut img = SparseVec::new();
                    for (&h, c) in f {
                        let (j, i) = (h / nx, h % nx);
                        for m in 0..nx {
                            if let Some(e) = x.act_left(a, m).get(&i) {
                                add_entry(&mut img, hom_index(m, j, nx), c.clone() * e.clone());
                            }
                        }
                    }
                    table.push(to_coords(&img));
                }
            }
            Some(Action {
                algebra: l.algebra.clone(),
                table: Matrix::from_columns(q, table),
            })
        }
    };
    let left = match n.left() {
        None => None,
        Some(l) => {
            let nc = l.algebra.dim();
            let mut table = Vec::with_capacity(q * nc);
            for c_idx in 0..nc {
                for f in kernel.columns() {
                    let mut img = SparseVec::new();
                    for (&h, c) in f {
                        let (j, i) = (h / nx, h % nx);
                        for (&lj, e) in n.act_left(c_idx, j) {
                            add_entry(&mut img, hom_index(i, lj, nx), c.clone() * e.clone());
                        }
                    }
                    table.push(to_coords(&img));
                }
            }
            Some(Action {
                algebra: l.algebra.clone(),
                table: Matrix::from_columns(q, table),
            })
        }
    };
    Ok(MapModule {
        module: Arc::new(DgModule::new(carrier, left, right)?),
        hom,
        inclusion: kernel,
        coords,
        source_dim: nx,
    })
}

/// Basis of the solutions `f` (rows × cols, supported on `entries`) of a
/// linear condition `constraint(f) = 0`.
pub fn linear_solutions<S, F>(rows: usize, cols: usize, entries: &[(usize, usize)], constraint: F) -> Vec<Matrix<S>>
where
    S: Scalar,
    F: Fn(&Matrix<S>) -> SparseVec<S>,
{
    let columns: Vec<SparseVec<S>> = entries
        .iter()
        .map(|&(r, c)| {
            let mut e = Matrix::zeros(rows, cols);
            e.set(r, c, S::one());
            constraint(&e)
        })
        .collect();
    let height = columns.iter().filter_map(|c| c.keys().next_back()).max().map_or(0, |&m| m + 1);
    let k = kernel_image(&Matrix::from_columns(height, columns)).kernel;
    k.columns()
        .iter()
        .map(|v| Matrix::from_triplets(rows, cols, v.iter().map(|(&u, c)| (entries[u].0, entries[u].1, c.clone()))).unwrap())
        .collect()
}

/// Concatenate matrices into one long vector (column-major with offsets).
pub fn flatten<S: Scalar>(parts: &[Matrix<S>]) -> SparseVec<S> {
    let mut out = SparseVec::new();
    let mut off = 0;
    for m in parts {
        for (i, j, c) in m.triplets() {
            out.insert(off + j * m.rows() + i, c.clone());
        }
        off += m.rows() * m.cols();
    }
    out
}

/// Basis of the strict degree-0 maps `source → target` that commute with
/// every action present on both sides.
pub fn module_maps<S: Scalar>(source: &DgModule<S>, target: &DgModule<S>) -> Vec<Matrix<S>> {
    let entries: Vec<(usize, usize)> = (0..target.dim())
        .flat_map(|j| (0..source.dim()).map(move |i| (j, i)))
        .filter(|&(j, i)| target.carrier().degree(j) == source.carrier().degree(i))
        .collect();
    let check_left = matches!((source.left_algebra(), target.left_algebra()), (Some(a), Some(b)) if same_algebra(a, b));
    let check_right = matches!((source.right_algebra(), target.right_algebra()), (Some(a), Some(b)) if same_algebra(a, b));
    linear_solutions(target.dim(), source.dim(), &entries, |f| {
        let mut parts = vec![target.carrier().differential().mul(f).sub(&f.mul(source.carrier().differential()))];
        if check_left {
            parts.push(left_defect(source, target, f));
        }
        if check_right {
            parts.push(right_defect(source, target, f));
        }
        flatten(&parts)
    })
}

fn left_defect<S: Scalar>(source: &DgModule<S>, target: &DgModule<S>, f: &Matrix<S>) -> Matrix<S> {
    let na = source.left_algebra().unwrap().dim();
    let cols = (0..na)
        .flat_map(|a| (0..source.dim()).map(move |x| (a, x)))
        .map(|(a, x)| {
            let mut v = f.apply(source.act_left(a, x));
            axpy(&mut v, &-S::one(), &target.left_multiply(&unit_vec(a), f.column(x)));
            v
        })
        .collect();
    Matrix::from_columns(target.dim(), cols)
}

fn right_defect<S: Scalar>(source: &DgModule<S>, target: &DgModule<S>, f: &Matrix<S>) -> Matrix<S> {
    let na = source.right_algebra().unwrap().dim();
    let cols = (0..source.dim())
        .flat_map(|x| (0..na).map(move |a| (x, a)))
        .map(|(x, a)| {
            let mut v = f.apply(source.act_right(x, a));
            axpy(&mut v, &-S::one(), &target.right_multiply(f.column(x), &unit_vec(a)));
            v
        })
        .collect();
    Matrix::from_columns(target.dim(), cols)
}

/// Search a linear space of maps for an invertible member passing `accept`.
///
/// Tries each basis element, then seeded random combinations.
pub fn find_invertible<S, F>(space: &[Matrix<S>], field: &crate::linalg::ScalarField, seed: u64, accept: F) -> Option<Matrix<S>>
where
    S: Scalar,
    F: Fn(&Matrix<S>) -> bool,
{
    let first = space.first()?;
    if first.rows() != first.cols() {
        return None;
    }
    let n = first.rows();
    let ok = |m: &Matrix<S>| crate::linalg::rank(m) == n && accept(m);
    if let Some(m) = space.iter().find(|m| ok(m)) {
        return Some(m.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let mut m = Matrix::zeros(n, n);
        for b in space {
            let c = S::from_int(rng.gen_range(-7..=7), field);
            m = m.combine(b, &c);
        }
        if ok(&m) {
            return Some(m);
        }
    }
    None
}

/// Solver-found isomorphism of modules, if one exists among the module maps.
pub fn find_module_isomorphism<S: Scalar>(source: &DgModule<S>, target: &DgModule<S>, seed: u64) -> Option<Matrix<S>> {
    if source.dim() != target.dim() {
        return None;
    }
    if source.dim() == 0 {
        return Some(Matrix::zeros(0, 0));
    }
    let space = module_maps(source, target);
    find_invertible(&space, &source.carrier().field(), seed, |_| true)
}

/// `W ⊗_A f` for a map `f` of left `A`-modules.
pub fn tensor_left_map<S: Scalar>(w: &Arc<DgModule<S>>, f: &ModuleMap<S>) -> Result<ModuleMap<S>, DgError> {
    let src = TensorTree::over(TensorTree::leaf(w.clone()), TensorTree::leaf(f.source().clone()))?;
    let tgt = TensorTree::over(TensorTree::leaf(w.clone()), TensorTree::leaf(f.target().clone()))?;
    let src_leaf = TensorTree::leaf(f.source().clone());
    let tgt_leaf = TensorTree::leaf(f.target().clone());
    let block = Block::through(&src_leaf, f.matrix(), &tgt_leaf, 0);
    let m = src.map_to(&tgt, |word| word.apply(1, &block));
    ModuleMap::new(src.module().clone(), tgt.module().clone(), m)
}

/// Outcome of a purity check: the plain verdict plus one per witness.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PurityVerdict {
    pub weak_equivalence: WeakEquivalence,
    pub witnesses: Vec<WeakEquivalence>,
    pub pure: bool,
}

/// Over a field the pure weak equivalences are the weak equivalences; the
/// witnesses add explicit checks of `W ⊗_A f`.
pub fn is_pure_weak_equivalence<S: Scalar>(f: &ModuleMap<S>, witnesses: &[Arc<DgModule<S>>]) -> Result<PurityVerdict, DgError> {
    let we = f.chain_map()?.weak_equivalence();
    let mut ws = Vec::new();
    for w in witnesses {
        ws.push(tensor_left_map(w, f)?.chain_map()?.weak_equivalence());
    }
    let pure = we.holds && ws.iter().all(|w| w.holds);
    Ok(PurityVerdict {
        weak_equivalence: we,
        witnesses: ws,
        pure,
    })
}

/// A subcomplex closed under the actions, with its inclusion.
#[derive(Clone)]
pub struct Submodule<S> {
    pub module: Arc<DgModule<S>>,
    /// Columns are the basis in ambient coordinates.
    pub inclusion: Matrix<S>,
    coords: Echelon<S>,
}

impl<S: Scalar> Submodule<S> {
    pub fn coordinates(&self, v: &SparseVec<S>) -> Option<SparseVec<S>> {
        self.coords.coordinates(v)
    }
}

/// The span of `vectors` (homogeneous, independent) as a submodule of `m`.
///
/// Fails with `NonDescending` when the span is not closed under `d` or an action.
pub fn submodule<S: Scalar>(m: &DgModule<S>, vectors: Vec<SparseVec<S>>) -> Result<Submodule<S>, DgError> {
    let x = m.carrier();
    let coords = Echelon::from_vectors(&vectors);
    if coords.rank() != vectors.len() {
        return Err(DgError::Shape("submodule generators are dependent".into()));
    }
    let to = |v: &SparseVec<S>, what: &str| coords.coordinates(v).ok_or_else(|| DgError::NonDescending(format!("span is not closed under {what}")));
    let mut basis = Vec::with_capacity(vectors.len());
    for v in &vectors {
        let deg = x.degree_of(v).ok_or_else(|| DgError::Shape("inhomogeneous submodule generator".into()))?;
        let name = match v.iter().next() {
            Some((&i, c)) if v.len() == 1 && c.is_one() => x.name(i).to_string(),
            _ => x.name_vector(v),
        };
        basis.push((name, deg));
    }
    let mut dcols = Vec::with_capacity(vectors.len());
    for v in &vectors {
        dcols.push(to(&x.differential().apply(v), "the differential")?);
    }
    let n = vectors.len();
    let carrier = ChainComplex::new(x.field(), basis, Matrix::from_columns(n, dcols))?;
    let left = match m.left() {
        None => None,
        Some(l) => {
            let mut cols = Vec::new();
            for a in 0..l.algebra.dim() {
                for v in &vectors {
                    cols.push(to(&m.left_multiply(&unit_vec(a), v), "the left action")?);
                }
            }
            Some(Action {
                algebra: l.algebra.clone(),
                table: Matrix::from_columns(n, cols),
            })
        }
    };
    let right = match m.right() {
        None => None,
        Some(r) => {
            let mut cols = Vec::new();
            for v in &vectors {
                for a in 0..r.algebra.dim() {
                    cols.push(to(&m.right_multiply(v, &unit_vec(a)), "the right action")?);
                }
            }
            Some(Action {
                algebra: r.algebra.clone(),
                table: Matrix::from_columns(n, cols),
            })
        }
    };
    Ok(Submodule {
        module: Arc::new(DgModule::new(carrier, left, right)?),
        inclusion: Matrix::from_columns(m.dim(), vectors),
        coords,
    })
}

/// Kernel of a degree-0 map out of `m`, as a submodule.
pub fn kernel_submodule<S: Scalar>(m: &DgModule<S>, f: &Matrix<S>) -> Result<Submodule<S>, DgError> {
    submodule(m, kernel_image(f).kernel.into_columns())
}

/// First failure of `f` to be a strict chain map commuting with every action
/// present on both sides.
pub fn module_map_failure<S: Scalar>(source: &DgModule<S>, target: &DgModule<S>, f: &Matrix<S>) -> Option<String> {
    if (f.rows(), f.cols()) != (target.dim(), source.dim()) {
        return Some(format!("map is {}x{}, expected {}x{}", f.rows(), f.cols(), target.dim(), source.dim()));
    }
    let (x, y) = (source.carrier(), target.carrier());
    if let Some((j, i, _)) = f.triplets().find(|&(j, i, _)| y.degree(j) != x.degree(i)) {
        return Some(format!("{} ↦ {} changes degree", x.name(i), y.name(j)));
    }
    let chain = y.differential().mul(f).sub(&f.mul(x.differential()));
    if let Some((_, i, _)) = chain.triplets().next() {
        return Some(format!("d f({0}) ≠ f(d {0})", x.name(i)));
    }
    if matches!((source.left_algebra(), target.left_algebra()), (Some(a), Some(b)) if same_algebra(a, b)) {
        let nx = source.dim();
        if let Some((_, c, _)) = left_defect(source, target, f).triplets().next() {
            let a = source.left_algebra().unwrap();
            return Some(format!("f({0}·{1}) ≠ {0}·f({1})", a.carrier().name(c / nx), x.name(c % nx)));
        }
    }
    if matches!((source.right_algebra(), target.right_algebra()), (Some(a), Some(b)) if same_algebra(a, b)) {
        let a = source.right_algebra().unwrap();
        let na = a.dim();
        if let Some((_, c, _)) = right_defect(source, target, f).triplets().next() {
            return Some(format!("f({0}·{1}) ≠ f({0})·{1}", x.name(c / na), a.carrier().name(c % na)));
        }
    }
    None
}
