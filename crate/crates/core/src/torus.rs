//! Cores, centers and core-modulo-center quotients on windows, the grading
//! data of a single root component, and the Lie torus axioms LT1 to LT4.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::exactfield::Scalar;
use crate::finroot::{indivisible, FinRootError, FinRootSystem, RootType};
use crate::grrs::{CheckOptions, GrrsError, GrrsPresentation};
use crate::lattice::{fmt_int_vec, CosetUnion, IntLattice, LatticeError};
use crate::liealg::GrlaHandle;
use crate::linalg::{
    fmt_vec, is_zero_vec, solve_linear, vec_add, vec_neg, vec_scale, vec_sub, zero_vec, Matrix,
    Subspace, Vector,
};
use crate::report::Report;
use crate::window::{GradedWindow, WindowError};

/// Cap on candidate lifts tried when extracting the grading.
const MAX_LIFTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("root system has {0} components, expected one")]
    NotIndecomposable(usize),
    #[error("no finite root system lifts into the roots: {0}")]
    NoLift(String),
    #[error(transparent)]
    Grrs(#[from] GrrsError),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    FinRoot(#[from] FinRootError),
}

/// Grading data of an indecomposable root system: a finite root system
/// lifted into the roots and the lattices of isotropic supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToriGrading {
    pub root_type: RootType,
    /// Finite root system in quotient coordinates with the scaled form.
    pub finite_system: FinRootSystem,
    /// Columns are the lifts of the quotient basis into the ambient space.
    pub lift: Matrix,
    /// Lifted roots in ambient coordinates.
    pub lifted_roots: Vec<Vector>,
    /// Span of the nonisolated isotropic supports.
    pub nonisolated_span: IntLattice,
    /// Span of the isolated supports.
    pub isolated_span: IntLattice,
    pub null_lattice: IntLattice,
    /// `[lift | embedding]`, used to split ambient vectors.
    split: Matrix,
}

fn fmt_lattice(l: &IntLattice) -> String {
    if l.rank() == 0 {
        return "0".into();
    }
    let gens: Vec<String> = l.basis().iter().map(|b| fmt_int_vec(b)).collect();
    format!("<{}>", gens.join(", "))
}

impl ToriGrading {
    /// `(type, rank n)` label of the grading.
    pub fn type_label(&self) -> String {
        format!(
            "({}, rank {})",
            self.root_type,
            self.nonisolated_span.rank()
        )
    }

    /// Splits an ambient vector as lifted finite root coordinates plus null coordinates.
    pub fn split(&self, x: &[Scalar]) -> Option<(Vector, Vector)> {
        let z = solve_linear(&self.split, x)?;
        if self.split.mul_vec(&z) != x {
            return None;
        }
        let r = self.lift.cols();
        Some((z[..r].to_vec(), z[r..].to_vec()))
    }

    /// Cartan integer of quotient coordinates `b` against the root `a`.
    pub fn cartan_int(&self, b: &[Scalar], a: &[Scalar]) -> Scalar {
        let g = self.finite_system.gram();
        let num = &Scalar::int(2) * &g.bilinear(b, a);
        num.div(&g.bilinear(a, a)).expect("nonisotropic root")
    }
}

impl fmt::Display for ToriGrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "finite type: {}", self.root_type)?;
        let lifts: Vec<String> = (0..self.lift.cols())
            .map(|j| fmt_vec(&self.lift.col(j)))
            .collect();
        writeln!(f, "lifted simple directions: {}", lifts.join(", "))?;
        writeln!(
            f,
            "nonisolated null span: {}",
            fmt_lattice(&self.nonisolated_span)
        )?;
        writeln!(
            f,
            "isolated null span: {}",
            fmt_lattice(&self.isolated_span)
        )?;
        write!(f, "null lattice: {}", fmt_lattice(&self.null_lattice))
    }
}

fn to_ints(v: &[Scalar]) -> Option<Vec<i64>> {
    v.iter().map(Scalar::to_i64).collect()
}

/// Grading data of a root presentation with a single component.
pub fn grading_extraction(
    g: &GrrsPresentation,
    opts: &CheckOptions,
) -> Result<ToriGrading, TorusError> {
    let dec = g.decompose(opts)?;
    if dec.components.len() != 1 {
        return Err(TorusError::NotIndecomposable(dec.components.len()));
    }
    let comp = &dec.components[0];
    let q = &comp.quotient;
    let nu = g.null_rank();
    let d = g.dim();
    let nonisolated_span = comp.null_support.zspan();
    let isolated_span = dec.isolated.zspan();
    let null_lattice = nonisolated_span.sum(&isolated_span);
    let finite_system = FinRootSystem::from_roots(&q.roots, &q.gram)?;
    let fams = g.families();
    let class_of_base = |b: &Vector| {
        fams.iter()
            .position(|f| f.base == *b)
            .expect("basis vectors are class bases")
    };
    let r = q.basis.len();
    let mut gb = Matrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            gb.set(i, j, g.form(&q.basis[i], &q.basis[j]));
        }
    }
    let gb_inv = gb
        .inverse()
        .expect("basis is independent modulo the radical");
    let image = |b: &Vector| -> Vector {
        gb_inv.mul_vec(&q.basis.iter().map(|x| g.form(b, x)).collect::<Vec<_>>())
    };
    let emb = if nu == 0 {
        Matrix::zeros(d, 0)
    } else {
        Matrix::from_rows(g.embedding(), d).transpose()
    };
    let lt_set = CosetUnion::lattice(nonisolated_span.clone());
    // candidate null shifts per basis class, distinct modulo the nonisolated span
    let mut candidates: Vec<Vec<Vec<i64>>> = Vec::new();
    for b in &q.basis {
        let s = &fams[class_of_base(b)].support;
        let mut seen = BTreeSet::new();
        let mut c = Vec::new();
        for res in s.residues() {
            if seen.insert(nonisolated_span.reduce(res)) {
                c.push(res.clone());
            }
        }
        candidates.push(c);
    }
    let total: usize = candidates.iter().map(Vec::len).product();
    let ind = indivisible(&finite_system);
    let mut last_reason = String::from("no candidate lifts");
    for idx in 0..total.min(MAX_LIFTS) {
        let mut k = idx;
        let mut lift = Matrix::zeros(d, r);
        for (j, c) in candidates.iter().enumerate() {
            let lam = &c[k % c.len()];
            k /= c.len();
            let col = vec_add(&q.basis[j], &g.embed_vec(lam));
            for i in 0..d {
                lift.set(i, j, col[i].clone());
            }
        }
        match lift_defect(g, &q.classes, &lift, &emb, &lt_set, &image, &ind) {
            Some(reason) => last_reason = reason,
            None => {
                let mut split = Matrix::zeros(d, r + nu);
                for i in 0..d {
                    for j in 0..r {
                        split.set(i, j, lift.get(i, j).clone());
                    }
                    for j in 0..nu {
                        split.set(i, r + j, emb.get(i, j).clone());
                    }
                }
                let lifted_roots = finite_system
                    .roots()
                    .iter()
                    .map(|y| lift.mul_vec(y))
                    .collect();
                return Ok(ToriGrading {
                    root_type: q.root_type,
                    finite_system,
                    lift,
                    lifted_roots,
                    nonisolated_span,
                    isolated_span,
                    null_lattice,
                    split,
                });
            }
        }
    }
    Err(TorusError::NoLift(last_reason))
}

/// Why a lift fails: a nonisotropic class not inside lifted roots plus
/// `the nonisolated span`, or an indivisible lifted root missing from the roots.
fn lift_defect(
    g: &GrrsPresentation,
    classes: &[usize],
    lift: &Matrix,
    emb: &Matrix,
    lt_set: &CosetUnion,
    image: &dyn Fn(&Vector) -> Vector,
    ind: &[Vector],
) -> Option<String> {
    for &c in classes {
        let f = &g.families()[c];
        let diff = vec_sub(&f.base, &lift.mul_vec(&image(&f.base)));
        let mu = if emb.cols() == 0 {
            if !is_zero_vec(&diff) {
                return Some(format!("class {} is off the lifted span", fmt_vec(&f.base)));
            }
            Vec::new()
        } else {
            match solve_linear(emb, &diff)
                .filter(|m| emb.mul_vec(m) == diff)
                .and_then(|m| to_ints(&m))
            {
                Some(m) => m,
                None => {
                    return Some(format!(
                        "class {} is off the lifted lattice",
                        fmt_vec(&f.base)
                    ))
                }
            }
        };
        if !f.support.translate(&mu).subset(lt_set).unwrap_or(false) {
            return Some(format!(
                "class {} is not in lifted roots plus the nonisolated span",
                fmt_vec(&f.base)
            ));
        }
    }
    for y in ind {
        let v = lift.mul_vec(y);
        if !g.member(&v).unwrap_or(false) {
            return Some(format!("lifted root {} is not a root", fmt_vec(&v)));
        }
    }
    None
}

/// LT1 to LT4 and centerlessness on a window.
#[derive(Debug, Clone)]
pub struct LieTorusReport {
    pub type_label: String,
    pub checks: Report,
}

impl LieTorusReport {
    pub fn lt_pass(&self) -> bool {
        ["LT1", "LT2(i)", "LT2(ii)", "LT3", "LT4"]
            .iter()
            .all(|n| self.checks.passed(n))
    }

    pub fn all_pass(&self) -> bool {
        self.checks.all_pass()
    }
}

impl fmt::Display for LieTorusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "type {}", self.type_label)?;
        write!(f, "{}", self.checks)
    }
}

/// Grading key `(finite root coordinates, null coordinates)` of each basis element.
type Key = (Vector, Vec<i64>);

/// Presentation coordinates of a window weight.
fn pres_coords(hd: &GrlaHandle, w: &[Scalar]) -> Option<Vector> {
    if is_zero_vec(w) {
        return Some(zero_vec(hd.from_pres.cols()));
    }
    hd.pres_coords(w)
}

/// Checks LT1 to LT4 and centerlessness of `q`, whose weights are those of
/// `hd`'s window, for the grading `t`.
pub fn check_lie_torus(q: &GradedWindow, hd: &GrlaHandle, t: &ToriGrading) -> LieTorusReport {
    let mut rep = Report::new();
    let n = q.dim();
    // LT1
    let mut keys: Vec<Option<Key>> = Vec::with_capacity(n);
    let mut lt1 = Vec::new();
    for i in 0..n {
        let key = pres_coords(hd, q.weight(i))
            .and_then(|x| t.split(&x))
            .and_then(|(a, l)| Some((a, to_ints(&l)?)));
        match &key {
            None => lt1.push(format!(
                "{} has a weight outside the lifted roots plus null lattice",
                q.label(i)
            )),
            Some((a, l)) => {
                if !is_zero_vec(a) && !t.finite_system.contains(a) {
                    lt1.push(format!(
                        "{} has finite part {} outside the finite root system",
                        q.label(i),
                        fmt_vec(a)
                    ));
                } else if !t.nonisolated_span.contains(l) {
                    lt1.push(format!(
                        "{} has null part {} outside the nonisolated span",
                        q.label(i),
                        fmt_int_vec(l)
                    ));
                }
            }
        }
        keys.push(key);
    }
    if let Some(x) = q.check_grading() {
        lt1.push(x);
    }
    rep.push(
        "LT1",
        lt1.is_empty(),
        if lt1.is_empty() {
            format!(
                "{} basis elements graded by lifted roots plus the nonisolated span",
                n
            )
        } else {
            lt1[0].clone()
        },
    );
    let mut spaces: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        if let Some(k) = k {
            spaces.entry(k.clone()).or_default().push(i);
        }
    }
    // LT2(i)
    let mut lt2i = None;
    for ((a, l), ids) in &spaces {
        if !is_zero_vec(a) && ids.len() > 1 {
            lt2i.get_or_insert(format!(
                "space of ({}, {}) has dimension {}",
                fmt_vec(a),
                fmt_int_vec(l),
                ids.len()
            ));
        }
    }
    let zero_l = vec![0i64; t.nonisolated_span.ambient()];
    for a in indivisible(&t.finite_system) {
        let dim = spaces
            .get(&(a.clone(), zero_l.clone()))
            .map(Vec::len)
            .unwrap_or(0);
        if dim != 1 {
            lt2i.get_or_insert(format!(
                "space of ({}, 0) has dimension {}",
                fmt_vec(&a),
                dim
            ));
        }
    }
    rep.push("LT2(i)", lt2i.is_none(), lt2i.unwrap_or_else(|| "nonzero finite parts have dimension at most 1, indivisible ones exactly 1 in null degree 0".into()));
    // LT2(ii)
    let mut lt2ii = None;
    let mut triples = 0usize;
    let mut undecided = 0usize;
    'spaces: for ((a, l), ids) in &spaces {
        if is_zero_vec(a) {
            continue;
        }
        let e = q.unit(ids[0]);
        let neg: Key = (vec_neg(a), l.iter().map(|x| -x).collect());
        let Some(opp) = spaces.get(&neg) else {
            lt2ii.get_or_insert(format!("no space opposite to {}", q.label(ids[0])));
            continue;
        };
        let mut h = None;
        for &j in opp {
            let Ok(h0) = q.bracket(&e, &q.unit(j)) else {
                continue;
            };
            let Ok(he) = q.bracket(&h0, &e) else { continue };
            let kappa = he[ids[0]].clone();
            if !kappa.is_zero() && he == vec_scale(&kappa, &e) {
                h = Some(vec_scale(
                    &Scalar::int(2).div(&kappa).expect("nonzero"),
                    &h0,
                ));
                break;
            }
        }
        let Some(h) = h else {
            lt2ii.get_or_insert(format!("no sl2 triple through {}", q.label(ids[0])));
            continue;
        };
        triples += 1;
        for (x, kx) in keys.iter().enumerate() {
            let Some((b, _)) = kx else { continue };
            let want = if is_zero_vec(b) {
                Scalar::zero()
            } else {
                t.cartan_int(b, a)
            };
            match q.bracket(&h, &q.unit(x)) {
                Ok(v) => {
                    if v != vec_scale(&want, &q.unit(x)) {
                        lt2ii.get_or_insert(format!(
                            "[h, {}] != ({}) {} for the triple through {}",
                            q.label(x),
                            want,
                            q.label(x),
                            q.label(ids[0])
                        ));
                        continue 'spaces;
                    }
                }
                Err(_) => undecided += 1,
            }
        }
    }
    rep.push(
        "LT2(ii)",
        lt2ii.is_none(),
        lt2ii.unwrap_or_else(|| {
            format!(
                "{} triples act by Cartan integers ({} brackets leave the window)",
                triples, undecided
            )
        }),
    );
    // LT3
    let mut lt3 = None;
    let mut checked = 0usize;
    for ((a, l), ids) in &spaces {
        if !is_zero_vec(a) {
            continue;
        }
        let mut span = Subspace::new(n);
        for ((b, m), xs) in &spaces {
            if is_zero_vec(b) {
                continue;
            }
            let rest: Vec<i64> = l.iter().zip(m).map(|(x, y)| x - y).collect();
            let Some(ys) = spaces.get(&(vec_neg(b), rest)) else {
                continue;
            };
            for &x in xs {
                for &y in ys {
                    if let Ok(v) = q.bracket(&q.unit(x), &q.unit(y)) {
                        span.insert(&v);
                    }
                }
            }
        }
        checked += 1;
        if span.dim() != ids.len() {
            lt3.get_or_insert(format!(
                "null degree {}: brackets span dimension {} of {} ({} not reached)",
                fmt_int_vec(l),
                span.dim(),
                ids.len(),
                ids.iter()
                    .map(|&i| q.unit(i))
                    .find(|v| !span.contains(v))
                    .map(|v| q.fmt_element(&v))
                    .unwrap_or_default()
            ));
        }
    }
    rep.push(
        "LT3",
        lt3.is_none(),
        lt3.unwrap_or_else(|| {
            format!(
                "{} null degrees of finite part 0 are spanned by brackets",
                checked
            )
        }),
    );
    // LT4
    let supp: Vec<Vec<i64>> = spaces.keys().map(|(_, l)| l.clone()).collect();
    let gen = IntLattice::from_generators(t.nonisolated_span.ambient(), &supp);
    let lt4 =
        gen.contains_lattice(&t.nonisolated_span) && t.nonisolated_span.contains_lattice(&gen);
    rep.push(
        "LT4",
        lt4,
        format!(
            "supports generate {}, the nonisolated span = {}",
            fmt_lattice(&gen),
            fmt_lattice(&t.nonisolated_span)
        ),
    );
    // centerless
    let all: Vec<Vector> = (0..n).map(|i| q.unit(i)).collect();
    let center = q.centralizer(&all, &all);
    rep.push(
        "centerless",
        center.is_empty(),
        match center.first() {
            None => "no in-window central elements".to_string(),
            Some(c) => format!("{} is central", q.fmt_element(c)),
        },
    );
    LieTorusReport {
        type_label: t.type_label(),
        checks: rep,
    }
}

/// Per-degree core basis generated from the nonisotropic basis elements
/// selected by `pick`: their spans and the brackets landing on isotropic weights.
fn core_spaces(
    w: &GradedWindow,
    pick: &dyn Fn(usize) -> bool,
) -> BTreeMap<(Vector, i64), Subspace> {
    let n = w.dim();
    let noniso: Vec<usize> = (0..n)
        .filter(|&i| !w.is_isotropic_weight(w.weight(i)) && pick(i))
        .collect();
    let mut spaces: BTreeMap<(Vector, i64), Subspace> = BTreeMap::new();
    for &i in &noniso {
        spaces
            .entry((w.weight(i).clone(), w.grade(i)))
            .or_insert_with(|| Subspace::new(n))
            .insert(&w.unit(i));
    }
    for &i in &noniso {
        for &j in &noniso {
            let wt = vec_add(w.weight(i), w.weight(j));
            if !w.is_isotropic_weight(&wt) {
                continue;
            }
            if let Ok(v) = w.bracket(&w.unit(i), &w.unit(j)) {
                if !is_zero_vec(&v) {
                    spaces
                        .entry((wt, w.grade(i) + w.grade(j)))
                        .or_insert_with(|| Subspace::new(n))
                        .insert(&v);
                }
            }
        }
    }
    spaces
}

/// Compares per-degree dimensions of a construction at radius `N` and `N - 1`.
fn stability(
    label: &str,
    full: &BTreeMap<(Vector, i64), usize>,
    smaller: &BTreeMap<(Vector, i64), usize>,
    r: i64,
) -> Result<(), TorusError> {
    for (k, &d) in full {
        if k.1.abs() <= r && smaller.get(k).copied().unwrap_or(0) != d {
            return Err(TorusError::WindowTooSmall(format!(
                "{} at weight {} degree {} has dimension {} at radius {} but {} at radius {}",
                label,
                fmt_vec(&k.0),
                k.1,
                d,
                r + 1,
                smaller.get(k).copied().unwrap_or(0),
                r
            )));
        }
    }
    for (k, &d) in smaller {
        if !full.contains_key(k) && d > 0 {
            return Err(TorusError::WindowTooSmall(format!(
                "{} at degree {} appears only at radius {}",
                label, k.1, r
            )));
        }
    }
    Ok(())
}

fn dims<T>(
    m: &BTreeMap<(Vector, i64), T>,
    f: impl Fn(&T) -> usize,
) -> BTreeMap<(Vector, i64), usize> {
    m.iter()
        .map(|(k, v)| (k.clone(), f(v)))
        .filter(|(_, d)| *d > 0)
        .collect()
}

fn core_with(w: &GradedWindow, pick: &dyn Fn(usize) -> bool) -> Result<GradedWindow, TorusError> {
    let spaces = core_spaces(w, pick);
    if let Some(r) = w.radius() {
        if r >= 1 {
            let small = w.restrict_radius(r - 1);
            // the smaller window keeps the basis elements of grade at most r - 1 in order
            let keep: Vec<usize> = (0..w.dim()).filter(|&i| w.grade(i).abs() < r).collect();
            let small_spaces = core_spaces(&small, &|i| pick(keep[i]));
            stability(
                "core",
                &dims(&spaces, Subspace::dim),
                &dims(&small_spaces, Subspace::dim),
                r - 1,
            )?;
        }
    }
    let mut basis = Vec::new();
    for s in spaces.values() {
        basis.extend(s.echelon().iter().cloned());
    }
    let labels = basis.iter().map(|v| w.fmt_element(v)).collect();
    Ok(w.sub_window(&basis, labels)?)
}

/// Core of a window: nonisotropic root spaces and brackets of opposite ones.
pub fn core_window(w: &GradedWindow) -> Result<GradedWindow, TorusError> {
    core_with(w, &|_| true)
}

fn center_spaces(w: &GradedWindow) -> BTreeMap<(Vector, i64), Vec<Vector>> {
    let all: Vec<Vector> = (0..w.dim()).map(|i| w.unit(i)).collect();
    let mut out: BTreeMap<(Vector, i64), Vec<Vector>> = BTreeMap::new();
    for v in w.centralizer(&all, &all) {
        let k = w.degree_of(&v).expect("homogeneous");
        out.entry(k).or_default().push(v);
    }
    out
}

/// Basis of the window-decidable center, stable between radius `N - 1` and `N`.
pub fn center_of_core(w: &GradedWindow) -> Result<Vec<Vector>, TorusError> {
    let spaces = center_spaces(w);
    if let Some(r) = w.radius() {
        if r >= 1 {
            let small = center_spaces(&w.restrict_radius(r - 1));
            stability(
                "center",
                &dims(&spaces, Vec::len),
                &dims(&small, Vec::len),
                r - 1,
            )?;
        }
    }
    Ok(spaces.into_values().flatten().collect())
}

/// The window modulo its center.
pub fn quotient_core(w: &GradedWindow) -> Result<GradedWindow, TorusError> {
    let center = center_of_core(w)?;
    Ok(w.quotient(&center)?)
}

/// Core, center and quotient for one component of the root system.
#[derive(Debug, Clone)]
pub struct ComponentTorus {
    pub grading: ToriGrading,
    pub core: GradedWindow,
    pub center: Vec<Vector>,
    pub quotient: GradedWindow,
    pub report: LieTorusReport,
}

/// Core modulo center of a whole window and of each component.
#[derive(Debug, Clone)]
pub struct TorusPipeline {
    pub core: GradedWindow,
    pub center: Vec<Vector>,
    pub quotient: GradedWindow,
    pub components: Vec<ComponentTorus>,
    pub checks: Report,
}

impl TorusPipeline {
    pub fn reports(&self) -> Vec<&LieTorusReport> {
        self.components.iter().map(|c| &c.report).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.all_pass() && self.components.iter().all(|c| c.report.all_pass())
    }
}

fn graded_dims(w: &GradedWindow) -> BTreeMap<(Vector, i64), usize> {
    w.weight_spaces()
        .into_iter()
        .map(|(k, v)| (k, v.len()))
        .collect()
}

/// Splits the root system into components, then forms each component's
/// core modulo center and checks it as a Lie torus. Also compares the
/// whole core modulo center with the sum of the pieces, degree by degree.
pub fn core_mod_center_pipeline(
    hd: &GrlaHandle,
    opts: &CheckOptions,
) -> Result<TorusPipeline, TorusError> {
    let w = &hd.window;
    let dec = hd.presentation.decompose(opts)?;
    let core = core_window(w)?;
    let center = center_of_core(&core)?;
    let quotient = core.quotient(&center)?;
    let comp_of: Vec<Option<usize>> = (0..w.dim())
        .map(|i| {
            let x = pres_coords(hd, w.weight(i))?;
            let rr = hd.presentation.root_ref(&x)?;
            dec.components
                .iter()
                .position(|c| c.quotient.classes.contains(&rr.class))
        })
        .collect();
    let mut components = Vec::new();
    for (k, comp) in dec.components.iter().enumerate() {
        let grading = grading_extraction(&comp.piece, opts)?;
        let ccore = core_with(w, &|i| comp_of[i] == Some(k))?;
        let ccenter = center_of_core(&ccore)?;
        let cq = ccore.quotient(&ccenter)?;
        let report = check_lie_torus(&cq, hd, &grading);
        components.push(ComponentTorus {
            grading,
            core: ccore,
            center: ccenter,
            quotient: cq,
            report,
        });
    }
    let mut checks = Report::new();
    let whole = graded_dims(&quotient);
    let mut summed: BTreeMap<(Vector, i64), usize> = BTreeMap::new();
    for c in &components {
        for (k, d) in graded_dims(&c.quotient) {
            *summed.entry(k).or_insert(0) += d;
        }
    }
    let mismatch = whole
        .iter()
        .find(|(k, d)| summed.get(*k) != Some(*d))
        .map(|(k, _)| k.clone())
        .or_else(|| summed.keys().find(|k| !whole.contains_key(*k)).cloned());
    checks.push(
        "core modulo center splits",
        mismatch.is_none(),
        match mismatch {
            None => format!(
                "{} graded pieces match the sum over {} components",
                whole.len(),
                components.len()
            ),
            Some(k) => format!(
                "weight {} degree {}: whole {} vs components {}",
                fmt_vec(&k.0),
                k.1,
                whole.get(&k).copied().unwrap_or(0),
                summed.get(&k).copied().unwrap_or(0)
            ),
        },
    );
    let all: Vec<Vector> = (0..quotient.dim()).map(|i| quotient.unit(i)).collect();
    let left = quotient.centralizer(&all, &all);
    checks.push(
        "quotient centerless",
        left.is_empty(),
        match left.first() {
            None => "core modulo center has no in-window center".to_string(),
            Some(v) => format!("{} is central", quotient.fmt_element(v)),
        },
    );
    Ok(TorusPipeline {
        core,
        center,
        quotient,
        components,
        checks,
    })
}
