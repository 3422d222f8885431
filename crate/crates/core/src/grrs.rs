//! Finitely presented generalized reductive root systems.
//!
//! A presentation lives in `Q^d` with a symmetric rational form and an
//! injective embedding `E: Z^nu -> Q^d` into the radical of the form. Roots are
//! grouped into families `base + E(support)` where `support` is a
//! [`CosetUnion`]. Families are merged per class modulo `E Z^nu`, so each
//! class is stored once with a canonical base, and isotropic roots form the
//! single family with base 0.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exactfield::Scalar;
use crate::finroot::{classify_finroot, FinRootError, RootType};
use crate::lattice::{CosetUnion, IntLattice, LatticeError};
use crate::linalg::{
    clear_denominators, fmt_vec, hermite_normal_form, is_positive_semidefinite, is_zero_vec,
    kernel_basis, vec_add, vec_neg, vec_scale, vec_sub, zero_vec, IntMatrix, Matrix, Subspace,
    Vector,
};

pub const DEFAULT_WINDOW: i64 = 2;
pub const DEFAULT_STRING_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrrsError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("form is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("form entries must be rational")]
    NotRational,
    #[error("embedding column {0} is not in the radical of the form")]
    EmbeddingNotInRadical(usize),
    #[error("embedding columns are linearly dependent")]
    EmbeddingNotInjective,
    #[error("isotropic family base {0} is not in the embedded lattice")]
    IsotropicOffLattice(String),
    #[error("presentation has no nonisotropic roots")]
    NoNonisotropicRoots,
    #[error("{0} is isotropic; Cartan numbers need a nonisotropic root")]
    IsotropicDenominator(String),
    #[error("Cartan number of {beta} against {alpha} is {value}, not an integer in [-4, 4]")]
    CartanViolation {
        beta: String,
        alpha: String,
        value: String,
    },
    #[error("{0} is not a root")]
    NotARoot(String),
    #[error("root string of {beta} through {alpha} is longer than the cap {cap}")]
    StringCapExceeded {
        beta: String,
        alpha: String,
        cap: u32,
    },
    #[error("root string of {beta} through {alpha} is broken at n = {n}")]
    BrokenString { beta: String, alpha: String, n: i64 },
    #[error("root string of {beta} through {alpha} has d - u = {diff} but Cartan number {cartan}")]
    StringDefect {
        beta: String,
        alpha: String,
        diff: i64,
        cartan: i64,
    },
    #[error("component form is not positive: ({gamma}, {gamma}) and ({alpha}, {alpha}) have opposite signs")]
    IndefiniteComponent { gamma: String, alpha: String },
    #[error("roots do not span the ambient space")]
    NotSpanning,
    #[error("axiom check failed: {0}")]
    AxiomViolation(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    FinRoot(#[from] FinRootError),
}

/// One class of roots: `base + E(support)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub base: Vector,
    pub support: CosetUnion,
}

/// A root given by its family index and support coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootRef {
    pub class: usize,
    pub null_coords: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrrsPresentation {
    gram: Matrix,
    embed: Vec<Vector>,
    families: Vec<Family>,
    embed_rows: Vec<usize>,
    embed_inv: Matrix,
    iso: Option<usize>,
}

fn floor_i64(s: &Scalar) -> i64 {
    s.as_rational()
        .expect("rational")
        .floor()
        .to_integer()
        .to_i64()
        .expect("fits in i64")
}

impl GrrsPresentation {
    /// Builds a presentation from raw families, merging classes.
    pub fn new(
        gram: Matrix,
        embed: Vec<Vector>,
        families: Vec<(Vector, CosetUnion)>,
    ) -> Result<Self, GrrsError> {
        let d = gram.rows();
        if gram.cols() != d {
            return Err(GrrsError::DimensionMismatch("form must be square".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(GrrsError::NotSymmetric(i, j));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                if !gram.get(i, j).is_rational() {
                    return Err(GrrsError::NotRational);
                }
            }
        }
        let nu = embed.len();
        for (k, col) in embed.iter().enumerate() {
            if col.len() != d {
                return Err(GrrsError::DimensionMismatch(format!(
                    "embedding column {} has length {}",
                    k,
                    col.len()
                )));
            }
            if !col.iter().all(Scalar::is_rational) {
                return Err(GrrsError::NotRational);
            }
            if !is_zero_vec(&gram.mul_vec(col)) {
                return Err(GrrsError::EmbeddingNotInRadical(k));
            }
        }
        let (embed_rows, embed_inv) = if nu == 0 {
            (Vec::new(), Matrix::zeros(0, 0))
        } else {
            let et = Matrix::from_rows(&embed, d);
            let (_, pivots) = et.rref();
            if pivots.len() != nu {
                return Err(GrrsError::EmbeddingNotInjective);
            }
            let mut sq = Matrix::zeros(nu, nu);
            for (i, &r) in pivots.iter().enumerate() {
                for (j, col) in embed.iter().enumerate() {
                    sq.set(i, j, col[r].clone());
                }
            }
            (pivots, sq.inverse().expect("pivot block is invertible"))
        };
        let mut p = GrrsPresentation {
            gram,
            embed,
            families: Vec::new(),
            embed_rows,
            embed_inv,
            iso: None,
        };
        let mut merged: BTreeMap<Vector, CosetUnion> = BTreeMap::new();
        for (base, support) in families {
            if base.len() != d || support.ambient() != nu {
                return Err(GrrsError::DimensionMismatch(
                    "family base or support has the wrong dimension".into(),
                ));
            }
            if !base.iter().all(Scalar::is_rational) {
                return Err(GrrsError::NotRational);
            }
            if support.is_empty() {
                continue;
            }
            let (b, mu) = p.class_of(&base);
            let s = support.translate(&mu);
            let entry = match merged.remove(&b) {
                Some(old) => old.union(&s)?,
                None => s,
            };
            merged.insert(b, entry);
        }
        for b in merged.keys() {
            if p.form(b, b).is_zero() && !is_zero_vec(b) {
                return Err(GrrsError::IsotropicOffLattice(fmt_vec(b)));
            }
        }
        p.set_families(
            merged
                .into_iter()
                .map(|(base, support)| Family { base, support })
                .collect(),
        )?;
        Ok(p)
    }

    fn set_families(&mut self, families: Vec<Family>) -> Result<(), GrrsError> {
        self.iso = families.iter().position(|f| is_zero_vec(&f.base));
        if families.iter().all(|f| is_zero_vec(&f.base)) {
            return Err(GrrsError::NoNonisotropicRoots);
        }
        self.families = families;
        Ok(())
    }

    /// Same form and embedding with an already canonical family list.
    fn with_families(&self, families: Vec<Family>) -> Result<Self, GrrsError> {
        let mut p = self.clone();
        p.set_families(
            families
                .into_iter()
                .filter(|f| !f.support.is_empty())
                .collect(),
        )?;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// Rank of the embedded lattice (number of null coordinates).
    pub fn null_rank(&self) -> usize {
        self.embed.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Embedding columns.
    pub fn embedding(&self) -> &[Vector] {
        &self.embed
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn is_isotropic_class(&self, c: usize) -> bool {
        self.iso == Some(c)
    }

    /// Indices of the nonisotropic families.
    pub fn nonisotropic_classes(&self) -> Vec<usize> {
        (0..self.families.len())
            .filter(|&c| self.iso != Some(c))
            .collect()
    }

    pub fn embed_vec(&self, null_coords: &[i64]) -> Vector {
        let mut v = zero_vec(self.dim());
        for (l, col) in null_coords.iter().zip(&self.embed) {
            if *l != 0 {
                v = vec_add(&v, &vec_scale(&Scalar::int(*l), col));
            }
        }
        v
    }

    /// Canonical class representative `b` and `null_coords` with `x = b + E null_coords`.
    pub fn class_of(&self, x: &[Scalar]) -> (Vector, Vec<i64>) {
        if self.embed.is_empty() {
            return (x.to_vec(), Vec::new());
        }
        let sub: Vector = self.embed_rows.iter().map(|&r| x[r].clone()).collect();
        let mu = self.embed_inv.mul_vec(&sub);
        let null_coords: Vec<i64> = mu.iter().map(floor_i64).collect();
        (vec_sub(x, &self.embed_vec(&null_coords)), null_coords)
    }

    fn class_index(&self, base: &[Scalar]) -> Option<usize> {
        self.families
            .binary_search_by(|f| f.base.as_slice().cmp(base))
            .ok()
    }

    pub fn root_ref(&self, x: &[Scalar]) -> Option<RootRef> {
        let (b, null_coords) = self.class_of(x);
        let c = self.class_index(&b)?;
        self.families[c]
            .support
            .contains(&null_coords)
            .then_some(RootRef {
                class: c,
                null_coords,
            })
    }

    pub fn root_vec(&self, r: &RootRef) -> Vector {
        vec_add(
            &self.families[r.class].base,
            &self.embed_vec(&r.null_coords),
        )
    }

    pub fn member(&self, x: &[Scalar]) -> Result<bool, GrrsError> {
        if x.len() != self.dim() {
            return Err(GrrsError::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                self.dim(),
                x.len()
            )));
        }
        Ok(self.root_ref(x).is_some())
    }

    pub fn form(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        self.gram.bilinear(x, y)
    }

    /// `2 (beta, alpha) / (alpha, alpha)`, required to be an integer (and in
    /// `[-4, 4]` when both arguments are roots).
    pub fn cartan_int(&self, beta: &[Scalar], alpha: &[Scalar]) -> Result<i64, GrrsError> {
        let aa = self.form(alpha, alpha);
        if aa.is_zero() {
            return Err(GrrsError::IsotropicDenominator(fmt_vec(alpha)));
        }
        let v = (Scalar::int(2) * self.form(beta, alpha))
            .div(&aa)
            .expect("nonzero");
        let both = self.root_ref(beta).is_some() && self.root_ref(alpha).is_some();
        match v.to_i64() {
            Some(c) if !both || (-4..=4).contains(&c) => Ok(c),
            _ => Err(GrrsError::CartanViolation {
                beta: fmt_vec(beta),
                alpha: fmt_vec(alpha),
                value: v.to_string(),
            }),
        }
    }

    pub fn reflect(&self, beta: &[Scalar], alpha: &[Scalar]) -> Result<Vector, GrrsError> {
        let c = self.cartan_int(beta, alpha)?;
        Ok(vec_sub(beta, &vec_scale(&Scalar::int(c), alpha)))
    }

    /// `(d, u)` with `beta + n alpha` a root exactly for `-d <= n <= u`.
    pub fn root_string(
        &self,
        beta: &[Scalar],
        alpha: &[Scalar],
        cap: u32,
    ) -> Result<(u32, u32), GrrsError> {
        let b = self
            .root_ref(beta)
            .ok_or_else(|| GrrsError::NotARoot(fmt_vec(beta)))?;
        let a = self
            .root_ref(alpha)
            .ok_or_else(|| GrrsError::NotARoot(fmt_vec(alpha)))?;
        if self.is_isotropic_class(a.class) {
            return Err(GrrsError::IsotropicDenominator(fmt_vec(alpha)));
        }
        let mut ar = Arith::new(self);
        ar.string(&b, &a, cap)
    }

    /// Isotropic roots as a subset of `Z^nu`.
    pub fn isotropic_support(&self) -> CosetUnion {
        match self.iso {
            Some(c) => self.families[c].support.clone(),
            None => CosetUnion::empty(self.null_rank()),
        }
    }

    /// Roots whose null coordinates lie in the box, sorted.
    pub fn enumerate_window(&self, bounds: &[(i64, i64)]) -> Vec<Vector> {
        let mut out: Vec<Vector> = self
            .window_refs(bounds)
            .iter()
            .map(|r| self.root_vec(r))
            .collect();
        out.sort();
        out
    }

    /// All roots with support coordinates in the box.
    pub fn window_refs(&self, bounds: &[(i64, i64)]) -> Vec<RootRef> {
        let mut out = Vec::new();
        for (c, f) in self.families.iter().enumerate() {
            for null_coords in f.support.enumerate_window(bounds) {
                out.push(RootRef {
                    class: c,
                    null_coords,
                });
            }
        }
        out
    }

    pub fn nullity(&self) -> usize {
        self.isotropic_support().zspan().rank()
    }

    /// Isotropic roots `delta` with `delta + alpha` never a root for nonisotropic `alpha`.
    pub fn isolated_roots(&self) -> Result<CosetUnion, GrrsError> {
        let mut r = self.isotropic_support();
        for c in self.nonisotropic_classes() {
            let s = &self.families[c].support;
            r = r.setminus(&s.minkowski(&s.negate())?)?;
        }
        Ok(r)
    }

    /// Nonisotropic classes grouped into connected components of the
    /// nonorthogonality graph, ordered by their least base vector.
    pub fn component_classes(&self) -> Vec<Vec<usize>> {
        let classes = self.nonisotropic_classes();
        let n = classes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            let mut j = i;
            while p[j] != r {
                let next = p[j];
                p[j] = r;
                j = next;
            }
            r
        }
        for i in 0..n {
            for j in i + 1..n {
                let (bi, bj) = (
                    &self.families[classes[i]].base,
                    &self.families[classes[j]].base,
                );
                if !self.form(bi, bj).is_zero() {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(classes[i]);
        }
        // classes are sorted by base, so the first member carries the least base
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort_by(|a, b| self.families[a[0]].base.cmp(&self.families[b[0]].base));
        comps
    }

    /// Integer generators of the Z-span of the roots in the given families.
    fn span_generators(&self, fams: &[&Family]) -> Vec<Vector> {
        let mut gens = Vec::new();
        for f in fams {
            let res = f.support.residues();
            if res.is_empty() {
                continue;
            }
            gens.push(vec_add(&f.base, &self.embed_vec(&res[0])));
            for r in &res[1..] {
                let diff: Vec<i64> = r.iter().zip(&res[0]).map(|(a, b)| a - b).collect();
                gens.push(self.embed_vec(&diff));
            }
            for m in f.support.modulus().basis() {
                gens.push(self.embed_vec(m));
            }
        }
        gens
    }

    /// `{null_coords : E null_coords in Z-span(gens)}`.
    fn null_part_of_span(&self, gens: &[Vector]) -> IntLattice {
        let nu = self.null_rank();
        let d = self.dim();
        if nu == 0 {
            return IntLattice::zero(0);
        }
        let mut rows: Vec<Vec<crate::exactfield::Rational>> = Vec::new();
        for g in gens
            .iter()
            .cloned()
            .chain(self.embed.iter().map(|c| vec_neg(c)))
        {
            rows.push(
                g.iter()
                    .map(|x| x.as_rational().expect("rational").clone())
                    .collect(),
            );
        }
        let (a, _) = clear_denominators(&rows, d);
        let m = rows.len();
        let mut aug = IntMatrix::zeros(m, d + m);
        for i in 0..m {
            for j in 0..d {
                aug.set(i, j, a.get(i, j));
            }
            aug.set(i, d + i, 1);
        }
        let (h, _) = hermite_normal_form(&aug);
        let k = gens.len();
        let lam: Vec<Vec<i64>> = h
            .row_vecs()
            .into_iter()
            .filter(|r| r[..d].iter().all(|&x| x == 0) && r[d..].iter().any(|&x| x != 0))
            .map(|r| r[d + k..].to_vec())
            .collect();
        IntLattice::from_generators(nu, &lam)
    }

    /// Runs the axiom checks.
    pub fn check_axioms(&self, opts: &CheckOptions) -> AxiomReport {
        let mut checks = Vec::new();
        checks.push(self.check_r1());
        checks.push(if opts.in_span {
            AxiomCheck::pass("R2", "spans its own real span")
        } else {
            self.check_r2()
        });
        checks.push(AxiomCheck::pass("R3", "discrete by construction"));
        let stats = self.window_stats(opts.window, opts.cap);
        checks.push(match &stats.first_failure {
            None => AxiomCheck::pass(
                "R4",
                &format!("{} root pairs in window {}", stats.pairs, opts.window),
            ),
            Some(w) => AxiomCheck::fail("R4", w),
        });
        checks.push(self.check_r5());
        checks.push(match self.isolated_roots() {
            Ok(iso) if iso.is_empty() => AxiomCheck::pass("R6", "no isolated roots"),
            Ok(iso) => AxiomCheck::fail("R6", &format!("isolated roots {}", iso)),
            Err(e) => AxiomCheck::fail("R6", &e.to_string()),
        });
        let comps = self.component_classes();
        checks.push(if comps.len() == 1 {
            AxiomCheck::pass("R7", "indecomposable")
        } else {
            AxiomCheck::fail(
                "R7",
                &format!(
                    "nonisotropic roots split into {} orthogonal components",
                    comps.len()
                ),
            )
        });
        let psd = is_positive_semidefinite(&self.gram)
            .map(|r| r.psd)
            .unwrap_or(false);
        AxiomReport {
            checks,
            window: opts.window,
            form_psd: psd,
        }
    }

    fn check_r1(&self) -> AxiomCheck {
        for f in &self.families {
            let (nb, mu) = self.class_of(&vec_neg(&f.base));
            let neg = f.support.negate().translate(&mu);
            let ok = match self.class_index(&nb) {
                Some(c) => self.families[c].support == neg,
                None => false,
            };
            if !ok {
                let missing = match self.class_index(&nb) {
                    Some(c) => neg
                        .setminus(&self.families[c].support)
                        .ok()
                        .and_then(|s| s.residues().first().cloned()),
                    None => neg.residues().first().cloned(),
                };
                let w = match missing {
                    Some(l) => format!(
                        "{} is a root but its negative is not",
                        fmt_vec(&vec_neg(&vec_add(&nb, &self.embed_vec(&l))))
                    ),
                    None => format!(
                        "family with base {} has no matching negative family",
                        fmt_vec(&f.base)
                    ),
                };
                return AxiomCheck::fail("R1", &w);
            }
        }
        AxiomCheck::pass("R1", "negation closed")
    }

    fn check_r2(&self) -> AxiomCheck {
        let fams: Vec<&Family> = self.families.iter().collect();
        let gens = self.span_generators(&fams);
        let dim = Subspace::spanned_by(self.dim(), &gens).dim();
        if dim == self.dim() {
            AxiomCheck::pass("R2", "roots span")
        } else {
            AxiomCheck::fail(
                "R2",
                &format!(
                    "roots span a subspace of dimension {} < {}",
                    dim,
                    self.dim()
                ),
            )
        }
    }

    fn check_r5(&self) -> AxiomCheck {
        for c in self.nonisotropic_classes() {
            let f = &self.families[c];
            let (b2, mu) = self.class_of(&vec_scale(&Scalar::int(2), &f.base));
            let Some(c2) = self.class_index(&b2) else {
                continue;
            };
            let doubled = f.support.scale(2).translate(&mu);
            match doubled.intersect(&self.families[c2].support) {
                Ok(x) if x.is_empty() => {}
                Ok(x) => {
                    let half: Vec<i64> = x.residues()[0]
                        .iter()
                        .zip(&mu)
                        .map(|(a, m)| (a - m) / 2)
                        .collect();
                    let alpha = vec_add(&f.base, &self.embed_vec(&half));
                    return AxiomCheck::fail(
                        "R5",
                        &format!("{} and twice it are both roots", fmt_vec(&alpha)),
                    );
                }
                Err(e) => return AxiomCheck::fail("R5", &e.to_string()),
            }
        }
        AxiomCheck::pass("R5", "no doubled nonisotropic roots")
    }

    /// Cartan numbers and root strings over all root pairs with support
    /// coordinates in `[-w, w]^nu`.
    pub fn window_stats(&self, w: i64, cap: u32) -> WindowStats {
        let bounds = vec![(-w, w); self.null_rank()];
        let refs = self.window_refs(&bounds);
        let mut ar = Arith::new(self);
        let common = self.common_modulus();
        let mut memo: HashMap<StringKey, Result<(u32, u32), GrrsError>> = HashMap::new();
        let mut stats = WindowStats::default();
        for a in refs.iter().filter(|r| !self.is_isotropic_class(r.class)) {
            let ka = common.reduce(&a.null_coords);
            for b in &refs {
                stats.pairs += 1;
                if !self.is_isotropic_class(b.class) {
                    stats.cartan_pairs += 1;
                    if let Err(e) = ar.cartan(b.class, a.class) {
                        stats.cartan_violations += 1;
                        stats.first_failure.get_or_insert_with(|| e.to_string());
                    }
                }
                let key = (b.class, a.class, common.reduce(&b.null_coords), ka.clone());
                let res = match memo.get(&key) {
                    Some(r) => r.clone(),
                    None => {
                        let r = ar.string(b, a, cap);
                        memo.insert(key, r.clone());
                        r
                    }
                };
                if let Err(e) = res {
                    stats.string_violations += 1;
                    // report the concrete pair rather than the residue key
                    let concrete = ar.string(b, a, cap).err().unwrap_or(e);
                    stats
                        .first_failure
                        .get_or_insert_with(|| concrete.to_string());
                }
            }
        }
        stats
    }

    /// Intersection of all family moduli; membership is periodic under it.
    fn common_modulus(&self) -> IntLattice {
        let mut m: Option<IntLattice> = None;
        for f in &self.families {
            m = Some(match m {
                None => f.support.modulus().clone(),
                Some(x) => x.intersect(f.support.modulus()),
            });
        }
        m.unwrap_or_else(|| IntLattice::zero(self.null_rank()))
    }

    /// Per-component finite quotient data and scaling constants.
    pub fn quotient(&self) -> Result<Vec<QuotientComponent>, GrrsError> {
        self.component_classes()
            .into_iter()
            .map(|classes| self.quotient_component(classes))
            .collect()
    }

    fn quotient_component(&self, classes: Vec<usize>) -> Result<QuotientComponent, GrrsError> {
        let gamma = &self.families[classes[0]].base;
        let gg = self.form(gamma, gamma);
        let c = Scalar::int(2).div(&gg).expect("nonisotropic");
        for &k in &classes {
            let b = &self.families[k].base;
            if (&c * &self.form(b, b)).signum() != Some(std::cmp::Ordering::Greater) {
                return Err(GrrsError::IndefiniteComponent {
                    gamma: fmt_vec(gamma),
                    alpha: fmt_vec(b),
                });
            }
        }
        // independent bases modulo the radical: Gram matrix stays nonsingular
        let mut basis: Vec<Vector> = Vec::new();
        for &k in &classes {
            let b = &self.families[k].base;
            let mut trial = basis.clone();
            trial.push(b.clone());
            if self.gram_of(&trial).rank() == trial.len() {
                basis = trial;
            }
        }
        let g = self.gram_of(&basis);
        let scaled = Matrix::new(
            g.rows(),
            g.cols(),
            (0..g.rows() * g.cols())
                .map(|i| &c * g.get(i / g.cols(), i % g.cols()))
                .collect(),
        );
        let psd = is_positive_semidefinite(&scaled).map_err(|_| GrrsError::NotRational)?;
        if !psd.psd {
            return Err(GrrsError::IndefiniteComponent {
                gamma: fmt_vec(gamma),
                alpha: fmt_vec(gamma),
            });
        }
        let ginv = g.inverse().expect("nonsingular");
        let mut images: Vec<Vector> = classes
            .iter()
            .map(|&k| {
                let b = &self.families[k].base;
                let pairing: Vector = basis.iter().map(|x| self.form(b, x)).collect();
                ginv.mul_vec(&pairing)
            })
            .collect();
        images.sort();
        images.dedup();
        let root_type = classify_finroot(&images, &scaled)?;
        Ok(QuotientComponent {
            classes,
            basis,
            gram: scaled,
            roots: images,
            root_type,
            scale: c,
        })
    }

    fn gram_of(&self, vs: &[Vector]) -> Matrix {
        let n = vs.len();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, self.form(&vs[i], &vs[j]));
            }
        }
        g
    }

    /// Basis adapted to `V = (sum of component parts) + radical`, with the
    /// number of leading vectors owned by each component.
    fn adapted_basis(&self, quot: &[QuotientComponent]) -> Result<(Vec<Vector>, usize), GrrsError> {
        let mut basis: Vec<Vector> = Vec::new();
        for q in quot {
            basis.extend(q.basis.iter().cloned());
        }
        let dot_len = basis.len();
        let mut rad = Subspace::new(self.dim());
        for e in &self.embed {
            rad.insert(e);
        }
        for k in kernel_basis(&self.gram) {
            rad.insert(&k);
        }
        basis.extend(rad.basis().iter().cloned());
        if basis.len() != self.dim() || Subspace::spanned_by(self.dim(), &basis).dim() != self.dim()
        {
            return Err(GrrsError::NotSpanning);
        }
        Ok((basis, dot_len))
    }

    /// The positive semidefinite form that agrees with `c_i` times the given
    /// form on component `i` and vanishes across components and on the radical.
    pub fn composite_form(&self) -> Result<CompositeForm, GrrsError> {
        let quot = self.quotient()?;
        let (basis, _) = self.adapted_basis(&quot)?;
        let d = self.dim();
        let mut block = Matrix::zeros(d, d);
        let mut off = 0;
        for q in &quot {
            let n = q.basis.len();
            for i in 0..n {
                for j in 0..n {
                    block.set(off + i, off + j, q.gram.get(i, j).clone());
                }
            }
            off += n;
        }
        let bm = Matrix::from_rows(&basis, d).transpose();
        let binv = bm.inverse().expect("adapted basis");
        let gram = binv.transpose().mul(&block).mul(&binv);
        Ok(CompositeForm {
            gram,
            scales: quot.iter().map(|q| q.scale.clone()).collect(),
        })
    }

    /// Radical component of `x` in the decomposition into component parts and radical.
    pub fn project_null(&self, x: &[Scalar]) -> Result<Vector, GrrsError> {
        let quot = self.quotient()?;
        let (basis, dot_len) = self.adapted_basis(&quot)?;
        let d = self.dim();
        let bm = Matrix::from_rows(&basis, d).transpose();
        let coords = bm.inverse().expect("adapted basis").mul_vec(x);
        let mut v = zero_vec(d);
        for (cf, b) in coords.iter().zip(&basis).skip(dot_len) {
            v = vec_add(&v, &vec_scale(cf, b));
        }
        Ok(v)
    }

    /// Splits the root system into its components and isolated part.
    pub fn decompose(&self, opts: &CheckOptions) -> Result<Decomposition, GrrsError> {
        let quot = self.quotient()?;
        let r0 = self.isotropic_support();
        let nu = self.null_rank();
        let mut components = Vec::new();
        for q in quot {
            let fams: Vec<Family> = q
                .classes
                .iter()
                .map(|&c| self.families[c].clone())
                .collect();
            let mut null_i = CosetUnion::empty(nu);
            for f in &fams {
                let diffs = f.support.minkowski(&f.support.negate())?;
                null_i = null_i.union(&r0.intersect(&diffs)?)?;
            }
            let mut with_null = fams.clone();
            with_null.push(Family {
                base: zero_vec(self.dim()),
                support: null_i.clone(),
            });
            with_null.sort_by(|a, b| a.base.cmp(&b.base));
            let refs: Vec<&Family> = with_null.iter().collect();
            let span_null = self.null_part_of_span(&self.span_generators(&refs));
            let closure_null = r0.intersect(&CosetUnion::lattice(span_null.clone()))?;
            let piece = self.with_families(with_null)?;
            let mut prime = fams.clone();
            prime.push(Family {
                base: zero_vec(self.dim()),
                support: closure_null.clone(),
            });
            prime.sort_by(|a, b| a.base.cmp(&b.base));
            let closed = self.with_families(prime)?;
            let sub_opts = CheckOptions {
                in_span: true,
                ..*opts
            };
            let rep = piece.check_axioms(&sub_opts);
            if let Some(f) = rep.checks.iter().find(|c| !c.pass) {
                return Err(GrrsError::AxiomViolation(format!(
                    "component {}: {} {}",
                    components.len() + 1,
                    f.name,
                    f.detail
                )));
            }
            let rep = closed.check_axioms(&sub_opts);
            if let Some(f) = rep.checks.iter().find(|c| !c.pass && c.name != "R6") {
                return Err(GrrsError::AxiomViolation(format!(
                    "closure of component {}: {} {}",
                    components.len() + 1,
                    f.name,
                    f.detail
                )));
            }
            components.push(Component {
                root_type: q.root_type,
                scale: q.scale.clone(),
                quotient: q,
                null_support: null_i,
                span_null,
                closure_null,
                piece,
                closed,
            });
        }
        let isolated = self.isolated_roots()?;
        let mut outside_closures = isolated.clone();
        for c in &components {
            outside_closures = outside_closures.setminus(&c.closure_null)?;
        }
        Ok(Decomposition {
            components,
            isolated,
            outside_closures,
            nullity: self.nullity(),
        })
    }

    /// Text rendering of a root given by support coordinates.
    pub fn fmt_ref(&self, r: &RootRef) -> String {
        fmt_vec(&self.root_vec(r))
    }
}

/// Options for window-based checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub window: i64,
    pub cap: u32,
    /// Judge spanning relative to the span of the roots themselves.
    pub in_span: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            window: DEFAULT_WINDOW,
            cap: DEFAULT_STRING_CAP,
            in_span: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl AxiomCheck {
    pub fn pass(name: &'static str, detail: &str) -> Self {
        AxiomCheck {
            name,
            pass: true,
            detail: detail.to_string(),
        }
    }

    pub fn fail(name: &'static str, detail: &str) -> Self {
        AxiomCheck {
            name,
            pass: false,
            detail: detail.to_string(),
        }
    }
}

impl fmt::Display for AxiomCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {}",
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    pub window: i64,
    pub form_psd: bool,
}

impl AxiomReport {
    pub fn get(&self, name: &str) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .expect("known axiom")
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WindowStats {
    pub pairs: usize,
    pub cartan_pairs: usize,
    pub cartan_violations: usize,
    pub string_violations: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientComponent {
    /// Nonisotropic family indices in this component.
    pub classes: Vec<usize>,
    /// Class bases independent modulo the radical.
    pub basis: Vec<Vector>,
    /// Scaled form on `basis`.
    pub gram: Matrix,
    /// Image roots in `basis` coordinates.
    pub roots: Vec<Vector>,
    pub root_type: RootType,
    pub scale: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeForm {
    pub gram: Matrix,
    pub scales: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub root_type: RootType,
    pub scale: Scalar,
    pub quotient: QuotientComponent,
    /// Isotropic roots reached as differences inside the component.
    pub null_support: CosetUnion,
    /// Null coordinates of the span of the component.
    pub span_null: IntLattice,
    /// Isotropic roots in that span.
    pub closure_null: CosetUnion,
    pub piece: GrrsPresentation,
    pub closed: GrrsPresentation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub components: Vec<Component>,
    pub isolated: CosetUnion,
    /// Isolated roots outside every component closure.
    pub outside_closures: CosetUnion,
    pub nullity: usize,
}

/// Family index and null coordinates of a root.
type ClassPoint = (usize, Vec<i64>);

/// Root string query: string and direction classes with their residues.
type StringKey = (usize, usize, Vec<i64>, Vec<i64>);

/// Integer root arithmetic with memoized class sums.
struct Arith<'a> {
    p: &'a GrrsPresentation,
    combos: HashMap<(usize, usize, i64), Option<ClassPoint>>,
    cartans: HashMap<(usize, usize), Result<i64, GrrsError>>,
}

impl<'a> Arith<'a> {
    fn new(p: &'a GrrsPresentation) -> Self {
        Arith {
            p,
            combos: HashMap::new(),
            cartans: HashMap::new(),
        }
    }

    fn combo(&mut self, cb: usize, ca: usize, n: i64) -> Option<(usize, Vec<i64>)> {
        let p = self.p;
        self.combos
            .entry((cb, ca, n))
            .or_insert_with(|| {
                let v = vec_add(
                    &p.families[cb].base,
                    &vec_scale(&Scalar::int(n), &p.families[ca].base),
                );
                let (b, mu) = p.class_of(&v);
                p.class_index(&b).map(|c| (c, mu))
            })
            .clone()
    }

    fn shifted_member(&mut self, b: &RootRef, a: &RootRef, n: i64) -> bool {
        match self.combo(b.class, a.class, n) {
            None => false,
            Some((c, mu)) => {
                let l: Vec<i64> = mu
                    .iter()
                    .zip(&b.null_coords)
                    .zip(&a.null_coords)
                    .map(|((m, x), y)| m + x + n * y)
                    .collect();
                self.p.families[c].support.contains(&l)
            }
        }
    }

    fn cartan(&mut self, cb: usize, ca: usize) -> Result<i64, GrrsError> {
        let p = self.p;
        self.cartans
            .entry((cb, ca))
            .or_insert_with(|| {
                let (b, a) = (&p.families[cb].base, &p.families[ca].base);
                let v = (Scalar::int(2) * p.form(b, a))
                    .div(&p.form(a, a))
                    .expect("nonisotropic");
                match v.to_i64() {
                    Some(c) if (-4..=4).contains(&c) => Ok(c),
                    _ => Err(GrrsError::CartanViolation {
                        beta: fmt_vec(b),
                        alpha: fmt_vec(a),
                        value: v.to_string(),
                    }),
                }
            })
            .clone()
    }

    fn string(&mut self, b: &RootRef, a: &RootRef, cap: u32) -> Result<(u32, u32), GrrsError> {
        let names = |s: &Self| (s.p.fmt_ref(b), s.p.fmt_ref(a));
        let capi = cap as i64;
        let mut d = 0i64;
        while self.shifted_member(b, a, -(d + 1)) {
            d += 1;
            if d > capi {
                let (beta, alpha) = names(self);
                return Err(GrrsError::StringCapExceeded { beta, alpha, cap });
            }
        }
        let mut u = 0i64;
        while self.shifted_member(b, a, u + 1) {
            u += 1;
            if u > capi {
                let (beta, alpha) = names(self);
                return Err(GrrsError::StringCapExceeded { beta, alpha, cap });
            }
        }
        for n in (-capi - 1..-d - 1).chain(u + 2..=capi + 1) {
            if self.shifted_member(b, a, n) {
                let (beta, alpha) = names(self);
                return Err(GrrsError::BrokenString { beta, alpha, n });
            }
        }
        let c = self.cartan(b.class, a.class)?;
        if d - u != c {
            let (beta, alpha) = names(self);
            return Err(GrrsError::StringDefect {
                beta,
                alpha,
                diff: d - u,
                cartan: c,
            });
        }
        Ok((d as u32, u as u32))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "components: {}", self.components.len())?;
        for (i, c) in self.components.iter().enumerate() {
            writeln!(
                f,
                "component {}: type {} rank {} scale {} isotropic {} closure {}",
                i + 1,
                c.root_type,
                c.root_type.rank,
                c.scale,
                c.null_support,
                c.closure_null
            )?;
        }
        writeln!(f, "nullity: {}", self.nullity)?;
        writeln!(f, "isolated: {}", self.isolated)?;
        write!(f, "isolated outside closures: {}", self.outside_closures)
    }
}
