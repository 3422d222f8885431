//! Affinization of a finite-dimensional algebra with invariant form, twisted
//! finite-order automorphisms, and their fixed-point subalgebras, verified
//! on finite windows of loop degrees.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactfield::Scalar;
use crate::grrs::{GrrsError, GrrsPresentation};
use crate::lattice::{CosetUnion, IntLattice};
use crate::liealg::{GrlaHandle, LieError, RootDecomposition, StructLieAlgebra};
use crate::linalg::{
    fmt_vec, is_zero_vec, kernel_basis, normalize_leading, solve_linear, vec_add, vec_scale,
    vec_sub, zero_vec, Matrix, Subspace, Vector,
};
use crate::report::Report;
use crate::window::{GradedWindow, WindowError, WindowParts};

/// Longest root string through a root, bounding nilpotency tests.
const MAX_STRING: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("base algebra is invalid: {0}")]
    InvalidBase(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("not an isometry: {0}")]
    NotIsometry(String),
    #[error("Cartan subalgebra not preserved: {0}")]
    CartanNotPreserved(String),
    #[error("automorphism conditions fail: {0}")]
    ConditionsFail(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Grrs(#[from] GrrsError),
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// `G (x) C[t, 1/t] + Cc + Cd` over a validated base algebra.
#[derive(Debug, Clone)]
pub struct AffAlgebra {
    base: StructLieAlgebra,
    rd: RootDecomposition,
}

/// `sum x_n (x) t^n + c_coeff c + d_coeff d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffElement {
    pub terms: BTreeMap<i64, Vector>,
    pub c: Scalar,
    pub d: Scalar,
}

impl AffElement {
    pub fn zero() -> Self {
        AffElement {
            terms: BTreeMap::new(),
            c: Scalar::zero(),
            d: Scalar::zero(),
        }
    }

    pub fn loop_term(x: Vector, n: i64) -> Self {
        let mut e = AffElement::zero();
        e.add_term(n, &x);
        e
    }

    pub fn central() -> Self {
        AffElement {
            c: Scalar::one(),
            ..AffElement::zero()
        }
    }

    pub fn degree_derivation() -> Self {
        AffElement {
            d: Scalar::one(),
            ..AffElement::zero()
        }
    }

    fn add_term(&mut self, n: i64, x: &[Scalar]) {
        if is_zero_vec(x) {
            return;
        }
        let sum = match self.terms.get(&n) {
            Some(old) => vec_add(old, x),
            None => x.to_vec(),
        };
        if is_zero_vec(&sum) {
            self.terms.remove(&n);
        } else {
            self.terms.insert(n, sum);
        }
    }

    pub fn add(&self, other: &AffElement) -> AffElement {
        let mut out = self.clone();
        for (n, x) in &other.terms {
            out.add_term(*n, x);
        }
        out.c = &out.c + &other.c;
        out.d = &out.d + &other.d;
        out
    }

    pub fn scale(&self, s: &Scalar) -> AffElement {
        let mut out = AffElement::zero();
        for (n, x) in &self.terms {
            out.add_term(*n, &vec_scale(s, x));
        }
        out.c = s * &self.c;
        out.d = s * &self.d;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.c.is_zero() && self.d.is_zero()
    }
}

impl AffAlgebra {
    pub fn new(base: StructLieAlgebra) -> Result<Self, AffineError> {
        let rep = base.validate_algebra();
        if !rep.all_pass() {
            let f = rep
                .failures()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            return Err(AffineError::InvalidBase(f));
        }
        let rd = base.root_decomposition()?;
        Ok(AffAlgebra { base, rd })
    }

    pub fn base(&self) -> &StructLieAlgebra {
        &self.base
    }

    pub fn root_decomposition(&self) -> &RootDecomposition {
        &self.rd
    }

    /// Weight basis of the base algebra: Cartan elements, then root vectors.
    fn weight_basis(&self) -> (Vec<Vector>, Vec<Vector>) {
        let l = self.base.cartan().len();
        let mut basis = Vec::new();
        let mut weights = Vec::new();
        for &c in self.base.cartan() {
            basis.push(self.base.unit(c));
            weights.push(zero_vec(l));
        }
        for (k, w) in self.rd.roots.iter().enumerate() {
            if is_zero_vec(w) {
                continue;
            }
            for v in &self.rd.spaces[k] {
                basis.push(v.clone());
                weights.push(w.clone());
            }
        }
        (basis, weights)
    }

    fn base_h_gram(&self) -> Matrix {
        let c = self.base.cartan();
        let mut g = Matrix::zeros(c.len(), c.len());
        for (a, &i) in c.iter().enumerate() {
            for (b, &j) in c.iter().enumerate() {
                g.set(a, b, self.base.form_matrix().get(i, j).clone());
            }
        }
        g
    }

    /// Root presentation `R + Z delta` with coordinates (base root span, delta).
    pub fn root_system(&self) -> Result<(GrrsPresentation, Matrix), AffineError> {
        let z = CosetUnion::lattice(IntLattice::full(1));
        let weights: Vec<(Vector, CosetUnion)> = self
            .rd
            .roots
            .iter()
            .filter(|w| !is_zero_vec(w))
            .map(|w| (w.clone(), z.clone()))
            .collect();
        if weights.iter().any(|(w, _)| {
            self.base_h_gram()
                .inverse()
                .map(|g| g.bilinear(w, w).is_zero())
                .unwrap_or(true)
        }) {
            return Err(AffineError::Unsupported(
                "base algebra has isotropic roots".into(),
            ));
        }
        loop_presentation(&weights, z, &self.base_h_gram())
    }

    /// Degrees `-n..=n` of the weight basis, then `c` and `d`.
    pub fn window(&self, n: i64) -> GradedWindow {
        let (basis, weights) = self.weight_basis();
        let b = basis.len();
        let l = self.base.cartan().len();
        let plain = self.base.plain_window();
        let names: Vec<String> = basis
            .iter()
            .map(|v| {
                let s = plain.fmt_element(v);
                if s.contains(' ') || s.contains('*') {
                    format!("({})", s)
                } else {
                    s
                }
            })
            .collect();
        let p = Matrix::from_rows(&basis, self.base.dim()).transpose();
        let pinv = p.inverse().expect("weight basis");
        let mut struct_c = vec![Vec::new(); b * b];
        let mut form_b = Matrix::zeros(b, b);
        for i in 0..b {
            for j in 0..b {
                let coords = pinv.mul_vec(&self.base.bracket(&basis[i], &basis[j]));
                struct_c[i * b + j] = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect::<Vec<_>>();
                form_b.set(i, j, self.base.form(&basis[i], &basis[j]));
            }
        }
        let degrees: Vec<i64> = (-n..=n).collect();
        let dim = degrees.len() * b + 2;
        let ci = dim - 2;
        let di = dim - 1;
        let idx = |deg: i64, k: usize| -> usize { ((deg + n) as usize) * b + k };
        let mut labels = Vec::with_capacity(dim);
        let mut wts = Vec::with_capacity(dim);
        let mut grades = Vec::with_capacity(dim);
        for &deg in &degrees {
            for k in 0..b {
                labels.push(format!("{}*t^{}", names[k], deg));
                let mut w = weights[k].clone();
                w.push(Scalar::zero());
                w.push(Scalar::int(deg));
                wts.push(w);
                grades.push(deg);
            }
        }
        labels.push("c".into());
        labels.push("d".into());
        wts.push(zero_vec(l + 2));
        wts.push(zero_vec(l + 2));
        grades.push(0);
        grades.push(0);
        let mut table: Vec<Option<Vec<(usize, Scalar)>>> = vec![Some(Vec::new()); dim * dim];
        for &a in &degrees {
            for &bdeg in &degrees {
                for i in 0..b {
                    for j in 0..b {
                        let s = a + bdeg;
                        let br = &struct_c[i * b + j];
                        let mut terms = Vec::new();
                        if !br.is_empty() {
                            if s.abs() > n {
                                table[idx(a, i) * dim + idx(bdeg, j)] = None;
                                continue;
                            }
                            for (k, c) in br {
                                terms.push((idx(s, *k), c.clone()));
                            }
                        }
                        if s == 0 && a != 0 {
                            let f = form_b.get(i, j);
                            if !f.is_zero() {
                                terms.push((ci, &Scalar::int(a) * f));
                            }
                        }
                        table[idx(a, i) * dim + idx(bdeg, j)] = Some(terms);
                    }
                }
            }
        }
        for &a in &degrees {
            if a == 0 {
                continue;
            }
            for i in 0..b {
                let x = idx(a, i);
                table[di * dim + x] = Some(vec![(x, Scalar::int(a))]);
                table[x * dim + di] = Some(vec![(x, Scalar::int(-a))]);
            }
        }
        let mut form = Matrix::zeros(dim, dim);
        for &a in &degrees {
            for i in 0..b {
                for j in 0..b {
                    let f = form_b.get(i, j);
                    if !f.is_zero() {
                        form.set(idx(a, i), idx(-a, j), f.clone());
                    }
                }
            }
        }
        form.set(ci, di, Scalar::one());
        form.set(di, ci, Scalar::one());
        let mut cartan: Vec<usize> = (0..l).map(|k| idx(0, k)).collect();
        cartan.push(ci);
        cartan.push(di);
        GradedWindow::new(WindowParts {
            labels,
            weights: wts,
            grades,
            table,
            form,
            h_gram: extend_gram(&self.base_h_gram()),
            cartan,
            radius: Some(n),
        })
        .expect("consistent shapes")
    }

    /// Window with its root presentation.
    pub fn handle(&self, n: i64) -> Result<GrlaHandle, AffineError> {
        let (presentation, from_pres) = self.root_system()?;
        Ok(GrlaHandle {
            window: self.window(n),
            presentation,
            from_pres,
        })
    }
}

/// `[x, y]` in the affinization.
pub fn aff_bracket(a: &AffAlgebra, x: &AffElement, y: &AffElement) -> AffElement {
    let mut out = AffElement::zero();
    for (n, u) in &x.terms {
        for (m, v) in &y.terms {
            out.add_term(n + m, &a.base.bracket(u, v));
            if n + m == 0 {
                out.c = &out.c + &(&Scalar::int(*n) * &a.base.form(u, v));
            }
        }
    }
    if !x.d.is_zero() {
        for (m, v) in &y.terms {
            out.add_term(*m, &vec_scale(&(&x.d * &Scalar::int(*m)), v));
        }
    }
    if !y.d.is_zero() {
        for (n, u) in &x.terms {
            out.add_term(*n, &vec_scale(&(-&(&y.d * &Scalar::int(*n))), u));
        }
    }
    out
}

/// `(x, y)` in the affinization.
pub fn aff_form(a: &AffAlgebra, x: &AffElement, y: &AffElement) -> Scalar {
    let mut acc = &(&x.c * &y.d) + &(&y.c * &x.d);
    for (n, u) in &x.terms {
        if let Some(v) = y.terms.get(&-n) {
            acc = &acc + &a.base.form(u, v);
        }
    }
    acc
}

/// Cartan Gram matrix extended by `c, d` with `(c, d) = 1`.
fn extend_gram(g: &Matrix) -> Matrix {
    let l = g.rows();
    let mut out = Matrix::zeros(l + 2, l + 2);
    for i in 0..l {
        for j in 0..l {
            out.set(i, j, g.get(i, j).clone());
        }
    }
    out.set(l, l + 1, Scalar::one());
    out.set(l + 1, l, Scalar::one());
    out
}

/// Presentation of `{w + n delta : n in S_w} u {n delta : n in S_0}` for
/// nonzero finite weights `w` on a Cartan part with Gram matrix `h_gram`.
/// Returns the presentation and the matrix sending coordinates to weights
/// on (Cartan part, c, d).
pub fn loop_presentation(
    weights: &[(Vector, CosetUnion)],
    zero_support: CosetUnion,
    h_gram: &Matrix,
) -> Result<(GrrsPresentation, Matrix), AffineError> {
    let r = h_gram.rows();
    let ginv = h_gram
        .inverse()
        .map_err(|_| LieError::NoDualBasis("Cartan form is degenerate".into()))?;
    let mut sorted: Vec<&Vector> = weights.iter().map(|(w, _)| w).collect();
    sorted.sort();
    let mut basis: Vec<Vector> = Vec::new();
    let mut span = Subspace::new(r);
    for w in sorted {
        if span.insert(w) {
            basis.push(w.clone());
        }
    }
    let p = basis.len();
    let fin = Matrix::from_rows(&basis, r).transpose();
    let mut gram = Matrix::zeros(p + 1, p + 1);
    for i in 0..p {
        for j in 0..p {
            gram.set(i, j, ginv.bilinear(&basis[i], &basis[j]));
        }
    }
    let mut from_pres = Matrix::zeros(r + 2, p + 1);
    for (j, bv) in basis.iter().enumerate() {
        for i in 0..r {
            from_pres.set(i, j, bv[i].clone());
        }
    }
    from_pres.set(r + 1, p, Scalar::one());
    let mut delta = zero_vec(p + 1);
    delta[p] = Scalar::one();
    let mut families = vec![(zero_vec(p + 1), zero_support)];
    for (w, s) in weights {
        let mut x = solve_linear(&fin, w).expect("in the span");
        x.push(Scalar::zero());
        families.push((x, s.clone()));
    }
    Ok((
        GrrsPresentation::new(gram, vec![delta], families)?,
        from_pres,
    ))
}

/// `sigma(x t^i + rc + sd) = zeta^{-i} omega(x) t^i + rc + sd` for an
/// automorphism `omega` of the base of order dividing `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedAutomorphism {
    pub order: u32,
    /// Matrix on the original base basis: column `j` is `omega(b_j)`.
    pub omega: Matrix,
    /// Canonical primitive `m`-th root of unity.
    pub zeta: Scalar,
}

impl TwistedAutomorphism {
    /// `zeta^n` for any integer `n`.
    pub fn zeta_pow(&self, n: i64) -> Scalar {
        self.zeta.pow(n.rem_euclid(self.order as i64) as u64)
    }

    /// `sigma` applied to an affinization element.
    pub fn apply(&self, x: &AffElement) -> AffElement {
        let mut out = AffElement {
            terms: BTreeMap::new(),
            c: x.c.clone(),
            d: x.d.clone(),
        };
        for (n, v) in &x.terms {
            out.add_term(*n, &vec_scale(&self.zeta_pow(-n), &self.omega.mul_vec(v)));
        }
        out
    }
}

/// Validates order, bracket preservation, isometry and `omega(H) = H`.
pub fn make_twisted_automorphism(
    a: &AffAlgebra,
    omega: Matrix,
    m: u32,
) -> Result<TwistedAutomorphism, AffineError> {
    let base = &a.base;
    let n = base.dim();
    if m == 0 || omega.rows() != n || omega.cols() != n {
        return Err(AffineError::NotAutomorphism(format!(
            "expected a {}x{} matrix and a positive order",
            n, n
        )));
    }
    let mut pw = Matrix::identity(n);
    for _ in 0..m {
        pw = pw.mul(&omega);
    }
    if pw != Matrix::identity(n) {
        return Err(AffineError::NotAutomorphism(format!(
            "omega^{} is not the identity",
            m
        )));
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = omega.mul_vec(&base.bracket(&base.unit(i), &base.unit(j)));
            let rhs = base.bracket(&omega.col(i), &omega.col(j));
            if lhs != rhs {
                return Err(AffineError::NotAutomorphism(format!(
                    "omega[{0}, {1}] != [omega {0}, omega {1}]",
                    base.labels()[i],
                    base.labels()[j]
                )));
            }
            if base.form(&omega.col(i), &omega.col(j)) != *base.form_matrix().get(i, j) {
                return Err(AffineError::NotIsometry(format!(
                    "(omega {0}, omega {1}) != ({0}, {1})",
                    base.labels()[i],
                    base.labels()[j]
                )));
            }
        }
    }
    let h = Subspace::spanned_by(
        n,
        &base
            .cartan()
            .iter()
            .map(|&c| base.unit(c))
            .collect::<Vec<_>>(),
    );
    for &c in base.cartan() {
        if !h.contains(&omega.col(c)) {
            return Err(AffineError::CartanNotPreserved(format!(
                "omega({}) = {}",
                base.labels()[c],
                fmt_vec(&omega.col(c))
            )));
        }
    }
    Ok(TwistedAutomorphism {
        order: m,
        omega,
        zeta: Scalar::zeta(m),
    })
}

/// Fixed points of a twisted automorphism on a window, with root presentation.
#[derive(Debug, Clone)]
pub struct FixedPoints {
    pub handle: GrlaHandle,
    /// Fixed vectors of each window basis element, as (base vector, degree).
    pub elements: Vec<Option<(Vector, i64)>>,
    pub conditions: Report,
    pub gr: Report,
}

/// Fixed window data before any axiom verdicts.
struct FixedData {
    window: GradedWindow,
    elements: Vec<Option<(Vector, i64)>>,
    /// Restricted weights with the residues of the degrees where they occur.
    supports: BTreeMap<Vector, Vec<i64>>,
    h_fixed_gram: Matrix,
    h_fixed_len: usize,
}

fn build_fixed(a: &AffAlgebra, s: &TwistedAutomorphism, n: i64) -> FixedData {
    let base = &a.base;
    let dim = base.dim();
    let cart = base.cartan();
    let l = cart.len();
    // fixed Cartan elements, in original coordinates
    let mut om_h = Matrix::zeros(dim, l);
    for (k, &c) in cart.iter().enumerate() {
        let col = vec_sub(&s.omega.col(c), &base.unit(c));
        for i in 0..dim {
            om_h.set(i, k, col[i].clone());
        }
    }
    let h_fixed: Vec<Vector> = kernel_basis(&om_h)
        .into_iter()
        .map(|coef| {
            let mut v = zero_vec(dim);
            for (k, &c) in cart.iter().enumerate() {
                v[c] = coef[k].clone();
            }
            normalize_leading(&v)
        })
        .collect();
    let r = h_fixed.len();
    // restricted weight groups of the base weight spaces
    let mut groups: BTreeMap<Vector, Vec<Vector>> = BTreeMap::new();
    for (k, w) in a.rd.roots.iter().enumerate() {
        let restricted: Vector = h_fixed
            .iter()
            .map(|h| {
                cart.iter()
                    .enumerate()
                    .fold(Scalar::zero(), |acc, (j, &c)| &acc + &(&h[c] * &w[j]))
            })
            .collect();
        groups
            .entry(restricted)
            .or_default()
            .extend(a.rd.spaces[k].iter().cloned());
    }
    let zero_r = zero_vec(r);
    let mut elements: Vec<Option<(Vector, i64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut grades = Vec::new();
    let mut supports: BTreeMap<Vector, Vec<i64>> = BTreeMap::new();
    let plain = base.plain_window();
    let mut index: BTreeMap<(Vector, i64), (Vec<usize>, Subspace)> = BTreeMap::new();
    for deg in -n..=n {
        let z = s.zeta_pow(deg);
        for (rw, vecs) in &groups {
            // (omega - zeta^deg) restricted to the group
            let mut m = Matrix::zeros(dim, vecs.len());
            for (col, v) in vecs.iter().enumerate() {
                let img = vec_sub(&s.omega.mul_vec(v), &vec_scale(&z, v));
                for i in 0..dim {
                    m.set(i, col, img[i].clone());
                }
            }
            let mut sp = Subspace::new(dim);
            if deg == 0 && *rw == zero_r {
                for h in &h_fixed {
                    sp.insert(h);
                }
            }
            for coef in kernel_basis(&m) {
                let mut v = zero_vec(dim);
                for (cf, b) in coef.iter().zip(vecs) {
                    v = vec_add(&v, &vec_scale(cf, b));
                }
                sp.insert(&normalize_leading(&v));
            }
            if sp.dim() == 0 {
                continue;
            }
            let r_mod = deg.rem_euclid(s.order as i64);
            let e = supports.entry(rw.clone()).or_default();
            if !e.contains(&r_mod) {
                e.push(r_mod);
            }
            let mut ids = Vec::new();
            for v in sp.basis() {
                ids.push(elements.len());
                let name = plain.fmt_element(v);
                let name = if name.contains(' ') || name.contains('*') {
                    format!("({})", name)
                } else {
                    name
                };
                labels.push(format!("{}*t^{}", name, deg));
                let mut w = rw.clone();
                w.push(Scalar::zero());
                w.push(Scalar::int(deg));
                weights.push(w);
                grades.push(deg);
                elements.push(Some((v.clone(), deg)));
            }
            index.insert((rw.clone(), deg), (ids, sp));
        }
    }
    let ci = elements.len();
    let di = ci + 1;
    elements.push(None);
    elements.push(None);
    labels.push("c".into());
    labels.push("d".into());
    weights.push(zero_vec(r + 2));
    weights.push(zero_vec(r + 2));
    grades.push(0);
    grades.push(0);
    let total = elements.len();
    let mut table: Vec<Option<Vec<(usize, Scalar)>>> = vec![Some(Vec::new()); total * total];
    for i in 0..ci {
        let (u, du) = elements[i].clone().expect("loop element");
        for j in 0..ci {
            let (v, dv) = elements[j].clone().expect("loop element");
            let br = base.bracket(&u, &v);
            let s_deg = du + dv;
            let mut terms = Vec::new();
            if !is_zero_vec(&br) {
                if s_deg.abs() > n {
                    table[i * total + j] = None;
                    continue;
                }
                let key = (vec_add(&weights[i][..r], &weights[j][..r]), s_deg);
                let (ids, sp) = index
                    .get(&key)
                    .expect("fixed points are closed under brackets");
                let coords = sp
                    .coordinates(&br)
                    .expect("bracket of fixed vectors is fixed");
                for (id, cf) in ids.iter().zip(coords) {
                    if !cf.is_zero() {
                        terms.push((*id, cf));
                    }
                }
            }
            if s_deg == 0 && du != 0 {
                let f = base.form(&u, &v);
                if !f.is_zero() {
                    terms.push((ci, &Scalar::int(du) * &f));
                }
            }
            table[i * total + j] = Some(terms);
        }
        if du != 0 {
            table[di * total + i] = Some(vec![(i, Scalar::int(du))]);
            table[i * total + di] = Some(vec![(i, Scalar::int(-du))]);
        }
    }
    let mut form = Matrix::zeros(total, total);
    for i in 0..ci {
        let (u, du) = elements[i].clone().expect("loop element");
        for j in 0..ci {
            let (v, dv) = elements[j].clone().expect("loop element");
            if du + dv == 0 {
                let f = base.form(&u, &v);
                if !f.is_zero() {
                    form.set(i, j, f);
                }
            }
        }
    }
    form.set(ci, di, Scalar::one());
    form.set(di, ci, Scalar::one());
    let mut hg = Matrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            hg.set(i, j, base.form(&h_fixed[i], &h_fixed[j]));
        }
    }
    let mut cartan: Vec<usize> = match index.get(&(zero_r.clone(), 0)) {
        Some((ids, _)) => ids[..r].to_vec(),
        None => Vec::new(),
    };
    cartan.push(ci);
    cartan.push(di);
    let window = GradedWindow::new(WindowParts {
        labels,
        weights,
        grades,
        table,
        form,
        h_gram: extend_gram(&hg),
        cartan,
        radius: Some(n),
    })
    .expect("consistent shapes");
    FixedData {
        window,
        elements,
        supports,
        h_fixed_gram: hg,
        h_fixed_len: r,
    }
}

/// The four conditions on a twisted automorphism. Order, isometry and
/// `sigma(H) = H` are guaranteed by construction; the centralizer condition
/// is decided on degree 0, which is exact because `d` separates degrees.
pub fn check_auto_conditions(a: &AffAlgebra, s: &TwistedAutomorphism, n: i64) -> Report {
    let data = build_fixed(a, s, n);
    auto_conditions(a, s, &data)
}

fn auto_conditions(a: &AffAlgebra, s: &TwistedAutomorphism, data: &FixedData) -> Report {
    let mut r = Report::new();
    r.push(
        "finite order",
        true,
        format!("omega^{} = 1, zeta = {}", s.order, s.zeta),
    );
    r.push(
        "isometry",
        true,
        "omega preserves the form; sigma fixes c and d",
    );
    r.push(
        "Cartan preserved",
        true,
        "omega(H) = H; sigma fixes c and d",
    );
    let w = &data.window;
    let cart: Vec<Vector> = w.cartan().iter().map(|&i| w.unit(i)).collect();
    let all: Vec<Vector> = (0..w.dim()).map(|i| w.unit(i)).collect();
    let cent = w.centralizer(&all, &cart);
    let h_span = Subspace::spanned_by(w.dim(), &cart);
    let plain = a.base.plain_window();
    let witness = cent.iter().find(|v| !h_span.contains(v)).map(|v| {
        // express in base terms with its degree
        let mut base_v = zero_vec(a.base.dim());
        let mut deg = 0;
        for (i, c) in v.iter().enumerate() {
            if let (false, Some((u, du))) = (c.is_zero(), &data.elements[i]) {
                base_v = vec_add(&base_v, &vec_scale(c, u));
                deg = *du;
            }
        }
        format!(
            "{} in degree {}",
            plain.fmt_element(&normalize_leading(&base_v)),
            deg
        )
    });
    let detail = match &witness {
        None => format!(
            "centralizer of the fixed Cartan subalgebra is itself (dimension {}), window radius {}",
            cart.len(),
            w.radius().unwrap_or(0)
        ),
        Some(x) => format!(
            "{} centralizes the fixed Cartan subalgebra, window radius {}",
            x,
            w.radius().unwrap_or(0)
        ),
    };
    r.push("centralizer", witness.is_none(), detail);
    r
}

/// Fixed-point subalgebra on a window, its root presentation, and GR1 to
/// GR5 verdicts (GR1 to GR4 on the window).
pub fn fixed_subalgebra(
    a: &AffAlgebra,
    s: &TwistedAutomorphism,
    n: i64,
) -> Result<FixedPoints, AffineError> {
    let data = build_fixed(a, s, n);
    let conditions = auto_conditions(a, s, &data);
    if !conditions.all_pass() {
        let f = conditions
            .failures()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(AffineError::ConditionsFail(f));
    }
    let m = s.order as i64;
    let modulus = IntLattice::from_generators(1, &[vec![m]]);
    let zero_r = zero_vec(data.h_fixed_len);
    let mut zero_res: Vec<Vec<i64>> = vec![vec![0]];
    let mut weights = Vec::new();
    for (rw, res) in &data.supports {
        let cu = CosetUnion::new(modulus.clone(), res.iter().map(|x| vec![*x]).collect());
        if *rw == zero_r {
            zero_res.extend(res.iter().map(|x| vec![*x]));
        } else {
            weights.push((rw.clone(), cu));
        }
    }
    let zero_support = CosetUnion::new(modulus, zero_res);
    let (presentation, from_pres) = loop_presentation(&weights, zero_support, &data.h_fixed_gram)?;
    let handle = GrlaHandle {
        window: data.window,
        presentation,
        from_pres,
    };
    let gr = window_gr_checks(&handle);
    Ok(FixedPoints {
        handle,
        elements: data.elements,
        conditions,
        gr,
    })
}

/// GR1 to GR4 on a window, and GR5 from the presentation.
pub fn window_gr_checks(hd: &GrlaHandle) -> Report {
    let w = &hd.window;
    let mut r = Report::new();
    let mut gr1 = Vec::new();
    if let Some(x) = w.check_antisymmetry() {
        gr1.push(x);
    }
    if let Some(x) = w.check_jacobi() {
        gr1.push(x);
    }
    if !w.form_matrix().is_symmetric() {
        gr1.push("form is not symmetric".into());
    }
    if let Some(x) = w.check_invariance() {
        gr1.push(x);
    }
    if let Some(x) = w.check_form_grading() {
        gr1.push(x);
    }
    if let Some(x) = pairing_defect(w) {
        gr1.push(x);
    }
    r.push(
        "GR1",
        gr1.is_empty(),
        if gr1.is_empty() {
            format!(
                "on all in-window triples, radius {}",
                w.radius().unwrap_or(0)
            )
        } else {
            gr1.join("; ")
        },
    );
    let mut gr2 = Vec::new();
    let cart = w.cartan().to_vec();
    for &h in &cart {
        for j in 0..w.dim() {
            let Ok(v) = w.bracket(&w.unit(h), &w.unit(j)) else {
                gr2.push(format!(
                    "[{}, {}] leaves the window",
                    w.label(h),
                    w.label(j)
                ));
                continue;
            };
            let k = cart.iter().position(|&c| c == h).expect("Cartan index");
            let expect = vec_scale(&w.weight(j)[k], &w.unit(j));
            if v != expect {
                gr2.push(format!(
                    "{} is not an eigenvector of ad {}",
                    w.label(j),
                    w.label(h)
                ));
            }
        }
    }
    let cart_v: Vec<Vector> = cart.iter().map(|&i| w.unit(i)).collect();
    let all: Vec<Vector> = (0..w.dim()).map(|i| w.unit(i)).collect();
    let hs = Subspace::spanned_by(w.dim(), &cart_v);
    if let Some(v) = w
        .centralizer(&all, &cart_v)
        .iter()
        .find(|v| !hs.contains(v))
    {
        gr2.push(format!(
            "{} centralizes the Cartan subalgebra",
            w.fmt_element(v)
        ));
    }
    r.push(
        "GR2",
        gr2.is_empty(),
        if gr2.is_empty() {
            "abelian, self-centralizing, acts diagonally".to_string()
        } else {
            gr2.join("; ")
        },
    );
    let mut gr3 = None;
    let mut undecided = 0usize;
    for x in 0..w.dim() {
        if w.is_isotropic_weight(w.weight(x)) {
            continue;
        }
        for y in 0..w.dim() {
            let mut v = w.unit(y);
            let mut done = false;
            for _ in 0..MAX_STRING {
                match w.bracket(&w.unit(x), &v) {
                    Ok(b) if is_zero_vec(&b) => {
                        done = true;
                        break;
                    }
                    Ok(b) => v = b,
                    Err(_) => {
                        undecided += 1;
                        done = true;
                        break;
                    }
                }
            }
            if !done {
                gr3.get_or_insert_with(|| {
                    format!(
                        "ad({}) does not kill {} within {} steps",
                        w.label(x),
                        w.label(y),
                        MAX_STRING
                    )
                });
            }
        }
    }
    r.push(
        "GR3",
        gr3.is_none(),
        gr3.unwrap_or_else(|| {
            format!(
                "nonisotropic root vectors act nilpotently ({} strings leave the window)",
                undecided
            )
        }),
    );
    r.push("GR4", true, "roots form a discrete set of lattice cosets");
    let nonzero = hd.presentation.nonisotropic_classes().len();
    r.push(
        "GR5",
        nonzero > 0,
        format!("{} nonisotropic root families", nonzero),
    );
    r
}

/// First degree `k` where the form fails to pair degrees `k` and `-k` nondegenerately.
fn pairing_defect(w: &GradedWindow) -> Option<String> {
    let mut by_deg: BTreeMap<(Vector, i64), Vec<usize>> = BTreeMap::new();
    for i in 0..w.dim() {
        by_deg
            .entry((w.weight(i).clone(), w.grade(i)))
            .or_default()
            .push(i);
    }
    for ((wt, g), ids) in &by_deg {
        let neg: Vector = wt.iter().map(|x| -x).collect();
        let Some(others) = by_deg.get(&(neg, -g)) else {
            return Some(format!(
                "weight {} degree {} has no partner",
                fmt_vec(wt),
                g
            ));
        };
        let mut m = Matrix::zeros(ids.len(), others.len());
        for (a, &i) in ids.iter().enumerate() {
            for (b, &j) in others.iter().enumerate() {
                m.set(a, b, w.form_matrix().get(i, j).clone());
            }
        }
        if ids.len() != others.len() || m.rank() != ids.len() {
            return Some(format!(
                "form pairs weight {} degree {} degenerately",
                fmt_vec(wt),
                g
            ));
        }
    }
    None
}

/// `None` when the centralizer of the in-window core lies in the core.
pub fn window_tameness(w: &GradedWindow) -> Option<String> {
    let gens: Vec<Vector> = (0..w.dim())
        .filter(|&i| !w.is_isotropic_weight(w.weight(i)))
        .map(|i| w.unit(i))
        .collect();
    let (core, _) = w.closure(&gens);
    let all: Vec<Vector> = (0..w.dim()).map(|i| w.unit(i)).collect();
    let span = Subspace::spanned_by(w.dim(), &core);
    w.centralizer(&all, &core)
        .into_iter()
        .find(|v| !span.contains(v))
        .map(|v| w.fmt_element(&v))
}

impl fmt::Display for AffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (n, x) in &self.terms {
            parts.push(format!("{}*t^{}", fmt_vec(x), n));
        }
        if !self.c.is_zero() {
            parts.push(format!("({})c", self.c));
        }
        if !self.d.is_zero() {
            parts.push(format!("({})d", self.d));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
