//! Finite-dimensional Lie algebras given by structure constants, with an
//! invariant form and a Cartan subalgebra: axiom checks, root
//! decomposition, cores and centers, and the decomposition of a generalized
//! reductive Lie algebra into indecomposable pieces.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactfield::{Rational, Scalar};
use crate::finroot::RootType;
use crate::grrs::{CheckOptions, Decomposition, GrrsError, GrrsPresentation};
use crate::lattice::CosetUnion;
use crate::linalg::{
    clear_denominators, fmt_vec, hermite_normal_form, is_zero_vec, kernel_basis, solve_linear,
    vec_scale, vec_sub, zero_vec, Matrix, Subspace, Vector,
};
use crate::report::Report;
use crate::window::{GradedWindow, WindowError, WindowParts};

/// Largest absolute eigenvalue numerator searched for.
const EIGEN_SEARCH_CAP: i64 = 100_000;
/// Simplicity is only decided up to this dimension.
pub const SIMPLICITY_DIM_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("ad({0}) is not diagonalizable over the rationals")]
    NotDiagonalizable(String),
    #[error("the zero weight space is not the Cartan subalgebra: {0}")]
    CartanNotSelfCentralizing(String),
    #[error("{0} is an isotropic root")]
    IsotropicRoot(String),
    #[error("{0} is not a root")]
    NotARoot(String),
    #[error("no dual basis: {0}")]
    NoDualBasis(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error(transparent)]
    Grrs(#[from] GrrsError),
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// A Lie algebra on a basis, with an invariant form and Cartan basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructLieAlgebra {
    labels: Vec<String>,
    table: Vec<Vec<(usize, Scalar)>>,
    form: Matrix,
    cartan: Vec<usize>,
}

/// Bracket of two basis elements as a sparse combination.
pub type BracketEntry = (usize, usize, Vec<(usize, Scalar)>);

impl StructLieAlgebra {
    /// Listed brackets `[b_i, b_j]`; an unlisted `[b_j, b_i]` is filled in by antisymmetry.
    pub fn new(
        labels: Vec<String>,
        brackets: &[BracketEntry],
        form: Matrix,
        cartan: Vec<usize>,
    ) -> Result<Self, LieError> {
        let n = labels.len();
        if form.rows() != n || form.cols() != n {
            return Err(LieError::Malformed(format!("form must be {}x{}", n, n)));
        }
        if cartan.iter().any(|&c| c >= n) {
            return Err(LieError::Malformed("Cartan index out of range".into()));
        }
        let mut given = vec![false; n * n];
        let mut table = vec![Vec::new(); n * n];
        for (i, j, terms) in brackets {
            if *i >= n || *j >= n || terms.iter().any(|(k, _)| *k >= n) {
                return Err(LieError::Malformed(format!(
                    "bracket ({}, {}) refers to a missing basis element",
                    i, j
                )));
            }
            if given[i * n + j] {
                return Err(LieError::Malformed(format!(
                    "bracket ({}, {}) listed twice",
                    i, j
                )));
            }
            given[i * n + j] = true;
            table[i * n + j] = combine(terms);
        }
        for i in 0..n {
            for j in 0..n {
                if !given[i * n + j] && given[j * n + i] {
                    table[i * n + j] = table[j * n + i].iter().map(|(k, c)| (*k, -c)).collect();
                }
            }
        }
        Ok(StructLieAlgebra {
            labels,
            table,
            form,
            cartan,
        })
    }

    /// Linear Lie algebra spanned by square matrices, with the trace form.
    pub fn from_matrices(
        labels: Vec<String>,
        mats: &[Matrix],
        cartan: Vec<usize>,
    ) -> Result<Self, LieError> {
        let n = mats.len();
        if labels.len() != n || n == 0 {
            return Err(LieError::Malformed("one label per matrix".into()));
        }
        let m = mats[0].rows();
        let flat =
            |a: &Matrix| -> Vector { (0..m * m).map(|k| a.get(k / m, k % m).clone()).collect() };
        let span = Subspace::spanned_by(m * m, &mats.iter().map(flat).collect::<Vec<_>>());
        if span.dim() != n {
            return Err(LieError::Malformed(
                "matrices are linearly dependent".into(),
            ));
        }
        let mut brackets = Vec::new();
        let mut form = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let ab = mats[i].mul(&mats[j]);
                let ba = mats[j].mul(&mats[i]);
                let comm: Vector = vec_sub(&flat(&ab), &flat(&ba));
                let coords = span.coordinates(&comm).ok_or_else(|| {
                    LieError::Malformed(format!("[{}, {}] leaves the span", labels[i], labels[j]))
                })?;
                brackets.push((
                    i,
                    j,
                    coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect(),
                ));
                let mut tr = Scalar::zero();
                for k in 0..m {
                    tr = &tr + ab.get(k, k);
                }
                form.set(i, j, tr);
            }
        }
        StructLieAlgebra::new(labels, &brackets, form, cartan)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn form_matrix(&self) -> &Matrix {
        &self.form
    }

    pub fn structure(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    /// Nonzero brackets `[b_i, b_j]` with `i < j`, plus any pair whose two orders disagree.
    pub fn bracket_entries(&self) -> Vec<BracketEntry> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let t = self.structure(i, j);
                let rev: Vec<(usize, Scalar)> =
                    self.structure(j, i).iter().map(|(k, c)| (*k, -c)).collect();
                let listed = if i < j {
                    !t.is_empty()
                } else {
                    i > j && rev != t
                };
                if listed {
                    out.push((i, j, t.to_vec()));
                }
            }
        }
        out
    }

    /// The algebra as an ungraded window: every weight is empty.
    pub fn plain_window(&self) -> GradedWindow {
        let n = self.dim();
        GradedWindow::new(WindowParts {
            labels: self.labels.clone(),
            weights: vec![Vec::new(); n],
            grades: vec![0; n],
            table: self.table.iter().map(|t| Some(t.clone())).collect(),
            form: self.form.clone(),
            h_gram: Matrix::zeros(0, 0),
            cartan: Vec::new(),
            radius: None,
        })
        .expect("consistent shapes")
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let terms = &self.table[i * n + j];
                if terms.is_empty() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in terms {
                    out[*k] = &out[*k] + &(&ab * c);
                }
            }
        }
        out
    }

    pub fn form(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        self.form.bilinear(x, y)
    }

    pub fn unit(&self, i: usize) -> Vector {
        let mut v = zero_vec(self.dim());
        v[i] = Scalar::one();
        v
    }

    /// Matrix of `ad(x)`: column `j` holds `[x, b_j]`.
    pub fn ad_matrix(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.bracket(x, &self.unit(j));
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    fn h_gram(&self) -> Matrix {
        let l = self.cartan.len();
        let mut g = Matrix::zeros(l, l);
        for (a, &i) in self.cartan.iter().enumerate() {
            for (b, &j) in self.cartan.iter().enumerate() {
                g.set(a, b, self.form.get(i, j).clone());
            }
        }
        g
    }

    /// Antisymmetry, Jacobi, form symmetry/invariance/nondegeneracy, and the
    /// Cartan subalgebra being abelian, diagonalizable and self-centralizing.
    pub fn validate_algebra(&self) -> Report {
        let w = self.plain_window();
        let mut r = Report::new();
        let anti = w.check_antisymmetry();
        r.push(
            "antisymmetry",
            anti.is_none(),
            anti.unwrap_or_else(|| "all pairs".into()),
        );
        let jac = w.check_jacobi();
        r.push(
            "Jacobi",
            jac.is_none(),
            jac.unwrap_or_else(|| "all triples".into()),
        );
        let sym = self.form.is_symmetric();
        r.push(
            "form symmetric",
            sym,
            if sym {
                "yes".to_string()
            } else {
                "form matrix is not symmetric".into()
            },
        );
        let inv = w.check_invariance();
        r.push(
            "form invariant",
            inv.is_none(),
            inv.unwrap_or_else(|| "all triples".into()),
        );
        let det = self.form.determinant();
        r.push(
            "form nondegenerate",
            !det.is_zero(),
            if det.is_zero() {
                format!(
                    "radical {}",
                    kernel_basis(&self.form)
                        .iter()
                        .map(|v| fmt_vec(v))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            } else {
                "determinant nonzero".into()
            },
        );
        let mut abelian = None;
        for &a in &self.cartan {
            for &b in &self.cartan {
                if !is_zero_vec(&self.bracket(&self.unit(a), &self.unit(b))) {
                    abelian.get_or_insert_with(|| {
                        format!("[{}, {}] != 0", self.labels[a], self.labels[b])
                    });
                }
            }
        }
        r.push(
            "Cartan abelian",
            abelian.is_none(),
            abelian.unwrap_or_else(|| format!("{} Cartan elements", self.cartan.len())),
        );
        match self.root_decomposition() {
            Ok(rd) => {
                r.push(
                    "Cartan diagonalizable",
                    true,
                    format!("{} weights", rd.roots.len()),
                );
                r.push(
                    "Cartan self-centralizing",
                    true,
                    "zero weight space is the Cartan subalgebra",
                );
            }
            Err(LieError::CartanNotSelfCentralizing(s)) => {
                r.push("Cartan diagonalizable", true, "joint eigenspaces span");
                r.push("Cartan self-centralizing", false, s);
            }
            Err(e) => {
                r.push("Cartan diagonalizable", false, e.to_string());
                r.push("Cartan self-centralizing", false, "not decided");
            }
        }
        r
    }

    /// Joint eigenspace decomposition under the Cartan basis.
    pub fn root_decomposition(&self) -> Result<RootDecomposition, LieError> {
        let n = self.dim();
        let mut pieces: Vec<(Vector, Subspace)> = vec![(
            Vec::new(),
            Subspace::spanned_by(n, &(0..n).map(|i| self.unit(i)).collect::<Vec<_>>()),
        )];
        for &h in &self.cartan {
            let ad = self.ad_matrix(&self.unit(h));
            let eig = rational_eigenvalues(&ad)
                .ok_or_else(|| LieError::NotDiagonalizable(self.labels[h].clone()))?;
            let mut total = 0;
            let mut spaces = Vec::new();
            for lam in eig {
                let mut shifted = ad.clone();
                for i in 0..n {
                    shifted.set(i, i, shifted.get(i, i) - &lam);
                }
                let k = kernel_basis(&shifted);
                total += k.len();
                spaces.push((lam, Subspace::spanned_by(n, &k)));
            }
            if total != n {
                return Err(LieError::NotDiagonalizable(self.labels[h].clone()));
            }
            let mut next = Vec::new();
            for (w, s) in &pieces {
                for (lam, e) in &spaces {
                    let part = s.intersect(e);
                    if part.dim() > 0 {
                        let mut w2 = w.clone();
                        w2.push(lam.clone());
                        next.push((w2, part));
                    }
                }
            }
            pieces = next;
        }
        if pieces.iter().map(|(_, s)| s.dim()).sum::<usize>() != n {
            return Err(LieError::NotDiagonalizable("Cartan subalgebra".into()));
        }
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        let l = self.cartan.len();
        let zero = zero_vec(l);
        let h_space = Subspace::spanned_by(
            n,
            &self
                .cartan
                .iter()
                .map(|&i| self.unit(i))
                .collect::<Vec<_>>(),
        );
        match pieces.iter().find(|(w, _)| *w == zero) {
            Some((_, s)) if s.same_as(&h_space) => {}
            Some((_, s)) => {
                let extra = s
                    .echelon()
                    .iter()
                    .find(|v| !h_space.contains(v))
                    .map(|v| fmt_vec(v))
                    .unwrap_or_default();
                return Err(LieError::CartanNotSelfCentralizing(format!(
                    "{} centralizes the Cartan subalgebra",
                    extra
                )));
            }
            None => {
                return Err(LieError::CartanNotSelfCentralizing(
                    "empty Cartan subalgebra".into(),
                ))
            }
        }
        let h_gram = self.h_gram();
        let ginv = h_gram.inverse().ok();
        let mut rd = RootDecomposition {
            roots: Vec::new(),
            spaces: Vec::new(),
            t: Vec::new(),
            isotropic: Vec::new(),
        };
        for (w, s) in pieces {
            let basis: Vec<Vector> = if w == zero {
                self.cartan.iter().map(|&i| self.unit(i)).collect()
            } else {
                s.echelon().to_vec()
            };
            let t = ginv
                .as_ref()
                .map(|g| g.mul_vec(&w))
                .unwrap_or_else(|| zero_vec(l));
            let iso = ginv
                .as_ref()
                .map(|g| g.bilinear(&w, &w).is_zero())
                .unwrap_or(true);
            rd.roots.push(w);
            rd.spaces.push(basis);
            rd.t.push(t);
            rd.isotropic.push(iso);
        }
        Ok(rd)
    }

    /// `(e, h, f)` with `e` the stored basis vector of the root space,
    /// `(e, f) = 2/(a, a)` and `h = [e, f]`.
    pub fn sl2_triple(
        &self,
        rd: &RootDecomposition,
        alpha: &[Scalar],
    ) -> Result<(Vector, Vector, Vector), LieError> {
        let i = rd
            .index_of(alpha)
            .ok_or_else(|| LieError::NotARoot(fmt_vec(alpha)))?;
        if is_zero_vec(alpha) {
            return Err(LieError::NotARoot(fmt_vec(alpha)));
        }
        if rd.isotropic[i] {
            return Err(LieError::IsotropicRoot(fmt_vec(alpha)));
        }
        let neg: Vector = alpha.iter().map(|x| -x).collect();
        let j = rd
            .index_of(&neg)
            .ok_or_else(|| LieError::NotARoot(fmt_vec(&neg)))?;
        let e = rd.spaces[i][0].clone();
        let aa = self
            .h_gram()
            .inverse()
            .map_err(|_| LieError::NoDualBasis("Cartan form".into()))?
            .bilinear(alpha, alpha);
        let target = Scalar::int(2).div(&aa).expect("nonisotropic");
        // f in G_{-alpha} with (e, f) = target; pick the first basis vector pairing nontrivially
        let mut f = None;
        for v in &rd.spaces[j] {
            let p = self.form(&e, v);
            if !p.is_zero() {
                f = Some(vec_scale(&target.div(&p).expect("nonzero"), v));
                break;
            }
        }
        let f = f.ok_or_else(|| {
            LieError::NoDualBasis(format!("G_{} pairs trivially with e", fmt_vec(&neg)))
        })?;
        let h = self.bracket(&e, &f);
        Ok((e, h, f))
    }

    /// Same algebra on a basis of Cartan elements followed by root vectors.
    pub fn weight_window(&self, rd: &RootDecomposition) -> GradedWindow {
        let n = self.dim();
        let mut basis: Vec<Vector> = Vec::new();
        let mut weights: Vec<Vector> = Vec::new();
        let l = self.cartan.len();
        for &c in &self.cartan {
            basis.push(self.unit(c));
            weights.push(zero_vec(l));
        }
        for (k, w) in rd.roots.iter().enumerate() {
            if is_zero_vec(w) {
                continue;
            }
            for v in &rd.spaces[k] {
                basis.push(v.clone());
                weights.push(w.clone());
            }
        }
        let plain = self.plain_window();
        let labels: Vec<String> = basis
            .iter()
            .map(|v| {
                let s = plain.fmt_element(v);
                if s.contains(' ') || s.contains('*') {
                    format!("[{}]", s)
                } else {
                    s
                }
            })
            .collect();
        let p = Matrix::from_rows(&basis, n).transpose();
        let pinv = p.inverse().expect("weight vectors form a basis");
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let coords = pinv.mul_vec(&self.bracket(&basis[i], &basis[j]));
                table.push(Some(
                    coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect(),
                ));
            }
        }
        GradedWindow::new(WindowParts {
            labels,
            weights,
            grades: vec![0; n],
            table,
            form: self.form.congruence(&p),
            h_gram: self.h_gram(),
            cartan: (0..l).collect(),
            radius: None,
        })
        .expect("consistent shapes")
    }

    /// Subalgebra generated by the nonisotropic root spaces.
    pub fn core(&self) -> Result<Vec<Vector>, LieError> {
        let rd = self.root_decomposition()?;
        let gens: Vec<Vector> = rd
            .nonisotropic_indices()
            .into_iter()
            .flat_map(|k| rd.spaces[k].clone())
            .collect();
        Ok(
            Subspace::spanned_by(self.dim(), &self.plain_window().closure(&gens).0)
                .echelon()
                .to_vec(),
        )
    }

    pub fn center(&self) -> Vec<Vector> {
        let all: Vec<Vector> = (0..self.dim()).map(|i| self.unit(i)).collect();
        self.centralizer(&all)
    }

    /// Elements commuting with every vector of `s`.
    pub fn centralizer(&self, s: &[Vector]) -> Vec<Vector> {
        let all: Vec<Vector> = (0..self.dim()).map(|i| self.unit(i)).collect();
        self.plain_window().centralizer(&all, s)
    }

    /// Quotient by an ideal, on the basis elements independent of it.
    pub fn quotient_by_ideal(&self, ideal: &[Vector]) -> Result<StructLieAlgebra, LieError> {
        let q = self.plain_window().quotient(ideal).map_err(|e| match e {
            WindowError::NotAnIdeal(s) => LieError::NotAnIdeal(s),
            other => LieError::Window(other),
        })?;
        Ok(from_window(
            &q,
            self.cartan
                .iter()
                .filter_map(|c| q.labels().iter().position(|l| *l == self.labels[*c]))
                .collect(),
        ))
    }

    /// Subalgebra spanned by `basis` (closed under brackets), on that basis.
    pub fn subalgebra(
        &self,
        basis: &[Vector],
        labels: Vec<String>,
    ) -> Result<StructLieAlgebra, LieError> {
        let w = self.plain_window().sub_window(basis, labels)?;
        Ok(from_window(&w, Vec::new()))
    }

    /// GR1 to GR6 and tameness.
    pub fn check_gr(&self, opts: &CheckOptions) -> Report {
        let v = self.validate_algebra();
        let mut r = Report::new();
        let gr1 = [
            "antisymmetry",
            "Jacobi",
            "form symmetric",
            "form invariant",
            "form nondegenerate",
        ];
        let bad1: Vec<String> = v
            .checks
            .iter()
            .filter(|c| gr1.contains(&c.name) && !c.pass)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        r.push(
            "GR1",
            bad1.is_empty(),
            if bad1.is_empty() {
                "invariant nondegenerate symmetric form".to_string()
            } else {
                bad1.join("; ")
            },
        );
        let gr2 = [
            "Cartan abelian",
            "Cartan diagonalizable",
            "Cartan self-centralizing",
        ];
        let bad2: Vec<String> = v
            .checks
            .iter()
            .filter(|c| gr2.contains(&c.name) && !c.pass)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        r.push(
            "GR2",
            bad2.is_empty(),
            if bad2.is_empty() {
                "abelian, self-centralizing, diagonalizable".to_string()
            } else {
                bad2.join("; ")
            },
        );
        let rd = match self.root_decomposition() {
            Ok(rd) => rd,
            Err(e) => {
                for name in ["GR3", "GR4", "GR5", "GR6a", "GR6b", "tame"] {
                    r.push(name, false, format!("no root decomposition: {}", e));
                }
                return r;
            }
        };
        let mut nil_fail = None;
        for k in rd.nonisotropic_indices() {
            for x in &rd.spaces[k] {
                if !is_nilpotent(&self.ad_matrix(x)) {
                    nil_fail.get_or_insert_with(|| {
                        format!(
                            "ad({}) is not nilpotent",
                            self.plain_window().fmt_element(x)
                        )
                    });
                }
            }
        }
        r.push(
            "GR3",
            nil_fail.is_none(),
            nil_fail.unwrap_or_else(|| "nonisotropic root vectors act nilpotently".into()),
        );
        r.push(
            "GR4",
            true,
            format!("{} roots, a finite set", rd.roots.len()),
        );
        let nonzero_noniso = rd.nonisotropic_indices().len();
        r.push(
            "GR5",
            nonzero_noniso > 0,
            if nonzero_noniso > 0 {
                format!("{} nonisotropic roots", nonzero_noniso)
            } else {
                "no nonisotropic roots".to_string()
            },
        );
        match self.handle() {
            Ok(hd) => {
                let comps = hd.presentation.component_classes().len();
                r.push("GR6a", comps == 1, format!("{} component(s)", comps));
                match hd.presentation.isolated_roots() {
                    Ok(iso) => r.push("GR6b", iso.is_empty(), format!("isolated roots: {}", iso)),
                    Err(e) => r.push("GR6b", false, e.to_string()),
                }
                let _ = opts;
            }
            Err(e) => {
                r.push("GR6a", false, format!("no root presentation: {}", e));
                r.push("GR6b", false, format!("no root presentation: {}", e));
            }
        }
        match self.tameness() {
            Ok(None) => r.push("tame", true, "the core contains its centralizer"),
            Ok(Some(w)) => r.push(
                "tame",
                false,
                format!("{} centralizes the core but lies outside it", w),
            ),
            Err(e) => r.push("tame", false, e.to_string()),
        }
        r
    }

    /// `None` when the centralizer of the core lies in the core; otherwise a witness.
    pub fn tameness(&self) -> Result<Option<String>, LieError> {
        let core = self.core()?;
        let cent = self.centralizer(&core);
        let span = Subspace::spanned_by(self.dim(), &core);
        Ok(cent
            .iter()
            .find(|v| !span.contains(v))
            .map(|v| self.plain_window().fmt_element(v)))
    }

    /// Root presentation and weight window.
    pub fn handle(&self) -> Result<GrlaHandle, LieError> {
        let rd = self.root_decomposition()?;
        let window = self.weight_window(&rd);
        let weights: Vec<Vector> = rd
            .roots
            .iter()
            .filter(|w| !is_zero_vec(w))
            .cloned()
            .collect();
        let (presentation, from_pres) = presentation_from_weights(&weights, &self.h_gram())?;
        Ok(GrlaHandle {
            window,
            presentation,
            from_pres,
        })
    }
}

fn combine(terms: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
    let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, c) in terms {
        let e = m.entry(*k).or_insert_with(Scalar::zero);
        *e = &*e + c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn from_window(w: &GradedWindow, cartan: Vec<usize>) -> StructLieAlgebra {
    let n = w.dim();
    let table = (0..n * n)
        .map(|k| {
            w.basis_bracket(k / n, k % n)
                .map(|t| t.to_vec())
                .unwrap_or_default()
        })
        .collect();
    StructLieAlgebra {
        labels: w.labels().to_vec(),
        table,
        form: w.form_matrix().clone(),
        cartan,
    }
}

fn is_nilpotent(m: &Matrix) -> bool {
    let n = m.rows();
    let mut p = m.clone();
    for _ in 0..n {
        if p.is_zero() {
            return true;
        }
        p = p.mul(m);
    }
    p.is_zero()
}

/// Eigenvalues of a rational matrix when all of them are rational; `None`
/// otherwise (non-rational entries included). Repeated roots appear once.
pub fn rational_eigenvalues(a: &Matrix) -> Option<Vec<Scalar>> {
    let n = a.rows();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(a.get(i, j).as_rational()?.clone());
        }
        rows.push(row);
    }
    // eigenvalues of den * a are algebraic integers, so rational ones are integers
    let (ints, den) = clear_denominators(&rows, n);
    let b = Matrix::new(
        n,
        n,
        (0..n * n)
            .map(|k| Scalar::int(ints.get(k / n, k % n)))
            .collect(),
    );
    let poly = char_poly(&b);
    let mut bound = 0i64;
    for i in 0..n {
        let s: i64 = (0..n).map(|j| ints.get(i, j).abs()).sum();
        bound = bound.max(s);
    }
    if bound > EIGEN_SEARCH_CAP {
        return None;
    }
    let den = Scalar::Rat(Rational::from_integer(den));
    let mut out = Vec::new();
    let mut count = 0usize;
    let mut rest = poly;
    for k in -bound..=bound {
        let mut mult = 0;
        while rest.len() > 1 && eval_poly(&rest, k).is_zero() {
            rest = deflate(&rest, k);
            mult += 1;
        }
        if mult > 0 {
            out.push(Scalar::int(k).div(&den).expect("nonzero denominator"));
            count += mult;
        }
    }
    (count == n).then_some(out)
}

/// Characteristic polynomial coefficients, lowest degree first (Faddeev-LeVerrier).
fn char_poly(a: &Matrix) -> Vec<Scalar> {
    let n = a.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            next.set(i, i, next.get(i, i) + &coeffs[n - k + 1]);
        }
        m = next;
        let am = a.mul(&m);
        let mut tr = Scalar::zero();
        for i in 0..n {
            tr = &tr + am.get(i, i);
        }
        coeffs[n - k] = -&tr.div(&Scalar::int(k as i64)).expect("k > 0");
    }
    coeffs
}

fn eval_poly(p: &[Scalar], x: i64) -> Scalar {
    let xs = Scalar::int(x);
    p.iter()
        .rev()
        .fold(Scalar::zero(), |acc, c| &(&acc * &xs) + c)
}

/// Divides by `(x - r)`; the division is exact when `r` is a root.
fn deflate(p: &[Scalar], r: i64) -> Vec<Scalar> {
    let rs = Scalar::int(r);
    let d = p.len() - 1;
    let mut q = vec![Scalar::zero(); d];
    let mut carry = Scalar::zero();
    for k in (0..d).rev() {
        carry = &p[k + 1] + &(&carry * &rs);
        q[k] = carry.clone();
    }
    q
}

/// Weights of a finite root decomposition with Cartan data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDecomposition {
    /// Weights, including zero, sorted.
    pub roots: Vec<Vector>,
    /// Basis of each weight space; the zero weight space uses the Cartan basis.
    pub spaces: Vec<Vec<Vector>>,
    /// `t` for each weight in Cartan coordinates.
    pub t: Vec<Vector>,
    pub isotropic: Vec<bool>,
}

impl RootDecomposition {
    pub fn index_of(&self, w: &[Scalar]) -> Option<usize> {
        self.roots.iter().position(|r| r.as_slice() == w)
    }

    pub fn nonisotropic_indices(&self) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&k| !self.isotropic[k])
            .collect()
    }

    pub fn dim_of(&self, w: &[Scalar]) -> usize {
        self.index_of(w).map(|k| self.spaces[k].len()).unwrap_or(0)
    }
}

/// Root presentation for a finite set of nonzero weights (zero is added), in coordinates of
/// a basis of their span chosen greedily among the weights. Returns the
/// presentation and the matrix taking coordinates back to weights.
pub fn presentation_from_weights(
    weights: &[Vector],
    h_gram: &Matrix,
) -> Result<(GrrsPresentation, Matrix), LieError> {
    let l = h_gram.rows();
    let ginv = h_gram
        .inverse()
        .map_err(|_| LieError::NoDualBasis("Cartan form is degenerate".into()))?;
    let mut sorted = weights.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut basis: Vec<Vector> = Vec::new();
    let mut span = Subspace::new(l);
    for w in &sorted {
        if span.insert(w) {
            basis.push(w.clone());
        }
    }
    let p = basis.len();
    let from_pres = Matrix::from_rows(&basis, l).transpose();
    let coords = |w: &Vector| -> Vector { solve_linear(&from_pres, w).expect("in the span") };
    let mut gram = Matrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            gram.set(i, j, ginv.bilinear(&basis[i], &basis[j]));
        }
    }
    let iso: Vec<Vector> = sorted
        .iter()
        .filter(|w| ginv.bilinear(w, w).is_zero())
        .map(coords)
        .collect();
    let embed = lattice_basis(&iso, p);
    let nu = embed.len();
    let emat = Matrix::from_rows(&embed, p).transpose();
    let mut families = vec![(zero_vec(p), CosetUnion::points(nu, vec![vec![0; nu]]))];
    for w in &sorted {
        let x = coords(w);
        if ginv.bilinear(w, w).is_zero() {
            let v = solve_linear(&emat, &x).expect("isotropic root in its lattice");
            let lam: Vec<i64> = v
                .iter()
                .map(|s| s.to_i64().expect("integral coordinates"))
                .collect();
            families.push((zero_vec(p), CosetUnion::points(nu, vec![lam])));
        } else {
            families.push((x, CosetUnion::points(nu, vec![vec![0; nu]])));
        }
    }
    Ok((GrrsPresentation::new(gram, embed, families)?, from_pres))
}

/// Basis of the group generated by rational vectors.
fn lattice_basis(vs: &[Vector], dim: usize) -> Vec<Vector> {
    if vs.is_empty() {
        return Vec::new();
    }
    let rows: Vec<Vec<Rational>> = vs
        .iter()
        .map(|v| {
            v.iter()
                .map(|s| s.as_rational().expect("rational").clone())
                .collect()
        })
        .collect();
    let (ints, den) = clear_denominators(&rows, dim);
    let (h, _) = hermite_normal_form(&ints);
    let den = Scalar::Rat(Rational::from_integer(den));
    h.row_vecs()
        .into_iter()
        .filter(|r| r.iter().any(|x| *x != 0))
        .map(|r| {
            r.into_iter()
                .map(|x| Scalar::int(x).div(&den).expect("nonzero"))
                .collect()
        })
        .collect()
}

/// An algebra slice with Cartan data and a root presentation, shared by
/// finite algebras and affinization windows.
#[derive(Debug, Clone)]
pub struct GrlaHandle {
    pub window: GradedWindow,
    pub presentation: GrrsPresentation,
    /// Columns are the weights of the presentation basis vectors.
    pub from_pres: Matrix,
}

impl GrlaHandle {
    pub fn weight_of(&self, x: &[Scalar]) -> Vector {
        self.from_pres.mul_vec(x)
    }

    /// Presentation coordinates of a weight in the span of the roots.
    pub fn pres_coords(&self, w: &[Scalar]) -> Option<Vector> {
        let x = solve_linear(&self.from_pres, w)?;
        (self.from_pres.mul_vec(&x) == w).then_some(x)
    }

    /// Window indices of the weight space of a presentation vector.
    pub fn root_space(&self, x: &[Scalar]) -> Vec<usize> {
        let w = self.weight_of(x);
        (0..self.window.dim())
            .filter(|&i| *self.window.weight(i) == w)
            .collect()
    }

    /// Window vector `t_x`.
    pub fn t_vector(&self, x: &[Scalar]) -> Vector {
        let t = self
            .window
            .t_of(&self.weight_of(x))
            .expect("nondegenerate Cartan form");
        self.window.h_vector(&t)
    }

    /// Presentation root of each window basis element (`None` for weight zero or off the span).
    fn basis_roots(&self) -> Vec<Option<Vector>> {
        (0..self.window.dim())
            .map(|i| {
                let w = self.window.weight(i);
                if is_zero_vec(w) {
                    None
                } else {
                    self.pres_coords(w)
                }
            })
            .collect()
    }
}

/// Per-component data of the intrinsic decomposition, as window vectors.
#[derive(Debug, Clone)]
pub struct PieceSummary {
    pub root_type: RootType,
    pub cartan_roots: Vec<Vector>,
    pub cartan_null: Vec<Vector>,
    pub d: Vec<Vector>,
    /// Basis of the piece: Cartan part, then root vectors in window order.
    pub basis: Vec<Vector>,
    /// Basis of the core of the piece (in-window closure).
    pub core: Vec<Vector>,
    /// the derivation dimension and the count predicted from the core's Cartan part.
    pub dim_derivations: usize,
    pub dim_derivations_expected: i64,
}

#[derive(Debug, Clone)]
pub struct IntrinsicDecomposition {
    pub pieces: Vec<PieceSummary>,
    pub w: Vec<Vector>,
    pub extra_space: Vec<Vector>,
    pub roots: Decomposition,
    pub checks: Report,
}

impl IntrinsicDecomposition {
    pub fn k(&self) -> usize {
        self.pieces.len()
    }
}

fn span_dim(n: usize, vs: &[Vector]) -> usize {
    Subspace::spanned_by(n, vs).dim()
}

/// Splits the Cartan subalgebra and the algebra along the components of its
/// root system, then checks the structural relations on available brackets.
pub fn intrinsic_decomposition(
    hd: &GrlaHandle,
    opts: &CheckOptions,
) -> Result<IntrinsicDecomposition, LieError> {
    let win = &hd.window;
    let n = win.dim();
    let pres = &hd.presentation;
    let l = win.cartan_rank();
    if win.cartan().len() != l {
        return Err(LieError::Malformed("window lacks the Cartan basis".into()));
    }
    let h_gram = win.h_gram();
    let dec = pres.decompose(opts)?;
    let t_cart = |x: &[Scalar]| -> Vector {
        win.t_of(&hd.weight_of(x))
            .expect("nondegenerate Cartan form")
    };

    // Cartan pieces in Cartan coordinates
    let mut cartan_roots: Vec<Vec<Vector>> = Vec::new();
    let mut cartan_null: Vec<Vec<Vector>> = Vec::new();
    for c in &dec.components {
        let mut s = Subspace::new(l);
        for &cl in &c.quotient.classes {
            let b = &pres.families()[cl].base;
            let dot = vec_sub(b, &pres.project_null(b)?);
            s.insert(&t_cart(&dot));
        }
        cartan_roots.push(s.basis().to_vec());
        let mut s0 = Subspace::new(l);
        for v in c.null_support.zspan().basis() {
            s0.insert(&t_cart(&pres.embed_vec(v)));
        }
        cartan_null.push(s0.basis().to_vec());
    }
    let all_cartan_roots: Vec<Vector> = cartan_roots.iter().flatten().cloned().collect();
    // B component-first, so each H0_i has a sub-basis when possible
    let mut b_space = Subspace::new(l);
    for hs in &cartan_null {
        for h in hs {
            b_space.insert(h);
        }
    }
    let b: Vec<Vector> = b_space.basis().to_vec();
    let m = b.len();
    // d'_j: (d'_j, H_dot) = 0 and (h_i, d'_j) = delta_ij, free variables zero
    let mut rows: Vec<Vector> = Vec::new();
    for v in all_cartan_roots.iter().chain(b.iter()) {
        rows.push(h_gram.mul_vec(v));
    }
    let a = Matrix::from_rows(&rows, l);
    let mut d_prime = Vec::new();
    for j in 0..m {
        let mut rhs = zero_vec(rows.len());
        rhs[all_cartan_roots.len() + j] = Scalar::one();
        let sol = solve_linear(&a, &rhs).ok_or_else(|| {
            LieError::NoDualBasis(format!("no element dual to {}", fmt_vec(&b[j])))
        })?;
        d_prime.push(sol);
    }
    let half = Scalar::frac(1, 2);
    let mut d = Vec::new();
    for j in 0..m {
        let mut dj = d_prime[j].clone();
        for (bb, hb) in b.iter().enumerate() {
            let c = h_gram.bilinear(&d_prime[j], &d_prime[bb]);
            if !c.is_zero() {
                dj = vec_sub(&dj, &vec_scale(&(&half * &c), hb));
            }
        }
        d.push(dj);
    }
    let mut sum_basis: Vec<Vector> = all_cartan_roots.clone();
    sum_basis.extend(b.iter().cloned());
    sum_basis.extend(d.iter().cloned());
    let sum_rows: Vec<Vector> = sum_basis.iter().map(|v| h_gram.mul_vec(v)).collect();
    let w_cart = if sum_rows.is_empty() {
        (0..l).map(|i| crate::linalg::unit_vec(l, i)).collect()
    } else {
        kernel_basis(&Matrix::from_rows(&sum_rows, l))
    };

    let to_win = |v: &Vector| win.h_vector(v);
    let roots = hd.basis_roots();
    let mut pieces = Vec::new();
    let mut checks = Report::new();
    for (i, c) in dec.components.iter().enumerate() {
        let h_null_space = Subspace::spanned_by(l, &cartan_null[i]);
        let derivations: Vec<Vector> = (0..m)
            .filter(|&j| h_null_space.contains(&b[j]))
            .map(|j| d[j].clone())
            .collect();
        let mut basis: Vec<Vector> = Vec::new();
        let mut h_i = Subspace::new(l);
        for v in cartan_roots[i]
            .iter()
            .chain(cartan_null[i].iter())
            .chain(derivations.iter())
        {
            if h_i.insert(v) {
                basis.push(to_win(v));
            }
        }
        let mut core_gens = Vec::new();
        for k in 0..n {
            if let Some(x) = &roots[k] {
                if c.closed.member(x)? {
                    basis.push(win.unit(k));
                    if !pres.form(x, x).is_zero() {
                        core_gens.push(win.unit(k));
                    }
                }
            }
        }
        let (core, _) = win.closure(&core_gens);
        // Sum of [G_a, G_-a] over nonisotropic roots of the component
        let mut coroots = Subspace::new(n);
        for (k, rk) in roots.iter().enumerate() {
            let Some(x) = rk else { continue };
            if pres.form(x, x).is_zero() || !c.piece.member(x)? {
                continue;
            }
            let neg: Vector = x.iter().map(|s| -s).collect();
            for j in hd.root_space(&neg) {
                if let Ok(v) = win.bracket(&win.unit(k), &win.unit(j)) {
                    coroots.insert(&v);
                }
            }
        }
        let formula = coroots.dim() as i64 - c.root_type.rank as i64;
        pieces.push(PieceSummary {
            root_type: c.root_type,
            cartan_roots: cartan_roots[i].iter().map(to_win).collect(),
            cartan_null: cartan_null[i].iter().map(to_win).collect(),
            d: derivations.iter().map(to_win).collect(),
            basis,
            core,
            dim_derivations: derivations.len(),
            dim_derivations_expected: formula,
        });
    }
    let w: Vec<Vector> = w_cart.iter().map(to_win).collect();
    let mut extra_space = Vec::new();
    for (k, rk) in roots.iter().enumerate() {
        if let Some(x) = rk {
            if let Some(r) = pres.root_ref(x) {
                if pres.is_isotropic_class(r.class) && dec.outside_closures.contains(&r.null_coords)
                {
                    extra_space.push(win.unit(k));
                }
            }
        }
    }

    // Cartan decomposition H = Hdot + H0 + D + W
    let total = span_dim(l, &[sum_basis.clone(), w_cart.clone()].concat());
    checks.push(
        "Cartan split",
        total == l && sum_basis.len() + w_cart.len() == l,
        format!(
            "{} + {} + {} + {} = {}",
            all_cartan_roots.len(),
            m,
            m,
            w_cart.len(),
            l
        ),
    );
    // D_i count
    let bad: Vec<String> = pieces
        .iter()
        .enumerate()
        .filter(|(_, p)| p.dim_derivations as i64 != p.dim_derivations_expected)
        .map(|(i, p)| {
            format!(
                "piece {}: dim D = {} but formula gives {}",
                i + 1,
                p.dim_derivations,
                p.dim_derivations_expected
            )
        })
        .collect();
    checks.push(
        "dim D",
        bad.is_empty(),
        if bad.is_empty() {
            "dim D_i matches the coroot count minus the rank".to_string()
        } else {
            bad.join("; ")
        },
    );
    // closure of each piece
    let mut bad = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        let span = Subspace::spanned_by(n, &p.basis);
        'outer: for x in &p.basis {
            for y in &p.basis {
                if let Ok(v) = win.bracket(x, y) {
                    if !span.contains(&v) {
                        bad.push(format!(
                            "piece {} is not closed: [{}, {}]",
                            i + 1,
                            win.fmt_element(x),
                            win.fmt_element(y)
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    checks.push(
        "subalgebras",
        bad.is_empty(),
        if bad.is_empty() {
            "each piece is closed under in-window brackets".to_string()
        } else {
            bad.join("; ")
        },
    );
    // cores commute
    let mut bad = None;
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            for x in &pieces[i].core {
                for y in &pieces[j].core {
                    if let Ok(v) = win.bracket(x, y) {
                        if !is_zero_vec(&v) {
                            bad.get_or_insert_with(|| {
                                format!("[{}, {}] != 0", win.fmt_element(x), win.fmt_element(y))
                            });
                        }
                    }
                }
            }
        }
    }
    checks.push(
        "cores commute",
        bad.is_none(),
        bad.unwrap_or_else(|| "distinct piece cores commute".into()),
    );
    // W centralizes the pieces
    let mut bad = None;
    for x in &w {
        for p in &pieces {
            for y in &p.basis {
                if let Ok(v) = win.bracket(x, y) {
                    if !is_zero_vec(&v) {
                        bad.get_or_insert_with(|| {
                            format!("[{}, {}] != 0", win.fmt_element(x), win.fmt_element(y))
                        });
                    }
                }
            }
        }
    }
    checks.push(
        "W central",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("W has dimension {}", w.len())),
    );
    // isolated root spaces centralize the core
    let noniso: Vec<usize> = (0..n)
        .filter(|&k| {
            roots[k]
                .as_ref()
                .map(|x| !pres.form(x, x).is_zero())
                .unwrap_or(false)
        })
        .collect();
    let mut bad = None;
    for (k, rk) in roots.iter().enumerate() {
        let Some(x) = rk else { continue };
        let Some(r) = pres.root_ref(x) else { continue };
        if !(pres.is_isotropic_class(r.class) && dec.isolated.contains(&r.null_coords)) {
            continue;
        }
        for &j in &noniso {
            if let Ok(v) = win.bracket(&win.unit(k), &win.unit(j)) {
                if !is_zero_vec(&v) {
                    bad.get_or_insert_with(|| format!("[{}, {}] != 0", win.label(k), win.label(j)));
                }
            }
        }
    }
    checks.push(
        "isolated central",
        bad.is_none(),
        bad.unwrap_or_else(|| "isolated root spaces centralize the core".into()),
    );
    // coroots versus the core's Cartan part
    let mut coroots = Subspace::new(n);
    for &k in &noniso {
        let x = roots[k].as_ref().expect("root");
        let neg: Vector = x.iter().map(|s| -s).collect();
        for j in hd.root_space(&neg) {
            if let Ok(v) = win.bracket(&win.unit(k), &win.unit(j)) {
                coroots.insert(&v);
            }
        }
    }
    let hcore: Vec<Vector> = all_cartan_roots
        .iter()
        .chain(b.iter())
        .map(to_win)
        .collect();
    let hcore_space = Subspace::spanned_by(n, &hcore);
    let ok = hcore_space.same_as(&coroots);
    checks.push(
        "coroots",
        ok,
        if ok {
            format!(
                "Hdot + H0 has dimension {} and equals the span of [G_a, G_-a]",
                hcore_space.dim()
            )
        } else {
            format!(
                "Hdot + H0 has dimension {}, coroots span {}",
                hcore_space.dim(),
                coroots.dim()
            )
        },
    );
    // bracket containment between distinct pieces
    let bad = cross_bracket_violation(hd, &dec, &pieces, &cartan_null)?;
    checks.push(
        "cross brackets",
        bad.is_none(),
        bad.unwrap_or_else(|| "brackets between pieces stay in the predicted span".into()),
    );
    // simplicity for nullity zero
    if pres.null_rank() == 0 {
        for (i, p) in pieces.iter().enumerate() {
            let verdict = simple_verdict(win, &p.basis);
            checks.push(
                "simple",
                verdict.is_ok(),
                format!("piece {}: {}", i + 1, verdict.unwrap_or_else(|e| e)),
            );
        }
    }
    Ok(IntrinsicDecomposition {
        pieces,
        w,
        extra_space,
        roots: dec,
        checks,
    })
}

/// Checks that the bracket of two pieces lies in their common Cartan part,
/// plus the root spaces of both closures off the radical, plus `[G_a, G_b]`
/// for nonisotropic `a` of one piece and nonzero isotropic `b` of the other
/// closure.
fn cross_bracket_violation(
    hd: &GrlaHandle,
    dec: &Decomposition,
    pieces: &[PieceSummary],
    cartan_null: &[Vec<Vector>],
) -> Result<Option<String>, LieError> {
    let win = &hd.window;
    let n = win.dim();
    let pres = &hd.presentation;
    let roots = hd.basis_roots();
    let l = win.cartan_rank();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let mut target = Subspace::new(n);
            let hi = Subspace::spanned_by(l, &cartan_null[i]);
            let hj = Subspace::spanned_by(l, &cartan_null[j]);
            for v in hi.intersect(&hj).basis() {
                target.insert(&win.h_vector(v));
            }
            let (ci, cj) = (&dec.components[i], &dec.components[j]);
            for (k, rk) in roots.iter().enumerate() {
                let Some(x) = rk else { continue };
                if (ci.closed.member(x)? || cj.closed.member(x)?)
                    && !is_zero_vec(&pres.project_null(x)?)
                {
                    target.insert(&win.unit(k));
                }
            }
            for (a_comp, b_comp) in [(ci, cj), (cj, ci)] {
                for (k, rk) in roots.iter().enumerate() {
                    let Some(x) = rk else { continue };
                    if pres.form(x, x).is_zero() || !a_comp.piece.member(x)? {
                        continue;
                    }
                    for (q, rq) in roots.iter().enumerate() {
                        let Some(y) = rq else { continue };
                        if !pres.form(y, y).is_zero() || !b_comp.closed.member(y)? {
                            continue;
                        }
                        if let Ok(v) = win.bracket(&win.unit(k), &win.unit(q)) {
                            target.insert(&v);
                        }
                    }
                }
            }
            for x in &pieces[i].basis {
                for y in &pieces[j].basis {
                    if let Ok(v) = win.bracket(x, y) {
                        if !target.contains(&v) {
                            return Ok(Some(format!(
                                "[{}, {}] = {} escapes",
                                win.fmt_element(x),
                                win.fmt_element(y),
                                win.fmt_element(&v)
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Decides simplicity of the subalgebra spanned by `basis` (Cartan part
/// first, then root vectors), which must be closed and untruncated.
fn simple_verdict(win: &GradedWindow, basis: &[Vector]) -> Result<String, String> {
    if basis.len() > SIMPLICITY_DIM_CAP {
        return Err(format!(
            "dimension {} exceeds the cap {}",
            basis.len(),
            SIMPLICITY_DIM_CAP
        ));
    }
    let labels: Vec<String> = (0..basis.len()).map(|k| format!("b{}", k)).collect();
    let sub = win.sub_window(basis, labels).map_err(|e| e.to_string())?;
    let all: Vec<Vector> = (0..sub.dim()).map(|k| sub.unit(k)).collect();
    if !sub.centralizer(&all, &all).is_empty() {
        return Err("nonzero center".into());
    }
    let spaces = sub.weight_spaces();
    let mut root_vectors = Vec::new();
    for ((w, _), idx) in &spaces {
        if is_zero_vec(w) {
            continue;
        }
        if idx.len() != 1 {
            return Err(format!(
                "root space of {} has dimension {}",
                fmt_vec(w),
                idx.len()
            ));
        }
        root_vectors.push(idx[0]);
    }
    if root_vectors.is_empty() {
        return Err("abelian".into());
    }
    for &k in &root_vectors {
        let (ideal, trunc) = sub.ideal_closure(&[sub.unit(k)]);
        if trunc || ideal.dim() != sub.dim() {
            return Err(format!(
                "the ideal generated by a root vector has dimension {}",
                ideal.dim()
            ));
        }
    }
    Ok(format!("simple of dimension {}", sub.dim()))
}

impl fmt::Display for IntrinsicDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pieces: {}", self.k())?;
        for (i, p) in self.pieces.iter().enumerate() {
            writeln!(
                f,
                "piece {}: type {} dim Hdot {} dim H0 {} dim D {} basis size {} core size {}",
                i + 1,
                p.root_type,
                p.cartan_roots.len(),
                p.cartan_null.len(),
                p.dim_derivations,
                p.basis.len(),
                p.core.len()
            )?;
        }
        writeln!(f, "dim W: {}", self.w.len())?;
        writeln!(f, "dim I: {}", self.extra_space.len())?;
        write!(f, "{}", self.checks)
    }
}
