//! Weight-graded slices of Lie algebras.
//!
//! A [`GradedWindow`] is a finite basis of homogeneous elements together with
//! their brackets. Brackets that would leave the slice are recorded as
//! missing and reported as truncation, never silently dropped. A finite
//! dimensional algebra is a window with no truncation.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactfield::Scalar;
use crate::linalg::{
    fmt_vec, is_zero_vec, kernel_basis, vec_add, vec_scale, zero_vec, Matrix, Subspace, Vector,
};

/// A bracket left the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("bracket leaves the window")]
pub struct Truncated;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("window data is inconsistent: {0}")]
    Malformed(String),
    #[error("subspace is not closed under brackets: {0}")]
    NotClosed(String),
    #[error("subspace is not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("vector {0} is not homogeneous")]
    NotHomogeneous(String),
}

/// Raw data for a window.
#[derive(Debug, Clone)]
pub struct WindowParts {
    pub labels: Vec<String>,
    /// Weight of each basis element: values on the ambient Cartan basis.
    pub weights: Vec<Vector>,
    /// Loop degree of each basis element (0 when there is none).
    pub grades: Vec<i64>,
    /// Row-major `n x n` table of brackets of basis elements; `None` leaves the window.
    pub table: Vec<Option<Vec<(usize, Scalar)>>>,
    pub form: Matrix,
    /// Gram matrix of the ambient Cartan basis.
    pub h_gram: Matrix,
    /// Window indices of the ambient Cartan basis, when present.
    pub cartan: Vec<usize>,
    pub radius: Option<i64>,
}

#[derive(Debug, Clone)]
pub struct GradedWindow {
    p: WindowParts,
    h_gram_inv: Option<Matrix>,
}

/// Sparse form of a vector.
fn nonzeros(v: &[Scalar]) -> impl Iterator<Item = (usize, &Scalar)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero())
}

impl GradedWindow {
    pub fn new(p: WindowParts) -> Result<Self, WindowError> {
        let n = p.labels.len();
        let bad = |s: &str| Err(WindowError::Malformed(s.to_string()));
        if p.weights.len() != n || p.grades.len() != n || p.table.len() != n * n {
            return bad("basis data lengths differ");
        }
        if p.form.rows() != n || p.form.cols() != n {
            return bad("form has the wrong shape");
        }
        let l = p.h_gram.rows();
        if p.weights.iter().any(|w| w.len() != l) {
            return bad("weight length differs from the Cartan rank");
        }
        if p.cartan.iter().any(|&c| c >= n) {
            return bad("Cartan index out of range");
        }
        let h_gram_inv = p.h_gram.inverse().ok();
        Ok(GradedWindow { p, h_gram_inv })
    }

    pub fn parts(&self) -> &WindowParts {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.p.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.p.labels
    }

    pub fn weight(&self, i: usize) -> &Vector {
        &self.p.weights[i]
    }

    pub fn grade(&self, i: usize) -> i64 {
        self.p.grades[i]
    }

    pub fn radius(&self) -> Option<i64> {
        self.p.radius
    }

    pub fn cartan(&self) -> &[usize] {
        &self.p.cartan
    }

    pub fn cartan_rank(&self) -> usize {
        self.p.h_gram.rows()
    }

    pub fn h_gram(&self) -> &Matrix {
        &self.p.h_gram
    }

    pub fn form_matrix(&self) -> &Matrix {
        &self.p.form
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> Option<&[(usize, Scalar)]> {
        self.p.table[i * self.dim() + j].as_deref()
    }

    pub fn unit(&self, i: usize) -> Vector {
        let mut v = zero_vec(self.dim());
        v[i] = Scalar::one();
        v
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, Truncated> {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, a) in nonzeros(x) {
            for (j, b) in nonzeros(y) {
                match &self.p.table[i * n + j] {
                    None => return Err(Truncated),
                    Some(terms) => {
                        if terms.is_empty() {
                            continue;
                        }
                        let ab = a * b;
                        for (k, c) in terms {
                            out[*k] = &out[*k] + &(&ab * c);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn form(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, a) in nonzeros(x) {
            for (j, b) in nonzeros(y) {
                let f = self.p.form.get(i, j);
                if !f.is_zero() {
                    acc = &acc + &(&(a * b) * f);
                }
            }
        }
        acc
    }

    /// `t_w` in Cartan coordinates: the element representing the weight via the form.
    pub fn t_of(&self, w: &[Scalar]) -> Option<Vector> {
        self.h_gram_inv.as_ref().map(|g| g.mul_vec(w))
    }

    /// Form induced on weights.
    pub fn weight_form(&self, a: &[Scalar], b: &[Scalar]) -> Option<Scalar> {
        self.h_gram_inv.as_ref().map(|g| g.bilinear(a, b))
    }

    /// Window vector of a Cartan element given in Cartan coordinates.
    pub fn h_vector(&self, coords: &[Scalar]) -> Vector {
        let mut v = zero_vec(self.dim());
        for (c, &idx) in coords.iter().zip(&self.p.cartan) {
            v[idx] = c.clone();
        }
        v
    }

    /// Basis indices grouped by weight and grade.
    pub fn weight_spaces(&self) -> BTreeMap<(Vector, i64), Vec<usize>> {
        let mut m: BTreeMap<(Vector, i64), Vec<usize>> = BTreeMap::new();
        for i in 0..self.dim() {
            m.entry((self.p.weights[i].clone(), self.p.grades[i]))
                .or_default()
                .push(i);
        }
        m
    }

    /// Weight and grade of a nonzero homogeneous vector.
    pub fn degree_of(&self, v: &[Scalar]) -> Option<(Vector, i64)> {
        let mut it = nonzeros(v).map(|(i, _)| (&self.p.weights[i], self.p.grades[i]));
        let first = it.next()?;
        if it.all(|w| w == first) {
            Some((first.0.clone(), first.1))
        } else {
            None
        }
    }

    pub fn is_isotropic_weight(&self, w: &[Scalar]) -> bool {
        self.weight_form(w, w).map(|x| x.is_zero()).unwrap_or(true)
    }

    /// First antisymmetry violation.
    pub fn check_antisymmetry(&self) -> Option<String> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                if let (Ok(a), Ok(b)) = (
                    self.bracket(&self.unit(i), &self.unit(j)),
                    self.bracket(&self.unit(j), &self.unit(i)),
                ) {
                    if !is_zero_vec(&vec_add(&a, &b)) {
                        return Some(format!(
                            "[{0}, {1}] + [{1}, {0}] != 0",
                            self.label(i),
                            self.label(j)
                        ));
                    }
                }
            }
        }
        None
    }

    /// First Jacobi violation among triples whose brackets stay in the window.
    pub fn check_jacobi(&self) -> Option<String> {
        let n = self.dim();
        let units: Vec<Vector> = (0..n).map(|i| self.unit(i)).collect();
        let mut pair: Vec<Option<Vector>> = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                pair.push(self.bracket(&units[i], &units[j]).ok());
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let terms = [(i, j * n + k), (j, k * n + i), (k, i * n + j)];
                    let mut sum = zero_vec(n);
                    let mut ok = true;
                    for (a, bc) in terms {
                        let Some(inner) = &pair[bc] else {
                            ok = false;
                            break;
                        };
                        match self.bracket(&units[a], inner) {
                            Ok(v) => sum = vec_add(&sum, &v),
                            Err(_) => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok && !is_zero_vec(&sum) {
                        return Some(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.label(i),
                            self.label(j),
                            self.label(k)
                        ));
                    }
                }
            }
        }
        None
    }

    /// First violation of `([x, y], z) = (x, [y, z])` on in-window basis triples.
    pub fn check_invariance(&self) -> Option<String> {
        let n = self.dim();
        let units: Vec<Vector> = (0..n).map(|i| self.unit(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let Ok(xy) = self.bracket(&units[i], &units[j]) else {
                    continue;
                };
                for k in 0..n {
                    let Ok(yz) = self.bracket(&units[j], &units[k]) else {
                        continue;
                    };
                    if self.form(&xy, &units[k]) != self.form(&units[i], &yz) {
                        return Some(format!(
                            "form not invariant on ({}, {}, {})",
                            self.label(i),
                            self.label(j),
                            self.label(k)
                        ));
                    }
                }
            }
        }
        None
    }

    /// First bracket whose result is not of the summed weight.
    pub fn check_grading(&self) -> Option<String> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let Some(terms) = self.basis_bracket(i, j) else {
                    continue;
                };
                let w = vec_add(&self.p.weights[i], &self.p.weights[j]);
                let g = self.p.grades[i] + self.p.grades[j];
                for (k, c) in terms {
                    if !c.is_zero() && (self.p.weights[*k] != w || self.p.grades[*k] != g) {
                        return Some(format!(
                            "[{}, {}] has a component {} of the wrong weight",
                            self.label(i),
                            self.label(j),
                            self.label(*k)
                        ));
                    }
                }
            }
        }
        None
    }

    /// First pair of weight spaces that pair nontrivially without opposite weights.
    pub fn check_form_grading(&self) -> Option<String> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let opposite = vec_add(&self.p.weights[i], &self.p.weights[j])
                    .iter()
                    .all(Scalar::is_zero)
                    && self.p.grades[i] + self.p.grades[j] == 0;
                if !opposite && !self.p.form.get(i, j).is_zero() {
                    return Some(format!(
                        "({}, {}) != 0 but weights are not opposite",
                        self.label(i),
                        self.label(j)
                    ));
                }
            }
        }
        None
    }

    /// Subalgebra generated by homogeneous vectors, using in-window brackets;
    /// the flag reports whether some bracket was truncated.
    pub fn closure(&self, gens: &[Vector]) -> (Vec<Vector>, bool) {
        let mut spaces: BTreeMap<(Vector, i64), Subspace> = BTreeMap::new();
        let mut basis: Vec<Vector> = Vec::new();
        let mut queue: Vec<Vector> = Vec::new();
        let mut truncated = false;
        let add = |v: Vector,
                   spaces: &mut BTreeMap<(Vector, i64), Subspace>,
                   basis: &mut Vec<Vector>,
                   queue: &mut Vec<Vector>| {
            if let Some(key) = self.degree_of(&v) {
                let s = spaces
                    .entry(key)
                    .or_insert_with(|| Subspace::new(self.dim()));
                if s.insert(&v) {
                    basis.push(v.clone());
                    queue.push(v);
                }
            }
        };
        for g in gens {
            add(g.clone(), &mut spaces, &mut basis, &mut queue);
        }
        while let Some(v) = queue.pop() {
            let current = basis.clone();
            for w in &current {
                match self.bracket(&v, w) {
                    Ok(b) => add(b, &mut spaces, &mut basis, &mut queue),
                    Err(_) => truncated = true,
                }
            }
        }
        (normalize_graded(self, &spaces), truncated)
    }

    /// Ideal generated by vectors: closure under brackets with every basis
    /// element. The flag reports truncation.
    pub fn ideal_closure(&self, gens: &[Vector]) -> (Subspace, bool) {
        let mut span = Subspace::new(self.dim());
        let mut queue: Vec<Vector> = Vec::new();
        let mut truncated = false;
        for g in gens {
            if span.insert(g) {
                queue.push(g.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for j in 0..self.dim() {
                match self.bracket(&self.unit(j), &v) {
                    Ok(b) => {
                        if span.insert(&b) {
                            queue.push(b);
                        }
                    }
                    Err(_) => truncated = true,
                }
            }
        }
        (span, truncated)
    }

    /// Elements of `within` (homogeneous vectors) commuting with every vector
    /// of `with`. Basis vectors with a truncated bracket are left out.
    pub fn centralizer(&self, within: &[Vector], with: &[Vector]) -> Vec<Vector> {
        let mut groups: BTreeMap<(Vector, i64), Vec<Vector>> = BTreeMap::new();
        for v in within {
            if let Some(k) = self.degree_of(v) {
                groups.entry(k).or_default().push(v.clone());
            }
        }
        let mut out = Vec::new();
        for (_, vs) in groups {
            let decidable: Vec<Vector> = vs
                .into_iter()
                .filter(|v| with.iter().all(|s| self.bracket(v, s).is_ok()))
                .collect();
            if decidable.is_empty() {
                continue;
            }
            // rows: one per (s, coordinate); columns: coefficients of the decidable vectors
            let images: Vec<Vec<Vector>> = decidable
                .iter()
                .map(|v| {
                    with.iter()
                        .map(|s| self.bracket(v, s).expect("decidable"))
                        .collect()
                })
                .collect();
            let rows = with.len() * self.dim();
            let mut m = Matrix::zeros(rows, decidable.len());
            for (col, imgs) in images.iter().enumerate() {
                for (si, img) in imgs.iter().enumerate() {
                    for (k, x) in img.iter().enumerate() {
                        if !x.is_zero() {
                            m.set(si * self.dim() + k, col, x.clone());
                        }
                    }
                }
            }
            for coeffs in kernel_basis(&m) {
                let mut v = zero_vec(self.dim());
                for (c, b) in coeffs.iter().zip(&decidable) {
                    if !c.is_zero() {
                        v = vec_add(&v, &vec_scale(c, b));
                    }
                }
                out.push(v);
            }
        }
        out
    }

    /// Window spanned by homogeneous vectors; brackets expressed in that basis.
    pub fn sub_window(
        &self,
        basis: &[Vector],
        labels: Vec<String>,
    ) -> Result<GradedWindow, WindowError> {
        let n = basis.len();
        let mut keys = Vec::with_capacity(n);
        for v in basis {
            keys.push(
                self.degree_of(v)
                    .ok_or_else(|| WindowError::NotHomogeneous(fmt_vec(v)))?,
            );
        }
        let span = Subspace::spanned_by(self.dim(), basis);
        if span.dim() != n {
            return Err(WindowError::Malformed(
                "sub-window basis is dependent".into(),
            ));
        }
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                match self.bracket(&basis[i], &basis[j]) {
                    Err(_) => table.push(None),
                    Ok(v) => {
                        let coords = span.coordinates(&v).ok_or_else(|| {
                            WindowError::NotClosed(format!(
                                "[{}, {}] = {}",
                                labels[i],
                                labels[j],
                                fmt_vec(&v)
                            ))
                        })?;
                        table.push(Some(sparse(&coords)));
                    }
                }
            }
        }
        let mut form = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                form.set(i, j, self.form(&basis[i], &basis[j]));
            }
        }
        let cartan: Vec<usize> = self
            .p
            .cartan
            .iter()
            .filter_map(|&c| basis.iter().position(|b| *b == self.unit(c)))
            .collect();
        let cartan = if cartan.len() == self.p.cartan.len() {
            cartan
        } else {
            Vec::new()
        };
        GradedWindow::new(WindowParts {
            labels,
            weights: keys.iter().map(|k| k.0.clone()).collect(),
            grades: keys.iter().map(|k| k.1).collect(),
            table,
            form,
            h_gram: self.p.h_gram.clone(),
            cartan,
            radius: self.p.radius,
        })
    }

    /// Quotient by a graded ideal spanned by homogeneous vectors. The
    /// complement uses basis elements of this window; the induced form is
    /// kept only if the ideal lies in the radical of the form.
    pub fn quotient(&self, ideal: &[Vector]) -> Result<GradedWindow, WindowError> {
        let n = self.dim();
        for v in ideal {
            if self.degree_of(v).is_none() {
                return Err(WindowError::NotHomogeneous(fmt_vec(v)));
            }
            for j in 0..n {
                if let Ok(b) = self.bracket(v, &self.unit(j)) {
                    if !Subspace::spanned_by(n, ideal).contains(&b) {
                        return Err(WindowError::NotAnIdeal(format!(
                            "[{}, {}] leaves the ideal",
                            fmt_vec(v),
                            self.label(j)
                        )));
                    }
                }
            }
        }
        let ideal_space = Subspace::spanned_by(n, ideal);
        // complement: basis elements independent of the ideal
        let mut full = ideal_space.clone();
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..n {
            if full.insert(&self.unit(i)) {
                keep.push(i);
            }
        }
        // coordinates relative to [keep units..., ideal basis...]
        let mut gens: Vec<Vector> = keep.iter().map(|&i| self.unit(i)).collect();
        gens.extend(ideal_space.basis().iter().cloned());
        let all = Subspace::spanned_by(n, &gens);
        let m = keep.len();
        let project = |v: &Vector| -> Vector {
            let c = all.coordinates(v).expect("spans the window");
            c[..m].to_vec()
        };
        let mut table = Vec::with_capacity(m * m);
        for &i in &keep {
            for &j in &keep {
                table.push(self.basis_bracket(i, j).map(|_| {
                    let v = self
                        .bracket(&self.unit(i), &self.unit(j))
                        .expect("in window");
                    sparse(&project(&v))
                }));
            }
        }
        let in_radical = ideal
            .iter()
            .all(|v| (0..n).all(|j| self.form(v, &self.unit(j)).is_zero()));
        let mut form = Matrix::zeros(m, m);
        if in_radical {
            for (a, &i) in keep.iter().enumerate() {
                for (b, &j) in keep.iter().enumerate() {
                    form.set(a, b, self.p.form.get(i, j).clone());
                }
            }
        }
        let cartan: Vec<usize> = self
            .p
            .cartan
            .iter()
            .filter_map(|c| keep.iter().position(|k| k == c))
            .collect();
        let cartan = if cartan.len() == self.p.cartan.len() {
            cartan
        } else {
            Vec::new()
        };
        GradedWindow::new(WindowParts {
            labels: keep.iter().map(|&i| self.p.labels[i].clone()).collect(),
            weights: keep.iter().map(|&i| self.p.weights[i].clone()).collect(),
            grades: keep.iter().map(|&i| self.p.grades[i]).collect(),
            table,
            form,
            h_gram: self.p.h_gram.clone(),
            cartan,
            radius: self.p.radius,
        })
    }

    /// The same window cut down to grades in `[-r, r]`.
    pub fn restrict_radius(&self, r: i64) -> GradedWindow {
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&i| self.p.grades[i].abs() <= r)
            .collect();
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let mut table = Vec::with_capacity(keep.len() * keep.len());
        for &i in &keep {
            for &j in &keep {
                let entry = self.basis_bracket(i, j).and_then(|terms| {
                    let mut out = Vec::new();
                    for (k, c) in terms {
                        out.push((*pos.get(k)?, c.clone()));
                    }
                    Some(out)
                });
                table.push(entry);
            }
        }
        let m = keep.len();
        let mut form = Matrix::zeros(m, m);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                form.set(a, b, self.p.form.get(i, j).clone());
            }
        }
        let cartan: Vec<usize> = self
            .p
            .cartan
            .iter()
            .filter_map(|c| pos.get(c).copied())
            .collect();
        GradedWindow {
            p: WindowParts {
                labels: keep.iter().map(|&i| self.p.labels[i].clone()).collect(),
                weights: keep.iter().map(|&i| self.p.weights[i].clone()).collect(),
                grades: keep.iter().map(|&i| self.p.grades[i]).collect(),
                table,
                form,
                h_gram: self.p.h_gram.clone(),
                cartan,
                radius: Some(r),
            },
            h_gram_inv: self.h_gram_inv.clone(),
        }
    }

    /// Text rendering of a vector using the basis labels.
    pub fn fmt_element(&self, v: &[Scalar]) -> String {
        let mut parts = Vec::new();
        for (i, c) in nonzeros(v) {
            if c.is_one() {
                parts.push(self.label(i).to_string());
            } else if (-c).is_one() {
                parts.push(format!("-{}", self.label(i)));
            } else {
                parts.push(format!("({})*{}", c, self.label(i)));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

fn sparse(v: &[Scalar]) -> Vec<(usize, Scalar)> {
    nonzeros(v).map(|(i, c)| (i, c.clone())).collect()
}

/// Reduced echelon basis of each graded piece, in weight order.
fn normalize_graded(w: &GradedWindow, spaces: &BTreeMap<(Vector, i64), Subspace>) -> Vec<Vector> {
    let _ = w;
    spaces
        .values()
        .flat_map(|s| s.echelon().iter().cloned())
        .collect()
}

impl fmt::Display for GradedWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "window of dimension {}", self.dim())?;
        if let Some(r) = self.p.radius {
            write!(f, " (radius {})", r)?;
        }
        Ok(())
    }
}
