//! Exact linear algebra over [`Scalar`] and over the integers.

use std::fmt;

use thiserror::Error;

use crate::exactfield::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not symmetric (entry {0},{1})")]
    NotSymmetric(usize, usize),
    #[error("matrix has non-rational entries")]
    NotRational,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
}

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, v) in entries.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: &[Vector], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        Matrix::new(rows, cols, vals.iter().map(|&v| Scalar::int(v)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `x^T M y`.
    pub fn bilinear(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        dot(x, &self.mul_vec(y))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Reduced row echelon form and the pivot columns, pivoting on the first
    /// nonzero entry of each column.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a.get(r, c).inv().expect("nonzero pivot");
            for j in c..a.cols {
                let v = a.get(r, j) * &inv;
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in c..a.cols {
                    let t = a.get(r, j);
                    if !t.is_zero() {
                        let v = a.get(i, j) - &(&f * t);
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch(
                "inverse of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut a = self.clone();
        let n = self.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c) * &inv;
                for j in c..n {
                    let v = a.get(i, j) - &(&f * a.get(c, j));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Restriction `B^T M B` of a bilinear form to the span of the columns of `b`.
    pub fn congruence(&self, b: &Matrix) -> Matrix {
        b.transpose().mul(self).mul(b)
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(s: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| s * x).collect()
}

pub fn vec_neg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

pub fn zero_vec(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn int_vec(vals: &[i64]) -> Vector {
    vals.iter().map(|&v| Scalar::int(v)).collect()
}

/// Scales a nonzero vector so that its first nonzero entry is 1.
pub fn normalize_leading(v: &[Scalar]) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            vec_scale(&inv, v)
        }
    }
}

pub fn fmt_vec(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Basis of the null space `{v : M v = 0}`; one vector per free column of the
/// reduced echelon form, with that free coordinate set to 1.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    let (r, pivots) = m.rref();
    let mut out = Vec::new();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in 0..m.cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = zero_vec(m.cols);
        v[free] = Scalar::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, free);
        }
        out.push(v);
    }
    out
}

/// One solution of `A x = b` with free variables set to zero, if any exists.
pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Option<Vector> {
    assert_eq!(a.rows, b.len(), "solve_linear shape");
    let mut aug = Matrix::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, b[i].clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = zero_vec(a.cols);
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, a.cols).clone();
    }
    Some(x)
}

/// Result of a positive semidefiniteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdReport {
    pub psd: bool,
    /// A vector `v` with `v^T G v < 0` when the form is not semidefinite.
    pub witness: Option<Vector>,
}

/// Decides `v^T G v >= 0` for all `v` by symmetric elimination with exact
/// pivots. Short witnesses (`e_i` or `e_i -+ e_j`) are preferred when they exist.
pub fn is_positive_semidefinite(g: &Matrix) -> Result<PsdReport, LinalgError> {
    let n = g.rows;
    if g.rows != g.cols {
        return Err(LinalgError::DimensionMismatch("form must be square".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if g.get(i, j) != g.get(j, i) {
                return Err(LinalgError::NotSymmetric(i, j));
            }
        }
    }
    if !g.data.iter().all(Scalar::is_rational) {
        return Err(LinalgError::NotRational);
    }
    let neg = |s: &Scalar| s.signum() == Some(std::cmp::Ordering::Less);
    let (psd, ldl_witness) = ldl_decide(g);
    if psd {
        return Ok(PsdReport {
            psd: true,
            witness: None,
        });
    }
    for i in 0..n {
        if neg(g.get(i, i)) {
            return Ok(PsdReport {
                psd: false,
                witness: Some(unit_vec(n, i)),
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = unit_vec(n, i);
            v[j] = match g.get(i, j).signum() {
                Some(std::cmp::Ordering::Greater) => Scalar::int(-1),
                _ => Scalar::one(),
            };
            if neg(&g.bilinear(&v, &v)) {
                return Ok(PsdReport {
                    psd: false,
                    witness: Some(v),
                });
            }
        }
    }
    Ok(PsdReport {
        psd: false,
        witness: ldl_witness,
    })
}

fn ldl_decide(g: &Matrix) -> (bool, Option<Vector>) {
    let n = g.rows;
    let mut a = g.clone();
    let mut p = Matrix::identity(n);
    let mut active: Vec<usize> = (0..n).collect();
    loop {
        if let Some(pos) = active.iter().position(|&i| !a.get(i, i).is_zero()) {
            let i = active[pos];
            let piv = a.get(i, i).clone();
            if piv.signum() == Some(std::cmp::Ordering::Less) {
                return (false, Some(p.col(i)));
            }
            active.remove(pos);
            let inv = piv.inv().expect("nonzero");
            for &j in &active {
                let f = a.get(i, j) * &inv;
                if f.is_zero() {
                    continue;
                }
                // column/row j -= f * column/row i, and track the basis change
                for k in 0..n {
                    let v = a.get(k, j) - &(&f * a.get(k, i));
                    a.set(k, j, v);
                }
                for k in 0..n {
                    let v = a.get(j, k) - &(&f * a.get(i, k));
                    a.set(j, k, v);
                }
                for k in 0..n {
                    let v = p.get(k, j) - &(&f * p.get(k, i));
                    p.set(k, j, v);
                }
            }
            continue;
        }
        for (x, &i) in active.iter().enumerate() {
            for &j in &active[x + 1..] {
                let aij = a.get(i, j);
                if !aij.is_zero() {
                    let s = if aij.signum() == Some(std::cmp::Ordering::Greater) {
                        Scalar::int(-1)
                    } else {
                        Scalar::one()
                    };
                    let w = vec_add(&p.col(i), &vec_scale(&s, &p.col(j)));
                    return (false, Some(w));
                }
            }
        }
        return (true, None);
    }
}

/// A subspace kept in reduced echelon form, with coordinates relative to the
/// vectors it was built from.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    /// `rows[i] = sum_j combos[i][j] * generators[j]`
    combos: Vec<Vector>,
    generators: Vec<Vector>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            generators: Vec::new(),
        }
    }

    pub fn spanned_by(ambient: usize, vs: &[Vector]) -> Self {
        let mut s = Subspace::new(ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Independent generators, in insertion order.
    pub fn basis(&self) -> &[Vector] {
        &self.generators
    }

    /// Reduced echelon basis.
    pub fn echelon(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after eliminating against the echelon rows, and the
    /// coefficients (on echelon rows) that were subtracted.
    fn reduce_with(&self, v: &[Scalar]) -> (Vector, Vec<Scalar>) {
        let mut r = v.to_vec();
        let mut coef = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if !c.is_zero() {
                for (x, y) in r.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x = &*x - &(&c * y);
                    }
                }
            }
            coef.push(c);
        }
        (r, coef)
    }

    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        self.reduce_with(v).0
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "subspace ambient dimension");
        let (r, coef) = self.reduce_with(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let k = self.generators.len();
        // combination expressing r in terms of generators (including v itself)
        let mut combo = zero_vec(k + 1);
        combo[k] = Scalar::one();
        for (c, row_combo) in coef.iter().zip(&self.combos) {
            if c.is_zero() {
                continue;
            }
            for (j, x) in row_combo.iter().enumerate() {
                combo[j] = &combo[j] - &(c * x);
            }
        }
        for rc in self.combos.iter_mut() {
            rc.push(Scalar::zero());
        }
        let inv = r[p].inv().expect("nonzero");
        let new_row = vec_scale(&inv, &r);
        let new_combo = vec_scale(&inv, &combo);
        // eliminate the new pivot from older rows
        for (row, rc) in self.rows.iter_mut().zip(self.combos.iter_mut()) {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&new_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            for (x, y) in rc.iter_mut().zip(&new_combo) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        // keep rows ordered by pivot
        let pos = self
            .pivots
            .iter()
            .position(|&q| q > p)
            .unwrap_or(self.pivots.len());
        self.rows.insert(pos, new_row);
        self.pivots.insert(pos, p);
        self.combos.insert(pos, new_combo);
        self.generators.push(v.to_vec());
        true
    }

    /// Coordinates of `v` with respect to [`Subspace::basis`], if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        let (r, coef) = self.reduce_with(v);
        if !is_zero_vec(&r) {
            return None;
        }
        let mut out = zero_vec(self.generators.len());
        for (c, rc) in coef.iter().zip(&self.combos) {
            if c.is_zero() {
                continue;
            }
            for (j, x) in rc.iter().enumerate() {
                out[j] = &out[j] + &(c * x);
            }
        }
        Some(out)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in other.basis() {
            s.insert(v);
        }
        s
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // solve sum a_i u_i = sum b_j w_j
        let k = self.dim();
        let l = other.dim();
        let n = self.ambient;
        let mut m = Matrix::zeros(n, k + l);
        for (j, u) in self.basis().iter().enumerate() {
            for i in 0..n {
                m.set(i, j, u[i].clone());
            }
        }
        for (j, w) in other.basis().iter().enumerate() {
            for i in 0..n {
                m.set(i, k + j, -&w[i]);
            }
        }
        let mut out = Subspace::new(n);
        for sol in kernel_basis(&m) {
            let mut v = zero_vec(n);
            for (j, u) in self.basis().iter().enumerate() {
                if !sol[j].is_zero() {
                    v = vec_add(&v, &vec_scale(&sol[j], u));
                }
            }
            out.insert(&v);
        }
        out
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }
}

// ---------------------------------------------------------------------------
// Integer matrices

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.row_vecs())
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: i64) {
        if f == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j);
            self.data[dst * self.cols + j] += f * v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, f: i64) {
        if f == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src);
            self.data[i * self.cols + dst] += f * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self.data[r * self.cols + j] = -self.data[r * self.cols + j];
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            self.data[i * self.cols + c] = -self.data[i * self.cols + c];
        }
    }

    /// Exact determinant (fraction-free elimination).
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&v| v as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return 0;
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        if n == 0 {
            1
        } else {
            sign * a[n - 1][n - 1]
        }
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U * A = H`, `U`
/// unimodular, `H` in echelon form with positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, zero rows last.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut r = 0;
    for c in 0..a.cols {
        if r == h.rows {
            break;
        }
        loop {
            let best = (r..h.rows)
                .filter(|&i| h.get(i, c) != 0)
                .min_by_key(|&i| (h.get(i, c).abs(), i));
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut clean = true;
            for i in r + 1..h.rows {
                let v = h.get(i, c);
                if v != 0 {
                    let q = v.div_euclid(h.get(r, c));
                    h.add_row(i, r, -q);
                    u.add_row(i, r, -q);
                    if h.get(i, c) != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, c) == 0 {
            continue;
        }
        if h.get(r, c) < 0 {
            h.negate_row(r);
            u.negate_row(r);
        }
        let p = h.get(r, c);
        for i in 0..r {
            let q = h.get(i, c).div_euclid(p);
            h.add_row(i, r, -q);
            u.add_row(i, r, -q);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(S, U, V)` with `U * A * V = S`, `S` diagonal
/// with non-negative entries each dividing the next.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block goes to (t, t)
            let mut best: Option<(i64, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = s.get(i, j).abs();
                    if x != 0 && best.is_none_or(|b| x < b.0) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, bi, bj)) = best else {
                return (s, u, v);
            };
            s.swap_rows(t, bi);
            u.swap_rows(t, bi);
            s.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let p = s.get(t, t);
            let mut done = true;
            for i in t + 1..m {
                let q = s.get(i, t).div_euclid(p);
                s.add_row(i, t, -q);
                u.add_row(i, t, -q);
                if s.get(i, t) != 0 {
                    done = false;
                }
            }
            for j in t + 1..n {
                let q = s.get(t, j).div_euclid(p);
                s.add_col(j, t, -q);
                v.add_col(j, t, -q);
                if s.get(t, j) != 0 {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            // divisibility of the trailing block
            let mut fixed = true;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if s.get(i, j) % p != 0 {
                        s.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if s.get(t, t) < 0 {
            s.negate_col(t);
            v.negate_col(t);
        }
    }
    (s, u, v)
}

/// Converts a rational matrix to an integer one after multiplying by the lcm
/// of denominators; returns the integer matrix and that multiplier.
pub fn clear_denominators(rows: &[Vec<Rational>], cols: usize) -> (IntMatrix, num_bigint::BigInt) {
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive};
    let mut l = num_bigint::BigInt::one();
    for r in rows {
        for x in r {
            l = l.lcm(x.denom());
        }
    }
    let mut data = Vec::with_capacity(rows.len() * cols);
    for r in rows {
        for x in r {
            let v = (x * Rational::from_integer(l.clone())).to_integer();
            data.push(v.to_i64().expect("integer entry fits in i64"));
        }
    }
    (IntMatrix::new(rows.len(), cols, data), l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[i64]) -> Matrix {
        Matrix::from_i64(rows, cols, v)
    }

    #[test]
    fn kernel_examples() {
        let d = Matrix::diag(&int_vec(&[2, 2, 0, 0, 0]));
        let k = kernel_basis(&d);
        assert_eq!(k, vec![unit_vec(5, 2), unit_vec(5, 3), unit_vec(5, 4)]);
        assert!(kernel_basis(&Matrix::identity(3)).is_empty());
        assert_eq!(
            kernel_basis(&m(2, 2, &[1, 1, 1, 1])),
            vec![int_vec(&[-1, 1])]
        );
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve_linear(&Matrix::identity(2), &int_vec(&[3, 4])),
            Some(int_vec(&[3, 4]))
        );
        assert_eq!(
            solve_linear(&m(1, 2, &[1, 1]), &int_vec(&[2])),
            Some(int_vec(&[2, 0]))
        );
        assert_eq!(solve_linear(&m(1, 1, &[0]), &int_vec(&[1])), None);
    }

    #[test]
    fn psd_examples() {
        assert!(
            is_positive_semidefinite(&Matrix::diag(&int_vec(&[2, 2, 0, 0, 0])))
                .unwrap()
                .psd
        );
        let r = is_positive_semidefinite(&m(2, 2, &[1, 2, 2, 1])).unwrap();
        assert!(!r.psd);
        let w = r.witness.unwrap();
        assert_eq!(w, int_vec(&[1, -1]));
        assert_eq!(m(2, 2, &[1, 2, 2, 1]).bilinear(&w, &w), Scalar::int(-2));
        assert!(is_positive_semidefinite(&Matrix::zeros(3, 3)).unwrap().psd);
        assert_eq!(
            is_positive_semidefinite(&m(2, 2, &[1, 2, 3, 1])),
            Err(LinalgError::NotSymmetric(1, 0))
        );
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = hermite_normal_form(&IntMatrix::new(2, 1, vec![4, 6]));
        assert_eq!(h, IntMatrix::new(2, 1, vec![2, 0]));
        assert_eq!(u.mul(&IntMatrix::new(2, 1, vec![4, 6])), h);
        let (h, _) = hermite_normal_form(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        let (h, _) = hermite_normal_form(&IntMatrix::new(2, 2, vec![2, 1, 0, 1]));
        assert_eq!(h, IntMatrix::new(2, 2, vec![2, 0, 0, 1]));
    }

    #[test]
    fn snf_examples() {
        let (s, _, _) = smith_normal_form(&IntMatrix::new(2, 2, vec![2, 0, 0, 2]));
        assert_eq!(s, IntMatrix::new(2, 2, vec![2, 0, 0, 2]));
        let a = IntMatrix::new(2, 2, vec![2, 0, 0, 3]);
        let (s, u, v) = smith_normal_form(&a);
        assert_eq!(s, IntMatrix::new(2, 2, vec![1, 0, 0, 6]));
        assert_eq!(u.mul(&a).mul(&v), s);
        let (s, _, _) = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(s, IntMatrix::zeros(2, 3));
    }

    #[test]
    fn subspace_coordinates() {
        let vs = vec![int_vec(&[1, 1, 0]), int_vec(&[0, 1, 1])];
        let s = Subspace::spanned_by(3, &vs);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.coordinates(&int_vec(&[2, 5, 3])), Some(int_vec(&[2, 3])));
        assert_eq!(s.coordinates(&int_vec(&[1, 0, 0])), None);
        assert!(!Subspace::spanned_by(3, &vs)
            .clone()
            .insert(&int_vec(&[1, 2, 1])));
    }
}
