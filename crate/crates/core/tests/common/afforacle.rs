//! Affinization of matrix algebras computed directly on matrix-valued
//! Laurent polynomials with the trace-form cocycle.

use std::collections::BTreeMap;

use grla_core::affine::AffElement;
use grla_core::exactfield::Scalar;
use grla_core::liealg::StructLieAlgebra;
use grla_core::linalg::{int_vec, Matrix, Vector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::unit_matrix;

/// sl2 as 2x2 matrices, returning the matrix images of the basis.
pub fn sl2_matrices() -> (StructLieAlgebra, Vec<Matrix>) {
    let mats = vec![
        unit_matrix(2, 0, 1),
        unit_matrix(2, 1, 0),
        Matrix::diag(&int_vec(&[1, -1])),
    ];
    let a =
        StructLieAlgebra::from_matrices(vec!["e".into(), "f".into(), "h".into()], &mats, vec![2])
            .unwrap();
    (a, mats)
}

pub fn mat_of(mats: &[Matrix], v: &[Scalar]) -> Matrix {
    let n = mats[0].rows();
    let mut out = Matrix::zeros(n, n);
    for (c, m) in v.iter().zip(mats) {
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, out.get(i, j) + &(c * m.get(i, j)));
            }
        }
    }
    out
}

pub fn trace(m: &Matrix) -> Scalar {
    (0..m.rows()).fold(Scalar::zero(), |acc, i| &acc + m.get(i, i))
}

/// Matrix-valued Laurent polynomial plus central and degree coordinates.
pub type MatAff = (BTreeMap<i64, Matrix>, Scalar, Scalar);

pub fn to_mat(mats: &[Matrix], x: &AffElement) -> MatAff {
    (
        x.terms.iter().map(|(n, v)| (*n, mat_of(mats, v))).collect(),
        x.c.clone(),
        x.d.clone(),
    )
}

pub fn mat_sub(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j) - b.get(i, j));
        }
    }
    out
}

pub fn mat_add_into(map: &mut BTreeMap<i64, Matrix>, n: i64, m: Matrix) {
    let e = map
        .entry(n)
        .or_insert_with(|| Matrix::zeros(m.rows(), m.cols()));
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            e.set(i, j, e.get(i, j) + m.get(i, j));
        }
    }
    if e.is_zero() {
        map.remove(&n);
    }
}

/// Loop bracket computed on matrices with the trace-form cocycle.
pub fn oracle_bracket(x: &MatAff, y: &MatAff) -> MatAff {
    let mut terms = BTreeMap::new();
    let mut c = Scalar::zero();
    for (n, a) in &x.0 {
        for (m, b) in &y.0 {
            mat_add_into(&mut terms, n + m, mat_sub(&a.mul(b), &b.mul(a)));
            if n + m == 0 {
                c = &c + &(&Scalar::int(*n) * &trace(&a.mul(b)));
            }
        }
    }
    for (m, b) in &y.0 {
        let s = &x.2 * &Scalar::int(*m);
        mat_add_into(&mut terms, *m, scale_mat(&s, b));
    }
    for (n, a) in &x.0 {
        let s = -&(&y.2 * &Scalar::int(*n));
        mat_add_into(&mut terms, *n, scale_mat(&s, a));
    }
    (terms, c, Scalar::zero())
}

pub fn scale_mat(s: &Scalar, a: &Matrix) -> Matrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, s * a.get(i, j));
        }
    }
    out
}

pub fn oracle_form(x: &MatAff, y: &MatAff) -> Scalar {
    let mut acc = &(&x.1 * &y.2) + &(&y.1 * &x.2);
    for (n, a) in &x.0 {
        if let Some(b) = y.0.get(&-n) {
            acc = &acc + &trace(&a.mul(b));
        }
    }
    acc
}

pub fn random_element(rng: &mut ChaCha8Rng, dim: usize, maxdeg: i64) -> AffElement {
    let mut x = AffElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let v: Vector = (0..dim)
            .map(|_| Scalar::int(rng.gen_range(-3..=3)))
            .collect();
        x = x.add(&AffElement::loop_term(v, rng.gen_range(-maxdeg..=maxdeg)));
    }
    if rng.gen_bool(0.3) {
        x = x.add(&AffElement::central().scale(&Scalar::int(rng.gen_range(-2..=2))));
    }
    if rng.gen_bool(0.3) {
        x = x.add(&AffElement::degree_derivation().scale(&Scalar::int(rng.gen_range(-2..=2))));
    }
    x
}
