#![allow(dead_code)]

pub mod afforacle;
pub mod oracle;
pub mod rootcheck;

use grla_core::exactfield::Scalar;
use grla_core::grrs::GrrsPresentation;
use grla_core::lattice::{CosetUnion, IntLattice};
use grla_core::linalg::{int_vec, unit_vec, Matrix, Vector};

pub fn lam(n: usize) -> IntLattice {
    IntLattice::full(n)
}

/// `2L` together with the cosets of the unit vectors.
pub fn s_semilattice(n: usize) -> CosetUnion {
    let mut res = vec![vec![0; n]];
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        res.push(v);
    }
    CosetUnion::new(lam(n).scale(2), res)
}

pub fn embed_tail(d: usize, nu: usize) -> Vec<Vector> {
    (d - nu..d).map(|i| unit_vec(d, i)).collect()
}

fn v(x: &[i64]) -> Vector {
    int_vec(x)
}

/// Coordinates `(a1, a2, s1, s2, s3)`; pieces `(S+S) + (+-a1 + S)` and `L + (+-a2 + L)`.
pub fn a1a1_nullity3() -> GrrsPresentation {
    let s = s_semilattice(3);
    let ss = s.minkowski(&s).unwrap();
    let l = CosetUnion::lattice(lam(3));
    let gram = Matrix::diag(&int_vec(&[2, 2, 0, 0, 0]));
    GrrsPresentation::new(
        gram,
        embed_tail(5, 3),
        vec![
            (v(&[0, 0, 0, 0, 0]), ss),
            (v(&[1, 0, 0, 0, 0]), s.clone()),
            (v(&[-1, 0, 0, 0, 0]), s),
            (v(&[0, 0, 0, 0, 0]), l.clone()),
            (v(&[0, 1, 0, 0, 0]), l.clone()),
            (v(&[0, -1, 0, 0, 0]), l),
        ],
    )
    .unwrap()
}

/// Coordinates `(a1, s1, s2, s3)`; `(S+S) + (+-a1 + S)`.
pub fn a1_piece() -> GrrsPresentation {
    let s = s_semilattice(3);
    let ss = s.minkowski(&s).unwrap();
    let gram = Matrix::diag(&int_vec(&[2, 0, 0, 0]));
    GrrsPresentation::new(
        gram,
        embed_tail(4, 3),
        vec![
            (v(&[0, 0, 0, 0]), ss),
            (v(&[1, 0, 0, 0]), s.clone()),
            (v(&[-1, 0, 0, 0]), s),
        ],
    )
    .unwrap()
}

/// Coordinates `(a1, s1, s2, s3)`; `L + (+-a1 + S)`.
pub fn a1_closure() -> GrrsPresentation {
    let s = s_semilattice(3);
    let gram = Matrix::diag(&int_vec(&[2, 0, 0, 0]));
    GrrsPresentation::new(
        gram,
        embed_tail(4, 3),
        vec![
            (v(&[0, 0, 0, 0]), CosetUnion::lattice(lam(3))),
            (v(&[1, 0, 0, 0]), s.clone()),
            (v(&[-1, 0, 0, 0]), s),
        ],
    )
    .unwrap()
}

/// Coordinates `(a, delta)`; `(+-a + Z delta) + Z delta`.
pub fn affine_a1() -> GrrsPresentation {
    let l = CosetUnion::lattice(lam(1));
    GrrsPresentation::new(
        Matrix::diag(&int_vec(&[2, 0])),
        embed_tail(2, 1),
        vec![
            (v(&[0, 0]), l.clone()),
            (v(&[1, 0]), l.clone()),
            (v(&[-1, 0]), l),
        ],
    )
    .unwrap()
}

/// Coordinates `(a, delta)`; `(+-a + L) + (+-2a + 2L) + L`.
pub fn affine_bc1() -> GrrsPresentation {
    let l = CosetUnion::lattice(lam(1));
    let two = CosetUnion::lattice(lam(1).scale(2));
    GrrsPresentation::new(
        Matrix::diag(&[Scalar::one(), Scalar::zero()]),
        embed_tail(2, 1),
        vec![
            (v(&[0, 0]), l.clone()),
            (v(&[1, 0]), l.clone()),
            (v(&[-1, 0]), l),
            (v(&[2, 0]), two.clone()),
            (v(&[-2, 0]), two),
        ],
    )
    .unwrap()
}

/// Finite `A1` with `nu = 0`.
pub fn finite_a1() -> GrrsPresentation {
    let pt = CosetUnion::points(0, vec![vec![]]);
    GrrsPresentation::new(
        Matrix::diag(&int_vec(&[2])),
        vec![],
        vec![(v(&[0]), pt.clone()), (v(&[1]), pt.clone()), (v(&[-1]), pt)],
    )
    .unwrap()
}

/// Two orthogonal finite `A1`s.
pub fn finite_a1a1() -> GrrsPresentation {
    let pt = CosetUnion::points(0, vec![vec![]]);
    let fams = [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]]
        .iter()
        .map(|b| (v(b), pt.clone()))
        .collect();
    GrrsPresentation::new(Matrix::diag(&int_vec(&[2, 2])), vec![], fams).unwrap()
}

pub fn all_shipped_like() -> Vec<(&'static str, GrrsPresentation)> {
    vec![
        ("a1a1_nullity3", a1a1_nullity3()),
        ("r1", a1_piece()),
        ("a1_closure", a1_closure()),
        ("affine_a1", affine_a1()),
        ("affine_bc1", affine_bc1()),
        ("finite_a1", finite_a1()),
        ("finite_a1a1", finite_a1a1()),
    ]
}

use grla_core::liealg::StructLieAlgebra;

fn s(x: i64) -> Scalar {
    Scalar::int(x)
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|x| x.to_string()).collect()
}

/// Matrix unit `E_ij` of size `n`.
pub fn unit_matrix(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m.set(i, j, Scalar::one());
    m
}

/// `sl2` on `(e, f, h)` with `[e, f] = h`, `[h, e] = 2e`, `[h, f] = -2f` and the trace form.
pub fn sl2() -> StructLieAlgebra {
    let form = Matrix::from_i64(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 2]);
    StructLieAlgebra::new(
        labels(&["e", "f", "h"]),
        &[
            (0, 1, vec![(2, s(1))]),
            (2, 0, vec![(0, s(2))]),
            (2, 1, vec![(1, s(-2))]),
        ],
        form,
        vec![2],
    )
    .unwrap()
}

/// `sl2` with only `[e, f]` changed to `2h`; `[f, e]` keeps `-h`.
pub fn sl2_perturbed() -> StructLieAlgebra {
    let form = Matrix::from_i64(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 2]);
    StructLieAlgebra::new(
        labels(&["e", "f", "h"]),
        &[
            (0, 1, vec![(2, s(2))]),
            (1, 0, vec![(2, s(-1))]),
            (2, 0, vec![(0, s(2))]),
            (2, 1, vec![(1, s(-2))]),
        ],
        form,
        vec![2],
    )
    .unwrap()
}

/// `gl2` on the matrix units with the trace form; Cartan `E11, E22`.
pub fn gl2() -> StructLieAlgebra {
    let mats = [
        unit_matrix(2, 0, 0),
        unit_matrix(2, 0, 1),
        unit_matrix(2, 1, 0),
        unit_matrix(2, 1, 1),
    ];
    StructLieAlgebra::from_matrices(labels(&["E11", "E12", "E21", "E22"]), &mats, vec![0, 3])
        .unwrap()
}

/// `sl3` on the off-diagonal units and `H1 = E11 - E22`, `H2 = E22 - E33`.
pub fn sl3() -> StructLieAlgebra {
    let mut mats = Vec::new();
    let mut names = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                mats.push(unit_matrix(3, i, j));
                names.push(format!("E{}{}", i + 1, j + 1));
            }
        }
    }
    let h1 = Matrix::diag(&int_vec(&[1, -1, 0]));
    let h2 = Matrix::diag(&int_vec(&[0, 1, -1]));
    mats.push(h1);
    mats.push(h2);
    names.push("H1".into());
    names.push("H2".into());
    StructLieAlgebra::from_matrices(names, &mats, vec![6, 7]).unwrap()
}

/// `sl2 + sl2` as block-diagonal 4x4 matrices.
pub fn sl2sl2() -> StructLieAlgebra {
    let mut mats = Vec::new();
    for off in [0usize, 2] {
        mats.push(unit_matrix(4, off, off + 1));
        mats.push(unit_matrix(4, off + 1, off));
        let mut h = Matrix::zeros(4, 4);
        h.set(off, off, s(1));
        h.set(off + 1, off + 1, s(-1));
        mats.push(h);
    }
    StructLieAlgebra::from_matrices(
        labels(&["e1", "f1", "h1", "e2", "f2", "h2"]),
        &mats,
        vec![2, 5],
    )
    .unwrap()
}

/// Heisenberg algebra with a derivation: `[x, y] = z`, `[d, x] = x`, `[d, y] = -y`,
/// `(x, y) = (z, d) = 1`; Cartan `z, d`.
pub fn heisenberg_d() -> StructLieAlgebra {
    let form = Matrix::from_i64(4, 4, &[0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0]);
    StructLieAlgebra::new(
        labels(&["x", "y", "z", "d"]),
        &[
            (0, 1, vec![(2, s(1))]),
            (3, 0, vec![(0, s(1))]),
            (3, 1, vec![(1, s(-1))]),
        ],
        form,
        vec![2, 3],
    )
    .unwrap()
}

/// One-dimensional abelian algebra with `(x, x) = 1`.
pub fn abelian1() -> StructLieAlgebra {
    StructLieAlgebra::new(labels(&["x"]), &[], Matrix::from_i64(1, 1, &[1]), vec![0]).unwrap()
}
