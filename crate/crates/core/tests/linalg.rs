use grla_core::exactfield::Scalar;
use grla_core::linalg::{
    hermite_normal_form, int_vec, is_positive_semidefinite, kernel_basis, smith_normal_form,
    solve_linear, IntMatrix, Matrix, Subspace, Vector,
};
use proptest::prelude::*;

fn mat(rows: usize, cols: usize, vals: &[i64]) -> Matrix {
    Matrix::from_i64(rows, cols, vals)
}

#[test]
fn inverse_and_determinant() {
    let a = mat(2, 2, &[2, 1, 1, 1]);
    assert_eq!(a.inverse().unwrap(), mat(2, 2, &[1, -1, -1, 2]));
    assert_eq!(a.determinant(), Scalar::one());
    assert!(mat(2, 2, &[1, 2, 2, 4]).inverse().is_err());
}

#[test]
fn psd_examples() {
    assert!(
        is_positive_semidefinite(&mat(2, 2, &[2, 0, 0, 0]))
            .unwrap()
            .psd
    );
    let r = is_positive_semidefinite(&mat(2, 2, &[0, 1, 1, 0])).unwrap();
    assert!(!r.psd);
    let w = r.witness.unwrap();
    assert!(mat(2, 2, &[0, 1, 1, 0]).bilinear(&w, &w) < Scalar::zero());
}

#[test]
fn smith_examples() {
    let (s, _, _) = smith_normal_form(&IntMatrix::new(2, 2, vec![2, 0, 0, 3]));
    assert_eq!(s, IntMatrix::new(2, 2, vec![1, 0, 0, 6]));
    let (s, _, _) = smith_normal_form(&IntMatrix::new(2, 2, vec![2, 0, 0, 2]));
    assert_eq!(s, IntMatrix::new(2, 2, vec![2, 0, 0, 2]));
    let (s, _, _) = smith_normal_form(&IntMatrix::zeros(2, 3));
    assert_eq!(s, IntMatrix::zeros(2, 3));
}

fn small_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c).prop_map(move |v| Matrix::from_i64(r, c, &v))
    })
}

fn int_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        prop::collection::vec(-5i64..=5, r * c).prop_map(move |v| IntMatrix::new(r, c, v))
    })
}

fn to_rational(a: &IntMatrix) -> Matrix {
    let v: Vec<i64> = (0..a.rows()).flat_map(|i| a.row(i).to_vec()).collect();
    Matrix::from_i64(a.rows(), a.cols(), &v)
}

fn brute_psd(g: &Matrix) -> bool {
    let n = g.rows();
    let mut v = vec![-3i64; n];
    loop {
        let x: Vector = int_vec(&v);
        if g.bilinear(&x, &x) < Scalar::zero() {
            return false;
        }
        let mut k = 0;
        loop {
            if k == n {
                return true;
            }
            v[k] += 1;
            if v[k] <= 3 {
                break;
            }
            v[k] = -3;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_vectors_are_killed(m in small_matrix(4, 5)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(k.len(), m.cols() - m.rank());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn solve_finds_solutions_of_consistent_systems(m in small_matrix(4, 4), x in prop::collection::vec(-3i64..=3, 4)) {
        let x = int_vec(&x[..m.cols()]);
        let b = m.mul_vec(&x);
        let y = solve_linear(&m, &b).expect("consistent");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn inverse_is_two_sided(m in small_matrix(4, 4)) {
        if m.rows() == m.cols() && !m.determinant().is_zero() {
            let inv = m.inverse().unwrap();
            prop_assert_eq!(m.mul(&inv), Matrix::identity(m.rows()));
            prop_assert_eq!(inv.mul(&m), Matrix::identity(m.rows()));
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in prop::collection::vec(-3i64..=3, 9), b in prop::collection::vec(-3i64..=3, 9)) {
        let (a, b) = (mat(3, 3, &a), mat(3, 3, &b));
        prop_assert_eq!(a.mul(&b).determinant(), &a.determinant() * &b.determinant());
    }

    #[test]
    fn hermite_form_is_unimodular_and_preserves_the_lattice(a in int_matrix(3, 3)) {
        let (h, u) = hermite_normal_form(&a);
        prop_assert_eq!(u.mul(&a), h.clone());
        prop_assert_eq!(u.determinant().abs(), 1);
        // the inverse transform is integral, so both row lattices agree
        let uinv = to_rational(&u).inverse().unwrap();
        for i in 0..uinv.rows() {
            for j in 0..uinv.cols() {
                prop_assert!(uinv.get(i, j).to_i64().is_some());
            }
        }
        prop_assert_eq!(uinv.mul(&to_rational(&h)), to_rational(&a));
        // echelon shape with positive pivots and reduced entries above them
        let mut last = None;
        for i in 0..h.rows() {
            match h.row(i).iter().position(|&x| x != 0) {
                None => last = Some(usize::MAX),
                Some(p) => {
                    prop_assert!(last.is_none_or(|l| l != usize::MAX && p > l));
                    prop_assert!(h.get(i, p) > 0);
                    for k in 0..i {
                        prop_assert!(h.get(k, p) >= 0 && h.get(k, p) < h.get(i, p));
                    }
                    last = Some(p);
                }
            }
        }
    }

    #[test]
    fn smith_form_is_diagonal_with_divisibility(a in int_matrix(3, 3)) {
        let (s, u, v) = smith_normal_form(&a);
        prop_assert_eq!(u.mul(&a).mul(&v), s.clone());
        prop_assert_eq!(u.determinant().abs(), 1);
        prop_assert_eq!(v.determinant().abs(), 1);
        let k = s.rows().min(s.cols());
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if i != j {
                    prop_assert_eq!(s.get(i, j), 0);
                }
            }
        }
        for i in 0..k {
            prop_assert!(s.get(i, i) >= 0);
            if i + 1 < k && s.get(i, i) != 0 {
                prop_assert_eq!(s.get(i + 1, i + 1) % s.get(i, i), 0);
            }
            if s.get(i, i) == 0 {
                for j in i..k {
                    prop_assert_eq!(s.get(j, j), 0);
                }
            }
        }
    }

    #[test]
    fn psd_matches_brute_force(v in prop::collection::vec(-2i64..=2, 6), n in 1usize..=3) {
        // symmetric matrix from the upper triangle
        let mut g = Matrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                g.set(i, j, Scalar::int(v[k]));
                g.set(j, i, Scalar::int(v[k]));
                k += 1;
            }
        }
        prop_assert_eq!(is_positive_semidefinite(&g).unwrap().psd, brute_psd(&g));
    }

    #[test]
    fn subspace_operations(a in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 0..4),
                           b in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 0..4)) {
        let av: Vec<Vector> = a.iter().map(|x| int_vec(x)).collect();
        let bv: Vec<Vector> = b.iter().map(|x| int_vec(x)).collect();
        let sa = Subspace::spanned_by(4, &av);
        let sb = Subspace::spanned_by(4, &bv);
        let sum = sa.sum(&sb);
        let meet = sa.intersect(&sb);
        prop_assert_eq!(sum.dim() + meet.dim(), sa.dim() + sb.dim());
        for v in meet.basis() {
            prop_assert!(sa.contains(v) && sb.contains(v));
        }
        prop_assert!(sum.contains_subspace(&sa) && sum.contains_subspace(&sb));
        for v in sa.basis() {
            let c = sa.coordinates(v).unwrap();
            let mut back = vec![Scalar::zero(); 4];
            for (ci, bi) in c.iter().zip(sa.basis()) {
                for (x, y) in back.iter_mut().zip(bi) {
                    *x = &*x + &(ci * y);
                }
            }
            prop_assert_eq!(&back, v);
        }
    }
}
