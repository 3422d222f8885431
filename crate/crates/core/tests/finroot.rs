use grla_core::exactfield::Scalar;
use grla_core::finroot::{
    build_finroot, cartan_integer, classify_finroot, indivisible, reflect_fin, simple_roots,
    Family, FinRootError, FinRootSystem, RootType,
};
use grla_core::linalg::{int_vec, Matrix, Vector};
use proptest::prelude::*;

fn all_types(max_rank: usize) -> Vec<RootType> {
    let mut out = Vec::new();
    for rank in 1..=max_rank {
        for family in [
            Family::A,
            Family::B,
            Family::C,
            Family::D,
            Family::E,
            Family::F,
            Family::G,
            Family::BC,
        ] {
            if build_finroot(family, rank).is_ok() {
                out.push(RootType { family, rank });
            }
        }
    }
    out
}

fn expected_count(t: RootType) -> usize {
    let n = t.rank;
    match t.family {
        Family::A => n * (n + 1),
        Family::B | Family::C => 2 * n * n,
        Family::D => 2 * n * (n - 1),
        Family::BC => 2 * n * n + 2 * n,
        Family::E => [72, 126, 240][n - 6],
        Family::F => 48,
        Family::G => 12,
    }
}

#[test]
fn every_type_up_to_rank_6_round_trips() {
    let types = all_types(6);
    assert!(types.len() >= 25);
    for t in types {
        let f = build_finroot(t.family, t.rank).unwrap();
        assert_eq!(f.roots().len(), expected_count(t), "{}", t);
        assert_eq!(classify_finroot(f.roots(), f.gram()).unwrap(), t);
        assert_eq!(simple_roots(f.roots(), f.gram()).unwrap().len(), t.rank);
    }
}

#[test]
fn exceptional_ranks_7_and_8() {
    for rank in [7, 8] {
        let f = build_finroot(Family::E, rank).unwrap();
        assert_eq!(
            f.roots().len(),
            expected_count(RootType {
                family: Family::E,
                rank
            })
        );
        assert_eq!(
            classify_finroot(f.roots(), f.gram()).unwrap(),
            RootType {
                family: Family::E,
                rank
            }
        );
    }
}

#[test]
fn invalid_types_are_rejected() {
    for (family, rank) in [
        (Family::B, 1),
        (Family::C, 2),
        (Family::D, 3),
        (Family::E, 5),
        (Family::F, 3),
        (Family::G, 1),
        (Family::A, 0),
        (Family::A, 9),
    ] {
        assert!(
            matches!(
                build_finroot(family, rank),
                Err(FinRootError::InvalidType(_, _))
            ),
            "{}{}",
            family,
            rank
        );
    }
}

/// Simply-laced roots are exactly the norm-2 vectors of the root lattice.
#[test]
fn simply_laced_roots_are_norm_two_lattice_vectors() {
    for (family, rank, bound) in [
        (Family::A, 1, 2),
        (Family::A, 3, 2),
        (Family::A, 4, 2),
        (Family::D, 4, 2),
        (Family::D, 5, 2),
        (Family::E, 6, 3),
    ] {
        let f = build_finroot(family, rank).unwrap();
        let mut brute: Vec<Vector> = Vec::new();
        let mut v = vec![-bound; rank];
        'outer: loop {
            let x = int_vec(&v);
            if f.gram().bilinear(&x, &x) == Scalar::int(2) {
                brute.push(x);
            }
            for c in v.iter_mut() {
                *c += 1;
                if *c <= bound {
                    continue 'outer;
                }
                *c = -bound;
            }
            break;
        }
        brute.sort();
        assert_eq!(brute, f.roots(), "{}{}", family, rank);
    }
}

#[test]
fn cartan_integers_are_bounded_and_reflections_close() {
    for t in all_types(6) {
        let f = build_finroot(t.family, t.rank).unwrap();
        for a in f.roots() {
            for b in f.roots() {
                let c = cartan_integer(b, a, f.gram()).expect("integral Cartan number");
                assert!((-4..=4).contains(&c), "{}: {}", t, c);
                assert!(f.contains(&reflect_fin(b, a, f.gram())), "{}", t);
            }
        }
    }
}

#[test]
fn reflection_is_an_involutive_isometry() {
    let f = build_finroot(Family::B, 3).unwrap();
    let g = f.gram();
    for a in f.roots() {
        for b in f.roots() {
            let w = reflect_fin(b, a, g);
            assert_eq!(reflect_fin(&w, a, g), *b);
            assert_eq!(g.bilinear(&w, &w), g.bilinear(b, b));
        }
    }
}

#[test]
fn indivisible_roots_drop_the_doubles() {
    for rank in 1..=4 {
        let bc = build_finroot(Family::BC, rank).unwrap();
        let b = if rank == 1 {
            build_finroot(Family::A, 1).unwrap()
        } else {
            build_finroot(Family::B, rank).unwrap()
        };
        assert_eq!(indivisible(&bc).len(), b.roots().len());
    }
}

#[test]
fn reducible_and_malformed_sets_are_rejected() {
    let g = Matrix::diag(&int_vec(&[2, 2]));
    let roots: Vec<Vector> = [[1, 0], [-1, 0], [0, 1], [0, -1]]
        .iter()
        .map(|x| int_vec(x))
        .collect();
    assert_eq!(classify_finroot(&roots, &g), Err(FinRootError::Reducible));
    let missing_negative = vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[0, -1])];
    assert!(matches!(
        classify_finroot(&missing_negative, &g),
        Err(FinRootError::NotARootSystem(_))
    ));
    let iso = Matrix::diag(&int_vec(&[0]));
    assert!(classify_finroot(&[int_vec(&[1]), int_vec(&[-1])], &iso).is_err());
}

/// Transports a root system through an integral change of coordinates `x -> A x`.
fn transport(f: &FinRootSystem, a: &Matrix) -> (Vec<Vector>, Matrix) {
    let inv = a.inverse().unwrap();
    let roots = f.roots().iter().map(|r| a.mul_vec(r)).collect();
    let gram = inv.transpose().mul(f.gram()).mul(&inv);
    (roots, gram)
}

fn type_strategy() -> impl Strategy<Value = RootType> {
    prop::sample::select(all_types(4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn classification_is_invariant_under_change_of_coordinates(t in type_strategy(), entries in prop::collection::vec(-2i64..=2, 16)) {
        let f = build_finroot(t.family, t.rank).unwrap();
        let n = t.rank;
        // unit upper triangular, hence invertible
        let mut a = Matrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                a.set(i, j, Scalar::int(entries[i * 4 + j]));
            }
        }
        let (roots, gram) = transport(&f, &a);
        prop_assert_eq!(classify_finroot(&roots, &gram).unwrap(), t);
    }

    #[test]
    fn classification_is_invariant_under_rescaling(t in type_strategy(), num in 1i64..=5, den in 1i64..=5) {
        let f = build_finroot(t.family, t.rank).unwrap();
        let c = Scalar::frac(num, den);
        let n = t.rank;
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, &c * f.gram().get(i, j));
            }
        }
        prop_assert_eq!(classify_finroot(f.roots(), &g).unwrap(), t);
    }
}
