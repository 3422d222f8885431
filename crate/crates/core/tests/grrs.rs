mod common;

use common::*;
use grla_core::exactfield::Scalar;
use grla_core::finroot::{Family, RootType};
use grla_core::grrs::{CheckOptions, GrrsError, GrrsPresentation};
use grla_core::lattice::CosetUnion;
use grla_core::linalg::{int_vec, is_positive_semidefinite, Matrix};

fn a1() -> RootType {
    RootType {
        family: Family::A,
        rank: 1,
    }
}

#[test]
fn membership_in_r1() {
    let r = a1_piece();
    assert!(r.member(&int_vec(&[1, 1, 0, 0])).unwrap());
    assert!(!r.member(&int_vec(&[1, 1, 1, 0])).unwrap());
    assert!(r.member(&int_vec(&[0, 0, 0, 0])).unwrap());
    assert!(r.member(&int_vec(&[1, 0])).is_err());
}

#[test]
fn form_and_cartan_numbers() {
    let r = a1a1_nullity3();
    let a1v = int_vec(&[1, 0, 0, 0, 0]);
    let s1 = int_vec(&[0, 0, 1, 0, 0]);
    assert_eq!(r.form(&a1v, &a1v), Scalar::int(2));
    assert_eq!(r.cartan_int(&a1v, &a1v).unwrap(), 2);
    assert_eq!(r.cartan_int(&s1, &a1v).unwrap(), 0);
    assert!(matches!(
        r.cartan_int(&a1v, &s1),
        Err(GrrsError::IsotropicDenominator(_))
    ));
}

#[test]
fn reflections() {
    let r = a1_piece();
    let a = int_vec(&[1, 0, 0, 0]);
    assert_eq!(
        r.reflect(&int_vec(&[1, 1, 0, 0]), &a).unwrap(),
        int_vec(&[-1, 1, 0, 0])
    );
    let delta = int_vec(&[0, 2, 0, 0]);
    assert_eq!(r.reflect(&delta, &a).unwrap(), delta);
    assert_eq!(r.reflect(&a, &a).unwrap(), int_vec(&[-1, 0, 0, 0]));
}

#[test]
fn root_strings() {
    let r = a1_piece();
    let a = int_vec(&[1, 0, 0, 0]);
    assert_eq!(
        r.root_string(&int_vec(&[0, 1, 0, 0]), &a, 8).unwrap(),
        (1, 1)
    );
    let f = finite_a1();
    assert_eq!(
        f.root_string(&int_vec(&[1]), &int_vec(&[1]), 8).unwrap(),
        (2, 0)
    );
    let rp = a1_closure();
    assert_eq!(
        rp.root_string(&int_vec(&[0, 1, 1, 1]), &a, 8).unwrap(),
        (0, 0)
    );
}

#[test]
fn axioms_of_the_decomposable_example() {
    let rep = a1a1_nullity3().check_axioms(&CheckOptions::default());
    for name in ["R1", "R2", "R3", "R4", "R5", "R6"] {
        assert!(rep.get(name).pass, "{}", rep.get(name));
    }
    assert!(!rep.get("R7").pass);
    assert!(rep.form_psd);
}

#[test]
fn closure_of_first_component_is_singular() {
    let rp = a1_closure();
    let rep = rp.check_axioms(&CheckOptions::default());
    assert!(!rep.get("R6").pass);
    for name in ["R1", "R2", "R3", "R4", "R5", "R7"] {
        assert!(rep.get(name).pass, "{}", rep.get(name));
    }
    let iso = rp.isolated_roots().unwrap();
    assert_eq!(iso, CosetUnion::new(lam(3).scale(2), vec![vec![1, 1, 1]]));
    assert!(rep.get("R6").detail.contains("(1, 1, 1)"));
}

#[test]
fn finite_a1_passes_everything() {
    let rep = finite_a1().check_axioms(&CheckOptions::default());
    assert!(rep.all_pass(), "{:?}", rep);
    assert!(finite_a1().isolated_roots().unwrap().is_empty());
    assert!(a1a1_nullity3().isolated_roots().unwrap().is_empty());
}

#[test]
fn decomposition_of_the_decomposable_example() {
    let d = a1a1_nullity3().decompose(&CheckOptions::default()).unwrap();
    assert_eq!(d.components.len(), 2);
    assert!(d.components.iter().all(|c| c.root_type == a1()));
    assert_eq!(d.nullity, 3);
    assert!(d.isolated.is_empty());
    assert!(d.outside_closures.is_empty());
    // the first component reaches S+S, its closure reaches all of L
    let s = s_semilattice(3);
    assert_eq!(d.components[0].null_support, s.minkowski(&s).unwrap());
    assert_eq!(d.components[0].closure_null, CosetUnion::lattice(lam(3)));
    assert_eq!(
        d.components[0].closed.families(),
        closure_in_five().families()
    );
    assert_eq!(d.components[1].closure_null, CosetUnion::lattice(lam(3)));
}

fn closure_in_five() -> GrrsPresentation {
    let s = s_semilattice(3);
    GrrsPresentation::new(
        Matrix::diag(&int_vec(&[2, 2, 0, 0, 0])),
        embed_tail(5, 3),
        vec![
            (int_vec(&[0, 0, 0, 0, 0]), CosetUnion::lattice(lam(3))),
            (int_vec(&[1, 0, 0, 0, 0]), s.clone()),
            (int_vec(&[-1, 0, 0, 0, 0]), s),
        ],
    )
    .unwrap()
}

#[test]
fn orthogonal_finite_pair_splits() {
    let d = finite_a1a1().decompose(&CheckOptions::default()).unwrap();
    assert_eq!(d.components.len(), 2);
    assert!(d.components.iter().all(|c| c.root_type == a1()));
    assert_eq!(d.nullity, 0);
}

#[test]
fn quotients_and_nullity() {
    let q = a1a1_nullity3().quotient().unwrap();
    assert_eq!(
        q.iter().map(|c| c.root_type).collect::<Vec<_>>(),
        vec![a1(), a1()]
    );
    assert_eq!(affine_a1().quotient().unwrap()[0].root_type, a1());
    assert_eq!(
        affine_bc1().quotient().unwrap()[0].root_type,
        RootType {
            family: Family::BC,
            rank: 1
        }
    );
    assert_eq!(a1a1_nullity3().nullity(), 3);
    assert_eq!(finite_a1().nullity(), 0);
    assert_eq!(affine_a1().nullity(), 1);
}

#[test]
fn composite_form_examples() {
    let l = CosetUnion::lattice(lam(1));
    let fams = [[0, 0, 0], [1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]]
        .iter()
        .map(|b| (int_vec(b), l.clone()))
        .collect();
    let p =
        GrrsPresentation::new(Matrix::diag(&int_vec(&[-2, 2, 0])), embed_tail(3, 1), fams).unwrap();
    let cf = p.composite_form().unwrap();
    assert_eq!(cf.scales, vec![Scalar::int(-1), Scalar::int(1)]);
    assert_eq!(cf.gram, Matrix::diag(&int_vec(&[2, 2, 0])));
    assert!(is_positive_semidefinite(&cf.gram).unwrap().psd);

    let r = a1a1_nullity3();
    let cf = r.composite_form().unwrap();
    assert_eq!(cf.scales, vec![Scalar::one(), Scalar::one()]);
    assert_eq!(&cf.gram, r.gram());

    let pt = CosetUnion::points(0, vec![vec![]]);
    let fams = [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]]
        .iter()
        .map(|b| (int_vec(b), pt.clone()))
        .collect();
    let mixed =
        GrrsPresentation::new(Matrix::from_i64(2, 2, &[2, 1, 1, -2]), vec![], fams).unwrap();
    assert!(matches!(
        mixed.composite_form(),
        Err(GrrsError::IndefiniteComponent { .. })
    ));
}

#[test]
fn window_enumeration_and_projection() {
    let w = affine_a1().enumerate_window(&[(-1, 1)]);
    assert_eq!(w.len(), 9);
    assert!(w.contains(&int_vec(&[-1, 1])));
    let r = a1a1_nullity3();
    assert_eq!(
        r.project_null(&int_vec(&[1, 0, 1, 0, 0])).unwrap(),
        int_vec(&[0, 0, 1, 0, 0])
    );
    assert_eq!(
        r.project_null(&int_vec(&[1, 0, 0, 0, 0])).unwrap(),
        int_vec(&[0, 0, 0, 0, 0])
    );
}

#[test]
fn rejects_presentations_without_nonisotropic_roots() {
    let l = CosetUnion::lattice(lam(1));
    let r = GrrsPresentation::new(
        Matrix::diag(&int_vec(&[0])),
        embed_tail(1, 1),
        vec![(int_vec(&[0]), l)],
    );
    assert_eq!(r, Err(GrrsError::NoNonisotropicRoots));
}
