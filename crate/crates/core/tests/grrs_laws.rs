//! Window laws of the shipped root systems against direct membership
//! queries, and the nullity-two semilattice classification.

mod common;

use common::rootcheck::*;
use common::*;
use grla_core::grrs::{CheckOptions, GrrsPresentation};
use grla_core::lattice::CosetUnion;
use grla_core::linalg::{int_vec, Matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const W: i64 = 3;

/// The lattice, `T = 2L + {0, e1, e2}` and its translates by `e1`, `e2`.
fn nullity_two_semilattices() -> Vec<(&'static str, CosetUnion)> {
    let l = lam(2);
    let t_set = CosetUnion::new(l.scale(2), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
    vec![
        ("lattice", CosetUnion::lattice(l)),
        ("T", t_set.clone()),
        ("T + e1", t_set.translate(&[1, 0])),
        ("T + e2", t_set.translate(&[0, 1])),
    ]
}

#[test]
fn nullity_two_semilattices_fill_the_lattice() {
    let full = CosetUnion::lattice(lam(2));
    for (name, s) in nullity_two_semilattices() {
        assert!(s.is_semilattice(), "{}", name);
        assert_eq!(s.minkowski(&s).unwrap(), full, "{}", name);
        // pointwise on a window as well
        let ss = s.minkowski(&s).unwrap();
        for x in -4..=4 {
            for y in -4..=4 {
                assert!(ss.contains(&[x, y]), "{} misses ({}, {})", name, x, y);
            }
        }
    }
}

#[test]
fn nullity_two_components_need_no_closure() {
    let l = CosetUnion::lattice(lam(2));
    for (name, s) in nullity_two_semilattices() {
        let ss = s.minkowski(&s).unwrap();
        let r = GrrsPresentation::new(
            Matrix::diag(&int_vec(&[2, 0, 0])),
            embed_tail(3, 2),
            vec![
                (int_vec(&[0, 0, 0]), ss.clone()),
                (int_vec(&[1, 0, 0]), s.clone()),
                (int_vec(&[-1, 0, 0]), s.clone()),
            ],
        )
        .unwrap();
        assert!(
            r.check_axioms(&CheckOptions::default()).all_pass(),
            "{}",
            name
        );
        let d = r.decompose(&CheckOptions::default()).unwrap();
        assert_eq!(d.components.len(), 1);
        let c = &d.components[0];
        assert_eq!(c.null_support, l, "{}", name);
        assert_eq!(c.closure_null, l, "{}", name);
        assert_eq!(c.closed.families(), c.piece.families(), "{}", name);
        assert!(d.isolated.is_empty());
    }
}

#[test]
fn nullity_three_example_needs_the_closure() {
    let s = s_semilattice(3);
    let ss = s.minkowski(&s).unwrap();
    assert!(s.is_semilattice());
    assert_ne!(ss, CosetUnion::lattice(lam(3)));
    assert!(!ss.contains(&[1, 1, 1]));
}

#[test]
fn cartan_integers_are_bounded_on_every_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pairs: usize = all_shipped_like()
        .iter()
        .map(|(name, p)| check_cartan_window(name, p, W, 6000, &mut rng))
        .sum();
    assert!(pairs > 10_000);
}

#[test]
fn root_strings_are_unbroken_with_the_cartan_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let checked: usize = all_shipped_like()
        .iter()
        .map(|(name, p)| check_strings_window(name, p, W, 4000, &mut rng))
        .sum();
    assert!(checked > 10_000);
}

#[test]
fn isotropic_roots_lie_in_the_radical() {
    for (name, p) in all_shipped_like() {
        let roots = p.enumerate_window(&bounds(&p, W));
        for d in roots.iter().filter(|x| !nonisotropic(&p, x)) {
            for b in &roots {
                assert!(p.form(d, b).is_zero(), "{}", name);
            }
        }
    }
}
