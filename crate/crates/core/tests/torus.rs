mod common;

use common::*;
use grla_core::affine::{fixed_subalgebra, make_twisted_automorphism, AffAlgebra};
use grla_core::exactfield::Scalar;
use grla_core::finroot::{Family, RootType};
use grla_core::grrs::CheckOptions;
use grla_core::lattice::IntLattice;
use grla_core::liealg::GrlaHandle;
use grla_core::linalg::{Matrix, Subspace};
use grla_core::torus::{
    center_of_core, check_lie_torus, core_mod_center_pipeline, core_window, grading_extraction,
    quotient_core, TorusError,
};

fn opts() -> CheckOptions {
    CheckOptions::default()
}

fn a1() -> RootType {
    RootType {
        family: Family::A,
        rank: 1,
    }
}

fn aff_sl2(n: i64) -> GrlaHandle {
    AffAlgebra::new(sl2()).unwrap().handle(n).unwrap()
}

fn same(a: &IntLattice, b: &IntLattice) -> bool {
    a.contains_lattice(b) && b.contains_lattice(a)
}

#[test]
fn affine_a1_grading() {
    let t = grading_extraction(&affine_a1(), &opts()).unwrap();
    assert_eq!(t.root_type, a1());
    assert!(same(&t.nonisolated_span, &lam(1)));
    assert_eq!(t.isolated_span.rank(), 0);
    assert_eq!(t.type_label(), "(A1, rank 1)");
}

#[test]
fn a1_closure_grading() {
    let t = grading_extraction(&a1_closure(), &opts()).unwrap();
    assert_eq!(t.root_type, a1());
    // the nonisolated span is the span of S + S, which is the whole lattice
    assert!(same(&t.nonisolated_span, &lam(3)));
    let iso = IntLattice::from_generators(
        3,
        &[vec![1, 1, 1], vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]],
    );
    assert!(same(&t.isolated_span, &iso));
    assert!(same(&t.null_lattice, &lam(3)));
}

#[test]
fn finite_grading_has_zero_lattices() {
    let t = grading_extraction(&finite_a1(), &opts()).unwrap();
    assert_eq!(t.nonisolated_span.rank(), 0);
    assert_eq!(t.isolated_span.rank(), 0);
    assert_eq!(t.type_label(), "(A1, rank 0)");
}

#[test]
fn decomposable_systems_are_rejected() {
    assert!(matches!(
        grading_extraction(&a1a1_nullity3(), &opts()),
        Err(TorusError::NotIndecomposable(2))
    ));
    assert!(matches!(
        grading_extraction(&finite_a1a1(), &opts()),
        Err(TorusError::NotIndecomposable(2))
    ));
}

#[test]
fn affine_sl2_core_center_quotient() {
    let hd = aff_sl2(3);
    let core = core_window(&hd.window).unwrap();
    // sl2 (x) t^k for |k| <= 3 and c
    assert_eq!(core.dim(), 7 * 3 + 1);
    assert!(!core.labels().iter().any(|l| l == "d"));
    assert!(core.labels().iter().any(|l| l == "c"));
    let center = center_of_core(&core).unwrap();
    assert_eq!(center.len(), 1);
    assert_eq!(core.fmt_element(&center[0]), "c");
    let q = quotient_core(&core).unwrap();
    assert_eq!(q.dim(), 21);
    for k in -3..=3 {
        assert_eq!((0..q.dim()).filter(|&i| q.grade(i) == k).count(), 3);
    }
}

#[test]
fn affine_sl2_pipeline() {
    let hd = aff_sl2(3);
    let p = core_mod_center_pipeline(&hd, &opts()).unwrap();
    assert_eq!(p.center.len(), 1);
    assert_eq!(p.core.fmt_element(&p.center[0]), "c");
    assert_eq!(p.components.len(), 1);
    let r = &p.components[0].report;
    assert!(r.all_pass(), "{}", r);
    assert_eq!(r.type_label, "(A1, rank 1)");
    assert!(p.all_pass(), "{}", p.checks);
}

#[test]
fn pre_quotient_core_fails_only_centerlessness() {
    let hd = aff_sl2(3);
    let core = core_window(&hd.window).unwrap();
    let t = grading_extraction(&hd.presentation, &opts()).unwrap();
    let r = check_lie_torus(&core, &hd, &t);
    assert!(r.lt_pass(), "{}", r);
    assert!(!r.checks.passed("centerless"));
    assert_eq!(r.checks.get("centerless").unwrap().detail, "c is central");
}

#[test]
fn affine_sl2_sl2_splits_into_two_tori() {
    let hd = AffAlgebra::new(sl2sl2()).unwrap().handle(3).unwrap();
    let p = core_mod_center_pipeline(&hd, &opts()).unwrap();
    assert_eq!(p.components.len(), 2);
    for c in &p.components {
        assert!(c.report.all_pass(), "{}", c.report);
        assert_eq!(c.report.type_label, "(A1, rank 1)");
        assert_eq!(c.center.len(), 1);
    }
    assert!(p.checks.passed("core modulo center splits"), "{}", p.checks);
    assert!(p.checks.passed("quotient centerless"));
    // the whole quotient has 6 dimensions per degree
    for k in -3..=3 {
        assert_eq!(
            (0..p.quotient.dim())
                .filter(|&i| p.quotient.grade(i) == k)
                .count(),
            6
        );
    }
    // the whole system is not a single torus grading
    assert!(matches!(
        grading_extraction(&hd.presentation, &opts()),
        Err(TorusError::NotIndecomposable(2))
    ));
}

#[test]
fn cross_component_cores_commute() {
    let hd = AffAlgebra::new(sl2sl2()).unwrap().handle(2).unwrap();
    let p = core_mod_center_pipeline(&hd, &opts()).unwrap();
    let w = &hd.window;
    let (c1, c2) = (&p.components[0].core, &p.components[1].core);
    // embed the component cores back into the window through their labels
    let lift = |c: &grla_core::window::GradedWindow, i: usize| -> Vec<Scalar> {
        let pos = w
            .labels()
            .iter()
            .position(|l| l == c.label(i))
            .expect("core basis elements are window units");
        w.unit(pos)
    };
    for i in 0..c1.dim() {
        for j in 0..c2.dim() {
            if let Ok(v) = w.bracket(&lift(c1, i), &lift(c2, j)) {
                assert!(
                    v.iter().all(Scalar::is_zero),
                    "[{}, {}]",
                    c1.label(i),
                    c2.label(j)
                );
            }
        }
    }
}

#[test]
fn gl2_core_is_sl2() {
    let hd = gl2().handle().unwrap();
    let p = core_mod_center_pipeline(&hd, &opts()).unwrap();
    assert_eq!(p.core.dim(), 3);
    assert!(p.center.is_empty());
    assert_eq!(p.components.len(), 1);
    let r = &p.components[0].report;
    assert!(r.all_pass(), "{}", r);
    assert_eq!(r.type_label, "(A1, rank 0)");
}

#[test]
fn diagonal_twist_is_a_torus_with_even_null_lattice() {
    let a = AffAlgebra::new(sl2()).unwrap();
    let s = make_twisted_automorphism(
        &a,
        Matrix::from_i64(3, 3, &[-1, 0, 0, 0, -1, 0, 0, 0, 1]),
        2,
    )
    .unwrap();
    let fp = fixed_subalgebra(&a, &s, 3).unwrap();
    let t = grading_extraction(&fp.handle.presentation, &opts()).unwrap();
    // the finite root lifts to +-a + delta and the nonisolated span = 2Z delta
    assert!(same(
        &t.nonisolated_span,
        &IntLattice::from_generators(1, &[vec![2]])
    ));
    let col = t.lift.col(0);
    assert_eq!(col[1], Scalar::one());
    assert!(col[0] == Scalar::one() || col[0] == Scalar::int(-1));
    let p = core_mod_center_pipeline(&fp.handle, &opts()).unwrap();
    assert_eq!(p.components.len(), 1);
    let r = &p.components[0].report;
    assert!(r.all_pass(), "{}", r);
    assert_eq!(r.type_label, "(A1, rank 1)");
}

#[test]
fn verdicts_are_stable_from_radius_3_to_4() {
    let verdicts = |hd: &GrlaHandle| -> Vec<Vec<(String, bool)>> {
        let p = core_mod_center_pipeline(hd, &opts()).unwrap();
        p.components
            .iter()
            .map(|c| {
                c.report
                    .checks
                    .checks
                    .iter()
                    .map(|k| (k.name.to_string(), k.pass))
                    .collect()
            })
            .collect()
    };
    assert_eq!(verdicts(&aff_sl2(3)), verdicts(&aff_sl2(4)));
    let b = AffAlgebra::new(sl2sl2()).unwrap();
    assert_eq!(
        verdicts(&b.handle(3).unwrap()),
        verdicts(&b.handle(4).unwrap())
    );
}

#[test]
fn radius_one_is_too_small_for_the_core() {
    let hd = aff_sl2(1);
    assert!(matches!(
        core_window(&hd.window),
        Err(TorusError::WindowTooSmall(_))
    ));
}

#[test]
fn quotients_are_centerless_and_respect_dimension_bounds() {
    let mut handles = vec![aff_sl2(3), gl2().handle().unwrap(), sl3().handle().unwrap()];
    handles.push(AffAlgebra::new(sl2sl2()).unwrap().handle(3).unwrap());
    for hd in &handles {
        let p = core_mod_center_pipeline(hd, &opts()).unwrap();
        assert!(p.checks.passed("quotient centerless"));
        for c in &p.components {
            assert!(c.report.checks.passed("LT2(i)"), "{}", c.report);
            let all: Vec<_> = (0..c.quotient.dim()).map(|i| c.quotient.unit(i)).collect();
            assert!(c.quotient.centralizer(&all, &all).is_empty());
        }
        let span = Subspace::spanned_by(p.core.dim(), &p.center);
        assert_eq!(span.dim(), p.center.len());
    }
}
