//! Direct checks of root-system window laws from the form and membership
//! queries alone.

use grla_core::exactfield::Scalar;
use grla_core::grrs::GrrsPresentation;
use grla_core::linalg::{vec_add, vec_scale, Vector};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::oracle::{window_box, BOX};

pub fn bounds(p: &GrrsPresentation, w: i64) -> Vec<(i64, i64)> {
    vec![(-w, w); p.null_rank()]
}

pub fn nonisotropic(p: &GrrsPresentation, x: &Vector) -> bool {
    !p.form(x, x).is_zero()
}

/// `2 (b, a) / (a, a)` computed from the form alone.
pub fn cartan(p: &GrrsPresentation, b: &Vector, a: &Vector) -> Scalar {
    (Scalar::int(2) * p.form(b, a)).div(&p.form(a, a)).unwrap()
}

/// Checks a random sample of `sample` root pairs on the window of radius `w`
/// directly and every pair through the library; returns the sampled count.
pub fn check_cartan_window(
    name: &str,
    p: &GrrsPresentation,
    w: i64,
    sample: usize,
    rng: &mut ChaCha8Rng,
) -> usize {
    let roots: Vec<Vector> = p
        .enumerate_window(&bounds(p, w))
        .into_iter()
        .filter(|x| nonisotropic(p, x))
        .collect();
    let mut all: Vec<(&Vector, &Vector)> = roots
        .iter()
        .flat_map(|a| roots.iter().map(move |b| (b, a)))
        .collect();
    all.shuffle(rng);
    all.truncate(sample);
    let n = all.len();
    for (b, a) in all {
        let c = cartan(p, b, a);
        let k = c
            .to_i64()
            .unwrap_or_else(|| panic!("{}: non-integral Cartan number {}", name, c));
        assert!((-4..=4).contains(&k), "{}: Cartan number {}", name, k);
        assert_eq!(p.cartan_int(b, a).unwrap(), k);
    }
    let stats = p.window_stats(w, 8);
    assert_eq!(stats.cartan_violations, 0, "{}", name);
    assert!(stats.cartan_pairs >= roots.len() * roots.len(), "{}", name);
    n
}

/// Root string of `b` through `a` by direct membership; `None` if broken.
pub fn brute_string(
    p: &GrrsPresentation,
    b: &Vector,
    a: &Vector,
    reach: i64,
) -> Option<(i64, i64)> {
    let hits: Vec<i64> = (-reach..=reach)
        .filter(|&k| {
            p.member(&vec_add(b, &vec_scale(&Scalar::int(k), a)))
                .unwrap()
        })
        .collect();
    let (lo, hi) = (*hits.first()?, *hits.last()?);
    if hits.len() as i64 != hi - lo + 1 || lo > 0 || hi < 0 {
        return None;
    }
    Some((-lo, hi))
}

/// Checks sampled strings directly and every window string through the
/// library; returns the sampled count.
pub fn check_strings_window(
    name: &str,
    p: &GrrsPresentation,
    w: i64,
    sample: usize,
    rng: &mut ChaCha8Rng,
) -> usize {
    let all = p.enumerate_window(&bounds(p, w));
    let alphas: Vec<&Vector> = all.iter().filter(|x| nonisotropic(p, x)).collect();
    let mut pairs: Vec<(&Vector, &Vector)> = alphas
        .iter()
        .flat_map(|a| all.iter().map(move |b| (b, *a)))
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(sample);
    let n = pairs.len();
    for (b, a) in pairs {
        let (d, u) = brute_string(p, b, a, 12).unwrap_or_else(|| panic!("{}: broken string", name));
        assert_eq!(d - u, cartan(p, b, a).to_i64().unwrap(), "{}", name);
        assert_eq!(
            p.root_string(b, a, 8).unwrap(),
            (d as u32, u as u32),
            "{}",
            name
        );
    }
    let stats = p.window_stats(w, 8);
    assert_eq!(
        stats.string_violations, 0,
        "{}: {:?}",
        name, stats.first_failure
    );
    assert!(stats.pairs > 0);
    n
}

/// Compares `isolated_roots` with direct isolation on the `[-4, 4]^nu` box;
/// returns the number of points checked.
pub fn check_isolated(name: &str, g: &GrrsPresentation) -> usize {
    let nu = g.null_rank();
    let iso = g.isolated_roots().unwrap();
    let zero = vec![Scalar::zero(); g.dim()];
    let shifts = window_box(nu, -6, 6);
    let mut checked = 0;
    for lam in window_box(nu, -BOX, BOX) {
        let delta = g.embed_vec(&lam);
        let is_root = g.member(&delta).unwrap() && (nu > 0 || delta == zero);
        let isolated = is_root
            && g.nonisotropic_classes().iter().all(|&c| {
                let f = &g.families()[c];
                shifts.iter().filter(|s| f.support.contains(s)).all(|s| {
                    let alpha = vec_add(&f.base, &g.embed_vec(s));
                    !g.member(&vec_add(&alpha, &delta)).unwrap()
                })
            });
        assert_eq!(iso.contains(&lam), isolated, "{} at {:?}", name, lam);
        checked += 1;
    }
    checked
}
