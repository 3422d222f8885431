//! Pointwise oracle for coset unions: full-rank lattices in upper triangular
//! form, with membership by back substitution on `[-4, 4]^nu` windows.

use std::collections::BTreeSet;

use grla_core::lattice::{CosetUnion, IntLattice};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BOX: i64 = 4;

/// Full-rank lattice from upper triangular generator rows; membership and
/// reduction by back substitution, independent of the library's forms.
#[derive(Clone, Debug)]
pub struct OracleLattice {
    pub rows: Vec<Vec<i64>>,
}

impl OracleLattice {
    pub fn nu(&self) -> usize {
        self.rows.len()
    }

    pub fn det(&self) -> i64 {
        (0..self.nu()).map(|i| self.rows[i][i]).product()
    }

    /// Canonical representative with `0 <= x[i] < derivations`.
    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        let mut v = x.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let q = v[i].div_euclid(row[i]);
            for (a, b) in v.iter_mut().zip(row) {
                *a -= q * b;
            }
        }
        v
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.reduce(x).iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Debug)]
pub struct OracleSet {
    pub lat: OracleLattice,
    pub residues: Vec<Vec<i64>>,
}

impl OracleSet {
    pub fn contains(&self, x: &[i64]) -> bool {
        self.residues.iter().any(|r| self.lat.contains(&sub(x, r)))
    }
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn random_lattice(rng: &mut ChaCha8Rng, nu: usize, max_diag: i64) -> OracleLattice {
    let diag: Vec<i64> = (0..nu).map(|_| rng.gen_range(1..=max_diag)).collect();
    let mut rows = vec![vec![0i64; nu]; nu];
    for i in 0..nu {
        rows[i][i] = diag[i];
        for j in i + 1..nu {
            rows[i][j] = rng.gen_range(0..diag[j]);
        }
    }
    OracleLattice { rows }
}

/// Library lattice from scrambled generators of the same lattice.
pub fn to_library(rng: &mut ChaCha8Rng, l: &OracleLattice) -> IntLattice {
    let nu = l.nu();
    let mut gens = l.rows.clone();
    for _ in 0..3 {
        if nu >= 2 {
            let i = rng.gen_range(0..nu);
            let j = (i + rng.gen_range(1..nu)) % nu;
            let k = rng.gen_range(-2..=2);
            gens[i] = add(&gens[i], &gens[j].iter().map(|x| k * x).collect::<Vec<_>>());
        }
    }
    if nu > 0 {
        let extra = add(&gens[0], &gens[nu - 1]);
        gens.push(extra);
    }
    IntLattice::from_generators(nu, &gens)
}

pub fn random_set(rng: &mut ChaCha8Rng, nu: usize, max_diag: i64) -> (OracleSet, CosetUnion) {
    let lat = random_lattice(rng, nu, max_diag);
    let k = rng.gen_range(1..=3);
    let residues: Vec<Vec<i64>> = (0..k)
        .map(|_| (0..nu).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    let lib = CosetUnion::new(to_library(rng, &lat), residues.clone());
    (OracleSet { lat, residues }, lib)
}

pub fn window(nu: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..nu {
        let mut next = Vec::new();
        for p in &out {
            for x in -BOX..=BOX {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn bounds(nu: usize) -> Vec<(i64, i64)> {
    vec![(-BOX, BOX); nu]
}

/// Checks `lib` against `oracle` on every window point and through window enumeration.
pub fn agree(lib: &CosetUnion, oracle: impl Fn(&[i64]) -> bool, nu: usize, what: &str) {
    let pts = window(nu);
    let expected: Vec<Vec<i64>> = pts.iter().filter(|p| oracle(p)).cloned().collect();
    for p in &pts {
        assert_eq!(
            lib.member(p).unwrap(),
            oracle(p),
            "{} at {:?}: {}",
            what,
            p,
            lib
        );
    }
    assert_eq!(
        lib.enumerate_window(&bounds(nu)),
        expected,
        "{} enumeration: {}",
        what,
        lib
    );
}

/// Runs `cases` randomized cases per nullity 1 to 3 and returns the number run.
pub fn run(seed: u64, cases: usize, f: impl Fn(&mut ChaCha8Rng, usize)) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = 0;
    for nu in 1..=3 {
        for _ in 0..cases {
            f(&mut rng, nu);
            n += 1;
        }
    }
    n
}

pub fn window_box(nu: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..nu {
        let mut next = Vec::new();
        for p in &out {
            for x in lo..=hi {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn case_member_and_negate(rng: &mut ChaCha8Rng, nu: usize) {
    let (o, l) = random_set(rng, nu, 3);
    agree(&l, |x| o.contains(x), nu, "member");
    let neg: Vec<i64> = vec![0; nu];
    agree(&l.negate(), |x| o.contains(&sub(&neg, x)), nu, "negate");
}

pub fn case_intersect_union_setminus(rng: &mut ChaCha8Rng, nu: usize) {
    let (oa, a) = random_set(rng, nu, 3);
    let (ob, b) = random_set(rng, nu, 3);
    agree(
        &a.intersect(&b).unwrap(),
        |x| oa.contains(x) && ob.contains(x),
        nu,
        "intersect",
    );
    agree(
        &a.union(&b).unwrap(),
        |x| oa.contains(x) || ob.contains(x),
        nu,
        "union",
    );
    agree(
        &a.setminus(&b).unwrap(),
        |x| oa.contains(x) && !ob.contains(x),
        nu,
        "setminus",
    );
    let sub_ok = window(nu).iter().all(|p| !oa.contains(p) || ob.contains(p));
    // the window covers a period of both sets when all moduli divide 6
    if 6 % oa.lat.det() == 0 && 6 % ob.lat.det() == 0 && nu == 1 {
        assert_eq!(a.subset(&b).unwrap(), sub_ok);
    }
    if a.subset(&b).unwrap() {
        assert!(sub_ok);
    }
    assert!(a.equals(&a.union(&a).unwrap()).unwrap());
}

pub fn case_minkowski(rng: &mut ChaCha8Rng, nu: usize) {
    let (oa, a) = random_set(rng, nu, 2);
    let (ob, b) = random_set(rng, nu, 2);
    // both moduli contain l Z^nu for l = lcm of the determinants, so summands
    // from A can be reduced into [0, l)^nu
    let period = oa.lat.det().lcm(&ob.lat.det());
    let fundamental: Vec<Vec<i64>> = window_box(nu, 0, period - 1)
        .into_iter()
        .filter(|p| oa.contains(p))
        .collect();
    let sum = a.minkowski(&b).unwrap();
    agree(
        &sum,
        |x| fundamental.iter().any(|p| ob.contains(&sub(x, p))),
        nu,
        "minkowski",
    );
}

pub fn case_zspan(rng: &mut ChaCha8Rng, nu: usize) {
    let (o, l) = random_set(rng, nu, 3);
    // subgroup of Z^nu / M generated by the residues, by closure
    let mut reps: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = vec![o.lat.reduce(&vec![0; nu])];
    reps.insert(queue[0].clone());
    while let Some(r) = queue.pop() {
        for g in &o.residues {
            for s in [add(&r, g), sub(&r, g)] {
                let s = o.lat.reduce(&s);
                if reps.insert(s.clone()) {
                    queue.push(s);
                }
            }
        }
    }
    let span = CosetUnion::lattice(l.zspan());
    agree(&span, |x| reps.contains(&o.lat.reduce(x)), nu, "zspan");
}
