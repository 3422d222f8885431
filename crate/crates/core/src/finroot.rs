//! Finite root systems: standard constructions, classification (including the
//! non-reduced family BC), reflections and indivisible roots.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::exactfield::Scalar;
use crate::linalg::{dot, fmt_vec, unit_vec, vec_scale, vec_sub, Matrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::BC => "BC",
        };
        write!(f, "{}", s)
    }
}

impl std::str::FromStr for Family {
    type Err = FinRootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "G" => Family::G,
            "BC" => Family::BC,
            _ => return Err(FinRootError::InvalidType(s.to_string(), 0)),
        })
    }
}

/// Isomorphism type of an irreducible finite root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootType {
    pub family: Family,
    pub rank: usize,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

pub const MAX_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinRootError {
    #[error("no root system of type {0}{1}")]
    InvalidType(String, usize),
    #[error("not a finite root system: {0}")]
    NotARootSystem(String),
    #[error("root system is reducible")]
    Reducible,
}

/// A finite root system in `Q^dim` with a positive definite form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinRootSystem {
    dim: usize,
    gram: Matrix,
    roots: Vec<Vector>,
    label: Option<RootType>,
}

impl FinRootSystem {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Nonzero roots in sorted order.
    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    pub fn label(&self) -> Option<RootType> {
        self.label
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.roots.binary_search_by(|r| r.as_slice().cmp(v)).is_ok()
    }

    /// Validates and classifies a root set.
    pub fn from_roots(roots: &[Vector], gram: &Matrix) -> Result<Self, FinRootError> {
        let t = classify_finroot(roots, gram)?;
        let set: BTreeSet<Vector> = roots.iter().cloned().collect();
        Ok(FinRootSystem {
            dim: gram.rows(),
            gram: gram.clone(),
            roots: set.into_iter().collect(),
            label: Some(t),
        })
    }
}

fn form(g: &Matrix, a: &[Scalar], b: &[Scalar]) -> Scalar {
    g.bilinear(a, b)
}

/// `2 (beta, alpha) / (alpha, alpha)` when it is an integer.
pub fn cartan_integer(beta: &[Scalar], alpha: &[Scalar], gram: &Matrix) -> Option<i64> {
    let aa = form(gram, alpha, alpha);
    if aa.is_zero() {
        return None;
    }
    (Scalar::int(2) * form(gram, beta, alpha))
        .div(&aa)
        .ok()?
        .to_i64()
}

/// The reflection `beta - (beta, alpha^vee) alpha`.
pub fn reflect_fin(beta: &[Scalar], alpha: &[Scalar], gram: &Matrix) -> Vector {
    let aa = form(gram, alpha, alpha);
    let c = (Scalar::int(2) * form(gram, beta, alpha))
        .div(&aa)
        .expect("nonisotropic root");
    vec_sub(beta, &vec_scale(&c, alpha))
}

/// Simple-root Gram matrix of the reduced part; long roots have squared length 2.
fn simple_gram(family: Family, n: usize) -> Result<Matrix, FinRootError> {
    let bad = || FinRootError::InvalidType(family.to_string(), n);
    let ok = match family {
        Family::A => n >= 1,
        Family::B => n >= 2,
        Family::C => n >= 3,
        Family::D => n >= 4,
        Family::E => (6..=8).contains(&n),
        Family::F => n == 4,
        Family::G => n == 2,
        Family::BC => n >= 1,
    };
    if !ok || n > MAX_RANK {
        return Err(bad());
    }
    let mut g = Matrix::zeros(n, n);
    let link = |g: &mut Matrix, i: usize, j: usize, v: Scalar| {
        g.set(i, j, v.clone());
        g.set(j, i, v);
    };
    match family {
        Family::A | Family::D | Family::E => {
            for i in 0..n {
                g.set(i, i, Scalar::int(2));
            }
            let edges: Vec<(usize, usize)> = match family {
                Family::A => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
                Family::D => {
                    let mut e: Vec<(usize, usize)> = (0..n - 2).map(|i| (i, i + 1)).collect();
                    e.push((n - 3, n - 1));
                    e
                }
                _ => {
                    // 1-3-4-5-...-n with 2 attached to 4
                    let mut e = vec![(0, 2), (1, 3)];
                    e.extend((2..n - 1).map(|i| (i, i + 1)));
                    e
                }
            };
            for (i, j) in edges {
                link(&mut g, i, j, Scalar::int(-1));
            }
        }
        Family::B | Family::BC => {
            for i in 0..n {
                g.set(i, i, Scalar::int(if i + 1 == n { 1 } else { 2 }));
            }
            for i in 0..n.saturating_sub(1) {
                link(&mut g, i, i + 1, Scalar::int(-1));
            }
        }
        Family::C => {
            for i in 0..n {
                g.set(
                    i,
                    i,
                    if i + 1 == n {
                        Scalar::int(2)
                    } else {
                        Scalar::one()
                    },
                );
            }
            for i in 0..n - 2 {
                link(&mut g, i, i + 1, Scalar::frac(-1, 2));
            }
            link(&mut g, n - 2, n - 1, Scalar::int(-1));
        }
        Family::F => {
            g.set(0, 0, Scalar::int(2));
            g.set(1, 1, Scalar::int(2));
            g.set(2, 2, Scalar::one());
            g.set(3, 3, Scalar::one());
            link(&mut g, 0, 1, Scalar::int(-1));
            link(&mut g, 1, 2, Scalar::int(-1));
            link(&mut g, 2, 3, Scalar::frac(-1, 2));
        }
        Family::G => {
            g.set(0, 0, Scalar::frac(2, 3));
            g.set(1, 1, Scalar::int(2));
            link(&mut g, 0, 1, Scalar::int(-1));
        }
    }
    Ok(g)
}

/// Closure of `seeds` under the reflections in `seeds` and their negatives.
fn reflection_closure(seeds: &[Vector], gram: &Matrix) -> BTreeSet<Vector> {
    let mut all: BTreeSet<Vector> = BTreeSet::new();
    let mut frontier: Vec<Vector> = Vec::new();
    for s in seeds {
        for v in [s.clone(), vec_scale(&Scalar::int(-1), s)] {
            if all.insert(v.clone()) {
                frontier.push(v);
            }
        }
    }
    while let Some(b) = frontier.pop() {
        for a in seeds {
            let w = reflect_fin(&b, a, gram);
            if all.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    all
}

/// Standard realization in simple-root coordinates.
pub fn build_finroot(family: Family, rank: usize) -> Result<FinRootSystem, FinRootError> {
    let gram = simple_gram(family, rank)?;
    let simple: Vec<Vector> = (0..rank).map(|i| unit_vec(rank, i)).collect();
    let mut roots = reflection_closure(&simple, &gram);
    if family == Family::BC {
        let short: Vec<Vector> = roots
            .iter()
            .filter(|r| form(&gram, r, r).is_one())
            .cloned()
            .collect();
        for s in short {
            roots.insert(vec_scale(&Scalar::int(2), &s));
        }
    }
    Ok(FinRootSystem {
        dim: rank,
        gram,
        roots: roots.into_iter().collect(),
        label: Some(RootType { family, rank }),
    })
}

/// Nonzero roots `a` with `a / 2` not a root.
pub fn indivisible(f: &FinRootSystem) -> Vec<Vector> {
    let half = Scalar::frac(1, 2);
    f.roots
        .iter()
        .filter(|r| !f.contains(&vec_scale(&half, r)))
        .cloned()
        .collect()
}

fn validate(roots: &[Vector], gram: &Matrix) -> Result<BTreeSet<Vector>, FinRootError> {
    let dim = gram.rows();
    let bad = |s: String| Err(FinRootError::NotARootSystem(s));
    if !gram.is_symmetric() {
        return bad("form is not symmetric".into());
    }
    let set: BTreeSet<Vector> = roots.iter().cloned().collect();
    if set.is_empty() {
        return bad("no roots".into());
    }
    for r in &set {
        if r.len() != dim {
            return bad(format!("root {} has wrong dimension", fmt_vec(r)));
        }
        if form(gram, r, r).signum() != Some(std::cmp::Ordering::Greater) {
            return bad(format!("root {} does not have positive length", fmt_vec(r)));
        }
        if !set.contains(&vec_scale(&Scalar::int(-1), r)) {
            return bad(format!("negative of {} missing", fmt_vec(r)));
        }
    }
    for a in &set {
        for b in &set {
            match cartan_integer(b, a, gram) {
                Some(c) if (-4..=4).contains(&c) => {}
                _ => {
                    return bad(format!(
                        "Cartan number of {} against {} is not an integer in [-4, 4]",
                        fmt_vec(b),
                        fmt_vec(a)
                    ))
                }
            }
            let w = reflect_fin(b, a, gram);
            if !set.contains(&w) {
                return bad(format!(
                    "reflection of {} in {} gives {} outside the set",
                    fmt_vec(b),
                    fmt_vec(a),
                    fmt_vec(&w)
                ));
            }
        }
    }
    Ok(set)
}

/// Generic functional `(1, t, t^2, ...)` with `t` increased until no root is in its kernel.
fn generic_functional(set: &BTreeSet<Vector>, dim: usize) -> Vector {
    let mut t = 2i64;
    loop {
        let f: Vector = (0..dim).map(|i| Scalar::int(t).pow(i as u64)).collect();
        if set.iter().all(|r| !dot(&f, r).is_zero()) {
            return f;
        }
        t += 1;
    }
}

/// Simple roots with respect to a deterministic generic functional.
pub fn simple_roots(roots: &[Vector], gram: &Matrix) -> Result<Vec<Vector>, FinRootError> {
    let set = validate(roots, gram)?;
    Ok(base_of(&set, gram.rows()))
}

fn base_of(set: &BTreeSet<Vector>, dim: usize) -> Vec<Vector> {
    let f = generic_functional(set, dim);
    let positive: Vec<&Vector> = set
        .iter()
        .filter(|r| dot(&f, r).signum() == Some(std::cmp::Ordering::Greater))
        .collect();
    let pos_set: BTreeSet<&Vector> = positive.iter().copied().collect();
    positive
        .iter()
        .filter(|r| !positive.iter().any(|a| pos_set.contains(&vec_sub(r, a))))
        .map(|r| (*r).clone())
        .collect()
}

/// Identifies the isomorphism type of an irreducible finite root system.
pub fn classify_finroot(roots: &[Vector], gram: &Matrix) -> Result<RootType, FinRootError> {
    let set = validate(roots, gram)?;
    let base = base_of(&set, gram.rows());
    let r = base.len();
    // connectivity of the base
    let mut seen = vec![false; r];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..r {
            if !seen[j] && !form(gram, &base[i], &base[j]).is_zero() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(FinRootError::Reducible);
    }
    let n = set.len();
    let reduced = set
        .iter()
        .all(|a| !set.contains(&vec_scale(&Scalar::int(2), a)));
    let reduced_part: Vec<&Vector> = set
        .iter()
        .filter(|a| !set.contains(&vec_scale(&Scalar::frac(1, 2), a)))
        .collect();
    let max_len = reduced_part
        .iter()
        .map(|a| form(gram, a, a))
        .max()
        .expect("nonempty");
    let min_len = reduced_part
        .iter()
        .map(|a| form(gram, a, a))
        .min()
        .expect("nonempty");
    let long = reduced_part
        .iter()
        .filter(|a| form(gram, a, a) == max_len)
        .count();
    let ratio = max_len.div(&min_len).expect("positive").to_i64();
    let candidates: Vec<RootType> = if !reduced {
        vec![RootType {
            family: Family::BC,
            rank: r,
        }]
    } else {
        match ratio {
            Some(1) => vec![
                RootType {
                    family: Family::A,
                    rank: r,
                },
                RootType {
                    family: Family::D,
                    rank: r,
                },
                RootType {
                    family: Family::E,
                    rank: r,
                },
            ],
            Some(2) => vec![
                RootType {
                    family: Family::B,
                    rank: r,
                },
                RootType {
                    family: Family::C,
                    rank: r,
                },
                RootType {
                    family: Family::F,
                    rank: r,
                },
            ],
            Some(3) => vec![RootType {
                family: Family::G,
                rank: r,
            }],
            _ => vec![],
        }
    };
    for t in candidates {
        let Ok(model) = build_finroot(t.family, t.rank) else {
            continue;
        };
        let m_long = {
            let red: Vec<&Vector> = model
                .roots
                .iter()
                .filter(|a| !model.contains(&vec_scale(&Scalar::frac(1, 2), a)))
                .collect();
            let ml = red
                .iter()
                .map(|a| form(&model.gram, a, a))
                .max()
                .expect("nonempty");
            red.iter().filter(|a| form(&model.gram, a, a) == ml).count()
        };
        if model.roots.len() == n && m_long == long {
            // the base must regenerate the whole set
            let mut closure = reflection_closure(&base, gram);
            if !reduced {
                let doubles: Vec<Vector> = closure
                    .iter()
                    .filter(|a| form(gram, a, a) == min_len)
                    .map(|a| vec_scale(&Scalar::int(2), a))
                    .collect();
                closure.extend(doubles);
            }
            if closure != set {
                return Err(FinRootError::NotARootSystem(
                    "base does not regenerate the root set".into(),
                ));
            }
            return Ok(t);
        }
    }
    Err(FinRootError::NotARootSystem(format!(
        "no irreducible type with rank {} and {} roots",
        r, n
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    #[test]
    fn build_examples() {
        let a1 = build_finroot(Family::A, 1).unwrap();
        assert_eq!(a1.roots().len(), 2);
        assert_eq!(a1.gram().get(0, 0), &Scalar::int(2));
        let bc1 = build_finroot(Family::BC, 1).unwrap();
        assert_eq!(
            bc1.roots(),
            &[int_vec(&[-2]), int_vec(&[-1]), int_vec(&[1]), int_vec(&[2])]
        );
        let a2 = build_finroot(Family::A, 2).unwrap();
        assert_eq!(a2.roots().len(), 6);
        assert_eq!(
            cartan_integer(&int_vec(&[1, 0]), &int_vec(&[0, 1]), a2.gram()),
            Some(-1)
        );
        assert!(build_finroot(Family::G, 3).is_err());
        assert!(build_finroot(Family::D, 3).is_err());
    }

    #[test]
    fn root_counts() {
        let expect = [
            (Family::B, 3, 18),
            (Family::C, 3, 18),
            (Family::D, 4, 24),
            (Family::E, 6, 72),
            (Family::E, 7, 126),
            (Family::F, 4, 48),
            (Family::G, 2, 12),
            (Family::BC, 2, 12),
        ];
        for (f, r, n) in expect {
            assert_eq!(build_finroot(f, r).unwrap().roots().len(), n, "{}{}", f, r);
        }
    }

    #[test]
    fn classify_examples() {
        let g = Matrix::from_i64(1, 1, &[2]);
        let t = classify_finroot(&[int_vec(&[1]), int_vec(&[-1])], &g).unwrap();
        assert_eq!(
            t,
            RootType {
                family: Family::A,
                rank: 1
            }
        );
        let t = classify_finroot(
            &[int_vec(&[1]), int_vec(&[-1]), int_vec(&[2]), int_vec(&[-2])],
            &g,
        )
        .unwrap();
        assert_eq!(
            t,
            RootType {
                family: Family::BC,
                rank: 1
            }
        );
        let b2 = build_finroot(Family::B, 2).unwrap();
        assert_eq!(
            classify_finroot(b2.roots(), b2.gram()).unwrap(),
            RootType {
                family: Family::B,
                rank: 2
            }
        );
        let err = classify_finroot(&[int_vec(&[1]), int_vec(&[-1]), int_vec(&[3])], &g);
        assert!(matches!(err, Err(FinRootError::NotARootSystem(_))));
    }

    #[test]
    fn indivisible_examples() {
        assert_eq!(indivisible(&build_finroot(Family::A, 1).unwrap()).len(), 2);
        assert_eq!(
            indivisible(&build_finroot(Family::BC, 1).unwrap()),
            vec![int_vec(&[-1]), int_vec(&[1])]
        );
        assert_eq!(indivisible(&build_finroot(Family::B, 2).unwrap()).len(), 8);
    }

    #[test]
    fn reflection_examples() {
        let a2 = build_finroot(Family::A, 2).unwrap();
        let (a, b) = (int_vec(&[1, 0]), int_vec(&[0, 1]));
        assert_eq!(reflect_fin(&a, &a, a2.gram()), int_vec(&[-1, 0]));
        assert_eq!(reflect_fin(&b, &a, a2.gram()), int_vec(&[1, 1]));
        let g = Matrix::from_i64(2, 2, &[2, 0, 0, 2]);
        assert_eq!(reflect_fin(&b, &a, &g), b);
    }
}
