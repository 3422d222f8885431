//! Integer lattices in `Z^n` and finite unions of cosets of a lattice.

use std::fmt;

use thiserror::Error;

use crate::linalg::{hermite_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("moduli span different subspaces; the result is not a finite union of cosets")]
    IncompatibleModuli,
}

/// A lattice given by its canonical (Hermite normal form) basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntLattice {
    ambient: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| fmt_int_vec(r)).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

pub fn fmt_int_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl IntLattice {
    /// The lattice generated by `gens`.
    pub fn from_generators(ambient: usize, gens: &[Vec<i64>]) -> Self {
        if gens.is_empty() || ambient == 0 {
            return IntLattice::zero(ambient);
        }
        let (h, _) = hermite_normal_form(&IntMatrix::from_rows(gens, ambient));
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for r in h.row_vecs() {
            if let Some(p) = r.iter().position(|&x| x != 0) {
                pivots.push(p);
                rows.push(r);
            }
        }
        IntLattice {
            ambient,
            rows,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        IntLattice {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let gens: Vec<Vec<i64>> = (0..ambient).map(|i| unit(ambient, i)).collect();
        IntLattice::from_generators(ambient, &gens)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.rows, self.ambient)
    }

    /// Canonical representative of `x` modulo the lattice.
    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        let mut v = x.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let q = v[p].div_euclid(row[p]);
            if q != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= q * b;
                }
            }
        }
        v
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }

    /// Integer coordinates of `x` in the canonical basis.
    pub fn coordinates(&self, x: &[i64]) -> Option<Vec<i64>> {
        let mut v = x.to_vec();
        let mut out = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p] % row[p] != 0 {
                return None;
            }
            let q = v[p] / row[p];
            for (a, b) in v.iter_mut().zip(row) {
                *a -= q * b;
            }
            out.push(q);
        }
        v.iter().all(|&a| a == 0).then_some(out)
    }

    pub fn sum(&self, other: &IntLattice) -> IntLattice {
        let mut gens = self.rows.clone();
        gens.extend(other.rows.iter().cloned());
        IntLattice::from_generators(self.ambient, &gens)
    }

    pub fn intersect(&self, other: &IntLattice) -> IntLattice {
        let n = self.ambient;
        if self.rank() == 0 || other.rank() == 0 {
            return IntLattice::zero(n);
        }
        let mut gens = Vec::new();
        for r in &self.rows {
            let mut g = r.clone();
            g.extend_from_slice(r);
            gens.push(g);
        }
        for r in &other.rows {
            let mut g = r.clone();
            g.extend(std::iter::repeat_n(0, n));
            gens.push(g);
        }
        let (h, _) = hermite_normal_form(&IntMatrix::from_rows(&gens, 2 * n));
        let inter: Vec<Vec<i64>> = h
            .row_vecs()
            .into_iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        IntLattice::from_generators(n, &inter)
    }

    pub fn scale(&self, k: i64) -> IntLattice {
        let gens: Vec<Vec<i64>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| k * x).collect())
            .collect();
        IntLattice::from_generators(self.ambient, &gens)
    }

    pub fn contains_lattice(&self, other: &IntLattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// True when both lattices span the same rational subspace.
    pub fn same_span(&self, other: &IntLattice) -> bool {
        let s = self.sum(other);
        s.rank() == self.rank() && s.rank() == other.rank()
    }

    /// Representatives of `self / sub`, where `sub` is a sublattice of finite index.
    pub fn coset_reps(&self, sub: &IntLattice) -> Vec<Vec<i64>> {
        assert_eq!(self.rank(), sub.rank(), "sublattice must have finite index");
        let r = self.rank();
        if r == 0 {
            return vec![vec![0; self.ambient]];
        }
        let coords: Vec<Vec<i64>> = sub
            .rows
            .iter()
            .map(|row| self.coordinates(row).expect("sub is contained in self"))
            .collect();
        let (h, _) = hermite_normal_form(&IntMatrix::from_rows(&coords, r));
        let diag: Vec<i64> = (0..r).map(|i| h.get(i, i)).collect();
        let mut reps = Vec::new();
        let mut digits = vec![0i64; r];
        loop {
            let mut v = vec![0i64; self.ambient];
            for (d, row) in digits.iter().zip(&self.rows) {
                for (a, b) in v.iter_mut().zip(row) {
                    *a += d * b;
                }
            }
            reps.push(v);
            let mut i = 0;
            loop {
                if i == r {
                    return reps;
                }
                digits[i] += 1;
                if digits[i] < diag[i] {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// Index of `sub` in `self` (same rank required).
    pub fn index_of(&self, sub: &IntLattice) -> u64 {
        self.coset_reps(sub).len() as u64
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A finite union of cosets `r + M` of one lattice `M`, stored canonically:
/// `M` is the full translation stabilizer of the set and residues are reduced
/// and sorted, so structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetUnion {
    ambient: usize,
    modulus: IntLattice,
    residues: Vec<Vec<i64>>,
}

impl fmt::Debug for CosetUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CosetUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.is_empty() {
            return write!(f, "empty");
        }
        let res: Vec<String> = self.residues.iter().map(|r| fmt_int_vec(r)).collect();
        write!(f, "{{{}}} + {}", res.join(", "), self.modulus)
    }
}

impl CosetUnion {
    pub fn new(modulus: IntLattice, residues: Vec<Vec<i64>>) -> Self {
        let ambient = modulus.ambient();
        for r in &residues {
            assert_eq!(r.len(), ambient, "residue dimension");
        }
        let mut cu = CosetUnion {
            ambient,
            modulus,
            residues,
        };
        cu.canonicalize();
        cu
    }

    pub fn empty(ambient: usize) -> Self {
        CosetUnion {
            ambient,
            modulus: IntLattice::zero(ambient),
            residues: Vec::new(),
        }
    }

    pub fn lattice(l: IntLattice) -> Self {
        let ambient = l.ambient();
        CosetUnion {
            ambient,
            modulus: l,
            residues: vec![vec![0; ambient]],
        }
    }

    /// A finite set of points.
    pub fn points(ambient: usize, pts: Vec<Vec<i64>>) -> Self {
        CosetUnion::new(IntLattice::zero(ambient), pts)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn modulus(&self) -> &IntLattice {
        &self.modulus
    }

    pub fn residues(&self) -> &[Vec<i64>] {
        &self.residues
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    fn canonicalize(&mut self) {
        if self.residues.is_empty() {
            self.modulus = IntLattice::zero(self.ambient);
            return;
        }
        self.reduce_residues();
        // coarsen to the full stabilizer of the set
        let base = self.residues[0].clone();
        let mut periods = Vec::new();
        for r in &self.residues[1..] {
            let v = sub(r, &base);
            let good = self.residues.iter().all(|s| {
                self.residues
                    .binary_search(&self.modulus.reduce(&add(s, &v)))
                    .is_ok()
            });
            if good {
                periods.push(v);
            }
        }
        if !periods.is_empty() {
            let mut gens = self.modulus.basis().to_vec();
            gens.extend(periods);
            self.modulus = IntLattice::from_generators(self.ambient, &gens);
            self.reduce_residues();
        }
    }

    fn reduce_residues(&mut self) {
        let m = &self.modulus;
        let mut res: Vec<Vec<i64>> = self.residues.iter().map(|r| m.reduce(r)).collect();
        res.sort();
        res.dedup();
        self.residues = res;
    }

    fn check_dim(&self, n: usize) -> Result<(), LatticeError> {
        if n == self.ambient {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch {
                expected: self.ambient,
                got: n,
            })
        }
    }

    pub fn member(&self, x: &[i64]) -> Result<bool, LatticeError> {
        self.check_dim(x.len())?;
        Ok(self.contains(x))
    }

    /// Membership without the dimension check.
    pub fn contains(&self, x: &[i64]) -> bool {
        !self.residues.is_empty() && self.residues.binary_search(&self.modulus.reduce(x)).is_ok()
    }

    pub fn minkowski(&self, other: &CosetUnion) -> Result<CosetUnion, LatticeError> {
        self.check_dim(other.ambient)?;
        if self.is_empty() || other.is_empty() {
            return Ok(CosetUnion::empty(self.ambient));
        }
        let m = self.modulus.sum(&other.modulus);
        let mut res = Vec::with_capacity(self.residues.len() * other.residues.len());
        for a in &self.residues {
            for b in &other.residues {
                res.push(add(a, b));
            }
        }
        Ok(CosetUnion::new(m, res))
    }

    pub fn negate(&self) -> CosetUnion {
        let res = self
            .residues
            .iter()
            .map(|r| r.iter().map(|x| -x).collect())
            .collect();
        CosetUnion::new(self.modulus.clone(), res)
    }

    pub fn scale(&self, k: i64) -> CosetUnion {
        let res = self
            .residues
            .iter()
            .map(|r| r.iter().map(|x| k * x).collect())
            .collect();
        CosetUnion::new(self.modulus.scale(k), res)
    }

    pub fn translate(&self, v: &[i64]) -> CosetUnion {
        let res = self.residues.iter().map(|r| add(r, v)).collect();
        CosetUnion::new(self.modulus.clone(), res)
    }

    /// Cosets of the finite-index sublattice `sub` making up the same set.
    fn refined_residues(&self, sub: &IntLattice) -> Vec<Vec<i64>> {
        let reps = self.modulus.coset_reps(sub);
        let mut out = Vec::with_capacity(self.residues.len() * reps.len());
        for r in &self.residues {
            for t in &reps {
                out.push(sub.reduce(&add(r, t)));
            }
        }
        out
    }

    pub fn intersect(&self, other: &CosetUnion) -> Result<CosetUnion, LatticeError> {
        self.check_dim(other.ambient)?;
        let n = self.ambient;
        if self.is_empty() || other.is_empty() {
            return Ok(CosetUnion::empty(n));
        }
        let m = self.modulus.intersect(&other.modulus);
        // express differences through the sum lattice: U * [B1; B2] = H
        let b1 = self.modulus.basis();
        let b2 = other.modulus.basis();
        let mut stacked = b1.to_vec();
        stacked.extend(b2.iter().cloned());
        let res = if stacked.is_empty() {
            self.residues
                .iter()
                .filter(|r| other.residues.binary_search(r).is_ok())
                .cloned()
                .collect()
        } else {
            let (h, u) = hermite_normal_form(&IntMatrix::from_rows(&stacked, n));
            let sum = IntLattice::from_generators(n, &stacked);
            let hrows: Vec<Vec<i64>> = h.row_vecs().into_iter().take(sum.rank()).collect();
            let mut res = Vec::new();
            for r in &self.residues {
                for s in &other.residues {
                    let diff = sub(s, r);
                    let Some(c) = sum.coordinates(&diff) else {
                        continue;
                    };
                    debug_assert_eq!(hrows.len(), c.len());
                    // diff = c * H = (c * U) * [B1; B2]
                    let mut a = vec![0i64; stacked.len()];
                    for (ci, urow) in c.iter().zip(0..) {
                        for (k, ak) in a.iter_mut().enumerate() {
                            *ak += ci * u.get(urow, k);
                        }
                    }
                    let mut x = r.clone();
                    for (ak, brow) in a.iter().take(b1.len()).zip(b1) {
                        for (xi, bi) in x.iter_mut().zip(brow) {
                            *xi += ak * bi;
                        }
                    }
                    debug_assert!(self.contains(&x) && other.contains(&x));
                    res.push(x);
                }
            }
            res
        };
        Ok(CosetUnion::new(m, res))
    }

    pub fn union(&self, other: &CosetUnion) -> Result<CosetUnion, LatticeError> {
        self.check_dim(other.ambient)?;
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        if !self.modulus.same_span(&other.modulus) {
            return Err(LatticeError::IncompatibleModuli);
        }
        let m = self.modulus.intersect(&other.modulus);
        let mut res = self.refined_residues(&m);
        res.extend(other.refined_residues(&m));
        Ok(CosetUnion::new(m, res))
    }

    pub fn setminus(&self, other: &CosetUnion) -> Result<CosetUnion, LatticeError> {
        self.check_dim(other.ambient)?;
        if self.is_empty() || other.is_empty() {
            return Ok(self.clone());
        }
        let m = self.modulus.intersect(&other.modulus);
        if m.rank() < self.modulus.rank() {
            return if self.intersect(other)?.is_empty() {
                Ok(self.clone())
            } else {
                Err(LatticeError::IncompatibleModuli)
            };
        }
        let res = self
            .refined_residues(&m)
            .into_iter()
            .filter(|t| !other.contains(t))
            .collect();
        Ok(CosetUnion::new(m, res))
    }

    pub fn subset(&self, other: &CosetUnion) -> Result<bool, LatticeError> {
        self.check_dim(other.ambient)?;
        if self.is_empty() {
            return Ok(true);
        }
        if other.is_empty() {
            return Ok(false);
        }
        let m = self.modulus.intersect(&other.modulus);
        if m.rank() < self.modulus.rank() {
            return Ok(false);
        }
        Ok(self.refined_residues(&m).iter().all(|t| other.contains(t)))
    }

    pub fn equals(&self, other: &CosetUnion) -> Result<bool, LatticeError> {
        self.check_dim(other.ambient)?;
        Ok(self == other)
    }

    /// `0 in A`, `-A = A` and `A + 2A` contained in `A`.
    pub fn is_semilattice(&self) -> bool {
        if !self.contains(&vec![0; self.ambient]) || self.negate() != *self {
            return false;
        }
        let twice = self.scale(2);
        match self.minkowski(&twice) {
            Ok(s) => s.subset(self).unwrap_or(false),
            Err(_) => false,
        }
    }

    /// Smallest lattice containing the set.
    pub fn zspan(&self) -> IntLattice {
        let mut gens = self.modulus.basis().to_vec();
        gens.extend(self.residues.iter().cloned());
        IntLattice::from_generators(self.ambient, &gens)
    }

    /// All members in the box `lo[i] <= x[i] <= hi[i]`, in lexicographic order.
    pub fn enumerate_window(&self, bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
        assert_eq!(bounds.len(), self.ambient, "window dimension");
        let mut out = Vec::new();
        if self.is_empty() || bounds.iter().any(|(lo, hi)| lo > hi) {
            return out;
        }
        let mut x: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        loop {
            if self.contains(&x) {
                out.push(x.clone());
            }
            let mut i = self.ambient;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if x[i] < bounds[i].1 {
                    x[i] += 1;
                    break;
                }
                x[i] = bounds[i].0;
            }
        }
    }

    /// Product with a lattice in extra trailing coordinates.
    pub fn product_with(&self, extra: &IntLattice) -> CosetUnion {
        let n = self.ambient + extra.ambient();
        let mut gens: Vec<Vec<i64>> = self
            .modulus
            .basis()
            .iter()
            .map(|r| {
                let mut g = r.clone();
                g.extend(std::iter::repeat_n(0, extra.ambient()));
                g
            })
            .collect();
        for r in extra.basis() {
            let mut g = vec![0; self.ambient];
            g.extend_from_slice(r);
            gens.push(g);
        }
        let res = self
            .residues
            .iter()
            .map(|r| {
                let mut g = r.clone();
                g.extend(std::iter::repeat_n(0, extra.ambient()));
                g
            })
            .collect();
        CosetUnion::new(IntLattice::from_generators(n, &gens), res)
    }
}

/// Enumerates the integer box `[-w, w]^n` in lexicographic order.
pub fn box_points(n: usize, w: i64) -> Vec<Vec<i64>> {
    let bounds = vec![(-w, w); n];
    CosetUnion::lattice(IntLattice::full(n)).enumerate_window(&bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(n: usize) -> IntLattice {
        IntLattice::full(n)
    }

    fn s3() -> CosetUnion {
        let two = lam(3).scale(2);
        CosetUnion::new(
            two,
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        )
    }

    #[test]
    fn canonical_basis() {
        let l = IntLattice::from_generators(2, &[vec![4, 2], vec![6, 4]]);
        assert_eq!(l.basis(), &[vec![2, 0], vec![0, 2]]);
        assert_eq!(l.reduce(&[3, -1]), vec![1, 1]);
    }

    #[test]
    fn membership_examples() {
        let s = s3();
        assert!(s.member(&[1, 0, 0]).unwrap());
        assert!(!s.member(&[1, 1, 1]).unwrap());
        assert!(s.member(&[0, 0, 0]).unwrap());
        assert!(s.member(&[1, 2]).is_err());
    }

    #[test]
    fn minkowski_examples() {
        let ss = s3().minkowski(&s3()).unwrap();
        assert_eq!(ss.modulus(), &lam(3).scale(2));
        assert_eq!(ss.residues().len(), 7);
        let l = CosetUnion::lattice(lam(3));
        assert_eq!(l.minkowski(&l).unwrap(), l);
    }

    #[test]
    fn coarsening_makes_equal_sets_identical() {
        let all_classes = CosetUnion::new(
            lam(2).scale(2),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        );
        assert_eq!(all_classes, CosetUnion::lattice(lam(2)));
    }

    #[test]
    fn setminus_examples() {
        let l = CosetUnion::lattice(lam(3));
        let ss = s3().minkowski(&s3()).unwrap();
        let d = l.setminus(&ss).unwrap();
        assert_eq!(d, CosetUnion::new(lam(3).scale(2), vec![vec![1, 1, 1]]));
        let sig1 = CosetUnion::new(lam(3).scale(2), vec![vec![1, 0, 0]]);
        assert_eq!(s3().intersect(&sig1).unwrap(), sig1);
        let two = CosetUnion::lattice(lam(3).scale(2));
        assert_eq!(l.intersect(&two).unwrap(), two);
    }

    #[test]
    fn incompatible_moduli() {
        let line = CosetUnion::lattice(IntLattice::from_generators(2, &[vec![1, 0]]));
        let plane = CosetUnion::lattice(lam(2));
        assert_eq!(plane.setminus(&line), Err(LatticeError::IncompatibleModuli));
        assert_eq!(line.union(&plane), Err(LatticeError::IncompatibleModuli));
        assert_eq!(line.setminus(&plane).unwrap(), CosetUnion::empty(2));
        assert!(!plane.subset(&line).unwrap());
    }

    #[test]
    fn semilattice_examples() {
        assert!(s3().is_semilattice());
        assert!(CosetUnion::lattice(lam(2)).is_semilattice());
        let sig1 = CosetUnion::new(lam(3).scale(2), vec![vec![1, 0, 0]]);
        assert!(!sig1.is_semilattice());
    }

    #[test]
    fn zspan_and_window() {
        assert_eq!(s3().zspan(), lam(3));
        assert_eq!(
            CosetUnion::lattice(lam(3).scale(2)).zspan(),
            lam(3).scale(2)
        );
        let w = s3().enumerate_window(&[(-1, 1); 3]);
        assert_eq!(w.len(), 7);
        assert_eq!(
            CosetUnion::lattice(lam(3))
                .enumerate_window(&[(0, 1); 3])
                .len(),
            8
        );
        assert!(CosetUnion::empty(3)
            .enumerate_window(&[(0, 1); 3])
            .is_empty());
    }
}
