//! Exact scalars: rationals and elements of cyclotomic fields `Q(z_m)`.
//!
//! A [`Scalar`] is either a plain rational or a cyclotomic number stored as
//! its canonical residue modulo the `m`-th cyclotomic polynomial, always in the
//! smallest cyclotomic field that contains it. Structural equality is
//! therefore value equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Largest cyclotomic order accepted from user input.
pub const MAX_INPUT_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order {0} is not supported (1..={MAX_INPUT_ORDER})")]
    UnsupportedOrder(u32),
    #[error("bad scalar {0:?}")]
    BadScalar(String),
}

/// Element of `Q(z_m)` that is not rational, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients of `1, z, z^2, ...` (length is the degree of the field).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }
}

/// An exact scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Cyc(Cyclotomic),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn cyclo_cache() -> &'static Mutex<HashMap<u32, Vec<i64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of the `m`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1);
    if let Some(p) = cyclo_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every phi_d with d | m, d < m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let den = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &den);
        }
    }
    cyclo_cache().lock().unwrap().insert(m, num.clone());
    num
}

fn int_poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    let nq = rem.len() - dd;
    let mut q = vec![0i64; nq];
    for k in (0..nq).rev() {
        let c = rem[k + dd] / lead;
        q[k] = c;
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Euler's totient, the degree of `Q(z_m)`.
pub fn totient(m: u32) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

fn reduce_mod_phi(poly: &[Rational], m: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    let mut p: Vec<Rational> = poly.to_vec();
    while p.len() > deg {
        let c = p.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let shift = p.len() - deg;
        // phi is monic: x^deg = -(phi_0 + ... + phi_{deg-1} x^{deg-1})
        for (j, pj) in phi.iter().take(deg).enumerate() {
            if *pj != 0 {
                p[shift + j] -= &c * rat_int(*pj);
            }
        }
    }
    p.resize(deg, Rational::zero());
    p
}

/// Canonical value of `sum poly[k] z_m^k`.
pub fn cyclo_normalize(poly: &[Rational], m: u32) -> Scalar {
    assert!(m >= 1, "cyclotomic order must be positive");
    let coeffs = reduce_mod_phi(poly, m);
    if coeffs.iter().skip(1).all(Zero::is_zero) {
        return Scalar::Rat(coeffs.into_iter().next().unwrap_or_else(Rational::zero));
    }
    if m % 4 == 2 {
        // z_{2k} = -z_k^{(k+1)/2} for odd k
        let k = m / 2;
        let e = k.div_ceil(2) as usize;
        let mut out = vec![Rational::zero(); coeffs.len() * e + 1];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = if j % 2 == 1 { -c.clone() } else { c.clone() };
            out[j * e] += v;
        }
        return cyclo_normalize(&out, k);
    }
    for d in 2..m {
        if !m.is_multiple_of(d) || d % 4 == 2 {
            continue;
        }
        if let Some(sub) = descend(&coeffs, m, d) {
            return cyclo_normalize(&sub, d);
        }
    }
    Scalar::Cyc(Cyclotomic { order: m, coeffs })
}

/// Coordinates of `x` in `Q(z_d)` inside `Q(z_m)`, when it lies there.
fn descend(x: &[Rational], m: u32, d: u32) -> Option<Vec<Rational>> {
    let step = (m / d) as usize;
    let fd = totient(d);
    let n = x.len();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(fd);
    for j in 0..fd {
        let mut mono = vec![Rational::zero(); j * step + 1];
        mono[j * step] = Rational::one();
        cols.push(reduce_mod_phi(&mono, m));
    }
    // augmented system: sum_j y_j cols[j] = x
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(x[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..fd {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..=fd {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[fd].is_zero()) {
        return None;
    }
    let mut y = vec![Rational::zero(); fd];
    for (i, &c) in pivots.iter().enumerate() {
        y[c] = a[i][fd].clone();
    }
    Some(y)
}

fn embed(s: &Scalar, target: u32) -> Vec<Rational> {
    match s {
        Scalar::Rat(r) => vec![r.clone()],
        Scalar::Cyc(c) => {
            let step = (target / c.order) as usize;
            let mut out = vec![Rational::zero(); (c.coeffs.len() - 1) * step + 1];
            for (j, v) in c.coeffs.iter().enumerate() {
                out[j * step] = v.clone();
            }
            out
        }
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    if rem.len() <= db {
        return (vec![Rational::zero()], rem);
    }
    let mut q = vec![Rational::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = &rem[k + db] / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    rem.truncate(db.max(1));
    trim(&mut rem);
    (q, rem)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Multiplicative inverse.
pub fn cyclo_invert(a: &Scalar) -> Result<Scalar, FieldError> {
    match a {
        Scalar::Rat(r) => {
            if r.is_zero() {
                Err(FieldError::DivisionByZero)
            } else {
                Ok(Scalar::Rat(r.recip()))
            }
        }
        Scalar::Cyc(c) => {
            let phi: Vec<Rational> = cyclotomic_polynomial(c.order)
                .iter()
                .map(|&v| rat_int(v))
                .collect();
            // extended Euclid: s*a + t*phi = g
            let (mut r0, mut r1) = (phi, c.coeffs.clone());
            trim(&mut r1);
            let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
            while !is_zero_poly(&r1) {
                let (q, r) = poly_divrem(&r0, &r1);
                let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
                r0 = std::mem::replace(&mut r1, r);
                s0 = std::mem::replace(&mut s1, s2);
            }
            // r0 is a nonzero constant since phi is irreducible
            let g = r0[0].clone();
            let s: Vec<Rational> = s0.iter().map(|v| v / &g).collect();
            Ok(cyclo_normalize(&s, c.order))
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(rat_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::Rat(rat(n, d))
    }

    /// The canonical primitive `m`-th root of unity.
    pub fn zeta(m: u32) -> Self {
        let mut p = vec![Rational::zero(); 2];
        p[1] = Rational::one();
        cyclo_normalize(&p, m)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Cyc(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    /// Integer value, if this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rat(r) if r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        }
    }

    /// Sign of a rational scalar.
    pub fn signum(&self) -> Option<Ordering> {
        self.as_rational().map(|r| r.cmp(&Rational::zero()))
    }

    /// Order of the smallest cyclotomic field containing the value.
    pub fn order(&self) -> u32 {
        match self {
            Scalar::Rat(_) => 1,
            Scalar::Cyc(c) => c.order,
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        cyclo_invert(self)
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn combine(
        &self,
        other: &Scalar,
        f: impl Fn(&[Rational], &[Rational]) -> Vec<Rational>,
    ) -> Scalar {
        let m = self.order().lcm(&other.order());
        let a = embed(self, m);
        let b = embed(other, m);
        cyclo_normalize(&f(&a, &b), m)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (self, rhs) {
            return Scalar::Rat(a + b);
        }
        self.combine(rhs, |a, b| {
            let mut out = vec![Rational::zero(); a.len().max(b.len())];
            for (i, x) in a.iter().enumerate() {
                out[i] += x;
            }
            for (i, x) in b.iter().enumerate() {
                out[i] += x;
            }
            out
        })
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (self, rhs) {
            return Scalar::Rat(a - b);
        }
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (self, rhs) {
            return Scalar::Rat(a * b);
        }
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        self.combine(rhs, poly_mul)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Cyc(c) => Scalar::Cyc(Cyclotomic {
                order: c.order,
                coeffs: c.coeffs.iter().map(|v| -v).collect(),
            }),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order on rationals; a fixed structural order otherwise
/// (rationals first, then by field order and coefficients).
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Rat(_), Scalar::Cyc(_)) => Ordering::Less,
            (Scalar::Cyc(_), Scalar::Rat(_)) => Ordering::Greater,
            (Scalar::Cyc(a), Scalar::Cyc(b)) => a.cmp(b),
        }
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_rational(r)),
            Scalar::Cyc(c) => {
                let mut first = true;
                for (j, v) in c.coeffs.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    let var = match j {
                        0 => String::new(),
                        1 => format!("z{}", c.order),
                        _ => format!("z{}^{}", c.order, j),
                    };
                    if j == 0 {
                        write!(f, "{}", fmt_rational(v))?;
                    } else if v.is_one() {
                        write!(f, "{var}")?;
                    } else if (-v).is_one() {
                        write!(f, "-{var}")?;
                    } else {
                        write!(f, "{}*{var}", fmt_rational(v))?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Parses `"p"`, `"p/q"` or sums of terms `c*zM^k` such as `"1/2 - z4"` or
/// `"-1 + 2*z3^2"`. Orders above [`MAX_INPUT_ORDER`] are rejected.
pub fn parse_scalar(text: &str) -> Result<Scalar, FieldError> {
    let bad = || FieldError::BadScalar(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        if (ch == '+' || ch == '-')
            && !(cur.ends_with('*') || cur.ends_with('^') || cur.ends_with('/'))
        {
            if cur.is_empty() {
                if ch == '-' {
                    neg = !neg;
                }
                continue;
            }
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(bad());
    }
    terms.push((neg, cur));
    let mut total = Scalar::zero();
    for (neg, t) in terms {
        let mut v = parse_term(&t).ok_or_else(bad)??;
        if neg {
            v = -v;
        }
        total = &total + &v;
    }
    Ok(total)
}

fn parse_rational(t: &str) -> Option<Result<Rational, FieldError>> {
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return Some(Err(FieldError::BadScalar(t.to_string())));
    }
    Some(Ok(Rational::new(n, d)))
}

fn parse_term(t: &str) -> Option<Result<Scalar, FieldError>> {
    let (coef, var) = match t.find('z') {
        None => (t, None),
        Some(pos) => {
            let c = t[..pos].trim_end_matches('*');
            (c, Some(&t[pos + 1..]))
        }
    };
    let c = if coef.is_empty() {
        Rational::one()
    } else {
        match parse_rational(coef)? {
            Ok(r) => r,
            Err(e) => return Some(Err(e)),
        }
    };
    let Some(var) = var else {
        return Some(Ok(Scalar::Rat(c)));
    };
    let (m, k) = match var.split_once('^') {
        Some((m, k)) => (m.parse::<u32>().ok()?, k.parse::<u64>().ok()?),
        None => (var.parse::<u32>().ok()?, 1),
    };
    if m == 0 || m > MAX_INPUT_ORDER {
        return Some(Err(FieldError::UnsupportedOrder(m)));
    }
    Some(Ok(&Scalar::Rat(c) * &Scalar::zeta(m).pow(k)))
}

/// Sign of a rational, as -1, 0 or 1.
pub fn rat_sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32) -> Scalar {
        Scalar::zeta(m)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(9), 6);
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(z(2), Scalar::int(-1));
        assert_eq!(&z(4) * &z(4), Scalar::int(-1));
        let expect = &Scalar::int(-1) - &z(3);
        assert_eq!(&z(3) * &z(3), expect);
        // z6 lives in Q(z3)
        assert_eq!(z(6).order(), 3);
        // z12^3 = z4
        assert_eq!(z(12).pow(3), z(4));
        assert_eq!(z(12).pow(4), z(3));
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(Scalar::frac(1, 2).inv().unwrap(), Scalar::int(2));
        assert_eq!(z(4).inv().unwrap(), -z(4));
        let a = &Scalar::one() + &z(3);
        assert_eq!(a.inv().unwrap(), -z(3));
        assert_eq!(Scalar::zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(parse_scalar("3/6").unwrap(), Scalar::frac(1, 2));
        assert_eq!(
            parse_scalar("-1 + 2*z3^2").unwrap(),
            Scalar::int(-3) - Scalar::int(2) * z(3)
        );
        assert!(matches!(parse_scalar("1/0"), Err(FieldError::BadScalar(_))));
        assert!(matches!(
            parse_scalar("z13"),
            Err(FieldError::UnsupportedOrder(13))
        ));
        assert!(parse_scalar("abc").is_err());
        let v = &Scalar::frac(1, 2) - &z(12);
        let shown = v.to_string();
        assert_eq!(parse_scalar(&shown).unwrap(), v);
        assert_eq!(Scalar::frac(-3, 4).to_string(), "-3/4");
    }
}
