//! Real numbers of the form `p + q·√D` with `p, q` rational and `D` a
//! squarefree natural number.
//!
//! Comparison works across different radicands: the sign of
//! `α + β√D₁ + γ√D₂` is decided by case analysis on the signs of the
//! summands and, when they disagree, by comparing squares.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::fmt_exact;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadReal {
    p: Q,
    q: Q,
    /// Squarefree and at least 2, or 0 when `q = 0`.
    d: BigInt,
}

/// Splits a positive integer as `s²·D` with `D` squarefree.
///
/// Trial division up to `10⁵`, then a perfect-square test on the cofactor.
/// Exact for inputs below `10¹⁵`; larger inputs have their small square
/// factors removed and may keep a large one.
pub fn squarefree_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "squarefree_part of a nonpositive integer");
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(100_000);
    while p <= limit && &p * &p <= rest {
        let pp = &p * &p;
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            s *= &p;
        }
        p += 1;
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        return (s * r, BigInt::one());
    }
    (s, rest)
}

fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `a + b·√e` for rational `e >= 0`.
fn sign2(a: &Q, b: &Q, e: &Q) -> i32 {
    let sa = sign(a);
    let sb = if e.is_zero() { 0 } else { sign(b) };
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    match (a * a).cmp(&(b * b * e)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// Sign of `a + b·√d1 + c·√d2` for integers `d1, d2 >= 0`.
fn sign3(a: &Q, b: &Q, d1: &BigInt, c: &Q, d2: &BigInt) -> i32 {
    let d1q = Q::from_integer(d1.clone());
    let d2q = Q::from_integer(d2.clone());
    let sb = if d1.is_zero() {
        if d2.is_zero() {
            0
        } else {
            sign(c)
        }
    } else {
        sign2(b, c, &(d2q.clone() / d1q.clone()))
    };
    let sa = sign(a);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // |a| against |b√d1 + c√d2| via squares
    let rational = a * a - b * b * &d1q - c * c * &d2q;
    let cross = -(Q::from_integer(BigInt::from(2)) * b * c);
    match sign2(&rational, &cross, &(d1q * d2q)) {
        1 => sa,
        -1 => sb,
        _ => 0,
    }
}

impl QuadReal {
    /// `p + q·√radicand` for a rational `radicand >= 0`, canonicalized.
    pub fn new(p: Q, q: Q, radicand: Q) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if q.is_zero() || radicand.is_zero() {
            return Self::rational(p);
        }
        // √(n/m) = √(n·m)/m
        let (n, m) = (radicand.numer().clone(), radicand.denom().clone());
        let (s, d) = squarefree_part(&(n * &m));
        let coeff = q * Q::new(s, m);
        if d.is_one() {
            return Self::rational(p + coeff);
        }
        QuadReal { p, q: coeff, d }
    }

    pub fn rational(p: Q) -> Self {
        QuadReal {
            p,
            q: Q::zero(),
            d: BigInt::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Q::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &Q {
        &self.p
    }

    pub fn radical_coeff(&self) -> &Q {
        &self.q
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.p.clone())
    }

    pub fn signum(&self) -> i32 {
        sign2(&self.p, &self.q, &Q::from_integer(self.d.clone()))
    }

    /// Radicand shared by two values, or `None` if they live in different
    /// quadratic fields.
    fn common_radicand(&self, other: &Self) -> Option<BigInt> {
        match (self.d.is_zero(), other.d.is_zero()) {
            (true, _) => Some(other.d.clone()),
            (_, true) => Some(self.d.clone()),
            _ => (self.d == other.d).then(|| self.d.clone()),
        }
    }

    fn from_parts(p: Q, q: Q, d: BigInt) -> Self {
        if q.is_zero() || d.is_zero() {
            Self::rational(p)
        } else {
            QuadReal { p, q, d }
        }
    }

    /// Sum within one quadratic field.
    pub fn add(&self, other: &Self) -> Option<Self> {
        let d = self.common_radicand(other)?;
        Some(Self::from_parts(&self.p + &other.p, &self.q + &other.q, d))
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(-self.p.clone(), -self.q.clone(), self.d.clone())
    }

    pub fn sub(&self, other: &Self) -> Option<Self> {
        self.add(&other.neg())
    }

    /// Product within one quadratic field.
    pub fn mul(&self, other: &Self) -> Option<Self> {
        let d = self.common_radicand(other)?;
        let dq = Q::from_integer(d.clone());
        let p = &self.p * &other.p + &self.q * &other.q * dq;
        let q = &self.p * &other.q + &self.q * &other.p;
        Some(Self::from_parts(p, q, d))
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::from_parts(&self.p * k, &self.q * k, self.d.clone())
    }

    /// Rational bounds `lo <= self <= hi` with `hi - lo <= |q|/m`.
    pub fn bounds(&self, m: &BigInt) -> (Q, Q) {
        if self.is_rational() {
            return (self.p.clone(), self.p.clone());
        }
        let s = (&self.d * m * m).sqrt();
        let lo = Q::new(s.clone(), m.clone());
        let hi = Q::new(s + 1, m.clone());
        if self.q.is_positive() {
            (&self.p + &self.q * lo, &self.p + &self.q * hi)
        } else {
            (&self.p + &self.q * hi, &self.p + &self.q * lo)
        }
    }

    /// A rational strictly between `a < b`.
    pub fn rational_between(a: &Self, b: &Self) -> Q {
        assert!(a < b, "rational_between needs a < b");
        if let (Some(x), Some(y)) = (a.to_rational(), b.to_rational()) {
            return (x + y) / Q::from_integer(BigInt::from(2));
        }
        let mut m = BigInt::from(2);
        loop {
            let (_, a_hi) = a.bounds(&m);
            let (b_lo, _) = b.bounds(&m);
            if a_hi < b_lo {
                return (a_hi + b_lo) / Q::from_integer(BigInt::from(2));
            }
            m *= 2;
        }
    }

    /// Distinct real roots of `c2·t² + c1·t + c0`, ascending. A zero
    /// polynomial has no isolated roots and yields none.
    pub fn roots(c0: &Q, c1: &Q, c2: &Q) -> Vec<QuadReal> {
        if c2.is_zero() {
            if c1.is_zero() {
                return Vec::new();
            }
            return vec![Self::rational(-c0 / c1)];
        }
        let two = Q::from_integer(BigInt::from(2));
        let four = &two * &two;
        let disc = c1 * c1 - four * c2 * c0;
        let center = -c1 / (&two * c2);
        if disc.is_negative() {
            return Vec::new();
        }
        if disc.is_zero() {
            return vec![Self::rational(center)];
        }
        let half_width = Q::one() / (&two * c2).abs();
        let lo = Self::new(center.clone(), -half_width.clone(), disc.clone());
        let hi = Self::new(center, half_width, disc);
        vec![lo, hi]
    }
}

impl Ord for QuadReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = sign3(
            &(&self.p - &other.p),
            &self.q,
            &self.d,
            &(-other.q.clone()),
            &other.d,
        );
        s.cmp(&0)
    }
}

impl PartialOrd for QuadReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Q> for QuadReal {
    fn from(p: Q) -> Self {
        Self::rational(p)
    }
}

impl fmt::Display for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_exact(&self.p));
        }
        let radical = if self.q.is_one() {
            format!("sqrt({})", self.d)
        } else if (-self.q.clone()).is_one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", fmt_exact(&self.q), self.d)
        };
        if self.p.is_zero() {
            write!(f, "{radical}")
        } else if self.q.is_negative() {
            let abs = QuadReal::from_parts(Q::zero(), -self.q.clone(), self.d.clone());
            write!(f, "{} - {}", fmt_exact(&self.p), abs)
        } else {
            write!(f, "{} + {}", fmt_exact(&self.p), radical)
        }
    }
}
