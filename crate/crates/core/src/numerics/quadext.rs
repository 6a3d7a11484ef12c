use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{square_free_part, Rational};
use super::{RatInterval, Sign};

/// An element `a + b·√d` of a real quadratic extension of the rationals.
///
/// Canonical form: `d` is square-free and `>= 2` whenever `b != 0`; a purely
/// rational value stores `b = 0, d = 0`. Binary operations on two values with
/// different non-trivial radicands panic; callers that mix sources go through
/// the `checked_*` variants.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadExtRepr", into = "QuadExtRepr")]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u64,
}

#[derive(Serialize, Deserialize)]
struct QuadExtRepr {
    a: Rational,
    b: Rational,
    d: u64,
}

impl TryFrom<QuadExtRepr> for QuadExt {
    type Error = String;
    fn try_from(r: QuadExtRepr) -> Result<Self, String> {
        let q = QuadExt::new(r.a.clone(), r.b.clone(), r.d);
        if q.a != r.a || q.b != r.b || q.d != r.d {
            return Err(format!("non-canonical quadratic value {}+{}*sqrt({})", r.a, r.b, r.d));
        }
        Ok(q)
    }
}

impl From<QuadExt> for QuadExtRepr {
    fn from(q: QuadExt) -> Self {
        QuadExtRepr { a: q.a, b: q.b, d: q.d }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("values live in different quadratic extensions (sqrt({0}) vs sqrt({1}))")]
pub struct MixedRadicand(pub u64, pub u64);

impl QuadExt {
    /// Builds `a + b·√d`, normalising `d` to its square-free part.
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            return QuadExt::rational(a);
        }
        let (s, f, _) = square_free_part(&BigInt::from(d));
        let f = f.to_u64().expect("square-free part fits");
        let b = b * Rational::from_integer(s);
        if f == 1 {
            return QuadExt::rational(a + b);
        }
        QuadExt { a, b, d: f }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero(), d: 0 }
    }

    /// `√d` for a positive integer `d`.
    pub fn sqrt_int(d: u64) -> Self {
        QuadExt::new(Rational::zero(), Rational::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Radicand, `0` for rational values.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        if self.is_rational() {
            None
        } else {
            Some(self.d)
        }
    }

    pub fn compatible(&self, other: &QuadExt) -> bool {
        self.d == 0 || other.d == 0 || self.d == other.d
    }

    fn joint_d(&self, other: &QuadExt) -> Result<u64, MixedRadicand> {
        if self.compatible(other) {
            Ok(self.d.max(other.d))
        } else {
            Err(MixedRadicand(self.d, other.d))
        }
    }

    pub fn checked_add(&self, other: &QuadExt) -> Result<QuadExt, MixedRadicand> {
        let d = self.joint_d(other)?;
        Ok(QuadExt::new(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &QuadExt) -> Result<QuadExt, MixedRadicand> {
        let d = self.joint_d(other)?;
        Ok(QuadExt::new(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &QuadExt) -> Result<QuadExt, MixedRadicand> {
        let d = self.joint_d(other)?;
        let dq = Rational::from_integer(d);
        let a = &self.a * &other.a + &self.b * &other.b * &dq;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadExt::new(a, b, d))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<QuadExt> {
        if self.is_zero() {
            return None;
        }
        let norm = self.norm();
        Some(QuadExt::new(&self.a / &norm, -(&self.b / &norm), self.d))
    }

    pub fn checked_div(&self, other: &QuadExt) -> Result<Option<QuadExt>, MixedRadicand> {
        self.joint_d(other)?;
        match other.recip() {
            Some(inv) => self.checked_mul(&inv).map(Some),
            None => Ok(None),
        }
    }

    /// Field norm `a² − b²d`, nonzero for nonzero values.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d)
    }

    pub fn conjugate(&self) -> QuadExt {
        QuadExt::new(self.a.clone(), -&self.b, self.d)
    }

    /// Exact sign of `a + b√d`, decided by comparing `a²` with `b²d`.
    pub fn sign(&self) -> Sign {
        let sa = self.a.sign();
        let sb = self.b.sign();
        if sb == Sign::Zero {
            return sa;
        }
        if sa == Sign::Zero || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d);
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Sign::Zero,
        }
    }

    pub fn abs(&self) -> QuadExt {
        if self.sign() == Sign::Negative {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Integer power (negative exponents invert). Panics on `0^negative`.
    pub fn pow(&self, exp: i32) -> QuadExt {
        let base = if exp < 0 {
            self.recip().expect("zero raised to a negative power")
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = QuadExt::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Exact square root inside the field generated so far, if one exists.
    /// Rational inputs may open a new extension `ℚ(√f)`; irrational inputs
    /// are denested as `√(a+b√d) = x + y√d` when possible.
    pub fn exact_sqrt(&self) -> Option<QuadExt> {
        match self.sign() {
            Sign::Negative => return None,
            Sign::Zero => return Some(QuadExt::zero()),
            Sign::Positive => {}
        }
        if let Some(r) = self.as_rational() {
            let (s, f) = r.square_free_split()?;
            let f = f.to_u64()?;
            return Some(QuadExt::new(Rational::zero(), s, f));
        }
        // x^2 + d y^2 = a, 2xy = b  =>  x^2 = (a ± √(a² − b²d)) / 2
        let disc = self.norm();
        let root = disc.exact_root(2)?;
        let two = Rational::from_integer(2);
        for cand in [(&self.a + &root) / &two, (&self.a - &root) / &two] {
            if cand.is_negative() {
                continue;
            }
            if let Some(x) = cand.exact_root(2) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (&two * &x);
                let v = QuadExt::new(x, y, self.d);
                if v.sign() == Sign::Positive && &(&v * &v) == self {
                    return Some(v);
                }
            }
        }
        None
    }

    /// Exact real `q`-th root for `q ∈ {1, 2, 3, 6}` when it stays inside
    /// `ℚ` or a single `ℚ(√d)`.
    pub fn exact_root(&self, q: u32) -> Option<QuadExt> {
        match q {
            1 => Some(self.clone()),
            2 => self.exact_sqrt(),
            3 => self.exact_cbrt(),
            6 => self.exact_cbrt().and_then(|c| c.exact_sqrt()),
            _ => {
                let r = self.as_rational()?.exact_root(q)?;
                Some(QuadExt::rational(r))
            }
        }
    }

    fn exact_cbrt(&self) -> Option<QuadExt> {
        if let Some(r) = self.as_rational() {
            return r.exact_root(3).map(QuadExt::rational);
        }
        if self.a.is_zero() {
            // (c√d)^3 = c^3 d √d
            let c = (&self.b / Rational::from_integer(self.d)).exact_root(3)?;
            return Some(QuadExt::new(Rational::zero(), c, self.d));
        }
        None
    }

    /// Rational enclosure with endpoint error at most `2^-bits`.
    pub fn enclose(&self, bits: u32) -> RatInterval {
        if self.is_rational() {
            return RatInterval::point(self.a.clone());
        }
        let k = bits + 1 + self.b.abs().ceil().bits() as u32;
        let (lo, hi) = sqrt_int_bounds(self.d, k);
        let (l, h) = if self.b.is_negative() {
            (&self.b * &hi, &self.b * &lo)
        } else {
            (&self.b * &lo, &self.b * &hi)
        };
        RatInterval::new(&self.a + l, &self.a + h)
    }

    /// Rational upper bound on `|self|`.
    pub fn abs_upper(&self) -> Rational {
        let e = self.enclose(8);
        e.lo().abs().max(e.hi().abs())
    }

    /// Total order across arbitrary radicands; values from different
    /// extensions are compared by refining enclosures (they are never equal
    /// unless both are rational).
    pub fn cmp_exact(&self, other: &QuadExt) -> Ordering {
        if self.compatible(other) {
            return match self.checked_sub(other).expect("compatible").sign() {
                Sign::Negative => Ordering::Less,
                Sign::Zero => Ordering::Equal,
                Sign::Positive => Ordering::Greater,
            };
        }
        let mut bits = 16;
        loop {
            let x = self.enclose(bits);
            let y = other.enclose(bits);
            if x.hi() < y.lo() {
                return Ordering::Less;
            }
            if y.hi() < x.lo() {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }

    /// A rational strictly between `self` and `other` (`self < other`).
    pub fn rational_between(&self, other: &QuadExt) -> Rational {
        debug_assert_eq!(self.cmp_exact(other), Ordering::Less);
        if let (Some(x), Some(y)) = (self.as_rational(), other.as_rational()) {
            return (x + y) / Rational::from_integer(2);
        }
        let mut bits = 8;
        loop {
            let x = self.enclose(bits);
            let y = other.enclose(bits);
            if x.hi() < y.lo() {
                return (x.hi() + y.lo()) / Rational::from_integer(2);
            }
            bits *= 2;
        }
    }
}

/// Bounds `lo <= √d <= hi` with `hi - lo <= 2^-k`.
fn sqrt_int_bounds(d: u64, k: u32) -> (Rational, Rational) {
    let scale = BigInt::one() << (2 * k as usize);
    let n = BigInt::from(d) * scale;
    let r = n.sqrt();
    let denom = BigInt::one() << k as usize;
    let lo = Rational::new(r.clone(), denom.clone());
    let hi = if &r * &r == n { lo.clone() } else { Rational::new(r + 1, denom) };
    (lo, hi)
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{} ", self.a)?;
            if self.b.is_negative() {
                write!(f, "- ")?;
            } else {
                write!(f, "+ ")?;
            }
        } else if self.b.is_negative() {
            write!(f, "-")?;
        }
        let babs = self.b.abs();
        if babs.is_one() {
            write!(f, "sqrt({})", self.d)
        } else {
            write!(f, "{}*sqrt({})", babs, self.d)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        QuadExt::rational(r)
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::rational(Rational::one())
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -self.clone()
    }
}

macro_rules! quad_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a, 'b> $tr<&'b QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &'b QuadExt) -> QuadExt {
                self.$checked(rhs).expect("mixed quadratic extensions")
            }
        }
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &'b QuadExt) -> QuadExt {
                (&self).$m(rhs)
            }
        }
    };
}

quad_binop!(Add, add, checked_add);
quad_binop!(Sub, sub, checked_sub);
quad_binop!(Mul, mul, checked_mul);

impl<'a, 'b> Div<&'b QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: &'b QuadExt) -> QuadExt {
        self.checked_div(rhs)
            .expect("mixed quadratic extensions")
            .expect("division by zero")
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: QuadExt) -> QuadExt {
        &self / &rhs
    }
}

impl<'b> Div<&'b QuadExt> for QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: &'b QuadExt) -> QuadExt {
        &self / rhs
    }
}
