use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Sign;

/// Arbitrary-precision rational number in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer / denom`, reducing to lowest terms.
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn sign(&self) -> Sign {
        match self.0.numer().sign() {
            BigSign::Minus => Sign::Negative,
            BigSign::NoSign => Sign::Zero,
            BigSign::Plus => Sign::Positive,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Integer power; negative exponents invert. Panics on `0^negative`.
    pub fn pow(&self, exp: i32) -> Self {
        if exp >= 0 {
            Rational(num_traits::pow(self.0.clone(), exp as usize))
        } else {
            let inv = self.recip().expect("zero raised to a negative power");
            Rational(num_traits::pow(inv.0, (-exp) as usize))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `2^-k` as a rational.
    pub fn dyadic_unit(k: u32) -> Self {
        Rational::new(1, BigInt::one() << k as usize)
    }

    /// Largest multiple of `2^-k` that is `<= self`.
    pub fn floor_to_grid(&self, k: u32) -> Self {
        let scale = BigInt::one() << k as usize;
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        Rational::new(scaled.floor().to_integer(), scale)
    }

    /// Smallest multiple of `2^-k` that is `>= self`.
    pub fn ceil_to_grid(&self, k: u32) -> Self {
        let scale = BigInt::one() << k as usize;
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        Rational::new(scaled.ceil().to_integer(), scale)
    }

    /// Exact `q`-th root if `self` is a perfect `q`-th power of a rational.
    pub fn exact_root(&self, q: u32) -> Option<Self> {
        if q == 1 {
            return Some(self.clone());
        }
        if self.is_negative() {
            if q % 2 == 0 {
                return None;
            }
            return self.neg_ref().exact_root(q).map(|r| -r);
        }
        let n = self.numer().nth_root(q);
        let d = self.denom().nth_root(q);
        if num_traits::pow(n.clone(), q as usize) == *self.numer()
            && num_traits::pow(d.clone(), q as usize) == *self.denom()
        {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }

    /// Writes `self = s^2 * f` with `f` a square-free integer (sign kept in
    /// `f`) and `s` a non-negative rational. Returns `None` when the
    /// square-free part cannot be certified by trial division.
    pub fn square_free_split(&self) -> Option<(Rational, BigInt)> {
        if self.is_zero() {
            return Some((Rational::zero(), BigInt::zero()));
        }
        // p/q = p*q / q^2
        let pq = self.numer() * self.denom();
        let (s, f, certain) = square_free_part(&pq);
        certain.then(|| (Rational::new(s, self.denom().clone()), f))
    }

    fn neg_ref(&self) -> Self {
        Rational(-self.0.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering truncated toward zero with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.is_negative();
        let a = self.abs();
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = (a.numer() * &scale) / a.denom();
        let (int, frac) = scaled.div_rem(&scale);
        let mut s = String::new();
        if neg && !scaled.is_zero() {
            s.push('-');
        }
        s.push_str(&int.to_string());
        if digits > 0 {
            let f = frac.to_string();
            s.push('.');
            for _ in f.len()..digits {
                s.push('0');
            }
            s.push_str(&f);
        }
        s
    }

    /// Parses a plain decimal such as `-0.001` into an exact rational.
    pub fn from_decimal_str(s: &str) -> Option<Self> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{}{}", if int.is_empty() { "0" } else { int }, frac)
            .parse()
            .ok()?;
        let r = Rational::new(digits, num_traits::pow(BigInt::from(10), frac.len()));
        Some(if neg { -r } else { r })
    }
}

/// Splits an integer `n = s^2 * f`, returning `(s, f, certain)`. The sign of
/// `n` goes to `f`. Trial division stops at small primes; `certain` is false
/// when the leftover cofactor might still hide a square of a large prime.
pub fn square_free_part(n: &BigInt) -> (BigInt, BigInt, bool) {
    const TRIAL_LIMIT: u32 = 1000;
    let neg = n.is_negative();
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut p = 2u32;
    while p <= TRIAL_LIMIT && BigInt::from(p) * BigInt::from(p) <= m {
        let bp = BigInt::from(p);
        let mut e = 0u32;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            s *= num_traits::pow(bp.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                f *= &bp;
            }
        }
        p += 1;
    }
    let mut certain = true;
    if m > BigInt::one() {
        let r = m.sqrt();
        if &r * &r == m {
            s *= r;
        } else {
            // a square factor p^2 with p > TRIAL_LIMIT needs m >= TRIAL_LIMIT^2
            certain = m < BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT)
                || BigInt::from(p) * BigInt::from(p) > m;
            f *= m;
        }
    }
    if neg {
        f = -f;
    }
    (s, f, certain)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational::new(n, d))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

macro_rules! rational_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);
rational_binop!(Div, div, /);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

/// Shorthand for `Rational::new(n, d)` on machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}
