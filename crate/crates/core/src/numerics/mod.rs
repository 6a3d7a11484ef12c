//! Exact scalars (rationals and real quadratic extensions) and rigorous
//! interval arithmetic with rational endpoints.
//!
//! Nothing in here touches hardware floating point; every sign decision is
//! exact and every interval result is an enclosure.

mod interval;
mod quadext;
mod rational;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use interval::{interval_arith, interval_pow, interval_root, RatInterval};
pub use quadext::{MixedRadicand, QuadExt};
pub use rational::{rat, square_free_part, ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericsError {
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("even root of a negative radicand")]
    NegativeRadicand,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("unknown interval operator `{0}`")]
    UnknownOperator(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Target width for root enclosures.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    epsilon: Rational,
}

impl Precision {
    /// Panics unless `epsilon > 0`.
    pub fn new(epsilon: Rational) -> Self {
        assert!(epsilon.is_positive(), "precision must be positive");
        Precision { epsilon }
    }

    pub fn from_bits(bits: u32) -> Self {
        Precision { epsilon: Rational::dyadic_unit(bits) }
    }

    /// `10^-k`.
    pub fn decimal(k: u32) -> Self {
        Precision::new(Rational::new(1, num_traits::pow(num_bigint::BigInt::from(10), k as usize)))
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    /// Smallest `k` with `2^-k <= epsilon`.
    pub fn bits(&self) -> u32 {
        let mut k = 0;
        while Rational::dyadic_unit(k) > self.epsilon {
            k += 1;
        }
        k
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::decimal(12)
    }
}

impl fmt::Debug for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Precision({})", self.epsilon)
    }
}

/// Exact ordered field usable as a polynomial coefficient domain.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + Send
    + Sync
{
    fn sign(&self) -> Sign;
    /// The `d` of `ℚ(√d)` this value needs, if any.
    fn radicand(&self) -> Option<u64>;
    fn from_rational(r: Rational) -> Self;
    fn to_quad(&self) -> QuadExt;
    fn try_from_quad(q: &QuadExt) -> Option<Self>;
    /// Rational enclosure with endpoint error at most `2^-bits`.
    fn enclose(&self, bits: u32) -> RatInterval;
}

impl Scalar for Rational {
    fn sign(&self) -> Sign {
        Rational::sign(self)
    }
    fn radicand(&self) -> Option<u64> {
        None
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn to_quad(&self) -> QuadExt {
        QuadExt::rational(self.clone())
    }
    fn try_from_quad(q: &QuadExt) -> Option<Self> {
        q.as_rational().cloned()
    }
    fn enclose(&self, _bits: u32) -> RatInterval {
        RatInterval::point(self.clone())
    }
}

impl Scalar for QuadExt {
    fn sign(&self) -> Sign {
        QuadExt::sign(self)
    }
    fn radicand(&self) -> Option<u64> {
        QuadExt::radicand(self)
    }
    fn from_rational(r: Rational) -> Self {
        QuadExt::rational(r)
    }
    fn to_quad(&self) -> QuadExt {
        self.clone()
    }
    fn try_from_quad(q: &QuadExt) -> Option<Self> {
        Some(q.clone())
    }
    fn enclose(&self, bits: u32) -> RatInterval {
        QuadExt::enclose(self, bits)
    }
}

/// Exact sign of `a + b√d`.
pub fn quadext_sign(v: &QuadExt) -> Sign {
    v.sign()
}
