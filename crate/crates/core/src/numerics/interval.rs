use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{NumericsError, Precision, Rational};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(Rational, Rational)", into = "(Rational, Rational)")]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl TryFrom<(Rational, Rational)> for RatInterval {
    type Error = String;
    fn try_from((lo, hi): (Rational, Rational)) -> Result<Self, String> {
        if lo > hi {
            return Err(format!("empty interval [{lo}, {hi}]"));
        }
        Ok(RatInterval { lo, hi })
    }
}

impl From<RatInterval> for (Rational, Rational) {
    fn from(i: RatInterval) -> Self {
        (i.lo, i.hi)
    }
}

impl RatInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        RatInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn split(&self) -> (RatInterval, RatInterval) {
        let m = self.midpoint();
        (
            RatInterval::new(self.lo.clone(), m.clone()),
            RatInterval::new(m, self.hi.clone()),
        )
    }

    /// Widens both endpoints outward onto the grid `2^-k ℤ`.
    pub fn round_out(&self, k: u32) -> RatInterval {
        RatInterval {
            lo: self.lo.floor_to_grid(k),
            hi: self.hi.ceil_to_grid(k),
        }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn add(&self, o: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn mul(&self, o: &RatInterval) -> RatInterval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        RatInterval { lo, hi }
    }

    pub fn recip(&self) -> Result<RatInterval, NumericsError> {
        if self.contains_zero() {
            return Err(NumericsError::DivisionByIntervalContainingZero);
        }
        Ok(RatInterval {
            lo: self.hi.recip().expect("nonzero"),
            hi: self.lo.recip().expect("nonzero"),
        })
    }

    pub fn div(&self, o: &RatInterval) -> Result<RatInterval, NumericsError> {
        Ok(self.mul(&o.recip()?))
    }

    /// Integer power with the usual monotonicity case split.
    pub fn powi(&self, p: i32) -> Result<RatInterval, NumericsError> {
        if p < 0 {
            if self.contains_zero() {
                return Err(NumericsError::ZeroToNegativePower);
            }
            return self.powi(-p)?.recip();
        }
        if p == 0 {
            return Ok(RatInterval::point(Rational::one()));
        }
        let a = self.lo.pow(p);
        let b = self.hi.pow(p);
        if p % 2 == 1 || !self.lo.is_negative() {
            return Ok(RatInterval { lo: a, hi: b });
        }
        if !self.hi.is_positive() {
            return Ok(RatInterval { lo: b, hi: a });
        }
        Ok(RatInterval { lo: Rational::zero(), hi: a.max(b) })
    }
}

/// Applies one of the four field operations to two intervals.
pub fn interval_arith(op: char, x: &RatInterval, y: &RatInterval) -> Result<RatInterval, NumericsError> {
    match op {
        '+' => Ok(x.add(y)),
        '-' => Ok(x.sub(y)),
        '*' => Ok(x.mul(y)),
        '/' => x.div(y),
        _ => Err(NumericsError::UnknownOperator(op)),
    }
}

/// Largest `m/2^k` with `(m/2^k)^q <= t`, for `t >= 0`.
fn root_floor(t: &Rational, q: u32, k: u32) -> Rational {
    let scale = BigInt::one() << (k as usize * q as usize);
    let n = (t.numer() * &scale).div_floor(t.denom());
    Rational::new(n.nth_root(q), BigInt::one() << k as usize)
}

/// Smallest `m/2^k` with `(m/2^k)^q >= t`, for `t >= 0`.
fn root_ceil(t: &Rational, q: u32, k: u32) -> Rational {
    let scale = BigInt::one() << (k as usize * q as usize);
    let n = (t.numer() * &scale).div_ceil(t.denom());
    let mut m = n.nth_root(q);
    if num_traits::pow(m.clone(), q as usize) < n {
        m += 1;
    }
    Rational::new(m, BigInt::one() << k as usize)
}

fn root_lower(t: &Rational, q: u32, k: u32) -> Rational {
    if let Some(r) = t.exact_root(q) {
        return r;
    }
    if t.is_negative() {
        -root_ceil(&-t, q, k)
    } else {
        root_floor(t, q, k)
    }
}

fn root_upper(t: &Rational, q: u32, k: u32) -> Rational {
    if let Some(r) = t.exact_root(q) {
        return r;
    }
    if t.is_negative() {
        -root_floor(&-t, q, k)
    } else {
        root_ceil(t, q, k)
    }
}

/// Enclosure of `{t^(1/q) : t ∈ x}` widened by at most `prec.epsilon`.
/// Negative arguments are allowed for odd `q` (real odd roots).
pub fn interval_root(x: &RatInterval, q: u32, prec: &Precision) -> Result<RatInterval, NumericsError> {
    assert!(q >= 1, "root index must be positive");
    if q % 2 == 0 && x.lo.is_negative() {
        return Err(NumericsError::NegativeRadicand);
    }
    if q == 1 {
        return Ok(x.clone());
    }
    let k = prec.bits() + 1;
    Ok(RatInterval {
        lo: root_lower(&x.lo, q, k),
        hi: root_upper(&x.hi, q, k),
    })
}

/// Enclosure of `x^(p/q)` via the `q`-th root followed by the integer power.
pub fn interval_pow(x: &RatInterval, p: i32, q: u32, prec: &Precision) -> Result<RatInterval, NumericsError> {
    if p < 0 && x.contains_zero() {
        return Err(NumericsError::ZeroToNegativePower);
    }
    // the root widens by at most 2^-k; the power amplifies that by at most
    // p·max|r|^(p-1), so the root is computed with extra bits
    let r = interval_root(x, q, prec)?;
    if p.unsigned_abs() <= 1 || r.is_point() {
        return r.powi(p);
    }
    let mag = r.lo.abs().max(r.hi.abs());
    let mag = if p < 0 {
        r.lo.abs().min(r.hi.abs()).recip().expect("nonzero")
    } else {
        mag
    };
    let growth = Rational::from_integer(p.unsigned_abs()) * mag.pow(p.abs() + 1).max(Rational::one());
    let extra = growth.ceil().bits() as u32 + 1;
    let finer = Precision::from_bits(prec.bits() + extra);
    interval_root(x, q, &finer)?.powi(p)
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn iv(a: Rational, b: Rational) -> RatInterval {
        RatInterval::new(a, b)
    }

    #[test]
    fn four_ops() {
        let x = iv(rat(1, 1), rat(2, 1));
        let y = iv(rat(3, 1), rat(4, 1));
        assert_eq!(interval_arith('+', &x, &y).unwrap(), iv(rat(4, 1), rat(6, 1)));
        let z = iv(rat(-1, 1), rat(2, 1));
        assert_eq!(interval_arith('*', &z, &y).unwrap(), iv(rat(-4, 1), rat(8, 1)));
        assert_eq!(
            interval_arith('/', &x, &iv(rat(0, 1), rat(1, 1))),
            Err(NumericsError::DivisionByIntervalContainingZero)
        );
        assert_eq!(interval_arith('-', &x, &y).unwrap(), iv(rat(-3, 1), rat(-1, 1)));
    }

    #[test]
    fn roots() {
        let p = Precision::new(rat(1, 1));
        assert_eq!(interval_root(&RatInterval::point(rat(4, 1)), 2, &p).unwrap(), RatInterval::point(rat(2, 1)));

        let p = Precision::new(rat(1, 1_000_000));
        let r = interval_root(&RatInterval::point(rat(2, 1)), 2, &p).unwrap();
        assert!(r.width() <= rat(1, 1_000_000));
        assert!(r.lo() < &rat(1414214, 1000000) && r.hi() > &rat(1414213, 1000000));
        assert!(&(r.lo() * r.lo()) <= &rat(2, 1) && &(r.hi() * r.hi()) >= &rat(2, 1));

        let p = Precision::new(rat(1, 1000));
        let c = interval_root(&iv(rat(0, 1), rat(1, 1)), 3, &p).unwrap();
        assert_eq!(c, iv(rat(0, 1), rat(1, 1)));
        assert_eq!(
            interval_root(&iv(rat(-1, 1), rat(1, 1)), 2, &p),
            Err(NumericsError::NegativeRadicand)
        );
        let neg = interval_root(&RatInterval::point(rat(-2, 1)), 3, &p).unwrap();
        assert!(neg.hi().is_negative());
        assert!(&neg.lo().pow(3) <= &rat(-2, 1) && &neg.hi().pow(3) >= &rat(-2, 1));
    }

    #[test]
    fn powers() {
        let p = Precision::new(rat(1, 100));
        assert_eq!(interval_pow(&RatInterval::point(rat(1, 1)), 2, 3, &p).unwrap(), RatInterval::point(rat(1, 1)));
        let e = interval_pow(&RatInterval::point(rat(8, 1)), 2, 3, &p).unwrap();
        assert!(e.contains(&rat(4, 1)) && e.width() <= rat(1, 100));
        let e = interval_pow(&RatInterval::point(rat(1, 4)), -1, 2, &p).unwrap();
        assert!(e.contains(&rat(2, 1)));
        let e = interval_pow(&RatInterval::point(rat(2, 1)), 3, 2, &p).unwrap();
        // 2^(3/2) = 2.828427...
        assert!(e.contains(&rat(2828427, 1000000)) && e.width() <= rat(1, 100));
        assert_eq!(
            interval_pow(&iv(rat(0, 1), rat(1, 1)), -1, 2, &p),
            Err(NumericsError::ZeroToNegativePower)
        );
        assert_eq!(iv(rat(-2, 1), rat(1, 1)).powi(2).unwrap(), iv(rat(0, 1), rat(4, 1)));
        assert_eq!(iv(rat(-2, 1), rat(-1, 1)).powi(2).unwrap(), iv(rat(1, 1), rat(4, 1)));
    }
}
