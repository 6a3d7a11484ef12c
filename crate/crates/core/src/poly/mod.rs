//! Exact univariate polynomials over `ℚ` or a single `ℚ(√d)`: arithmetic,
//! square-free decomposition, Sturm root counting and isolation, and a
//! replayable nonnegativity certificate. Also a small multivariate expander
//! for identity checks.

mod multi;
mod nonneg;
mod ratfun;
mod sqf;
mod sturm;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::numerics::{MixedRadicand, QuadExt, Rational, Scalar, Sign};

pub use multi::{expand_equal, MultiPoly};
pub use nonneg::{check_nonneg_cert, nonneg_on, NonnegCert, NonnegVerdict, SamplePoint};
pub use ratfun::{poly_to_expr, to_polynomial, to_rational_function};
pub use sqf::{square_free_decompose, SqfDecomp};
pub use sturm::{exact_roots, isolate_roots, simplest_between, sturm_chain, sturm_count, RootBox};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("coefficients from different quadratic extensions")]
    DomainMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("endpoint not representable: {0}")]
    EndpointNotRepresentable(String),
}

impl From<MixedRadicand> for PolyError {
    fn from(_: MixedRadicand) -> Self {
        PolyError::DomainMismatch
    }
}

/// Dense polynomial, index = degree, no trailing zeros.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn x() -> Self {
        UniPoly::new(vec![F::zero(), F::one()])
    }

    /// `c·x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        UniPoly::new(v)
    }

    /// From coefficients given as rationals, lowest degree first.
    pub fn from_rationals(cs: &[Rational]) -> Self {
        UniPoly::new(cs.iter().cloned().map(F::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    /// The single radicand shared by the coefficients, or an error when two differ.
    pub fn radicand(&self) -> Result<Option<u64>, PolyError> {
        let mut d = None;
        for c in &self.coeffs {
            if let Some(r) = c.radicand() {
                match d {
                    None => d = Some(r),
                    Some(prev) if prev != r => return Err(PolyError::DomainMismatch),
                    _ => {}
                }
            }
        }
        Ok(d)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        match (self.radicand()?, other.radicand()?) {
            (Some(a), Some(b)) if a != b => Err(PolyError::DomainMismatch),
            _ => Ok(()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        UniPoly::new(self.coeffs.iter().cloned().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = UniPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `p = q·quot + rem` with `deg rem < deg q`.
    pub fn divrem(&self, q: &Self) -> Result<(Self, Self), PolyError> {
        if q.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        self.check_compatible(q)?;
        let dq = q.coeffs.len() - 1;
        let lc = q.lc();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dq {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - dq];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dq].clone() / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in q.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * b;
            }
            quot[k] = c;
        }
        rem.truncate(dq);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Exact quotient when `q` divides `self`.
    pub fn exact_div(&self, q: &Self) -> Option<Self> {
        let (quot, rem) = self.divrem(q).ok()?;
        rem.is_zero().then_some(quot)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        UniPoly::new(self.coeffs.iter().map(|c| c.clone() / &lc).collect())
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| F::from_rational(Rational::from(i as i64)) * c)
                .collect(),
        )
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> F {
        self.eval(&F::from_rational(x.clone()))
    }

    pub fn sign_at(&self, x: &Rational) -> Sign {
        self.eval_rational(x).sign()
    }

    /// Exact value at a point of `ℚ(√d)`.
    pub fn eval_quad(&self, x: &QuadExt) -> Result<QuadExt, MixedRadicand> {
        let mut acc = QuadExt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(&c.to_quad())?;
        }
        Ok(acc)
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&UniPoly::constant(c.clone()));
        }
        acc
    }

    pub fn to_quad_poly(&self) -> UniPoly<QuadExt> {
        UniPoly::new(self.coeffs.iter().map(Scalar::to_quad).collect())
    }

    /// Renders with the given variable name, e.g. `2*t^3 - 13*t^2 + 20*t - 9`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Negative;
            let mag = if neg { -c.clone() } else { c.clone() };
            let mag_text = mag.to_string();
            let compound = mag_text.contains(' ');
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&if compound { format!("({mag_text})") } else { mag_text });
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if compound {
                out.push_str(&format!("({mag_text})*{mono}"));
            } else {
                out.push_str(&format!("{mag_text}*{mono}"));
            }
        }
        out
    }
}

impl UniPoly<Rational> {
    /// Scales to a primitive integer polynomial with positive leading
    /// coefficient; returns the scale `s` with `self = s · result`.
    pub fn primitive_part(&self) -> (Rational, UniPoly<Rational>) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        use num_integer::Integer;
        let mut lcm = num_bigint::BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<num_bigint::BigInt> =
            self.coeffs.iter().map(|c| (c.clone() * Rational::from(lcm.clone())).numer().clone()).collect();
        let mut g = num_bigint::BigInt::zero();
        for n in &ints {
            g = g.gcd(n);
        }
        let mut s = Rational::new(g.clone(), lcm);
        if self.lc().is_negative() {
            s = -s;
        }
        let prim = UniPoly::new(self.coeffs.iter().map(|c| c.clone() / &s).collect());
        (s, prim)
    }
}

impl<F: Scalar> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl<F: fmt::Debug> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("UniPoly").field(&self.coeffs).finish()
    }
}

/// Checked arithmetic entry point: `op` is one of `+ - *`, or `/` for divrem
/// (the remainder is the second component).
pub fn poly_arith<F: Scalar>(
    op: char,
    p: &UniPoly<F>,
    q: &UniPoly<F>,
) -> Result<(UniPoly<F>, Option<UniPoly<F>>), PolyError> {
    p.check_compatible(q)?;
    match op {
        '+' => Ok((p.add(q), None)),
        '-' => Ok((p.sub(q), None)),
        '*' => Ok((p.mul(q), None)),
        '/' => p.divrem(q).map(|(a, b)| (a, Some(b))),
        _ => panic!("unknown polynomial operator `{op}`"),
    }
}
