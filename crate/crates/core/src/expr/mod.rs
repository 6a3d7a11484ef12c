//! Single-variable expression language: the tree, parser, printer,
//! symbolic derivative, and exact / interval evaluation.

mod diff;
mod domain;
mod eval;
mod parse;
mod print;

use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numerics::{QuadExt, Rational};

pub use diff::diff;
pub use domain::{Bound, Domain, DomainParseError};
pub use eval::{eval_exact, eval_interval, EvalError, IntervalEvalError};
pub use parse::{parse, ParseError};
pub use print::print;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(QuadExt),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Exponent denominator is always one of 1, 2, 3, 6.
    Pow(Box<Expr>, Rational),
}

pub(crate) fn allowed_exponent(r: &Rational) -> bool {
    let d = r.denom();
    [1u32, 2, 3, 6].iter().any(|q| *d == BigInt::from(*q))
}

impl Expr {
    pub fn x() -> Expr {
        Expr::Var
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(QuadExt::rational(Rational::from(n)))
    }

    pub fn rational(r: Rational) -> Expr {
        Expr::Const(QuadExt::rational(r))
    }

    pub fn constant(q: QuadExt) -> Expr {
        Expr::Const(q)
    }

    /// Panics if the exponent denominator is not in {1, 2, 3, 6}.
    pub fn pow(self, r: Rational) -> Expr {
        assert!(allowed_exponent(&r), "unsupported exponent {r}");
        Expr::Pow(Box::new(self), r)
    }

    pub fn powi(self, n: i64) -> Expr {
        self.pow(Rational::from(n))
    }

    pub fn sqrt(self) -> Expr {
        self.pow(Rational::new(1, 2))
    }

    pub fn cbrt(self) -> Expr {
        self.pow(Rational::new(1, 3))
    }

    pub fn as_const(&self) -> Option<&QuadExt> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one_const(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    pub fn has_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_var() || b.has_var()
            }
        }
    }

    /// Replaces every occurrence of the variable with `with`.
    pub fn substitute(&self, with: &Expr) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var => with.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(with))),
            Expr::Pow(a, r) => Expr::Pow(Box::new(a.substitute(with)), r.clone()),
            Expr::Add(a, b) => Expr::Add(Box::new(a.substitute(with)), Box::new(b.substitute(with))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.substitute(with)), Box::new(b.substitute(with))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.substitute(with)), Box::new(b.substitute(with))),
            Expr::Div(a, b) => Expr::Div(Box::new(a.substitute(with)), Box::new(b.substitute(with))),
        }
    }

    /// Radicands appearing in constants (at most one is supported per computation).
    pub fn radicands(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Const(c) = e {
                if let Some(d) = c.radicand() {
                    if !out.contains(&d) {
                        out.push(d);
                    }
                }
            }
        });
        out.sort_unstable();
        out
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn visit<F: FnMut(&Expr)>(&self, f: &mut F) {
        f(self);
        match self {
            Expr::Const(_) | Expr::Var => {}
            Expr::Neg(a) | Expr::Pow(a, _) => a.visit(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "Const({c:?})"),
            Expr::Var => write!(f, "Var"),
            Expr::Add(a, b) => write!(f, "Add({a:?}, {b:?})"),
            Expr::Sub(a, b) => write!(f, "Sub({a:?}, {b:?})"),
            Expr::Neg(a) => write!(f, "Neg({a:?})"),
            Expr::Mul(a, b) => write!(f, "Mul({a:?}, {b:?})"),
            Expr::Div(a, b) => write!(f, "Div({a:?}, {b:?})"),
            Expr::Pow(a, r) => write!(f, "Pow({a:?}, {r})"),
        }
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&print(self))
    }
}

impl<'de> serde::Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = <String as serde::Deserialize>::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Self {
        Expr::rational(r)
    }
}

impl From<QuadExt> for Expr {
    fn from(q: QuadExt) -> Self {
        Expr::Const(q)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $variant:ident) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Smart constructors that fold trivial identities; used by `diff` and the
/// rewriters, never by the parser.
pub mod build {
    use super::*;

    pub fn add(a: Expr, b: Expr) -> Expr {
        if a.is_zero_const() {
            return b;
        }
        if b.is_zero_const() {
            return a;
        }
        if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
            if let Ok(s) = x.checked_add(y) {
                return Expr::Const(s);
            }
        }
        a + b
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if b.is_zero_const() {
            return a;
        }
        if a.is_zero_const() {
            return neg(b);
        }
        if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
            if let Ok(s) = x.checked_sub(y) {
                return Expr::Const(s);
            }
        }
        a - b
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => -other,
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if a.is_zero_const() || b.is_zero_const() {
            return Expr::int(0);
        }
        if a.is_one_const() {
            return b;
        }
        if b.is_one_const() {
            return a;
        }
        if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
            if let Ok(p) = x.checked_mul(y) {
                return Expr::Const(p);
            }
        }
        a * b
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if a.is_zero_const() {
            return Expr::int(0);
        }
        if b.is_one_const() {
            return a;
        }
        a / b
    }

    pub fn pow(a: Expr, r: Rational) -> Expr {
        if r.is_zero() {
            return Expr::int(1);
        }
        if r.is_one() {
            return a;
        }
        a.pow(r)
    }
}
