use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{eval_exact, parse, print, Expr};
use crate::numerics::{QuadExt, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Bound {
    NegInf,
    PosInf,
    Finite(QuadExt),
}

impl Bound {
    pub fn finite(&self) -> Option<&QuadExt> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    fn cmp_bound(&self, other: &Bound) -> Ordering {
        match (self, other) {
            (Bound::NegInf, Bound::NegInf) | (Bound::PosInf, Bound::PosInf) => Ordering::Equal,
            (Bound::NegInf, _) | (_, Bound::PosInf) => Ordering::Less,
            (_, Bound::NegInf) | (Bound::PosInf, _) => Ordering::Greater,
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp_exact(b),
        }
    }
}

impl From<Rational> for Bound {
    fn from(r: Rational) -> Self {
        Bound::Finite(QuadExt::rational(r))
    }
}

impl From<QuadExt> for Bound {
    fn from(q: QuadExt) -> Self {
        Bound::Finite(q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad domain `{text}`: {msg}")]
pub struct DomainParseError {
    pub text: String,
    pub msg: String,
}

/// Real interval with exact (possibly infinite) endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Domain {
    pub lo: Bound,
    pub hi: Bound,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Domain {
    /// Infinite endpoints are forced open. Returns `None` when `lo >= hi`.
    pub fn new(lo: Bound, lo_open: bool, hi: Bound, hi_open: bool) -> Option<Domain> {
        if lo.cmp_bound(&hi) != Ordering::Less || lo == Bound::PosInf || hi == Bound::NegInf {
            return None;
        }
        let lo_open = lo_open || lo == Bound::NegInf;
        let hi_open = hi_open || hi == Bound::PosInf;
        Some(Domain { lo, hi, lo_open, hi_open })
    }

    pub fn real_line() -> Domain {
        Domain::new(Bound::NegInf, true, Bound::PosInf, true).expect("nonempty")
    }

    pub fn open(a: Rational, b: Rational) -> Domain {
        Domain::new(a.into(), true, b.into(), true).expect("a < b")
    }

    pub fn closed(a: Rational, b: Rational) -> Domain {
        Domain::new(a.into(), false, b.into(), false).expect("a < b")
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.finite().is_some() && self.hi.finite().is_some()
    }

    pub fn contains(&self, v: &QuadExt) -> bool {
        let above = match &self.lo {
            Bound::NegInf => true,
            Bound::PosInf => false,
            Bound::Finite(a) => match v.cmp_exact(a) {
                Ordering::Greater => true,
                Ordering::Equal => !self.lo_open,
                Ordering::Less => false,
            },
        };
        let below = match &self.hi {
            Bound::PosInf => true,
            Bound::NegInf => false,
            Bound::Finite(b) => match v.cmp_exact(b) {
                Ordering::Less => true,
                Ordering::Equal => !self.hi_open,
                Ordering::Greater => false,
            },
        };
        above && below
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        self.contains(&QuadExt::rational(r.clone()))
    }

    /// Strictly between the endpoints.
    pub fn in_interior(&self, v: &QuadExt) -> bool {
        let lo_ok = self.lo.finite().map_or(true, |a| v.cmp_exact(a) == Ordering::Greater);
        let hi_ok = self.hi.finite().map_or(true, |b| v.cmp_exact(b) == Ordering::Less);
        lo_ok && hi_ok
    }

    /// The same interval with both endpoints open.
    pub fn interior(&self) -> Domain {
        Domain { lo: self.lo.clone(), hi: self.hi.clone(), lo_open: true, hi_open: true }
    }

    /// A deterministic rational interior point.
    pub fn interior_point(&self) -> Rational {
        let one = Rational::from(1);
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => a.rational_between(b),
            (Bound::Finite(a), _) => Rational::from(a.abs_upper().ceil()) + one,
            (_, Bound::Finite(b)) => -Rational::from(b.abs_upper().ceil()) - one,
            _ => Rational::from(0),
        }
    }
}

fn parse_endpoint(text: &str, whole: &str) -> Result<Bound, DomainParseError> {
    let t = text.trim();
    match t {
        "inf" | "+inf" => return Ok(Bound::PosInf),
        "-inf" => return Ok(Bound::NegInf),
        _ => {}
    }
    let err = |msg: String| DomainParseError { text: whole.to_string(), msg };
    let e = parse(t).map_err(|e| err(e.to_string()))?;
    if e.has_var() {
        return Err(err(format!("endpoint `{t}` mentions x")));
    }
    let v = eval_exact(&e, &QuadExt::rational(Rational::from(0))).map_err(|e| err(e.to_string()))?;
    Ok(Bound::Finite(v))
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

impl FromStr for Domain {
    type Err = DomainParseError;

    /// `(a, b)`, `[a, b]`, mixed brackets, `inf` / `-inf` endpoints.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = |msg: &str| DomainParseError { text: s.to_string(), msg: msg.to_string() };
        if t.len() < 2 {
            return Err(err("too short"));
        }
        let lo_open = match t.as_bytes()[0] {
            b'(' => true,
            b'[' => false,
            _ => return Err(err("must start with `(` or `[`")),
        };
        let hi_open = match t.as_bytes()[t.len() - 1] {
            b')' => true,
            b']' => false,
            _ => return Err(err("must end with `)` or `]`")),
        };
        let inner = &t[1..t.len() - 1];
        let (a, b) = split_top_comma(inner).ok_or_else(|| err("expected `lo, hi`"))?;
        let lo = parse_endpoint(a, s)?;
        let hi = parse_endpoint(b, s)?;
        if (lo == Bound::NegInf && !lo_open) || (hi == Bound::PosInf && !hi_open) {
            return Err(err("infinite endpoints must be open"));
        }
        Domain::new(lo, lo_open, hi, hi_open).ok_or_else(|| err("lower endpoint must be below upper"))
    }
}

fn endpoint_text(b: &Bound) -> String {
    match b {
        Bound::NegInf => "-inf".into(),
        Bound::PosInf => "inf".into(),
        Bound::Finite(v) => print(&Expr::Const(v.clone())),
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            endpoint_text(&self.lo),
            endpoint_text(&self.hi),
            if self.hi_open { ')' } else { ']' }
        )
    }
}

impl Serialize for Domain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Domain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
