use num_traits::{One, ToPrimitive, Zero};

use crate::expr::{build, Expr};
use crate::numerics::{QuadExt, Rational, Sign};
use crate::poly::{poly_to_expr, UniPoly};

/// Rational function in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Debug)]
pub(crate) struct RatFun {
    pub num: UniPoly<Rational>,
    pub den: UniPoly<Rational>,
}

impl RatFun {
    pub fn new(num: UniPoly<Rational>, den: UniPoly<Rational>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFun::constant(Rational::zero()));
        }
        let g = num.gcd(&den);
        let mut n = num.exact_div(&g).expect("gcd divides");
        let mut d = den.exact_div(&g).expect("gcd divides");
        let lc = d.lc();
        n = n.scale(&lc.recip().expect("nonzero"));
        d = d.monic();
        Some(RatFun { num: n, den: d })
    }

    pub fn constant(c: Rational) -> Self {
        RatFun { num: UniPoly::constant(c), den: UniPoly::one() }
    }

    pub fn poly(p: UniPoly<Rational>) -> Self {
        RatFun { num: p, den: UniPoly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        (self.den.degree() == Some(0) && self.num.degree().unwrap_or(0) == 0).then(|| self.num.coeff(0))
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn div(&self, o: &RatFun) -> Option<RatFun> {
        RatFun::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn powi(&self, n: i64) -> Option<RatFun> {
        let base = if n < 0 { RatFun::constant(Rational::one()).div(self)? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        Some(RatFun { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn to_expr(&self) -> Expr {
        let n = poly_to_expr(&self.num);
        if self.den.degree() == Some(0) {
            return n;
        }
        build::div(n, poly_to_expr(&self.den))
    }
}

/// `p + q·√R` for the one radicand `R` shared by the whole expression.
#[derive(Clone, Debug)]
struct RadForm {
    p: RatFun,
    q: RatFun,
}

pub(crate) struct Decomposition {
    pub p: RatFun,
    pub q: RatFun,
    pub r: Option<RatFun>,
}

#[derive(Debug)]
pub(crate) enum DecompError {
    TwoRadicals,
    OtherRoot,
    Singular,
}

struct Decomposer {
    r: Option<RatFun>,
}

impl Decomposer {
    fn zero() -> RatFun {
        RatFun::constant(Rational::zero())
    }

    /// Registers `√s` and returns `c` with `√s = c·√R`.
    fn radical(&mut self, s: &RatFun) -> Result<RatFun, DecompError> {
        let Some(r) = &self.r else {
            self.r = Some(s.clone());
            return Ok(RatFun::constant(Rational::one()));
        };
        let ratio = s.div(r).ok_or(DecompError::Singular)?;
        let c = ratio.as_constant().ok_or(DecompError::TwoRadicals)?;
        let root = QuadExt::rational(c).exact_sqrt().and_then(|v| v.as_rational().cloned());
        root.map(RatFun::constant).ok_or(DecompError::TwoRadicals)
    }

    fn mul(&self, a: &RadForm, b: &RadForm) -> RadForm {
        let r = self.r.clone().unwrap_or_else(Self::zero);
        RadForm {
            p: a.p.mul(&b.p).add(&a.q.mul(&b.q).mul(&r)),
            q: a.p.mul(&b.q).add(&a.q.mul(&b.p)),
        }
    }

    fn div(&self, a: &RadForm, b: &RadForm) -> Result<RadForm, DecompError> {
        if b.q.is_zero() {
            return Ok(RadForm {
                p: a.p.div(&b.p).ok_or(DecompError::Singular)?,
                q: a.q.div(&b.p).ok_or(DecompError::Singular)?,
            });
        }
        let r = self.r.clone().expect("radical registered");
        let conj = RadForm { p: b.p.clone(), q: b.q.neg() };
        let den = b.p.mul(&b.p).sub(&b.q.mul(&b.q).mul(&r));
        let top = self.mul(a, &conj);
        Ok(RadForm {
            p: top.p.div(&den).ok_or(DecompError::Singular)?,
            q: top.q.div(&den).ok_or(DecompError::Singular)?,
        })
    }

    fn go(&mut self, e: &Expr) -> Result<RadForm, DecompError> {
        let plain = |p: RatFun| RadForm { p, q: Self::zero() };
        Ok(match e {
            Expr::Const(c) => match c.radicand() {
                None => plain(RatFun::constant(c.a().clone())),
                Some(d) => {
                    let k = self.radical(&RatFun::constant(Rational::from(d as i64)))?;
                    RadForm { p: RatFun::constant(c.a().clone()), q: k.mul(&RatFun::constant(c.b().clone())) }
                }
            },
            Expr::Var => plain(RatFun::poly(UniPoly::x())),
            Expr::Neg(a) => {
                let f = self.go(a)?;
                RadForm { p: f.p.neg(), q: f.q.neg() }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (self.go(a)?, self.go(b)?);
                if matches!(e, Expr::Add(..)) {
                    RadForm { p: x.p.add(&y.p), q: x.q.add(&y.q) }
                } else {
                    RadForm { p: x.p.sub(&y.p), q: x.q.sub(&y.q) }
                }
            }
            Expr::Mul(a, b) => {
                let (x, y) = (self.go(a)?, self.go(b)?);
                self.mul(&x, &y)
            }
            Expr::Div(a, b) => {
                let (x, y) = (self.go(a)?, self.go(b)?);
                self.div(&x, &y)?
            }
            Expr::Pow(a, r) => {
                let base = self.go(a)?;
                let n = r.numer().to_i64().ok_or(DecompError::OtherRoot)?;
                if r.is_integer() {
                    let mut acc = plain(RatFun::constant(Rational::one()));
                    for _ in 0..n.unsigned_abs() {
                        acc = self.mul(&acc, &base);
                    }
                    if n < 0 {
                        acc = self.div(&plain(RatFun::constant(Rational::one())), &acc)?;
                    }
                    acc
                } else if r.denom() == &2.into() {
                    if !base.q.is_zero() {
                        return Err(DecompError::TwoRadicals);
                    }
                    let s = base.p;
                    if s.is_zero() {
                        return Ok(plain(Self::zero()));
                    }
                    let c = self.radical(&s)?;
                    // s^(n/2) = s^((n-1)/2) · √s
                    let j = (n - 1).div_euclid(2);
                    RadForm { p: Self::zero(), q: s.powi(j).ok_or(DecompError::Singular)?.mul(&c) }
                } else {
                    return Err(DecompError::OtherRoot);
                }
            }
        })
    }
}

/// Writes `e` as `P + Q·√R` with `P`, `Q`, `R` rational functions.
pub(crate) fn decompose(e: &Expr) -> Result<Decomposition, DecompError> {
    let mut d = Decomposer { r: None };
    let f = d.go(e)?;
    Ok(Decomposition { p: f.p, q: f.q, r: d.r })
}

/// Sign of a rational function at a rational point, if defined there.
pub(crate) fn sign_at(f: &RatFun, x: &Rational) -> Option<Sign> {
    let d = f.den.sign_at(x);
    if d == Sign::Zero {
        return None;
    }
    let n = f.num.sign_at(x);
    Some(if d == Sign::Negative { n.flip() } else { n })
}
