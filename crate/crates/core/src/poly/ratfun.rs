use num_traits::ToPrimitive;

use super::UniPoly;
use crate::expr::Expr;
use crate::numerics::{Rational, Scalar};

/// Writes a radical-free expression as `num / den`. Returns `None` for
/// fractional exponents, constants outside `F`, or a zero denominator.
pub fn to_rational_function<F: Scalar>(e: &Expr) -> Option<(UniPoly<F>, UniPoly<F>)> {
    let (n, d) = go(e)?;
    if d.is_zero() {
        return None;
    }
    Some((n, d))
}

/// Polynomial view of an expression whose denominators are all constant.
pub fn to_polynomial<F: Scalar>(e: &Expr) -> Option<UniPoly<F>> {
    let (n, d) = to_rational_function::<F>(e)?;
    if d.degree() != Some(0) {
        return None;
    }
    Some(n.scale(&(F::one() / d.lc())))
}

/// Expression form of a polynomial, highest degree first.
pub fn poly_to_expr<F: Scalar>(p: &UniPoly<F>) -> Expr {
    use crate::expr::build;
    let mut acc: Option<Expr> = None;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let term = build::mul(Expr::constant(c.to_quad()), build::pow(Expr::x(), Rational::from(i as i64)));
        acc = Some(match acc {
            None => term,
            Some(a) => build::add(a, term),
        });
    }
    acc.unwrap_or_else(|| Expr::int(0))
}

fn go<F: Scalar>(e: &Expr) -> Option<(UniPoly<F>, UniPoly<F>)> {
    let one = UniPoly::<F>::one();
    Some(match e {
        Expr::Const(c) => (UniPoly::constant(F::try_from_quad(c)?), one),
        Expr::Var => (UniPoly::x(), one),
        Expr::Neg(a) => {
            let (n, d) = go::<F>(a)?;
            (n.neg(), d)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (n1, d1) = go::<F>(a)?;
            let (n2, d2) = go::<F>(b)?;
            let sub = matches!(e, Expr::Sub(..));
            let combine = |x: &UniPoly<F>, y: &UniPoly<F>| if sub { x.sub(y) } else { x.add(y) };
            if d1 == d2 {
                (combine(&n1, &n2), d1)
            } else {
                (combine(&n1.mul(&d2), &n2.mul(&d1)), d1.mul(&d2))
            }
        }
        Expr::Mul(a, b) => {
            let (n1, d1) = go::<F>(a)?;
            let (n2, d2) = go::<F>(b)?;
            (n1.mul(&n2), d1.mul(&d2))
        }
        Expr::Div(a, b) => {
            let (n1, d1) = go::<F>(a)?;
            let (n2, d2) = go::<F>(b)?;
            if n2.is_zero() {
                return None;
            }
            (n1.mul(&d2), d1.mul(&n2))
        }
        Expr::Pow(a, r) => {
            if !r.is_integer() {
                return None;
            }
            let k = r.numer().to_i64()?;
            let (n, d) = go::<F>(a)?;
            if k >= 0 {
                (n.pow(k as u32), d.pow(k as u32))
            } else {
                if n.is_zero() {
                    return None;
                }
                (d.pow((-k) as u32), n.pow((-k) as u32))
            }
        }
    })
}
