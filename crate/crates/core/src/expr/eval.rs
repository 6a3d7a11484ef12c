use num_traits::{ToPrimitive, Zero};

use super::Expr;
use crate::numerics::{interval_pow, NumericsError, Precision, QuadExt, RatInterval, Sign};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("value not exactly representable: {0}")]
    NotExactlyRepresentable(String),
    #[error("outside the real domain: {0}")]
    DomainError(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalEvalError {
    #[error("domain violation: {0}")]
    DomainViolation(String),
}

fn mixed(_: crate::numerics::MixedRadicand) -> EvalError {
    EvalError::NotExactlyRepresentable("two different square roots in one value".into())
}

/// Exact value of `e` at `p`, staying inside `ℚ` or a single `ℚ(√d)`.
pub fn eval_exact(e: &Expr, p: &QuadExt) -> Result<QuadExt, EvalError> {
    match e {
        Expr::Const(c) => Ok(c.clone()),
        Expr::Var => Ok(p.clone()),
        Expr::Add(a, b) => eval_exact(a, p)?.checked_add(&eval_exact(b, p)?).map_err(mixed),
        Expr::Sub(a, b) => eval_exact(a, p)?.checked_sub(&eval_exact(b, p)?).map_err(mixed),
        Expr::Mul(a, b) => eval_exact(a, p)?.checked_mul(&eval_exact(b, p)?).map_err(mixed),
        Expr::Neg(a) => Ok(-eval_exact(a, p)?),
        Expr::Div(a, b) => {
            let num = eval_exact(a, p)?;
            let den = eval_exact(b, p)?;
            num.checked_div(&den)
                .map_err(mixed)?
                .ok_or_else(|| EvalError::DomainError(format!("division by zero at x = {p}")))
        }
        Expr::Pow(a, r) => {
            let v = eval_exact(a, p)?;
            let q = r.denom().to_u32().expect("denominator in {1,2,3,6}");
            let n = r.numer().to_i32().ok_or_else(|| {
                EvalError::NotExactlyRepresentable(format!("exponent {r} too large"))
            })?;
            if q % 2 == 0 && v.sign() == Sign::Negative {
                return Err(EvalError::DomainError(format!("even root of negative value {v}")));
            }
            let root = v.exact_root(q).ok_or_else(|| {
                EvalError::NotExactlyRepresentable(format!("({v})^(1/{q})"))
            })?;
            if n < 0 && root.is_zero() {
                return Err(EvalError::DomainError("zero raised to a negative power".into()));
            }
            Ok(root.pow(n))
        }
    }
}

fn violation(e: NumericsError, what: &Expr) -> IntervalEvalError {
    IntervalEvalError::DomainViolation(format!("{e} in `{what}`"))
}

/// Rigorous enclosure of `{e(t) : t ∈ x}`. Intermediate results are rounded
/// outward onto a dyadic grid a few bits finer than `prec`.
pub fn eval_interval(e: &Expr, x: &RatInterval, prec: &Precision) -> Result<RatInterval, IntervalEvalError> {
    let bits = prec.bits() + 24;
    eval_rec(e, x, bits)
}

fn eval_rec(e: &Expr, x: &RatInterval, bits: u32) -> Result<RatInterval, IntervalEvalError> {
    let out = match e {
        Expr::Const(c) => return Ok(c.enclose(bits)),
        Expr::Var => return Ok(x.clone()),
        Expr::Add(a, b) => eval_rec(a, x, bits)?.add(&eval_rec(b, x, bits)?),
        Expr::Sub(a, b) => eval_rec(a, x, bits)?.sub(&eval_rec(b, x, bits)?),
        Expr::Mul(a, b) => eval_rec(a, x, bits)?.mul(&eval_rec(b, x, bits)?),
        Expr::Neg(a) => eval_rec(a, x, bits)?.neg(),
        Expr::Div(a, b) => {
            let num = eval_rec(a, x, bits)?;
            let den = eval_rec(b, x, bits)?;
            num.div(&den).map_err(|err| violation(err, e))?
        }
        Expr::Pow(a, r) => {
            let v = eval_rec(a, x, bits)?;
            let q = r.denom().to_u32().expect("denominator in {1,2,3,6}");
            let n = r
                .numer()
                .to_i32()
                .ok_or_else(|| IntervalEvalError::DomainViolation(format!("exponent {r} too large")))?;
            if q == 1 {
                v.powi(n).map_err(|err| violation(err, e))?
            } else {
                interval_pow(&v, n, q, &Precision::from_bits(bits)).map_err(|err| violation(err, e))?
            }
        }
    };
    Ok(out.round_out(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::numerics::rat;

    fn q(r: crate::numerics::Rational) -> QuadExt {
        QuadExt::rational(r)
    }

    #[test]
    fn first_example_tangency_value() {
        let f = parse("(1-x)/x - 2*sqrt(2*(1-x)/x)").unwrap();
        assert_eq!(eval_exact(&f, &q(rat(1, 3))).unwrap(), q(rat(-2, 1)));
    }

    #[test]
    fn tenth_example_at_sqrt2() {
        let f = parse("x/sqrt(4-x^2)").unwrap();
        assert_eq!(eval_exact(&f, &QuadExt::sqrt_int(2)).unwrap(), q(rat(1, 1)));
    }

    #[test]
    fn inexact_root_reported() {
        let f = parse("sqrt(x)").unwrap();
        let v = eval_exact(&f, &q(rat(1, 3))).unwrap();
        assert_eq!(v, QuadExt::new(rat(0, 1), rat(1, 3), 3));
        // √(1/3) lies in ℚ(√3), which clashes with an active √2
        let g = parse("sqrt(x) + sqrt2").unwrap();
        assert!(matches!(
            eval_exact(&g, &q(rat(1, 3))),
            Err(EvalError::NotExactlyRepresentable(_))
        ));
        let h = parse("cbrt(x)").unwrap();
        assert!(matches!(eval_exact(&h, &q(rat(2, 1))), Err(EvalError::NotExactlyRepresentable(_))));
    }

    #[test]
    fn domain_errors() {
        let f = parse("1/x").unwrap();
        assert!(matches!(eval_exact(&f, &q(rat(0, 1))), Err(EvalError::DomainError(_))));
        let g = parse("sqrt(x)").unwrap();
        assert!(matches!(eval_exact(&g, &q(rat(-1, 1))), Err(EvalError::DomainError(_))));
    }

    #[test]
    fn interval_square() {
        let f = parse("x^2").unwrap();
        let r = eval_interval(&f, &RatInterval::new(rat(1, 1), rat(2, 1)), &Precision::default()).unwrap();
        assert_eq!(r, RatInterval::new(rat(1, 1), rat(4, 1)));
    }

    #[test]
    fn fourth_example_second_derivative_positive() {
        let h2 = parse("-1/4*(1-x)^(-3/2) + 1/4*x^(-3/2) + 2*sqrt2").unwrap();
        let r = eval_interval(&h2, &RatInterval::new(rat(2, 5), rat(3, 5)), &Precision::default()).unwrap();
        assert!(*r.lo() >= rat(23, 10), "{r}");
    }

    #[test]
    fn pole_inside() {
        let f = parse("1/x").unwrap();
        let r = eval_interval(&f, &RatInterval::new(rat(-1, 1), rat(1, 1)), &Precision::default());
        assert!(matches!(r, Err(IntervalEvalError::DomainViolation(_))));
    }
}
