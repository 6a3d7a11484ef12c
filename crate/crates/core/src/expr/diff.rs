use num_traits::One;

use super::build::{add, div, mul, neg, pow, sub};
use super::Expr;

/// Symbolic derivative with respect to `x`.
pub fn diff(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => Expr::int(0),
        Expr::Var => Expr::int(1),
        Expr::Add(a, b) => add(diff(a), diff(b)),
        Expr::Sub(a, b) => sub(diff(a), diff(b)),
        Expr::Neg(a) => neg(diff(a)),
        Expr::Mul(a, b) => add(mul(diff(a), (**b).clone()), mul((**a).clone(), diff(b))),
        Expr::Div(a, b) => {
            let da = diff(a);
            let db = diff(b);
            if db.is_zero_const() {
                return div(da, (**b).clone());
            }
            let num = sub(mul(da, (**b).clone()), mul((**a).clone(), db));
            div(num, pow((**b).clone(), 2.into()))
        }
        Expr::Pow(a, r) => {
            let da = diff(a);
            if da.is_zero_const() {
                return Expr::int(0);
            }
            let lowered = pow((**a).clone(), r.clone() - crate::numerics::Rational::one());
            mul(mul(Expr::rational(r.clone()), lowered), da)
        }
    }
}
