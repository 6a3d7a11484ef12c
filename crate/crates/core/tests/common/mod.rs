#![allow(dead_code)]

use proptest::prelude::*;
use tangent_core::numerics::{rat, QuadExt, Rational};
use tangent_core::Expr;

pub fn q(n: i64, d: i64) -> QuadExt {
    QuadExt::rational(rat(n, d))
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

pub fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=60, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn bx(e: Expr) -> Box<Expr> {
    Box::new(e)
}

fn leaf(radicals: bool) -> BoxedStrategy<Expr> {
    let base = prop_oneof![
        4 => Just(Expr::x()),
        2 => (-5i64..=5).prop_map(Expr::int),
        1 => (-9i64..=9, 1i64..=7).prop_map(|(n, d)| Expr::rational(rat(n, d))),
    ];
    if !radicals {
        return base.boxed();
    }
    prop_oneof![
        6 => base,
        2 => prop_oneof![Just(rat(1, 2)), Just(rat(1, 3)), Just(rat(2, 3)), Just(rat(3, 2)), Just(rat(-1, 6))]
            .prop_map(|p| Expr::x().pow(p)),
        1 => Just(Expr::constant(QuadExt::sqrt_int(2))),
    ]
    .boxed()
}

/// Random trees over `x`; with `radicals`, fractional powers of `x` and
/// `√2` appear among the leaves.
pub fn expr_tree(radicals: bool) -> impl Strategy<Value = Expr> {
    leaf(radicals).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(bx(a), bx(b))),
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(bx(a), bx(b))),
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(bx(a), bx(b))),
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(bx(a), bx(b))),
            1 => inner.clone().prop_map(|a| Expr::Neg(bx(a))),
            2 => (inner, prop_oneof![Just(2i64), Just(3), Just(-1), Just(-2)]).prop_map(|(a, n)| a.powi(n)),
        ]
    })
}

/// Rational endpoints for a domain, ordered.
pub fn ordered_pair() -> impl Strategy<Value = (Rational, Rational)> {
    (small_rational(), small_rational()).prop_filter_map("distinct", |(a, b)| match a.cmp(&b) {
        std::cmp::Ordering::Less => Some((a, b)),
        std::cmp::Ordering::Greater => Some((b, a)),
        std::cmp::Ordering::Equal => None,
    })
}
