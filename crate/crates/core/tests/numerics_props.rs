mod common;

use common::{positive_rational, small_rational};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use tangent_core::numerics::{
    interval_arith, interval_pow, interval_root, quadext_sign, rat, Precision, QuadExt, RatInterval, Rational, Sign,
};

fn canonical(r: &Rational) -> bool {
    let (n, d) = (r.numer(), r.denom());
    *d >= BigInt::from(1) && n.gcd(d) == BigInt::from(1) || (n == &BigInt::from(0) && d == &BigInt::from(1))
}

fn radicand() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 6, 7, 10, 11, 13, 15])
}

fn quad(d: u64) -> impl Strategy<Value = QuadExt> {
    (small_rational(), small_rational()).prop_map(move |(a, b)| QuadExt::new(a, b, d))
}

/// Interval with a rational point inside it.
fn interval_and_point() -> impl Strategy<Value = (RatInterval, Rational)> {
    (small_rational(), 0i64..=40, 0i64..=40, 1i64..=8).prop_map(|(p, l, h, d)| {
        let lo = &p - &rat(l, d);
        let hi = &p + &rat(h, d);
        (RatInterval::new(lo, hi), p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rational_canonical_form(n in -10_000i64..10_000, d in 1i64..10_000, m in -500i64..500, e in 1i64..500) {
        let (x, y) = (rat(n, d), rat(m, e));
        prop_assert!(canonical(&x));
        prop_assert!(canonical(&(&x + &y)));
        prop_assert!(canonical(&(&x - &y)));
        prop_assert!(canonical(&(&x * &y)));
        if y != Rational::from(0) {
            prop_assert!(canonical(&(&x / &y)));
        }
        prop_assert!(canonical(&(&x - &x)));
        prop_assert_eq!((&x - &x).to_string(), "0");
    }

    #[test]
    fn quadext_distributive((u, v, w) in radicand().prop_flat_map(|d| (quad(d), quad(d), quad(d)))) {
        prop_assert_eq!((&u + &v) * w.clone(), &u * &w + &v * &w);
        prop_assert_eq!(&u * &v, &v * &u);
        prop_assert_eq!(&(&u + &v) - &v, u.clone());
    }

    #[test]
    fn quadext_sign_matches_enclosure(a in small_rational(), b in small_rational(), d in radicand()) {
        let v = QuadExt::new(a.clone(), b.clone(), d);
        let prec = Precision::from_bits(200);
        let root = interval_root(&RatInterval::point(Rational::from(d as i64)), 2, &prec).unwrap();
        let iv = RatInterval::point(a).add(&RatInterval::point(b).mul(&root));
        let s = quadext_sign(&v);
        if iv.lo().is_positive() {
            prop_assert_eq!(s, Sign::Positive);
        } else if iv.hi().is_negative() {
            prop_assert_eq!(s, Sign::Negative);
        } else {
            prop_assert_eq!(s, Sign::Zero);
        }
    }

    #[test]
    fn four_ops_enclose((x, p) in interval_and_point(), (y, r) in interval_and_point()) {
        for op in ['+', '-', '*', '/'] {
            let exact = match op {
                '+' => Some(&p + &r),
                '-' => Some(&p - &r),
                '*' => Some(&p * &r),
                _ => (r != Rational::from(0)).then(|| &p / &r),
            };
            match interval_arith(op, &x, &y) {
                Ok(out) => {
                    prop_assert!(out.lo() <= out.hi());
                    prop_assert!(out.contains(&exact.unwrap()), "{op} {:?} {:?} -> {:?}", x, y, out);
                }
                Err(_) => prop_assert!(op == '/' && y.contains_zero()),
            }
        }
    }

    #[test]
    fn roots_and_powers_enclose(t in positive_rational(), w in 0i64..=20, q in prop::sample::select(vec![1u32, 2, 3, 6]), p in -3i32..=4) {
        // t^q is a point whose q-th root is exactly t
        let point = t.pow(q as i32);
        let x = RatInterval::new(point.clone(), &point + &rat(w, 100));
        let prec = Precision::from_bits(60);
        let root = interval_root(&x, q, &prec).unwrap();
        prop_assert!(root.contains(&t));
        if p != 0 {
            let pw = interval_pow(&x, p, q, &prec).unwrap();
            prop_assert!(pw.contains(&t.pow(p)));
        }
    }
}
