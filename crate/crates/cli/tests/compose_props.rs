mod common;

use common::examples;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangent_cli::{run, Problem};
use tangent_core::compose::{Constraint, Witness};
use tangent_core::expr::{eval_exact, eval_interval};
use tangent_core::numerics::{interval_pow, rat, Precision, QuadExt, RatInterval, Rational, Sign};

fn tol(exp: u32) -> Rational {
    rat(1, 10i64.pow(exp))
}

fn q0() -> QuadExt {
    QuadExt::rational(rat(0, 1))
}

/// A feasible point, drawn without the library's own sampler.
fn feasible(p: &Problem, rng: &mut ChaCha8Rng, prec: &Precision) -> Vec<RatInterval> {
    let n = p.vars;
    match &p.constraint {
        Constraint::SumOfC { c, total } => {
            let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=1000)).collect();
            let s: i64 = w.iter().sum();
            let e = c.exponent();
            let (num, den) = (e.numer().to_string().parse::<i32>().unwrap(), e.denom().to_string().parse::<i32>().unwrap());
            w.iter()
                .map(|wi| {
                    let r = RatInterval::point(total * &rat(*wi, s));
                    // x = r^(1/e)
                    if num == 1 && den == 1 { r } else { interval_pow(&r, den, num as u32, prec).unwrap() }
                })
                .collect()
        }
        Constraint::ProductAtLeast { min } => {
            let mut xs: Vec<Rational> = (0..n - 1).map(|_| rat(rng.gen_range(1..=4000), 1000)).collect();
            let prod = xs.iter().fold(rat(1, 1), |a, x| &a * x);
            let slack = rat(1000 + rng.gen_range(0..=500), 1000);
            xs.push(&(min * &slack) / &prod);
            xs.into_iter().map(RatInterval::point).collect()
        }
        Constraint::Free { .. } => (0..n).map(|_| RatInterval::point(rat(rng.gen_range(-1000..=5000), 1000))).collect(),
        Constraint::PairSum { total } => {
            assert_eq!(n, 3);
            let a = rat(rng.gen_range(1..=1700), 1000);
            let b = rat(rng.gen_range(1..=1700), 1000);
            let c = &(total - &(&a * &b)) / &(&a + &b);
            vec![RatInterval::point(a), RatInterval::point(b), RatInterval::point(c)]
        }
    }
}

/// `objective − bound` enclosed at `x`; for unconstrained problems the bound
/// is the coefficient of `Σ x`.
fn margin(p: &Problem, x: &[RatInterval], bound: &RatInterval, prec: &Precision) -> RatInterval {
    let f: Vec<RatInterval> =
        (0..p.vars).map(|i| eval_interval(&p.spec().function(i).clone(), &x[i], prec).unwrap()).collect();
    let zero = RatInterval::point(rat(0, 1));
    match &p.constraint {
        Constraint::SumOfC { .. } => f.iter().fold(zero, |a, v| a.add(v)).sub(bound),
        Constraint::ProductAtLeast { .. } | Constraint::PairSum { .. } => {
            f.iter().fold(RatInterval::point(rat(1, 1)), |a, v| a.mul(v)).sub(bound)
        }
        Constraint::Free { offset } => {
            let sx = x.iter().fold(zero.clone(), |a, v| a.add(v));
            f.iter().fold(zero, |a, v| a.add(v)).sub(&RatInterval::point(offset.clone())).sub(&bound.mul(&sx))
        }
    }
}

/// `Σf ≥ bound` (or `Πf`, or the linear form) at 1000 feasible points per
/// proved example, with the composed bound rather than the claimed one.
#[test]
fn composed_bounds_hold_at_feasible_points() {
    let prec = Precision::from_bits(200);
    for (k, (name, p)) in examples().into_iter().enumerate() {
        let r = run(&p, None);
        let composed = r.composed.unwrap_or_else(|| panic!("{name}: no composed bound"));
        let bound = composed.bound.enclosure.clone();
        // the equal-slope bound is only enclosed
        let slack = if composed.bound.exact.is_some() { tol(15) } else { tol(9) };
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        for _ in 0..1000 {
            let x = feasible(&p, &mut rng, &prec);
            assert!(x.iter().all(|v| p.domain.contains_rational(&v.midpoint())), "{name}: {x:?} infeasible");
            let m = margin(&p, &x, &bound, &prec);
            assert!(m.lo() >= &-slack.clone(), "{name}: margin {} at {:?}", m.lo().to_decimal(20), x);
        }
    }
}

/// Exact witnesses reach the composed bound with no slack; enclosed ones
/// reach it to within their width.
#[test]
fn equality_witnesses_attain_the_bound() {
    let prec = Precision::from_bits(200);
    let mut exact_seen = 0;
    for (name, p) in examples() {
        let r = run(&p, None);
        let composed = r.composed.unwrap();
        if composed.strict == Some(true) {
            assert!(composed.equality_witnesses.is_empty(), "{name}");
            continue;
        }
        for w in &composed.equality_witnesses {
            match w {
                Witness::Exact(xs) => {
                    let bound = composed.bound.exact.clone().unwrap();
                    let vals: Vec<QuadExt> =
                        xs.iter().enumerate().map(|(i, x)| eval_exact(p.spec().function(i), x).unwrap()).collect();
                    let lhs = match &p.constraint {
                        Constraint::SumOfC { .. } => vals.iter().fold(q0(), |a, v| a + v.clone()),
                        Constraint::ProductAtLeast { .. } | Constraint::PairSum { .. } => {
                            vals.iter().fold(QuadExt::rational(rat(1, 1)), |a, v| a * v.clone())
                        }
                        Constraint::Free { offset } => {
                            let s = vals.iter().fold(q0(), |a, v| a + v.clone());
                            let sx = xs.iter().fold(q0(), |a, v| a + v.clone());
                            s - QuadExt::rational(offset.clone()) - bound.clone() * sx
                        }
                    };
                    let rhs = if matches!(p.constraint, Constraint::Free { .. }) { q0() } else { bound };
                    assert_eq!((lhs.clone() - rhs.clone()).sign(), Sign::Zero, "{name}: {lhs} vs {rhs}");
                    exact_seen += 1;
                }
                Witness::Enclosed(xs) => {
                    let m = margin(&p, xs, &composed.bound.enclosure, &prec);
                    assert!(m.contains_zero() && m.width() <= tol(9), "{name}: {:?}", m);
                }
            }
        }
    }
    assert!(exact_seen >= 6, "{exact_seen} exact witnesses");
}
