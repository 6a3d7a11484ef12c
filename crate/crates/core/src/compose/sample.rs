//! Random points satisfying a problem constraint, used for spot checks of
//! steps that are not certified.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Constraint, ProblemSpec};
use crate::certify::interval::ten_pow;
use crate::expr::{eval_interval, Bound};
use crate::numerics::{interval_pow, Precision, QuadExt, RatInterval, Rational};
use crate::surrogate::BoundValue;

const BITS: u32 = 96;

fn uniform(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1..1000i64), 1000)
}

fn inside(spec: &ProblemSpec, iv: &RatInterval) -> bool {
    spec.domain.contains_rational(iv.lo()) && spec.domain.contains_rational(iv.hi())
}

fn span(spec: &ProblemSpec) -> (Rational, Rational) {
    let to_rat = |b: &Bound| b.finite().map(|v| v.enclose(BITS));
    match (to_rat(&spec.domain.lo), to_rat(&spec.domain.hi)) {
        (Some(a), Some(b)) => (a.hi().clone(), b.lo().clone()),
        (Some(a), None) => (a.hi().clone(), a.hi() + &Rational::from(4)),
        (None, Some(b)) => (b.lo() - &Rational::from(4), b.lo().clone()),
        (None, None) => (Rational::from(-4), Rational::from(4)),
    }
}

fn draw(spec: &ProblemSpec, rng: &mut ChaCha8Rng) -> Option<Vec<RatInterval>> {
    let n = spec.n;
    let prec = Precision::from_bits(BITS);
    match &spec.constraint {
        Constraint::SumOfC { c, total } => {
            let w: Vec<Rational> = (0..n).map(|_| uniform(rng)).collect();
            let sum = w.iter().fold(Rational::zero(), |a, b| a + b);
            let p = c.exponent();
            let (num, den) = (p.numer().try_into().ok()?, p.denom().try_into().ok()?);
            w.iter()
                .map(|wi| {
                    let ci = RatInterval::point(total * wi / &sum);
                    // x = c^(1/p) = c^(den/num)
                    interval_pow(&ci, den, num, &prec).ok().map(|r| r.round_out(BITS))
                })
                .collect()
        }
        Constraint::ProductAtLeast { min } => {
            let mut xs: Vec<Rational> = (0..n - 1).map(|_| uniform(rng) * Rational::from(4) + Rational::new(1, 10)).collect();
            let prod = xs.iter().fold(Rational::one(), |a, b| a * b);
            let slack = Rational::one() + uniform(rng);
            xs.push(min * &slack / &prod);
            Some(xs.into_iter().map(RatInterval::point).collect())
        }
        Constraint::PairSum { total } => {
            // c = (T − ab)/(a + b) needs ab < T
            let a = uniform(rng) * Rational::from(2);
            let b = uniform(rng) * (total / &a);
            if n != 3 {
                return None;
            }
            let c = (total - &(&a * &b)) / (&a + &b);
            Some([a, b, c].into_iter().map(RatInterval::point).collect())
        }
        Constraint::Free { .. } => {
            let (lo, hi) = span(spec);
            Some((0..n).map(|_| RatInterval::point(&lo + &(&(&hi - &lo) * &uniform(rng)))).collect())
        }
    }
}

/// `count` points satisfying the constraint inside the domain, as tight
/// enclosures (exact points when the constraint allows it).
pub fn sample_points(spec: &ProblemSpec, count: usize, seed: u64) -> Vec<Vec<RatInterval>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < count * 50 {
        tries += 1;
        if let Some(p) = draw(spec, &mut rng) {
            if p.iter().all(|iv| inside(spec, iv)) {
                out.push(p);
            }
        }
    }
    out
}

/// Encloses `lhs − rhs` of the n-variable inequality at `point` with the
/// bound (or coefficient, for unconstrained problems) set to `bound`.
pub fn objective_enclosure(spec: &ProblemSpec, point: &[RatInterval], bound: &RatInterval) -> Option<RatInterval> {
    let prec = Precision::from_bits(BITS);
    let vals: Vec<RatInterval> = (0..spec.n)
        .map(|i| eval_interval(spec.function(i), &point[i], &prec).ok())
        .collect::<Option<_>>()?;
    let sum = || vals.iter().skip(1).fold(vals[0].clone(), |a, v| a.add(v));
    Some(match &spec.constraint {
        Constraint::ProductAtLeast { .. } | Constraint::PairSum { .. } => {
            vals.iter().skip(1).fold(vals[0].clone(), |a, v| a.mul(v)).sub(bound)
        }
        Constraint::SumOfC { .. } => sum().sub(bound),
        Constraint::Free { offset } => {
            let xs = point.iter().skip(1).fold(point[0].clone(), |a, v| a.add(v));
            sum().sub(&RatInterval::point(offset.clone())).sub(&bound.mul(&xs))
        }
    })
}

/// True when no sampled point shows the inequality failing by more than
/// `10^-15`.
pub fn spot_check(spec: &ProblemSpec, bound: &BoundValue, count: usize, seed: u64) -> bool {
    let tol = -(Rational::one() / ten_pow(15));
    let b = match &bound.exact {
        Some(v) => v.enclose(BITS),
        None => bound.enclosure.clone(),
    };
    let pts = sample_points(spec, count, seed);
    !pts.is_empty()
        && pts.iter().all(|p| objective_enclosure(spec, p, &b).is_some_and(|m| m.hi() >= &tol))
}

/// Exact value of a sampled point, when every coordinate is a point interval.
pub(crate) fn exact_point(p: &[RatInterval]) -> Option<Vec<QuadExt>> {
    p.iter().map(|iv| iv.is_point().then(|| QuadExt::rational(iv.lo().clone()))).collect()
}
