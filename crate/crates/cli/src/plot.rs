//! CSV samples of `f` and its surrogate for plotting.

use tangent_core::expr::{diff, eval_interval, Bound, Expr};
use tangent_core::numerics::{Precision, QuadExt, RatInterval, Rational};
use tangent_core::surrogate::solve_equal_slopes;

use crate::pipeline::{build_claims, equal_slope_system};
use crate::problem::Problem;

const BITS: u32 = 128;
const DIGITS: usize = 20;

fn clip() -> Rational {
    Rational::new(1, 1000)
}

/// `[lo, hi]` inside the domain: open ends move in by `10^-3`, infinite ends
/// are cut far enough out to show every tangency point.
pub fn window(p: &Problem, points: &[RatInterval]) -> (Rational, Rational) {
    let reach = points.iter().map(|x| x.hi().abs()).fold(Rational::from(0), |a, b| a.max(b));
    let span = Rational::from(4).max(&reach * &Rational::from(2) + Rational::from(1));
    let d = &p.domain;
    let lo = d.lo.finite().map(|v| {
        let e = v.enclose(BITS);
        if d.lo_open { e.hi() + &clip() } else { e.hi().clone() }
    });
    let hi = d.hi.finite().map(|v| {
        let e = v.enclose(BITS);
        if d.hi_open { e.lo() - &clip() } else { e.lo().clone() }
    });
    match (lo, hi) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) => {
            let b = &a + &span;
            (a, b)
        }
        (None, Some(b)) => (&b - &span, b),
        (None, None) => (-span.clone(), span),
    }
}

/// One lower-bounding curve per function.
enum Lower {
    Exact(Expr),
    /// Tangent line of `f` at an enclosed point.
    Tangent { f: Expr, at: RatInterval },
}

impl Lower {
    fn eval(&self, x: &RatInterval, prec: &Precision) -> Option<RatInterval> {
        match self {
            Lower::Exact(g) => eval_interval(g, x, prec).ok(),
            Lower::Tangent { f, at } => {
                let v = eval_interval(f, at, prec).ok()?;
                let s = eval_interval(&diff(f), at, prec).ok()?;
                Some(v.add(&s.mul(&x.sub(at))))
            }
        }
    }
}

fn decimal(iv: Option<RatInterval>) -> String {
    match iv {
        Some(v) => v.midpoint().to_decimal(DIGITS),
        None => "nan".into(),
    }
}

pub fn emit_plot(p: &Problem, samples: usize) -> Result<String, String> {
    if samples < 2 {
        return Err("need at least two samples".into());
    }
    let n = p.functions.len();
    let (lowers, points): (Vec<Lower>, Vec<RatInterval>) = match equal_slope_system(p) {
        Some(sys) => {
            let sys = sys?;
            let sol = solve_equal_slopes(&sys).map_err(|e| e.to_string())?;
            let lows = (0..n).map(|i| Lower::Tangent { f: p.functions[i].clone(), at: sol.points[i].clone() }).collect();
            (lows, sol.points.clone())
        }
        None => {
            let claims = build_claims(p)?;
            let mut pts: Vec<QuadExt> = Vec::new();
            for g in &claims.surrogates {
                for t in &g.tangency_points {
                    if !pts.contains(t) {
                        pts.push(t.clone());
                    }
                }
            }
            let lows = claims.surrogates.iter().map(|g| Lower::Exact(g.expr())).collect();
            (lows, pts.iter().map(|t| t.enclose(BITS)).collect())
        }
    };
    let (lo, hi) = window(p, &points);
    let step = (&hi - &lo) / Rational::from(samples as i64 - 1);
    let mut rows: Vec<(RatInterval, &str)> =
        (0..samples).map(|j| (RatInterval::point(&lo + &(&step * &Rational::from(j as i64))), "grid")).collect();
    for t in points {
        let inside = match (&p.domain.lo, &p.domain.hi) {
            (Bound::Finite(a), _) if t.lo() < &a.enclose(BITS).lo().clone() => false,
            (_, Bound::Finite(b)) if t.hi() > &b.enclose(BITS).hi().clone() => false,
            _ => p.domain.contains_rational(&t.midpoint()),
        };
        if inside {
            rows.push((t, "tangency"));
        }
    }
    rows.sort_by(|a, b| a.0.midpoint().cmp(&b.0.midpoint()));

    let prec = Precision::from_bits(BITS);
    let mut header = vec!["x".to_string()];
    if n == 1 {
        header.extend(["f".into(), "g".into()]);
    } else {
        for i in 1..=n {
            header.extend([format!("f{i}"), format!("g{i}")]);
        }
    }
    header.push("kind".into());
    let mut out = vec![header.join(",")];
    for (x, kind) in rows {
        let mut cols = vec![x.midpoint().to_decimal(DIGITS)];
        for (f, g) in p.functions.iter().zip(&lowers) {
            cols.push(decimal(eval_interval(f, &x, &prec).ok()));
            cols.push(decimal(g.eval(&x, &prec)));
        }
        cols.push(kind.into());
        out.push(cols.join(","));
    }
    Ok(out.join("\n") + "\n")
}
