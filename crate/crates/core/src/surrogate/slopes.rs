use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{BoundValue, SurrogateError};
use crate::expr::{build, Expr};
use crate::numerics::{interval_root, Precision, QuadExt, RatInterval, Rational, Sign};

/// Weighted copies `cᵢ·x/(s − x)` of one convex function, tied by
/// `Σxᵢ = s`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EqualSlopeSystem {
    pub weights: Vec<Rational>,
    pub s: Rational,
}

impl EqualSlopeSystem {
    pub fn new(weights: Vec<Rational>, s: Rational) -> Result<Self, SurrogateError> {
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(SurrogateError::NonPositiveWeight(i));
        }
        if weights.len() < 2 || !s.is_positive() {
            return Err(SurrogateError::SingularSystem);
        }
        Ok(EqualSlopeSystem { weights, s })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `cᵢ·x/(s − x)`
    pub fn function(&self, i: usize) -> Expr {
        let c = Expr::rational(self.weights[i].clone());
        build::div(build::mul(c, Expr::x()), build::sub(Expr::rational(self.s.clone()), Expr::x()))
    }
}

/// Either exact or a rigorous enclosure of width at most `10^-30`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EqualSlopeSolution {
    pub t: RatInterval,
    pub points: Vec<RatInterval>,
    pub exact_points: Option<Vec<QuadExt>>,
    /// The common slope `f′ᵢ(xᵢ) = s/t²`.
    pub slope: RatInterval,
    pub closed_form: String,
}

fn tiny() -> Rational {
    Rational::new(1, num_traits::pow(num_bigint::BigInt::from(10), 30))
}

fn sqrt_text(c: &Rational) -> String {
    match QuadExt::rational(c.clone()).exact_sqrt() {
        Some(r) => r.to_string(),
        None => format!("sqrt({c})"),
    }
}

fn root_enclosures(w: &[Rational], bits: u32) -> Vec<RatInterval> {
    w.iter()
        .map(|c| interval_root(&RatInterval::point(c.clone()), 2, &Precision::from_bits(bits)).expect("positive weight"))
        .collect()
}

fn enclosed_points(sys: &EqualSlopeSystem, bits: u32) -> (RatInterval, Vec<RatInterval>) {
    let roots = root_enclosures(&sys.weights, bits);
    let sum = roots.iter().skip(1).fold(roots[0].clone(), |a, r| a.add(r));
    let top = RatInterval::point(Rational::from((sys.len() - 1) as i64) * &sys.s);
    let t = top.div(&sum).expect("positive sum").round_out(bits);
    let s = RatInterval::point(sys.s.clone());
    let pts = roots.iter().map(|r| s.sub(&r.mul(&t)).round_out(bits)).collect();
    (t, pts)
}

/// Equal slopes `cᵢ·s/(s − xᵢ)² = λ` force `s − xᵢ = √cᵢ·t` with
/// `t = (n − 1)·s / Σ√cⱼ`.
pub fn solve_equal_slopes(sys: &EqualSlopeSystem) -> Result<EqualSlopeSolution, SurrogateError> {
    let n = sys.len();
    let s = &sys.s;
    let exact_roots: Option<Vec<QuadExt>> = sys.weights.iter().map(|c| QuadExt::rational(c.clone()).exact_sqrt()).collect();
    let exact = exact_roots.and_then(|roots| {
        let mut sum = QuadExt::zero();
        for r in &roots {
            sum = sum.checked_add(r).ok()?;
        }
        let t = QuadExt::rational(Rational::from((n - 1) as i64) * s).checked_div(&sum).ok()??;
        let pts: Option<Vec<QuadExt>> = roots
            .iter()
            .map(|r| QuadExt::rational(s.clone()).checked_sub(&r.checked_mul(&t).ok()?).ok())
            .collect();
        Some((t, pts?))
    });
    let (t, points, exact_points) = match exact {
        Some((t, pts)) => {
            let enc = |v: &QuadExt| v.enclose(104);
            (enc(&t), pts.iter().map(enc).collect(), Some(pts))
        }
        None => {
            let mut bits = 128;
            loop {
                let (t, pts) = enclosed_points(sys, bits);
                if pts.iter().all(|p| p.width() <= tiny()) && t.width() <= tiny() {
                    break (t, pts, None);
                }
                bits += 64;
            }
        }
    };
    let inside = match &exact_points {
        Some(pts) => pts.iter().all(|p| p.sign() == Sign::Positive && QuadExt::rational(s.clone()).cmp_exact(p).is_gt()),
        None => points.iter().all(|p| p.lo().is_positive() && p.hi() < s),
    };
    if !inside {
        return Err(SurrogateError::NoSolutionInDomain);
    }
    let slope = RatInterval::point(s.clone()).div(&t.mul(&t)).expect("t > 0").round_out(120);
    Ok(EqualSlopeSolution { t, points, exact_points, slope, closed_form: closed_form(sys) })
}

fn closed_form(sys: &EqualSlopeSystem) -> String {
    let n = sys.len();
    let roots: Vec<String> = sys.weights.iter().map(sqrt_text).collect();
    let sum = roots.join(" + ");
    let scale = if sys.s.is_one() { String::new() } else { format!("{}*", sys.s) };
    let mut lines = vec![format!("t = {scale}{}/({sum})", n - 1)];
    for i in 0..n {
        let mut num: Vec<String> = (0..n).filter(|&j| j != i).map(|j| roots[j].clone()).collect();
        match n - 2 {
            0 => {}
            1 => num.push(format!("- {}", roots[i])),
            k => num.push(format!("- {k}*{}", roots[i])),
        }
        let num = num.join(" + ").replace("+ -", "-");
        lines.push(format!("x{} = {scale}({num})/({sum})", i + 1));
    }
    let total: Rational = sys.weights.iter().fold(Rational::zero(), |a, c| a + c);
    lines.push(format!("bound = ({sum})^2/{} - {total}", n - 1));
    lines.join("; ")
}

/// `Σ cᵢ·xᵢ/(s − xᵢ)` at the equal-slope points.
pub fn bound_from_equal_slopes(sys: &EqualSlopeSystem, sol: &EqualSlopeSolution) -> BoundValue {
    let text = sol.closed_form.rsplit("; ").next().map(|b| b.trim_start_matches("bound = ").to_string());
    if let Some(pts) = &sol.exact_points {
        let s = QuadExt::rational(sys.s.clone());
        let mut acc = QuadExt::zero();
        for (c, x) in sys.weights.iter().zip(pts) {
            let term = QuadExt::rational(c.clone()) * x / (&s - x);
            acc = acc + term;
        }
        let mut b = BoundValue::exact(acc);
        b.closed_form = text;
        return b;
    }
    let s = RatInterval::point(sys.s.clone());
    let mut acc = RatInterval::point(Rational::zero());
    for (c, x) in sys.weights.iter().zip(&sol.points) {
        let term = RatInterval::point(c.clone()).mul(x).div(&s.sub(x)).expect("x < s");
        acc = acc.add(&term);
    }
    BoundValue { exact: None, enclosure: acc.round_out(120), closed_form: text }
}
