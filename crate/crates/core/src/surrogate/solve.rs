use num_traits::{ToPrimitive, Zero};

use super::{ConstraintFn, FamilyKind, Residual, ResidualKind, SolvedSurrogate, SurrogateError, SurrogateFamily, TangencyCondition};
use crate::expr::{diff, eval_exact, Domain, Expr};
use crate::numerics::{MixedRadicand, QuadExt, Rational};
use crate::poly::{isolate_roots, to_rational_function, UniPoly};

fn mixed(_: MixedRadicand) -> SurrogateError {
    SurrogateError::NotExactlyRepresentable("two different square roots in one parameter".into())
}

fn tangent_residuals(x0: &QuadExt) -> Vec<Residual> {
    vec![
        Residual { kind: ResidualKind::Value, at: x0.clone() },
        Residual { kind: ResidualKind::Slope, at: x0.clone() },
    ]
}

/// Tangent line `y = f(x₀) + f′(x₀)(x − x₀)`.
pub fn solve_line_tangent(f: &Expr, x0: &QuadExt) -> Result<SolvedSurrogate, SurrogateError> {
    let v = eval_exact(f, x0)?;
    let s = eval_exact(&diff(f), x0)?;
    let alpha = v.checked_sub(&s.checked_mul(x0).map_err(mixed)?).map_err(mixed)?;
    Ok(SolvedSurrogate {
        family: SurrogateFamily::Line { alpha, beta: s },
        tangency_points: vec![x0.clone()],
        residuals: tangent_residuals(x0),
        notes: format!("tangent line at x0 = {x0}"),
    })
}

/// All admissible `x₀` in the domain with `n·(f(x₀) − f′(x₀)·x₀) = A`,
/// ascending, each with its tangent line.
pub fn solve_intercept(
    f: &Expr,
    n: u32,
    a: &Rational,
    domain: &Domain,
) -> Result<Vec<(QuadExt, SolvedSurrogate)>, SurrogateError> {
    let (p, q) = to_rational_function::<Rational>(f).ok_or(SurrogateError::NonAlgebraicCondition)?;
    // f − x·f′ = (PQ − x(P′Q − PQ′)) / Q²
    let x = UniPoly::x();
    let num = p.derivative().mul(&q).sub(&p.mul(&q.derivative()));
    let lhs = p.mul(&q).sub(&x.mul(&num)).scale(&Rational::from(n as i64));
    let cond = lhs.sub(&q.mul(&q).scale(a));
    let candidates: Vec<QuadExt> = if cond.is_zero() {
        vec![QuadExt::rational(domain.interior_point())]
    } else {
        let boxes = isolate_roots(&cond, domain).map_err(|_| SurrogateError::NonAlgebraicCondition)?;
        if boxes.is_empty() {
            return Err(SurrogateError::NoSolutionInDomain);
        }
        let exact: Vec<QuadExt> = boxes.into_iter().filter_map(|b| b.exact).collect();
        if exact.is_empty() {
            return Err(SurrogateError::NotExactlyRepresentable(
                "tangency point is not in a single quadratic field".into(),
            ));
        }
        exact
    };
    let target = QuadExt::rational(a.clone());
    let scale = QuadExt::rational(Rational::from(n as i64));
    let mut out = Vec::new();
    for x0 in candidates {
        let Ok(mut line) = solve_line_tangent(f, &x0) else { continue };
        let SurrogateFamily::Line { alpha, .. } = &line.family else { unreachable!() };
        if scale.checked_mul(alpha).ok() != Some(target.clone()) {
            continue;
        }
        line.notes = format!("x0 = {x0} solves {n}(f(x0) - f'(x0)x0) = {a}");
        out.push((x0, line));
    }
    if out.is_empty() {
        return Err(SurrogateError::NoSolutionInDomain);
    }
    Ok(out)
}

/// `a·k + b·m = rhs`, tagged with the residual it encodes.
struct Equation {
    a: QuadExt,
    b: QuadExt,
    rhs: QuadExt,
    residual: Residual,
}

fn affine_equations(f: &Expr, c: &ConstraintFn, conds: &[TangencyCondition]) -> Result<Vec<Equation>, SurrogateError> {
    let df = diff(f);
    let dc = diff(&c.expr());
    let one = QuadExt::rational(Rational::from(1));
    let mut eqs = Vec::new();
    for cond in conds {
        match cond {
            TangencyCondition::TangentAt(x0) | TangencyCondition::Through(x0) => {
                eqs.push(Equation {
                    a: c.eval(x0)?,
                    b: one.clone(),
                    rhs: eval_exact(f, x0)?,
                    residual: Residual { kind: ResidualKind::Value, at: x0.clone() },
                });
                if matches!(cond, TangencyCondition::TangentAt(_)) {
                    eqs.push(Equation {
                        a: eval_exact(&dc, x0)?,
                        b: QuadExt::zero(),
                        rhs: eval_exact(&df, x0)?,
                        residual: Residual { kind: ResidualKind::Slope, at: x0.clone() },
                    });
                }
            }
            TangencyCondition::InterceptSum { .. } => {
                return Err(SurrogateError::UnsupportedCondition(cond.to_string()));
            }
        }
    }
    Ok(eqs)
}

fn solve_affine(f: &Expr, c: &ConstraintFn, conds: &[TangencyCondition]) -> Result<(QuadExt, QuadExt, Vec<Residual>), SurrogateError> {
    let eqs = affine_equations(f, c, conds)?;
    let mut solution = None;
    'search: for j in 1..eqs.len() {
        for i in 0..j {
            let (e1, e2) = (&eqs[i], &eqs[j]);
            let det = e1.a.checked_mul(&e2.b).map_err(mixed)?.checked_sub(&e2.a.checked_mul(&e1.b).map_err(mixed)?).map_err(mixed)?;
            if det.is_zero() {
                continue;
            }
            let kn = e1.rhs.checked_mul(&e2.b).map_err(mixed)?.checked_sub(&e2.rhs.checked_mul(&e1.b).map_err(mixed)?).map_err(mixed)?;
            let mn = e1.a.checked_mul(&e2.rhs).map_err(mixed)?.checked_sub(&e2.a.checked_mul(&e1.rhs).map_err(mixed)?).map_err(mixed)?;
            let k = kn.checked_div(&det).map_err(mixed)?.expect("nonzero determinant");
            let m = mn.checked_div(&det).map_err(mixed)?.expect("nonzero determinant");
            solution = Some((k, m));
            break 'search;
        }
    }
    let (k, m) = solution.ok_or(SurrogateError::SingularSystem)?;
    for e in &eqs {
        let lhs = e.a.checked_mul(&k).and_then(|t| t.checked_add(&e.b.checked_mul(&m)?));
        if lhs.ok() != Some(e.rhs.clone()) {
            return Err(SurrogateError::InconsistentConditions(format!(
                "{:?} condition at x = {} fails for k = {k}, m = {m}",
                e.residual.kind, e.residual.at
            )));
        }
    }
    Ok((k, m, eqs.into_iter().map(|e| e.residual).collect()))
}

fn solve_monomial(f: &Expr, conds: &[TangencyCondition]) -> Result<(QuadExt, Rational, Vec<Residual>), SurrogateError> {
    let x0 = conds
        .iter()
        .find_map(|c| match c {
            TangencyCondition::TangentAt(x) => Some(x.clone()),
            _ => None,
        })
        .ok_or(SurrogateError::SingularSystem)?;
    let v = eval_exact(f, &x0)?;
    let s = eval_exact(&diff(f), &x0)?;
    if v.is_zero() || x0.is_zero() {
        return Err(SurrogateError::SingularSystem);
    }
    // k·x₀^m = f(x₀), k·m·x₀^(m−1) = f′(x₀)  ⇒  m = x₀·f′(x₀)/f(x₀)
    let ratio = x0.checked_mul(&s).map_err(mixed)?.checked_div(&v).map_err(mixed)?.expect("f(x0) != 0");
    let m = ratio
        .as_rational()
        .cloned()
        .ok_or_else(|| SurrogateError::NotExactlyRepresentable(format!("exponent {ratio}")))?;
    if !crate::expr::allowed_exponent(&m) {
        return Err(SurrogateError::NotExactlyRepresentable(format!("exponent {m}")));
    }
    let q = m.denom().to_u32().expect("small denominator");
    let n = m.numer().to_i32().ok_or_else(|| SurrogateError::NotExactlyRepresentable(format!("exponent {m}")))?;
    let root = x0
        .exact_root(q)
        .ok_or_else(|| SurrogateError::NotExactlyRepresentable(format!("({x0})^(1/{q})")))?;
    let k = v.checked_div(&root.pow(n)).map_err(mixed)?.expect("x0 != 0");
    let family = SurrogateFamily::Monomial { k: k.clone(), m: m.clone() };
    let g = family.expr();
    let (df, dg) = (diff(f), diff(&g));
    let mut residuals = Vec::new();
    for c in conds {
        let (x, slope) = match c {
            TangencyCondition::TangentAt(x) => (x, true),
            TangencyCondition::Through(x) => (x, false),
            TangencyCondition::InterceptSum { .. } => return Err(SurrogateError::UnsupportedCondition(c.to_string())),
        };
        let mut checks = vec![(ResidualKind::Value, f, &g)];
        if slope {
            checks.push((ResidualKind::Slope, &df, &dg));
        }
        for (kind, a, b) in checks {
            if eval_exact(a, x)? != eval_exact(b, x)? {
                return Err(SurrogateError::InconsistentConditions(format!("{kind:?} condition at x = {x}")));
            }
            residuals.push(Residual { kind, at: x.clone() });
        }
    }
    Ok((k, m, residuals))
}

/// Solves for `(k, m)` from the first two independent conditions and
/// verifies every remaining one exactly.
pub fn solve_two_param(f: &Expr, kind: &FamilyKind, conds: &[TangencyCondition]) -> Result<SolvedSurrogate, SurrogateError> {
    let (family, residuals) = match kind {
        FamilyKind::Line => {
            let (k, m, r) = solve_affine(f, &ConstraintFn::identity(), conds)?;
            (SurrogateFamily::Line { alpha: m, beta: k }, r)
        }
        FamilyKind::Affine(c) => {
            let (k, m, r) = solve_affine(f, c, conds)?;
            (SurrogateFamily::AffineInC { k, m, c: c.clone() }, r)
        }
        FamilyKind::Monomial => {
            let (k, m, r) = solve_monomial(f, conds)?;
            (SurrogateFamily::Monomial { k, m }, r)
        }
    };
    let mut points: Vec<QuadExt> = Vec::new();
    for r in &residuals {
        if !points.contains(&r.at) {
            points.push(r.at.clone());
        }
    }
    let notes = conds.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
    Ok(SolvedSurrogate { family, tangency_points: points, residuals, notes })
}
