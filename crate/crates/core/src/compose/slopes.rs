use super::sample::spot_check;
use super::{ClassicalStep, ComposeError, ComposedVerdict, Constraint, ProblemSpec, Witness};
use crate::certify::{certify, Claim, Strategy};
use crate::expr::{diff, Domain};
use crate::numerics::Rational;
use crate::surrogate::{bound_from_equal_slopes, solve_equal_slopes, EqualSlopeSystem};

/// Adds the tangent lines of the convex `fᵢ` at the equal-slope points; the
/// slope terms cancel through `Σxᵢ = s`.
pub fn compose_equal_slopes(sys: &EqualSlopeSystem, spec: &ProblemSpec) -> Result<ComposedVerdict, ComposeError> {
    spec.validate()?;
    match &spec.constraint {
        Constraint::SumOfC { c, total } if c.exponent() == &Rational::from(1) && total == &sys.s => {}
        other => return Err(ComposeError::WrongConstraint(format!("{other:?}"))),
    }
    if spec.n != sys.len() {
        return Err(ComposeError::InvalidProblem(format!("{} weights for {} variables", sys.len(), spec.n)));
    }
    let dom = Domain::open(Rational::from(0), sys.s.clone());
    for i in 0..sys.len() {
        let f2 = diff(&diff(&sys.function(i)));
        let (v, _) = certify(&Claim::positive(f2, dom.clone()), Strategy::Auto);
        if !v.is_proved() {
            return Err(ComposeError::SideConditionFailed(format!("f{}'' > 0 on {dom}", i + 1)));
        }
    }
    let sol = solve_equal_slopes(sys).map_err(|e| ComposeError::UnsupportedSurrogate(e.to_string()))?;
    let bound = bound_from_equal_slopes(sys, &sol);
    let witness = match &sol.exact_points {
        Some(p) => Witness::Exact(p.clone()),
        None => Witness::Enclosed(sol.points.clone()),
    };
    let passed = spot_check(spec, &bound, 100, 13);
    Ok(ComposedVerdict {
        bound,
        strict: Some(false),
        equality_witnesses: vec![witness],
        classical_steps: vec![ClassicalStep {
            name: "convex function above its tangent".into(),
            statement: "f(x) >= f(x_i) + f'(x_i)(x - x_i) when f'' > 0".into(),
            checked_by: "100".into(),
            passed,
        }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::tests::spec;
    use crate::numerics::{rat, RatInterval};
    use crate::surrogate::ConstraintFn;

    #[test]
    fn sixth_example_bound() {
        let sys = EqualSlopeSystem::new(vec![rat(3, 1), rat(4, 1), rat(5, 1)], rat(1, 1)).unwrap();
        let mut s = spec("x", 3, "(0, 1)", Constraint::SumOfC { c: ConstraintFn::identity(), total: rat(1, 1) }, "0");
        s.functions = (0..3).map(|i| sys.function(i)).collect();
        let v = compose_equal_slopes(&sys, &s).unwrap();
        // (√3 + 2 + √5)²/2 − 12 ≈ 5.809221...
        let lo = rat(5_809_220, 1_000_000);
        let hi = rat(5_809_222, 1_000_000);
        assert!(v.bound.enclosure.lo() > &lo && v.bound.enclosure.hi() < &hi, "{:?}", v.bound);
        assert!(v.bound.enclosure.width() < rat(1, 1_000_000_000));
        assert!(v.classical_steps[0].passed);
        let Witness::Enclosed(p) = &v.equality_witnesses[0] else { panic!() };
        let sum = p.iter().skip(1).fold(p[0].clone(), |a: RatInterval, x| a.add(x));
        assert!(sum.contains(&rat(1, 1)));
    }
}
