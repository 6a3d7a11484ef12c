use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::sample::{exact_point, sample_points};
use super::{ClassicalStep, ComposeError, ComposedVerdict, Constraint, ProblemSpec};
use crate::certify::{certify, Certificate, Claim, Strategy, Verdict};
use crate::expr::{build, print, Domain, Expr};
use crate::numerics::{QuadExt, Rational};
use crate::poly::{expand_equal, MultiPoly};
use crate::surrogate::{BoundValue, SolvedSurrogate};

/// One certified step `upper ≥ lower` of a pointwise chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainLink {
    pub upper: String,
    pub lower: String,
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainOutcome {
    pub links: Vec<ChainLink>,
    /// The first link that failed, with its witness when one was found.
    pub broken_at: Option<(usize, Option<Rational>)>,
}

impl ChainOutcome {
    pub fn proved(&self) -> bool {
        self.broken_at.is_none()
    }
}

/// Certifies `chain[i] ≥ chain[i+1]` on `domain` for every adjacent pair.
pub fn chain_compose(chain: &[Expr], domain: &Domain, strategy: Strategy) -> ChainOutcome {
    let mut links = Vec::new();
    let mut broken_at = None;
    for (i, w) in chain.windows(2).enumerate() {
        let claim = Claim::nonneg(build::sub(w[0].clone(), w[1].clone()), domain.clone());
        let (verdict, certificate) = certify(&claim, strategy);
        if broken_at.is_none() && !verdict.is_proved() {
            let witness = match &verdict {
                Verdict::Disproved { witness } => Some(witness.clone()),
                _ => None,
            };
            broken_at = Some((i, witness));
        }
        links.push(ChainLink { upper: print(&w[0]), lower: print(&w[1]), verdict, certificate });
    }
    ChainOutcome { links, broken_at }
}

fn cube(v: &QuadExt) -> QuadExt {
    v.pow(3)
}

/// `Π(xᵢ³ + 2) ≥ (Σxᵢ)³ ≥ (3·Σxᵢxⱼ)^(3/2)` for three positive variables.
/// Hölder is taken as an axiom and spot-checked; the second step rests on
/// the identity `2[(a+b+c)² − 3(ab+bc+ca)] = (a−b)² + (b−c)² + (c−a)²`.
pub fn compose_pair_sum_holder(g: &SolvedSurrogate, spec: &ProblemSpec) -> Result<ComposedVerdict, ComposeError> {
    spec.validate()?;
    let Constraint::PairSum { total } = &spec.constraint else {
        return Err(ComposeError::WrongConstraint("pair-sum composition needs a pair-sum constraint".into()));
    };
    if spec.n != 3 {
        return Err(ComposeError::WrongConstraint("pair-sum composition is for three variables".into()));
    }
    let parts = g.family.affine_parts();
    let three = crate::surrogate::ConstraintFn::new(Rational::from(3)).expect("3 is allowed");
    match parts {
        Some((k, m, c)) if k == QuadExt::one() && m == QuadExt::rational(Rational::from(2)) && c == three => {}
        _ => return Err(ComposeError::UnsupportedSurrogate(g.family.to_string())),
    }
    let (v, _) = certify(&Claim::nonneg(g.expr(), spec.domain.clone()), Strategy::Auto);
    if !v.is_proved() {
        return Err(ComposeError::SideConditionFailed(format!("{} ≥ 0 on {}", g.family, spec.domain)));
    }

    let three_t = QuadExt::rational(Rational::from(3) * total);
    let root = three_t.exact_sqrt().ok_or_else(|| ComposeError::NotExact(format!("sqrt({three_t})")))?;
    let bound = three_t.checked_mul(&root)?;

    let pts: Vec<Vec<QuadExt>> = sample_points(spec, 100, 11).iter().filter_map(|p| exact_point(p)).collect();
    let holder_ok = pts.len() == 100
        && pts.iter().all(|p| {
            let lhs = p.iter().fold(QuadExt::one(), |a, x| a * (cube(x) + QuadExt::rational(Rational::from(2))));
            let s = p.iter().fold(QuadExt::zero(), |a, x| a + x);
            lhs.cmp_exact(&cube(&s)).is_ge()
        });

    let (a, b, c) = (MultiPoly::var(0), MultiPoly::var(1), MultiPoly::var(2));
    let s = a.add(&b).add(&c);
    let pairs = a.mul(&b).add(&b.mul(&c)).add(&c.mul(&a));
    let lhs = s.pow(2).sub(&pairs.scale(&Rational::from(3))).scale(&Rational::from(2));
    let rhs = a.sub(&b).pow(2).add(&b.sub(&c).pow(2)).add(&c.sub(&a).pow(2));
    let identity_ok = expand_equal(&lhs, &rhs);

    let mut out = ComposedVerdict {
        bound: BoundValue::exact(bound),
        strict: None,
        equality_witnesses: Vec::new(),
        classical_steps: Vec::new(),
    };
    out.classical_steps.push(ClassicalStep {
        name: "Hölder".into(),
        statement: "(a^3+1+1)(1+b^3+1)(1+1+c^3) >= (a+b+c)^3".into(),
        checked_by: "100".into(),
        passed: holder_ok,
    });
    out.classical_steps.push(ClassicalStep {
        name: "square of a sum".into(),
        statement: "2((a+b+c)^2 - 3(ab+bc+ca)) = (a-b)^2 + (b-c)^2 + (c-a)^2".into(),
        checked_by: "identity".into(),
        passed: identity_ok,
    });
    Ok(out)
}
