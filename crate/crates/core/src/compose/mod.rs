//! From a certified pointwise bound `f ≥ g` to the n-variable conclusion:
//! summing through a constraint, multiplying monomial bounds, deciding
//! whether the equality case is reachable, and the classical steps some
//! problems need on top.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::certify::{certify, Claim, Strategy, ZeroSet};
use crate::expr::{eval_exact, eval_interval, print, Domain, Expr};
use crate::numerics::{MixedRadicand, Precision, QuadExt, RatInterval, Rational};
use crate::surrogate::{BoundValue, ConstraintFn, SolvedSurrogate, SurrogateFamily};

mod chain;
mod sample;
mod slopes;

pub use chain::{chain_compose, compose_pair_sum_holder, ChainLink, ChainOutcome};
pub use sample::{objective_enclosure, sample_points, spot_check};
pub use slopes::compose_equal_slopes;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("surrogates use different constraint functions")]
    MixedConstraintFunctions,
    #[error("surrogates have different slopes k")]
    SlopeMismatch,
    #[error("leading coefficient must be positive")]
    NonpositiveLeadingCoefficient,
    #[error("exponent must be positive")]
    NonpositiveExponent,
    #[error("side condition not proved: {0}")]
    SideConditionFailed(String),
    #[error("zero set is not known exactly")]
    ZeroSetNotExact,
    #[error("{0} assignments exceed the enumeration cap")]
    TooManyAssignments(u128),
    #[error("witness violates the constraint: {0}")]
    WitnessViolatesConstraint(String),
    #[error("witness lies outside the domain: {0}")]
    WitnessOutsideDomain(String),
    #[error("constraint does not fit this composition: {0}")]
    WrongConstraint(String),
    #[error("surrogate not supported here: {0}")]
    UnsupportedSurrogate(String),
    #[error("summed intercepts {found} differ from the stated offset {expected}")]
    OffsetMismatch { found: String, expected: String },
    #[error("value not exactly representable: {0}")]
    NotExact(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

impl From<MixedRadicand> for ComposeError {
    fn from(_: MixedRadicand) -> Self {
        ComposeError::NotExact("two different square roots in one value".into())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// `Σ c(xᵢ) = total`
    SumOfC { c: ConstraintFn, total: Rational },
    /// `Π xᵢ ≥ min`
    ProductAtLeast { min: Rational },
    /// No constraint; the conclusion is `Σ f(xᵢ) ≥ offset + k·Σ xᵢ` and the
    /// bound is the coefficient `k`.
    Free { offset: Rational },
    /// `Σ_{i<j} xᵢxⱼ = total`
    PairSum { total: Rational },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    Ge,
    Gt,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    pub n: usize,
    /// One function shared by all variables, or one per variable.
    pub functions: Vec<Expr>,
    pub domain: Domain,
    pub constraint: Constraint,
    /// Constant expression for the claimed bound.
    pub bound: Expr,
    pub direction: Direction,
    pub notes: String,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<(), ComposeError> {
        if self.n < 2 {
            return Err(ComposeError::InvalidProblem("need at least two variables".into()));
        }
        if self.functions.len() != 1 && self.functions.len() != self.n {
            return Err(ComposeError::InvalidProblem(format!(
                "{} functions for {} variables",
                self.functions.len(),
                self.n
            )));
        }
        if self.bound.has_var() {
            return Err(ComposeError::InvalidProblem("bound depends on x".into()));
        }
        Ok(())
    }

    pub fn function(&self, i: usize) -> &Expr {
        if self.functions.len() == 1 {
            &self.functions[0]
        } else {
            &self.functions[i]
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.functions.len() == 1
    }

    /// The claimed bound, exactly when it lies in a single `ℚ(√d)`.
    pub fn claimed_bound(&self) -> BoundValue {
        match eval_exact(&self.bound, &QuadExt::zero()) {
            Ok(v) => BoundValue::exact(v),
            Err(_) => {
                let enc = eval_interval(&self.bound, &RatInterval::point(Rational::from(0)), &Precision::from_bits(160))
                    .expect("constant bound evaluates");
                BoundValue { exact: None, enclosure: enc.round_out(140), closed_form: Some(print(&self.bound)) }
            }
        }
    }
}

/// Exact equality case, or enclosures when the points are not in one field.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Exact(Vec<QuadExt>),
    Enclosed(Vec<RatInterval>),
}

/// A step taken on trust, with the outcome of its numeric spot checks.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClassicalStep {
    pub name: String,
    pub statement: String,
    /// `"identity"` for exact symbolic checks, otherwise the number of
    /// sampled points.
    pub checked_by: String,
    pub passed: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComposedVerdict {
    pub bound: BoundValue,
    /// `None` until a strictness analysis has run.
    pub strict: Option<bool>,
    pub equality_witnesses: Vec<Witness>,
    pub classical_steps: Vec<ClassicalStep>,
}

impl ComposedVerdict {
    fn bare(bound: BoundValue) -> Self {
        ComposedVerdict { bound, strict: None, equality_witnesses: Vec::new(), classical_steps: Vec::new() }
    }
}

fn nth(v: &QuadExt, n: usize) -> QuadExt {
    QuadExt::rational(Rational::from(n as i64)).checked_mul(v).expect("rational scale")
}

/// `Σ mᵢ + k·C`, or `n·m + k·C` for a shared surrogate.
pub fn compose_sum(surrogates: &[SolvedSurrogate], spec: &ProblemSpec) -> Result<ComposedVerdict, ComposeError> {
    spec.validate()?;
    if surrogates.len() != 1 && surrogates.len() != spec.n {
        return Err(ComposeError::InvalidProblem("one surrogate per function expected".into()));
    }
    let parts: Vec<(QuadExt, QuadExt, ConstraintFn)> = surrogates
        .iter()
        .map(|s| s.family.affine_parts().ok_or(ComposeError::MixedConstraintFunctions))
        .collect::<Result<_, _>>()?;
    let k = parts[0].0.clone();
    if parts.iter().any(|p| p.0 != k) {
        return Err(ComposeError::SlopeMismatch);
    }
    if parts.iter().any(|p| p.2 != parts[0].2) {
        return Err(ComposeError::MixedConstraintFunctions);
    }
    let m_sum = if parts.len() == 1 {
        nth(&parts[0].1, spec.n)
    } else {
        parts.iter().try_fold(QuadExt::zero(), |acc, p| acc.checked_add(&p.1))?
    };
    match &spec.constraint {
        Constraint::SumOfC { c, total } => {
            if &parts[0].2 != c {
                return Err(ComposeError::MixedConstraintFunctions);
            }
            let kc = k.checked_mul(&QuadExt::rational(total.clone()))?;
            Ok(ComposedVerdict::bare(BoundValue::exact(m_sum.checked_add(&kc)?)))
        }
        Constraint::Free { offset } => {
            if parts[0].2 != ConstraintFn::identity() {
                return Err(ComposeError::MixedConstraintFunctions);
            }
            if m_sum != QuadExt::rational(offset.clone()) {
                return Err(ComposeError::OffsetMismatch { found: m_sum.to_string(), expected: offset.to_string() });
            }
            Ok(ComposedVerdict::bare(BoundValue::exact(k)))
        }
        other => Err(ComposeError::WrongConstraint(format!("{other:?}"))),
    }
}

/// `Π f(xᵢ) ≥ kⁿ·(Π xᵢ)ᵐ ≥ kⁿ·minᵐ`, which needs `g = k·xᵐ ≥ 0` on the
/// domain so the factors can be multiplied.
pub fn compose_product(s: &SolvedSurrogate, spec: &ProblemSpec) -> Result<ComposedVerdict, ComposeError> {
    spec.validate()?;
    let Constraint::ProductAtLeast { min } = &spec.constraint else {
        return Err(ComposeError::WrongConstraint("product composition needs a product constraint".into()));
    };
    let SurrogateFamily::Monomial { k, m } = &s.family else {
        return Err(ComposeError::UnsupportedSurrogate(s.family.to_string()));
    };
    if k.sign() != crate::numerics::Sign::Positive {
        return Err(ComposeError::NonpositiveLeadingCoefficient);
    }
    if !m.is_positive() {
        return Err(ComposeError::NonpositiveExponent);
    }
    let side = Claim::nonneg(s.expr(), spec.domain.clone());
    let (v, _) = certify(&side, Strategy::Auto);
    if !v.is_proved() {
        return Err(ComposeError::SideConditionFailed(format!("{} ≥ 0 on {}: {v:?}", s.family, spec.domain)));
    }
    let min_m = eval_exact(&crate::surrogate::ConstraintFn::new(m.clone()).expect("checked above").expr(), &QuadExt::rational(min.clone()))
        .map_err(|e| ComposeError::NotExact(e.to_string()))?;
    let bound = k.pow(spec.n as i32).checked_mul(&min_m)?;
    let mut out = ComposedVerdict::bare(BoundValue::exact(bound.clone()));
    let statement = format!("(x1*...*x{})^({m}) >= ({min})^({m}) when x1*...*x{} >= {min}", spec.n, spec.n);
    let passed = spot_check(spec, &BoundValue::exact(bound), 100, 7);
    out.classical_steps.push(ClassicalStep {
        name: "monotone power of the product".into(),
        statement,
        checked_by: "100".into(),
        passed,
    });
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Strictness {
    pub strict: bool,
    pub witnesses: Vec<Vec<QuadExt>>,
    pub explanation: String,
}

const ASSIGNMENT_CAP: u128 = 100_000;

fn sum_exact(vals: &[QuadExt]) -> Option<QuadExt> {
    vals.iter().try_fold(QuadExt::zero(), |a, v| a.checked_add(v).ok())
}

fn meets_constraint(spec: &ProblemSpec, z: &[QuadExt]) -> bool {
    match &spec.constraint {
        Constraint::SumOfC { c, total } => {
            let cs: Option<Vec<QuadExt>> = z.iter().map(|v| c.eval(v).ok()).collect();
            cs.and_then(|cs| sum_exact(&cs)).is_some_and(|s| s == QuadExt::rational(total.clone()))
        }
        Constraint::ProductAtLeast { min } => z
            .iter()
            .try_fold(QuadExt::one(), |a, v| a.checked_mul(v).ok())
            .is_some_and(|p| p == QuadExt::rational(min.clone())),
        Constraint::PairSum { total } => {
            // equality in the classical steps also forces all variables equal
            let all_equal = z.windows(2).all(|w| w[0] == w[1]);
            let mut acc = Some(QuadExt::zero());
            for i in 0..z.len() {
                for j in i + 1..z.len() {
                    acc = acc.and_then(|a| a.checked_add(&z[i].checked_mul(&z[j]).ok()?).ok());
                }
            }
            all_equal && acc.is_some_and(|s| s == QuadExt::rational(total.clone()))
        }
        Constraint::Free { .. } => true,
    }
}

fn constraint_text(spec: &ProblemSpec) -> String {
    let n = spec.n;
    match &spec.constraint {
        Constraint::SumOfC { c, total } => {
            let terms: Vec<String> = (1..=n).map(|i| c.to_string().replace('x', &format!("x{i}"))).collect();
            format!("{} = {total}", terms.join(" + "))
        }
        Constraint::ProductAtLeast { min } => format!("x1*...*x{n} = {min}"),
        Constraint::PairSum { total } => format!("sum of pairwise products = {total}"),
        Constraint::Free { .. } => "no constraint".into(),
    }
}

/// Enumerates assignments of pointwise zeros to the variables; the bound is
/// strict iff none of them meets the constraint.
pub fn strictness_analysis(zeros: &[ZeroSet], spec: &ProblemSpec) -> Result<Strictness, ComposeError> {
    spec.validate()?;
    if zeros.len() != 1 && zeros.len() != spec.n {
        return Err(ComposeError::InvalidProblem("one zero set per function expected".into()));
    }
    if zeros.iter().any(|z| !z.is_exact()) {
        return Err(ComposeError::ZeroSetNotExact);
    }
    let sets: Vec<Vec<QuadExt>> = (0..spec.n)
        .map(|i| {
            let mut v = zeros[if zeros.len() == 1 { 0 } else { i }].exact.clone();
            v.sort_by(|a, b| b.cmp_exact(a));
            v
        })
        .collect();
    let count = sets.iter().fold(1u128, |a, s| a.saturating_mul(s.len() as u128));
    if count > ASSIGNMENT_CAP {
        return Err(ComposeError::TooManyAssignments(count));
    }
    let symmetric = zeros.len() == 1;
    let mut witnesses = Vec::new();
    let mut idx = vec![0usize; spec.n];
    if sets.iter().all(|s| !s.is_empty()) {
        loop {
            // symmetric problems only need non-decreasing index tuples
            if !symmetric || idx.windows(2).all(|w| w[0] <= w[1]) {
                let z: Vec<QuadExt> = idx.iter().enumerate().map(|(i, &j)| sets[i][j].clone()).collect();
                if meets_constraint(spec, &z) {
                    witnesses.push(z);
                }
            }
            let mut pos = spec.n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < sets[pos].len() {
                    break;
                }
                idx[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    let zero_text = |s: &[QuadExt]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
    let explanation = if witnesses.is_empty() {
        let mut msg = format!("no assignment of the zeros {{{}}} satisfies {}", zero_text(&sets[0]), constraint_text(spec));
        if let (true, [z], Constraint::SumOfC { c, total }) = (symmetric, sets[0].as_slice(), &spec.constraint) {
            if let Ok(cz) = c.eval(z) {
                msg = format!("{msg}: {} = {} ≠ {total}", (0..spec.n).map(|_| cz.to_string()).collect::<Vec<_>>().join(" + "), nth(&cz, spec.n));
            }
        }
        msg
    } else {
        let w: Vec<String> = witnesses.iter().map(|w| format!("({})", zero_text(w))).collect();
        format!("equality at {}", w.join(", "))
    };
    Ok(Strictness { strict: witnesses.is_empty(), witnesses, explanation })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub lhs: QuadExt,
    pub rhs: QuadExt,
    /// `lhs − rhs`; zero means the parameter is attained, negative means it
    /// is too large.
    pub margin: QuadExt,
    pub equality: bool,
}

/// Evaluates both sides of the original inequality at `witness` with the
/// bound (or, for unconstrained problems, the coefficient) set to
/// `parameter`.
pub fn check_optimality(spec: &ProblemSpec, witness: &[QuadExt], parameter: &QuadExt) -> Result<OptimalityReport, ComposeError> {
    spec.validate()?;
    if witness.len() != spec.n {
        return Err(ComposeError::InvalidProblem(format!("witness has {} entries", witness.len())));
    }
    if let Some(w) = witness.iter().find(|w| !spec.domain.contains(w)) {
        return Err(ComposeError::WitnessOutsideDomain(w.to_string()));
    }
    let show = || witness.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ");
    let ok = match &spec.constraint {
        Constraint::SumOfC { .. } | Constraint::PairSum { .. } => {
            // the equal-variables requirement only concerns equality cases
            let loose = ProblemSpec {
                constraint: match &spec.constraint {
                    Constraint::PairSum { total } => Constraint::SumOfC { c: ConstraintFn::identity(), total: total.clone() },
                    c => c.clone(),
                },
                ..spec.clone()
            };
            match &spec.constraint {
                Constraint::PairSum { total } => {
                    let mut acc = QuadExt::zero();
                    for i in 0..witness.len() {
                        for j in i + 1..witness.len() {
                            acc = acc.checked_add(&witness[i].checked_mul(&witness[j])?)?;
                        }
                    }
                    acc == QuadExt::rational(total.clone())
                }
                _ => meets_constraint(&loose, witness),
            }
        }
        Constraint::ProductAtLeast { min } => {
            let p = witness.iter().try_fold(QuadExt::one(), |a, v| a.checked_mul(v))?;
            p.cmp_exact(&QuadExt::rational(min.clone())).is_ge()
        }
        Constraint::Free { .. } => true,
    };
    if !ok {
        return Err(ComposeError::WitnessViolatesConstraint(format!("({}) under {}", show(), constraint_text(spec))));
    }
    let vals: Vec<QuadExt> = (0..spec.n)
        .map(|i| eval_exact(spec.function(i), &witness[i]).map_err(|e| ComposeError::NotExact(e.to_string())))
        .collect::<Result<_, _>>()?;
    let (lhs, rhs) = match &spec.constraint {
        Constraint::ProductAtLeast { .. } | Constraint::PairSum { .. } => {
            (vals.iter().try_fold(QuadExt::one(), |a, v| a.checked_mul(v))?, parameter.clone())
        }
        Constraint::SumOfC { .. } => (sum_exact(&vals).ok_or(ComposeError::NotExact("sum".into()))?, parameter.clone()),
        Constraint::Free { offset } => {
            let s = sum_exact(&vals).ok_or(ComposeError::NotExact("sum".into()))?;
            let xs = sum_exact(witness).ok_or(ComposeError::NotExact("sum".into()))?;
            (s.checked_sub(&QuadExt::rational(offset.clone()))?, parameter.checked_mul(&xs)?)
        }
    };
    let margin = lhs.checked_sub(&rhs)?;
    let equality = margin.sign() == crate::numerics::Sign::Zero;
    Ok(OptimalityReport { lhs, rhs, margin, equality })
}
