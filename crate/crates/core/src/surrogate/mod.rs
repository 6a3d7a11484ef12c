//! Lower-bounding surrogates `g` tangent to `f`: lines, `k·c(x) + m`
//! families and monomials `k·x^m`, plus the equal-slope system used when
//! every variable carries its own function.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::{build, eval_exact, Expr, EvalError};
use crate::numerics::{QuadExt, RatInterval, Rational};

mod slopes;
mod solve;

pub use slopes::{bound_from_equal_slopes, solve_equal_slopes, EqualSlopeSolution, EqualSlopeSystem};
pub use solve::{solve_intercept, solve_line_tangent, solve_two_param};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurrogateError {
    #[error("value not exactly representable: {0}")]
    NotExactlyRepresentable(String),
    #[error("outside the domain of f: {0}")]
    DomainError(String),
    #[error("no admissible tangency point in the domain")]
    NoSolutionInDomain,
    #[error("tangency condition is not a polynomial equation")]
    NonAlgebraicCondition,
    #[error("conditions are inconsistent: {0}")]
    InconsistentConditions(String),
    #[error("conditions do not determine the parameters")]
    SingularSystem,
    #[error("weight #{0} is not positive")]
    NonPositiveWeight(usize),
    #[error("condition {0} does not apply to this family")]
    UnsupportedCondition(String),
}

impl From<EvalError> for SurrogateError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::NotExactlyRepresentable(m) => SurrogateError::NotExactlyRepresentable(m),
            EvalError::DomainError(m) => SurrogateError::DomainError(m),
        }
    }
}

/// The constraint carrier `c(x) = x^p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ConstraintFn {
    p: Rational,
}

impl ConstraintFn {
    /// `None` unless `p > 0` with denominator in `{1, 2, 3, 6}`.
    pub fn new(p: Rational) -> Option<Self> {
        (p.is_positive() && crate::expr::allowed_exponent(&p)).then_some(ConstraintFn { p })
    }

    pub fn identity() -> Self {
        ConstraintFn { p: Rational::from(1) }
    }

    pub fn exponent(&self) -> &Rational {
        &self.p
    }

    pub fn expr(&self) -> Expr {
        build::pow(Expr::x(), self.p.clone())
    }

    pub fn eval(&self, x: &QuadExt) -> Result<QuadExt, EvalError> {
        eval_exact(&self.expr(), x)
    }
}

impl fmt::Display for ConstraintFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_integer() {
            write!(f, "x^{}", self.p)
        } else {
            write!(f, "x^({})", self.p)
        }
    }
}

/// Which shape of surrogate to solve for.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Line,
    Affine(ConstraintFn),
    Monomial,
}

/// A surrogate with its parameters fixed.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurrogateFamily {
    /// `α + βx`
    Line { alpha: QuadExt, beta: QuadExt },
    /// `k·c(x) + m`
    AffineInC { k: QuadExt, m: QuadExt, c: ConstraintFn },
    /// `k·x^m`
    Monomial { k: QuadExt, m: Rational },
}

impl SurrogateFamily {
    pub fn expr(&self) -> Expr {
        let c = |q: &QuadExt| Expr::constant(q.clone());
        match self {
            SurrogateFamily::Line { alpha, beta } => build::add(c(alpha), build::mul(c(beta), Expr::x())),
            SurrogateFamily::AffineInC { k, m, c: cf } => build::add(build::mul(c(k), cf.expr()), c(m)),
            SurrogateFamily::Monomial { k, m } => build::mul(c(k), build::pow(Expr::x(), m.clone())),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            SurrogateFamily::Line { .. } => FamilyKind::Line,
            SurrogateFamily::AffineInC { c, .. } => FamilyKind::Affine(c.clone()),
            SurrogateFamily::Monomial { .. } => FamilyKind::Monomial,
        }
    }

    /// `(k, m, c)` for the families that are affine in a constraint function.
    pub fn affine_parts(&self) -> Option<(QuadExt, QuadExt, ConstraintFn)> {
        match self {
            SurrogateFamily::Line { alpha, beta } => Some((beta.clone(), alpha.clone(), ConstraintFn::identity())),
            SurrogateFamily::AffineInC { k, m, c } => Some((k.clone(), m.clone(), c.clone())),
            SurrogateFamily::Monomial { .. } => None,
        }
    }
}

impl fmt::Display for SurrogateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::print(&self.expr()))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TangencyCondition {
    /// `g(x₀) = f(x₀)` and `g′(x₀) = f′(x₀)`
    TangentAt(QuadExt),
    /// `g(x₁) = f(x₁)`
    Through(QuadExt),
    /// choose `x₀` with `n·(f(x₀) − f′(x₀)·x₀) = A`
    InterceptSum { n: u32, a: Rational },
}

impl fmt::Display for TangencyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pt = |q: &QuadExt| crate::expr::print(&Expr::constant(q.clone()));
        match self {
            TangencyCondition::TangentAt(x) => write!(f, "tangent_at({})", pt(x)),
            TangencyCondition::Through(x) => write!(f, "through({})", pt(x)),
            TangencyCondition::InterceptSum { n, a } => write!(f, "intercept(n={n}, A={a})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualKind {
    Value,
    Slope,
}

/// One condition `f = g` or `f′ = g′` at a point, checked exactly when stored.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Residual {
    pub kind: ResidualKind,
    pub at: QuadExt,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SolvedSurrogate {
    pub family: SurrogateFamily,
    pub tangency_points: Vec<QuadExt>,
    pub residuals: Vec<Residual>,
    pub notes: String,
}

impl SolvedSurrogate {
    pub fn expr(&self) -> Expr {
        self.family.expr()
    }

    /// Recomputes every stored residual exactly.
    pub fn verify(&self, f: &Expr) -> bool {
        let g = self.expr();
        let (df, dg) = (crate::expr::diff(f), crate::expr::diff(&g));
        self.residuals.iter().all(|r| {
            let (a, b) = match r.kind {
                ResidualKind::Value => (f, &g),
                ResidualKind::Slope => (&df, &dg),
            };
            match (eval_exact(a, &r.at), eval_exact(b, &r.at)) {
                (Ok(x), Ok(y)) => x == y,
                _ => false,
            }
        })
    }
}

/// A value known exactly or only through a rigorous enclosure.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoundValue {
    pub exact: Option<QuadExt>,
    pub enclosure: RatInterval,
    pub closed_form: Option<String>,
}

impl BoundValue {
    pub fn exact(v: QuadExt) -> Self {
        let enclosure = v.enclose(112);
        BoundValue { exact: Some(v), enclosure, closed_form: None }
    }

    pub fn approx(&self) -> f64 {
        self.enclosure.midpoint().to_f64()
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.exact, &self.closed_form) {
            (Some(v), _) => write!(f, "{v}"),
            (None, Some(c)) => write!(f, "{c} ≈ {}", self.enclosure.midpoint().to_decimal(12)),
            (None, None) => write!(f, "≈ {}", self.enclosure.midpoint().to_decimal(12)),
        }
    }
}
