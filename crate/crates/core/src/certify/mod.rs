//! Certified proofs of pointwise claims `h(x) ≥ 0` on an interval.
//!
//! The symbolic backend rewrites `h` (root substitution, one squaring step,
//! denominator clearing) down to a polynomial sign certificate. The interval
//! backend covers the domain with positive enclosures plus second-derivative
//! neighbourhoods around declared tangency zeros. Both emit a [`Certificate`]
//! that [`check_certificate`] replays from scratch.

use serde::{Deserialize, Serialize};

use crate::expr::{eval_exact, eval_interval, print, Domain, Expr};
use crate::numerics::{Precision, QuadExt, RatInterval, Rational, Sign};
use crate::poly::NonnegCert;

mod check;
pub(crate) mod interval;
mod radical;
mod rewrite;
mod symbolic;

pub use check::{check_certificate, zero_set, ZeroSet};
pub use interval::interval_prove;
pub use rewrite::{rewrite_clear_denominators, rewrite_move_and_square, rewrite_substitute_root, Rewrite};

/// `h ≥ 0` on `domain`; with `strict_interior_zeros_allowed` false the claim
/// is `h > 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Claim {
    pub h: Expr,
    pub domain: Domain,
    pub strict_interior_zeros_allowed: bool,
}

impl Claim {
    pub fn nonneg(h: Expr, domain: Domain) -> Self {
        Claim { h, domain, strict_interior_zeros_allowed: true }
    }

    pub fn positive(h: Expr, domain: Domain) -> Self {
        Claim { h, domain, strict_interior_zeros_allowed: false }
    }

    /// Equality up to the printed form of `h`.
    pub fn same_as(&self, other: &Claim) -> bool {
        self.domain == other.domain
            && self.strict_interior_zeros_allowed == other.strict_interior_zeros_allowed
            && print(&self.h) == print(&other.h)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    Proved,
    Disproved { witness: Rational },
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved)
    }

    pub fn unknown(reason: impl Into<String>) -> Self {
        Verdict::Unknown { reason: reason.into() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Auto,
    Symbolic,
    Interval,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "symbolic" => Ok(Strategy::Symbolic),
            "interval" => Ok(Strategy::Interval),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Auto => "auto",
            Strategy::Symbolic => "symbolic",
            Strategy::Interval => "interval",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("not a quotient of polynomial or single-radical terms")]
    NotRationalStructure,
    #[error("more than one independent radical")]
    NoSingleRadicalDecomposition,
    #[error("exponent not cleared by x = t^{0}")]
    ExponentNotClearedByQ(u32),
    #[error("endpoint not representable: {0}")]
    EndpointNotRepresentable(String),
}

/// `A ≥ B·√R` (radical on the small side) or `B·√R ≥ A`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    RadicalBelow,
    RadicalAbove,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewriteStep {
    /// `h = N/M` with `M` of constant sign; the child is `±N`.
    ClearDenominator { multiplier: Expr, negated: bool },
    /// Squares `A` against `B·√R`; side conditions `A, B, R ≥ 0`.
    MoveAndSquare { a: Expr, b: Expr, r: Expr, orientation: Orientation },
    /// `x = t^q`, mapping the domain onto `image`.
    SubstituteRoot { q: u32, image: Domain },
}

impl RewriteStep {
    pub fn name(&self) -> &'static str {
        match self {
            RewriteStep::ClearDenominator { .. } => "clear_denominator",
            RewriteStep::MoveAndSquare { .. } => "move_and_square",
            RewriteStep::SubstituteRoot { .. } => "substitute_root",
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyLeaf {
    Rational(NonnegCert<Rational>),
    Quad(NonnegCert<QuadExt>),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Piece {
    pub interval: RatInterval,
    pub enclosure: RatInterval,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborhoodKind {
    /// `h(z) = h′(z) = 0` and `h″ > 0` on the interval.
    Tangency,
    /// `h(z) = 0` at the left end and `h′ > 0` on the interval.
    Rising,
    /// `h(z) = 0` at the right end and `h′ < 0` on the interval.
    Falling,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Neighborhood {
    pub center: QuadExt,
    pub interval: RatInterval,
    pub kind: NeighborhoodKind,
    /// Enclosure of `h″` (tangency) or `h′` (monotone kinds).
    pub enclosure: RatInterval,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lo,
    Hi,
}

/// An open endpoint the subdivision stops short of. The probes are
/// positive enclosures on pieces shrinking geometrically toward the
/// endpoint; they document the sign of the dominant term there and are
/// evidence rather than proof for the last sliver.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoundaryNote {
    pub side: Side,
    pub endpoint: QuadExt,
    pub sliver: Rational,
    pub probes: Vec<Piece>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IntervalProof {
    pub prec_bits: u32,
    pub pieces: Vec<Piece>,
    pub neighborhoods: Vec<Neighborhood>,
    pub boundary: Vec<BoundaryNote>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proof {
    PolyNonneg(PolyLeaf),
    Interval(IntervalProof),
    Rewrite { step: RewriteStep, main: Box<Certificate>, side: Vec<Certificate> },
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: Claim,
    pub proof: Proof,
}

impl Certificate {
    /// Step kinds from the root down the main branch, ending in the leaf kind.
    pub fn summary(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match &cur.proof {
                Proof::PolyNonneg(_) => {
                    out.push("poly_nonneg".into());
                    return out;
                }
                Proof::Interval(_) => {
                    out.push("interval".into());
                    return out;
                }
                Proof::Rewrite { step, main, .. } => {
                    out.push(step.name().into());
                    cur = main;
                }
            }
        }
    }

    /// The polynomial certificate at the end of the main branch, if any.
    pub fn leaf(&self) -> Option<&PolyLeaf> {
        match &self.proof {
            Proof::PolyNonneg(l) => Some(l),
            Proof::Interval(_) => None,
            Proof::Rewrite { main, .. } => main.leaf(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    Tangency,
    Boundary,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DeclaredZero {
    pub point: QuadExt,
    pub kind: ZeroKind,
}

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    pub strategy: Strategy,
    pub declared_zeros: Vec<DeclaredZero>,
    pub prec: Precision,
    pub max_depth: u32,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { strategy: Strategy::Auto, declared_zeros: Vec::new(), prec: Precision::default(), max_depth: 40 }
    }
}

/// Proves, disproves or gives up on `claim` with default settings.
pub fn certify(claim: &Claim, strategy: Strategy) -> (Verdict, Option<Certificate>) {
    certify_with(claim, &CertifyConfig { strategy, ..CertifyConfig::default() })
}

pub fn certify_with(claim: &Claim, cfg: &CertifyConfig) -> (Verdict, Option<Certificate>) {
    let symbolic_reason = if cfg.strategy != Strategy::Interval {
        match symbolic::prove(claim) {
            symbolic::Outcome::Proved(c) => return (Verdict::Proved, Some(c)),
            symbolic::Outcome::Disproved(w) => {
                if confirms_negative(&claim.h, &w) {
                    return (Verdict::Disproved { witness: w }, None);
                }
                format!("symbolic witness {w} could not be confirmed")
            }
            symbolic::Outcome::Failed(r) => r,
        }
    } else {
        String::new()
    };
    if cfg.strategy == Strategy::Symbolic {
        return (Verdict::unknown(symbolic_reason), None);
    }
    let (v, c) = interval_prove(claim, &cfg.declared_zeros, &cfg.prec, cfg.max_depth);
    match v {
        Verdict::Unknown { reason } if !symbolic_reason.is_empty() => {
            (Verdict::unknown(format!("symbolic: {symbolic_reason}; interval: {reason}")), None)
        }
        other => (other, c),
    }
}

/// `h(w) < 0`, decided exactly when possible and otherwise by a tight
/// enclosure.
pub(crate) fn confirms_negative(h: &Expr, w: &Rational) -> bool {
    match eval_exact(h, &QuadExt::rational(w.clone())) {
        Ok(v) => v.sign() == Sign::Negative,
        Err(_) => eval_interval(h, &RatInterval::point(w.clone()), &Precision::from_bits(200))
            .map(|e| e.hi().is_negative())
            .unwrap_or(false),
    }
}
