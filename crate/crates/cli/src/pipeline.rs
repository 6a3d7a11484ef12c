//! Surrogate → pointwise certificate → composition → verdict.

use std::cmp::Ordering;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use tangent_core::certify::{
    certify_with, check_certificate, zero_set, Certificate, CertifyConfig, Claim, DeclaredZero, Strategy, Verdict, ZeroKind,
    ZeroSet,
};
use tangent_core::compose::{
    chain_compose, check_optimality, compose_equal_slopes, compose_pair_sum_holder, compose_product, compose_sum,
    strictness_analysis, ChainOutcome, ClassicalStep, ComposedVerdict, Constraint, Direction, ProblemSpec, Strictness, Witness,
};
use tangent_core::expr::{build, diff, print, Bound, Domain, Expr};
use tangent_core::numerics::{QuadExt, RatInterval, Rational, Sign};
use tangent_core::surrogate::{
    solve_intercept, solve_line_tangent, solve_two_param, BoundValue, EqualSlopeSystem, FamilyKind, SolvedSurrogate,
    TangencyCondition,
};

use crate::problem::{FamilySpec, Problem};

/// The claims a problem reduces to, rebuilt identically by the prover and
/// by replay.
#[derive(Clone, Debug)]
pub struct Claims {
    pub surrogates: Vec<SolvedSurrogate>,
    pub pointwise: Vec<Claim>,
    pub chain: Vec<Claim>,
}

pub fn equal_slope_system(p: &Problem) -> Option<Result<EqualSlopeSystem, String>> {
    let FamilySpec::EqualSlopes(w) = &p.family else { return None };
    let s = match &p.constraint {
        Constraint::SumOfC { c, total } if c.exponent() == &Rational::from(1) => total.clone(),
        _ => return Some(Err("equal slopes need the constraint sum(c=x, total=s)".into())),
    };
    Some(EqualSlopeSystem::new(w.clone(), s).map_err(|e| e.to_string()))
}

fn solve_one(f: &Expr, p: &Problem) -> Result<SolvedSurrogate, String> {
    let kind = match &p.family {
        FamilySpec::Line => FamilyKind::Line,
        FamilySpec::Affine(c) => FamilyKind::Affine(c.clone()),
        FamilySpec::Monomial => FamilyKind::Monomial,
        FamilySpec::EqualSlopes(_) => unreachable!("handled by the equal-slope path"),
    };
    let r = match (&kind, p.tangency.as_slice()) {
        (FamilyKind::Line, [TangencyCondition::TangentAt(x0)]) => solve_line_tangent(f, x0),
        (FamilyKind::Line, [TangencyCondition::InterceptSum { n, a }]) => {
            solve_intercept(f, *n, a, &p.domain).map(|mut v| v.remove(0).1)
        }
        (_, conds) => solve_two_param(f, &kind, conds),
    };
    r.map_err(|e| format!("surrogate for {}: {e}", print(f)))
}

pub fn build_claims(p: &Problem) -> Result<Claims, String> {
    let chain: Vec<Claim> =
        p.chain.windows(2).map(|w| Claim::nonneg(build::sub(w[0].clone(), w[1].clone()), p.domain.clone())).collect();
    if let Some(sys) = equal_slope_system(p) {
        let sys = sys?;
        for (i, f) in p.functions.iter().enumerate() {
            if p.functions.len() != sys.len() || !same_function(f, &sys.function(i), &p.domain) {
                return Err(format!("f{} is not {}", i + 1, print(&sys.function(i))));
            }
        }
        let dom = Domain::open(Rational::from(0), sys.s.clone());
        let pointwise = (0..sys.len()).map(|i| Claim::positive(diff(&diff(&sys.function(i))), dom.clone())).collect();
        return Ok(Claims { surrogates: Vec::new(), pointwise, chain });
    }
    let surrogates: Vec<SolvedSurrogate> = p.functions.iter().map(|f| solve_one(f, p)).collect::<Result<_, _>>()?;
    let pointwise = p
        .functions
        .iter()
        .zip(&surrogates)
        .map(|(f, g)| Claim::nonneg(build::sub(f.clone(), g.expr()), p.domain.clone()))
        .collect();
    Ok(Claims { surrogates, pointwise, chain })
}

/// Agreement at a handful of interior rational points.
fn same_function(a: &Expr, b: &Expr, dom: &Domain) -> bool {
    let x = dom.interior_point();
    [Rational::new(1, 2), Rational::new(1, 3), Rational::new(2, 3)].iter().all(|t| {
        let p = QuadExt::rational(&x * t);
        let ev = |e: &Expr| tangent_core::expr::eval_exact(e, &p).ok();
        ev(a).is_some() && ev(a) == ev(b)
    })
}

fn declared_zeros(g: &SolvedSurrogate, dom: &Domain) -> Vec<DeclaredZero> {
    g.tangency_points
        .iter()
        .filter(|z| dom.contains(z) || endpoint_of(dom, z))
        .map(|z| DeclaredZero {
            point: z.clone(),
            kind: if dom.in_interior(z) { ZeroKind::Tangency } else { ZeroKind::Boundary },
        })
        .collect()
}

fn endpoint_of(dom: &Domain, z: &QuadExt) -> bool {
    [&dom.lo, &dom.hi].iter().any(|b| matches!(b, Bound::Finite(v) if v == z))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointwiseReport {
    pub claim: String,
    pub domain: String,
    pub verdict: String,
    pub detail: Option<String>,
    pub steps: Vec<String>,
    pub zero_set: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub verdict: String,
    pub reason: String,
    pub surrogates: Vec<String>,
    pub tangency_points: Vec<String>,
    pub pointwise: Vec<PointwiseReport>,
    pub chain: Vec<PointwiseReport>,
    pub claimed_bound: String,
    pub bound: Option<String>,
    pub bound_decimal: Option<String>,
    pub strict: Option<bool>,
    pub strictness: Option<String>,
    pub equality_witnesses: Vec<Vec<String>>,
    pub optimality: Option<String>,
    pub counterexample: Option<Vec<String>>,
    pub classical_steps: Vec<ClassicalStep>,
    pub notes: String,
    pub timing_ms: u64,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_str() {
            "proved" => 0,
            "disproved" => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = vec![format!("{}: {}", self.name, self.verdict)];
        if !self.reason.is_empty() {
            out.push(format!("  reason: {}", self.reason));
        }
        for (i, g) in self.surrogates.iter().enumerate() {
            out.push(format!("  surrogate g{}: {g}", i + 1));
        }
        if !self.tangency_points.is_empty() {
            out.push(format!("  tangency points: {}", self.tangency_points.join(", ")));
        }
        for p in self.pointwise.iter().chain(&self.chain) {
            out.push(format!("  {} >= 0 on {}: {}", p.claim, p.domain, p.verdict));
            if !p.steps.is_empty() {
                out.push(format!("    steps: {}", p.steps.join(" -> ")));
            }
            if !p.zero_set.is_empty() {
                out.push(format!("    zeros: {}", p.zero_set.join(", ")));
            }
            if let Some(d) = &p.detail {
                out.push(format!("    {d}"));
            }
        }
        out.push(format!("  claimed bound: {}", self.claimed_bound));
        if let Some(b) = &self.bound {
            out.push(format!("  composed bound: {b}"));
        }
        if let Some(s) = &self.strictness {
            out.push(format!("  strictness: {s}"));
        }
        for w in &self.equality_witnesses {
            out.push(format!("  equality at ({})", w.join(", ")));
        }
        if let Some(o) = &self.optimality {
            out.push(format!("  optimality: {o}"));
        }
        if let Some(c) = &self.counterexample {
            out.push(format!("  counterexample: ({})", c.join(", ")));
        }
        for c in &self.classical_steps {
            let r = if c.passed { "passed" } else { "FAILED" };
            out.push(format!("  classical step {}: {} [{} checks {r}]", c.name, c.statement, c.checked_by));
        }
        if !self.notes.is_empty() {
            out.push(format!("  notes: {}", self.notes));
        }
        out.push(format!("  time: {} ms", self.timing_ms));
        out.join("\n")
    }
}

/// Certificates for every proved claim, in claim order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertBundle {
    pub problem: String,
    pub pointwise: Vec<Option<Certificate>>,
    pub chain: Vec<Option<Certificate>>,
}

#[derive(Clone, Debug)]
pub struct Run {
    pub claims: Option<Claims>,
    pub pointwise: Vec<(Verdict, Option<Certificate>)>,
    pub chain: Option<ChainOutcome>,
    pub zero_sets: Vec<ZeroSet>,
    pub composed: Option<ComposedVerdict>,
    pub strictness: Option<Strictness>,
    pub report: Report,
}

impl Run {
    pub fn bundle(&self) -> CertBundle {
        CertBundle {
            problem: self.report.name.clone(),
            pointwise: self.pointwise.iter().map(|p| p.1.clone()).collect(),
            chain: self.chain.iter().flat_map(|c| c.links.iter().map(|l| l.certificate.clone())).collect(),
        }
    }
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Proved => "proved",
        Verdict::Disproved { .. } => "disproved",
        Verdict::Unknown { .. } => "unknown",
    }
}

fn pointwise_report(claim: &Claim, v: &Verdict, cert: Option<&Certificate>) -> PointwiseReport {
    let detail = match v {
        Verdict::Proved => None,
        Verdict::Disproved { witness } => Some(format!("negative at x = {witness}")),
        Verdict::Unknown { reason } => Some(reason.clone()),
    };
    let zs = cert.map(zero_set);
    let mut zero_set: Vec<String> = zs.iter().flat_map(|z| z.exact.iter().map(|v| v.to_string())).collect();
    zero_set.extend(zs.iter().flat_map(|z| z.boxes.iter().map(|b| format!("in {b:?}"))));
    PointwiseReport {
        claim: print(&claim.h),
        domain: claim.domain.to_string(),
        verdict: verdict_name(v).into(),
        detail,
        steps: cert.map(|c| c.summary()).unwrap_or_default(),
        zero_set,
    }
}

fn show(w: &[QuadExt]) -> Vec<String> {
    w.iter().map(|v| v.to_string()).collect()
}

/// Orders two bounds exactly, or by disjoint enclosures; `None` when the
/// enclosures overlap.
fn compare(a: &BoundValue, b: &BoundValue) -> Option<Ordering> {
    if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
        if x.compatible(y) {
            return Some(x.cmp_exact(y));
        }
    }
    let (x, y) = (&a.enclosure, &b.enclosure);
    if x.lo() > y.hi() {
        Some(Ordering::Greater)
    } else if x.hi() < y.lo() {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Agreement of overlapping enclosures within `10^-9`.
fn agree(a: &BoundValue, b: &BoundValue) -> bool {
    let hull = a.enclosure.hull(&b.enclosure);
    hull.width() <= Rational::new(1, 1_000_000_000)
}

struct Decision {
    verdict: &'static str,
    reason: String,
    counterexample: Option<Vec<String>>,
}

fn decide(spec: &ProblemSpec, composed: &ComposedVerdict, strictness: Option<&Strictness>) -> Decision {
    let claimed = spec.claimed_bound();
    let b = &composed.bound;
    let exact_witnesses: Vec<&Vec<QuadExt>> = match strictness {
        Some(s) => s.witnesses.iter().collect(),
        None => composed
            .equality_witnesses
            .iter()
            .filter_map(|w| match w {
                Witness::Exact(v) => Some(v),
                Witness::Enclosed(_) => None,
            })
            .collect(),
    };
    // an exact point where the claimed inequality fails
    let refute = |strict_needed: bool| -> Option<Vec<String>> {
        let c = claimed.exact.as_ref()?;
        exact_witnesses.iter().find_map(|w| {
            let r = check_optimality(spec, w, c).ok()?;
            let bad = match r.margin.sign() {
                Sign::Negative => true,
                Sign::Zero => strict_needed,
                Sign::Positive => false,
            };
            bad.then(|| show(w))
        })
    };
    let free = matches!(spec.constraint, Constraint::Free { .. });
    let order = compare(b, &claimed);
    let matched = order == Some(Ordering::Equal) || (order.is_none() && agree(b, &claimed));
    let enclosure_note = if order.is_none() && matched {
        " (bounds agree to within 1e-9 by enclosure)"
    } else {
        ""
    };
    let strict_needed = spec.direction == Direction::Gt;
    let holds = if free { matched } else { matched || order == Some(Ordering::Greater) };
    if !holds {
        if let Some(w) = refute(strict_needed) {
            return Decision {
                verdict: "disproved",
                reason: format!("the claimed bound {claimed} fails at an equality point of the composed bound {b}"),
                counterexample: Some(w),
            };
        }
        let what = if free { "differs from" } else { "is weaker than" };
        return Decision { verdict: "unknown", reason: format!("composed bound {b} {what} the claimed bound {claimed}"), counterexample: None };
    }
    if strict_needed && order != Some(Ordering::Greater) {
        match composed.strict {
            Some(true) => {}
            Some(false) => {
                if let Some(w) = refute(true) {
                    return Decision {
                        verdict: "disproved",
                        reason: "equality is attained, so the strict inequality fails".into(),
                        counterexample: Some(w),
                    };
                }
                return Decision { verdict: "unknown", reason: "equality case not excluded".into(), counterexample: None };
            }
            None => return Decision { verdict: "unknown", reason: "strictness undecided".into(), counterexample: None },
        }
    }
    let failed: Vec<&str> = composed.classical_steps.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        return Decision { verdict: "unknown", reason: format!("spot checks failed for {}", failed.join(", ")), counterexample: None };
    }
    Decision { verdict: "proved", reason: format!("composed bound {b}{enclosure_note}"), counterexample: None }
}

fn compose(p: &Problem, spec: &ProblemSpec, claims: &Claims) -> Result<ComposedVerdict, String> {
    if let Some(sys) = equal_slope_system(p) {
        return compose_equal_slopes(&sys?, spec).map_err(|e| e.to_string());
    }
    let g = &claims.surrogates;
    let r = match &spec.constraint {
        Constraint::SumOfC { .. } | Constraint::Free { .. } => compose_sum(g, spec),
        Constraint::ProductAtLeast { .. } | Constraint::PairSum { .. } => {
            if g.iter().any(|s| s.family != g[0].family) {
                return Err("factors need one common surrogate".into());
            }
            if matches!(spec.constraint, Constraint::PairSum { .. }) {
                compose_pair_sum_holder(&g[0], spec)
            } else {
                compose_product(&g[0], spec)
            }
        }
    };
    r.map_err(|e| e.to_string())
}

fn optimality_note(spec: &ProblemSpec, composed: &ComposedVerdict, witnesses: &[Vec<QuadExt>]) -> Option<String> {
    let b = composed.bound.exact.as_ref()?;
    let attained: Vec<&Vec<QuadExt>> =
        witnesses.iter().filter(|w| check_optimality(spec, w, b).is_ok_and(|r| r.equality)).collect();
    match &spec.constraint {
        Constraint::Free { .. } => {
            // raising k lowers the right side only where Σx > 0
            let sum = |w: &Vec<QuadExt>| w.iter().fold(QuadExt::rational(Rational::from(0)), |a, v| a + v);
            let best = attained.into_iter().filter(|w| sum(w).sign() == Sign::Positive).max_by(|a, c| sum(a).cmp_exact(&sum(c)))?;
            Some(format!("k = {b} is maximal: equality at ({})", show(best).join(", ")))
        }
        _ => attained.first().map(|w| format!("bound {b} attained at ({})", show(w).join(", "))),
    }
}

pub fn run(p: &Problem, strategy: Option<Strategy>) -> Run {
    let start = Instant::now();
    let strategy = strategy.unwrap_or(p.strategy);
    let spec = p.spec();
    let report = Report {
        name: p.name.clone(),
        verdict: "unknown".into(),
        reason: String::new(),
        surrogates: Vec::new(),
        tangency_points: Vec::new(),
        pointwise: Vec::new(),
        chain: Vec::new(),
        claimed_bound: spec.claimed_bound().to_string(),
        bound: None,
        bound_decimal: None,
        strict: None,
        strictness: None,
        equality_witnesses: Vec::new(),
        optimality: None,
        counterexample: None,
        classical_steps: Vec::new(),
        notes: p.notes.clone(),
        timing_ms: 0,
    };
    let mut out = Run { claims: None, pointwise: Vec::new(), chain: None, zero_sets: Vec::new(), composed: None, strictness: None, report };
    let finish = |mut out: Run, verdict: &str, reason: String| {
        out.report.verdict = verdict.into();
        out.report.reason = reason;
        out.report.timing_ms = start.elapsed().as_millis() as u64;
        out
    };

    let claims = match build_claims(p) {
        Ok(c) => c,
        Err(e) => return finish(out, "unknown", e),
    };
    for g in &claims.surrogates {
        let text = print(&g.expr());
        if !out.report.surrogates.contains(&text) {
            out.report.surrogates.push(text);
        }
        for t in &g.tangency_points {
            let t = t.to_string();
            if !out.report.tangency_points.contains(&t) {
                out.report.tangency_points.push(t);
            }
        }
    }
    for (i, claim) in claims.pointwise.iter().enumerate() {
        let declared = claims.surrogates.get(i).map(|g| declared_zeros(g, &p.domain)).unwrap_or_default();
        let cfg = CertifyConfig { strategy, declared_zeros: declared, ..CertifyConfig::default() };
        let (v, c) = certify_with(claim, &cfg);
        out.report.pointwise.push(pointwise_report(claim, &v, c.as_ref()));
        out.pointwise.push((v, c));
    }
    if !p.chain.is_empty() {
        let ch = chain_compose(&p.chain, &p.domain, strategy);
        for (claim, l) in claims.chain.iter().zip(&ch.links) {
            out.report.chain.push(pointwise_report(claim, &l.verdict, l.certificate.as_ref()));
        }
        out.chain = Some(ch);
    }
    out.claims = Some(claims.clone());

    if let Some((i, (v, _))) = out.pointwise.iter().enumerate().find(|(_, (v, _))| !v.is_proved()) {
        let reason = match v {
            Verdict::Disproved { witness } => {
                format!("pointwise claim {} fails at x = {witness}, so the surrogate is not a lower bound", i + 1)
            }
            Verdict::Unknown { reason } => format!("pointwise claim {} not proved: {reason}", i + 1),
            Verdict::Proved => unreachable!(),
        };
        return finish(out, "unknown", reason);
    }
    if let Some(ch) = &out.chain {
        if let Some((i, _)) = &ch.broken_at {
            let reason = format!("chain link {} not proved", i + 1);
            return finish(out, "unknown", reason);
        }
    }

    let mut composed = match compose(p, &spec, &claims) {
        Ok(c) => c,
        Err(e) => return finish(out, "unknown", format!("composition: {e}")),
    };
    out.zero_sets = out.pointwise.iter().filter_map(|(_, c)| c.as_ref().map(zero_set)).collect();
    if composed.strict.is_none() && !claims.surrogates.is_empty() {
        let sets: Vec<ZeroSet> = if p.functions.len() == 1 { out.zero_sets[..1].to_vec() } else { out.zero_sets.clone() };
        match strictness_analysis(&sets, &spec) {
            Ok(s) => {
                composed.strict = Some(s.strict);
                composed.equality_witnesses = s.witnesses.iter().cloned().map(Witness::Exact).collect();
                out.report.strictness = Some(s.explanation.clone());
                out.strictness = Some(s);
            }
            Err(e) => out.report.strictness = Some(format!("undecided: {e}")),
        }
    }
    out.report.bound = Some(composed.bound.to_string());
    out.report.bound_decimal = Some(composed.bound.enclosure.midpoint().to_decimal(15));
    out.report.strict = composed.strict;
    out.report.classical_steps = composed.classical_steps.clone();
    out.report.equality_witnesses = composed
        .equality_witnesses
        .iter()
        .map(|w| match w {
            Witness::Exact(v) => show(v),
            Witness::Enclosed(v) => v.iter().map(|i: &RatInterval| format!("~{}", i.midpoint().to_decimal(15))).collect(),
        })
        .collect();
    let witnesses: Vec<Vec<QuadExt>> = out.strictness.as_ref().map(|s| s.witnesses.clone()).unwrap_or_default();
    out.report.optimality = optimality_note(&spec, &composed, &witnesses);
    let d = decide(&spec, &composed, out.strictness.as_ref());
    out.report.counterexample = d.counterexample;
    out.composed = Some(composed);
    finish(out, d.verdict, d.reason)
}

/// Checks a certificate bundle against claims rebuilt from the problem.
pub fn replay(bundle: &CertBundle, p: &Problem) -> Result<(), String> {
    let claims = build_claims(p)?;
    if bundle.pointwise.len() != claims.pointwise.len() || bundle.chain.len() != claims.chain.len() {
        return Err("certificate count does not match the problem".into());
    }
    let pairs = bundle.pointwise.iter().zip(&claims.pointwise).chain(bundle.chain.iter().zip(&claims.chain));
    for (i, (cert, claim)) in pairs.enumerate() {
        let Some(cert) = cert else {
            return Err(format!("claim {} has no certificate", i + 1));
        };
        if !check_certificate(cert, claim) {
            return Err(format!("certificate {} rejected", i + 1));
        }
    }
    Ok(())
}
