use super::radical::{decompose, sign_at};
use super::rewrite::{move_and_square_oriented, rewrite_clear_denominators, rewrite_substitute_root, var_root_index, Rewrite};
use super::{Certificate, Claim, Orientation, PolyLeaf, Proof};
use crate::numerics::{QuadExt, Rational, Sign};
use crate::poly::{nonneg_on, to_polynomial, NonnegCert};

pub(crate) enum Outcome {
    Proved(Certificate),
    /// `h(w) < 0` according to the rewritten claim; the caller confirms it.
    Disproved(Rational),
    Failed(String),
}

const MAX_STEPS: u32 = 8;

pub(crate) fn prove(claim: &Claim) -> Outcome {
    go(claim, MAX_STEPS)
}

fn leaf<F>(claim: &Claim, cert: NonnegCert<F>, wrap: fn(NonnegCert<F>) -> PolyLeaf) -> Outcome {
    if let Some(w) = cert.witness() {
        return Outcome::Disproved(w.clone());
    }
    if !claim.strict_interior_zeros_allowed {
        let touches = !cert.roots.is_empty() || cert.endpoints.iter().any(|e| e.sign == Sign::Zero);
        if touches {
            return Outcome::Failed("strict claim has a zero in the domain".into());
        }
    }
    Outcome::Proved(Certificate { claim: claim.clone(), proof: Proof::PolyNonneg(wrap(cert)) })
}

fn assemble(rw: Rewrite, main: Certificate, side: Vec<Certificate>, parent: &Claim) -> Certificate {
    Certificate { claim: parent.clone(), proof: Proof::Rewrite { step: rw.step, main: Box::new(main), side } }
}

/// Proves every side claim or reports the first that does not go through.
fn prove_sides(rw: &Rewrite, budget: u32) -> Result<Vec<Certificate>, String> {
    rw.side
        .iter()
        .map(|c| match go(c, budget) {
            Outcome::Proved(cert) => Ok(cert),
            Outcome::Disproved(w) => Err(format!("side condition {} fails at {w}", crate::expr::print(&c.h))),
            Outcome::Failed(r) => Err(format!("side condition {}: {r}", crate::expr::print(&c.h))),
        })
        .collect()
}

fn through(claim: &Claim, rw: Rewrite, budget: u32) -> Outcome {
    let side = match prove_sides(&rw, budget) {
        Ok(s) => s,
        Err(r) => return Outcome::Failed(r),
    };
    match go(&rw.child, budget) {
        Outcome::Proved(main) => Outcome::Proved(assemble(rw, main, side, claim)),
        other => other,
    }
}

fn go(claim: &Claim, budget: u32) -> Outcome {
    if budget == 0 {
        return Outcome::Failed("rewrite budget exhausted".into());
    }
    let budget = budget - 1;
    if let Some(p) = to_polynomial::<Rational>(&claim.h) {
        return match nonneg_on(&p, &claim.domain) {
            Ok(cert) => leaf(claim, cert, PolyLeaf::Rational),
            Err(e) => Outcome::Failed(e.to_string()),
        };
    }
    if let Some(p) = to_polynomial::<QuadExt>(&claim.h) {
        return match nonneg_on(&p, &claim.domain) {
            Ok(cert) => leaf(claim, cert, PolyLeaf::Quad),
            Err(e) => Outcome::Failed(e.to_string()),
        };
    }
    let q = var_root_index(&claim.h);
    if q > 1 {
        let rw = match rewrite_substitute_root(claim, q) {
            Ok(rw) => rw,
            Err(e) => return Outcome::Failed(e.to_string()),
        };
        return match through(claim, rw, budget) {
            Outcome::Disproved(t) => Outcome::Disproved(t.pow(q as i32)),
            other => other,
        };
    }
    let d = match decompose(&claim.h) {
        Ok(d) => d,
        Err(e) => return Outcome::Failed(format!("no single-radical form ({e:?})")),
    };
    if d.r.is_some() && !d.q.is_zero() {
        let x = claim.domain.interior_point();
        let first = match sign_at(&d.q, &x) {
            Some(Sign::Negative) => Orientation::RadicalBelow,
            _ => Orientation::RadicalAbove,
        };
        let second = match first {
            Orientation::RadicalBelow => Orientation::RadicalAbove,
            Orientation::RadicalAbove => Orientation::RadicalBelow,
        };
        let mut reasons = Vec::new();
        for o in [first, second] {
            let rw = match move_and_square_oriented(claim, o) {
                Ok(rw) => rw,
                Err(e) => return Outcome::Failed(e.to_string()),
            };
            match through(claim, rw, budget) {
                Outcome::Failed(r) => reasons.push(r),
                other => return other,
            }
        }
        return Outcome::Failed(reasons.join("; "));
    }
    match rewrite_clear_denominators(claim) {
        Ok(rw) => through(claim, rw, budget),
        Err(e) => Outcome::Failed(e.to_string()),
    }
}
