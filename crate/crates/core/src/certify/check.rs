use serde::{Deserialize, Serialize};

use super::interval::{piece_enclosure, probe_intervals};
use super::rewrite::{move_and_square_oriented, rewrite_clear_denominators, rewrite_substitute_root};
use super::{
    BoundaryNote, Certificate, Claim, IntervalProof, NeighborhoodKind, PolyLeaf, Proof, RewriteStep, Side,
};
use crate::expr::{diff, eval_exact, eval_interval, print, Bound, Domain, Expr};
use crate::numerics::{Precision, QuadExt, RatInterval, Rational, Sign};
use crate::poly::{check_nonneg_cert, to_polynomial, NonnegCert, UniPoly};

/// Points of the domain where `h = 0`. Roots known only by an isolating
/// box land in `boxes`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ZeroSet {
    pub exact: Vec<QuadExt>,
    pub boxes: Vec<RatInterval>,
}

impl ZeroSet {
    pub fn is_exact(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty() && self.boxes.is_empty()
    }

    fn normalize(mut self) -> Self {
        self.exact.sort_by(|a, b| a.cmp_exact(b));
        self.exact.dedup_by(|a, b| a.cmp_exact(b).is_eq());
        self.boxes.sort_by(|a, b| a.lo().cmp(b.lo()));
        self
    }
}

fn leaf_zeros<F>(cert: &NonnegCert<F>) -> ZeroSet {
    let mut z = ZeroSet::default();
    for r in &cert.roots {
        match &r.exact {
            Some(v) => z.exact.push(v.clone()),
            None => z.boxes.push(r.interval.clone()),
        }
    }
    for e in &cert.endpoints {
        if e.sign == Sign::Zero && cert.domain.contains(&e.at) {
            z.exact.push(e.at.clone());
        }
    }
    z
}

/// The exact zero set recorded by a certificate, mapped back to the
/// original variable.
pub fn zero_set(cert: &Certificate) -> ZeroSet {
    let z = match &cert.proof {
        Proof::PolyNonneg(PolyLeaf::Rational(c)) => leaf_zeros(c),
        Proof::PolyNonneg(PolyLeaf::Quad(c)) => leaf_zeros(c),
        Proof::Interval(p) => ZeroSet {
            exact: p.neighborhoods.iter().map(|n| n.center.clone()).filter(|c| cert.claim.domain.contains(c)).collect(),
            boxes: Vec::new(),
        },
        Proof::Rewrite { step: RewriteStep::SubstituteRoot { q, .. }, main, .. } => {
            let inner = zero_set(main);
            ZeroSet {
                exact: inner.exact.iter().map(|t| t.pow(*q as i32)).collect(),
                boxes: inner.boxes.iter().map(|b| b.powi(*q as i32).expect("integer power")).collect(),
            }
        }
        Proof::Rewrite { main, .. } => zero_set(main),
    };
    z.normalize()
}

/// Replays `cert` from scratch against `claim`.
pub fn check_certificate(cert: &Certificate, claim: &Claim) -> bool {
    cert.claim.same_as(claim) && check_node(cert, claim)
}

fn same_expr(a: &Expr, b: &Expr) -> bool {
    print(a) == print(b)
}

fn same_step(a: &RewriteStep, b: &RewriteStep) -> bool {
    match (a, b) {
        (
            RewriteStep::ClearDenominator { multiplier: m1, negated: n1 },
            RewriteStep::ClearDenominator { multiplier: m2, negated: n2 },
        ) => n1 == n2 && same_expr(m1, m2),
        (
            RewriteStep::MoveAndSquare { a: a1, b: b1, r: r1, orientation: o1 },
            RewriteStep::MoveAndSquare { a: a2, b: b2, r: r2, orientation: o2 },
        ) => o1 == o2 && same_expr(a1, a2) && same_expr(b1, b2) && same_expr(r1, r2),
        (RewriteStep::SubstituteRoot { q: q1, image: i1 }, RewriteStep::SubstituteRoot { q: q2, image: i2 }) => {
            q1 == q2 && i1 == i2
        }
        _ => false,
    }
}

/// `claim` is the checker's own copy; the certificate's stored claims are
/// only compared against it.
fn check_node(cert: &Certificate, claim: &Claim) -> bool {
    if !cert.claim.same_as(claim) {
        return false;
    }
    match &cert.proof {
        Proof::PolyNonneg(PolyLeaf::Rational(c)) => {
            to_polynomial::<Rational>(&claim.h).is_some_and(|p| check_leaf(c, &p, claim))
        }
        Proof::PolyNonneg(PolyLeaf::Quad(c)) => {
            to_polynomial::<QuadExt>(&claim.h).is_some_and(|p| check_leaf(c, &p, claim))
        }
        Proof::Interval(p) => check_interval(p, claim),
        Proof::Rewrite { step, main, side } => {
            let rw = match step {
                RewriteStep::ClearDenominator { .. } => rewrite_clear_denominators(claim),
                RewriteStep::MoveAndSquare { orientation, .. } => move_and_square_oriented(claim, *orientation),
                RewriteStep::SubstituteRoot { q, .. } => rewrite_substitute_root(claim, *q),
            };
            let Ok(rw) = rw else { return false };
            same_step(&rw.step, step)
                && side.len() == rw.side.len()
                && check_node(main, &rw.child)
                && side.iter().zip(&rw.side).all(|(c, s)| check_node(c, s))
        }
    }
}

fn check_leaf<F: crate::numerics::Scalar>(c: &NonnegCert<F>, p: &UniPoly<F>, claim: &Claim) -> bool {
    if !c.is_nonneg() || !check_nonneg_cert(c, p, &claim.domain) {
        return false;
    }
    claim.strict_interior_zeros_allowed
        || (c.roots.is_empty() && c.endpoints.iter().all(|e| e.sign != Sign::Zero))
}

fn vanishes(e: &Expr, at: &QuadExt) -> bool {
    matches!(eval_exact(e, at), Ok(v) if v.sign() == Sign::Zero)
}

fn q(r: &Rational) -> QuadExt {
    QuadExt::rational(r.clone())
}

fn within_closure(iv: &RatInterval, d: &Domain) -> bool {
    let above = |v: &Rational| match &d.lo {
        Bound::Finite(a) => q(v).cmp_exact(a).is_ge(),
        Bound::NegInf => true,
        Bound::PosInf => false,
    };
    let below = |v: &Rational| match &d.hi {
        Bound::Finite(b) => q(v).cmp_exact(b).is_le(),
        Bound::PosInf => true,
        Bound::NegInf => false,
    };
    above(iv.lo()) && below(iv.hi())
}

fn check_note(n: &BoundaryNote, h: &Expr, claim: &Claim, start: &Rational, prec: &Precision) -> bool {
    let (bound, open) = match n.side {
        Side::Lo => (&claim.domain.lo, claim.domain.lo_open),
        Side::Hi => (&claim.domain.hi, claim.domain.hi_open),
    };
    if bound.finite() != Some(&n.endpoint) || !n.sliver.is_positive() {
        return false;
    }
    // a closed endpoint belongs to the domain and cannot be left out
    if !open {
        return false;
    }
    let gap = q(start).checked_sub(&n.endpoint).ok().map(|g| match n.side {
        Side::Lo => g,
        Side::Hi => -g,
    });
    let Some(gap) = gap else { return false };
    if gap.sign() != Sign::Positive || gap.cmp_exact(&q(&n.sliver)).is_gt() {
        return false;
    }
    n.probes.iter().all(|p| {
        claim.domain.in_interior(&q(p.interval.lo()))
            && claim.domain.in_interior(&q(p.interval.hi()))
            && eval_interval(h, &p.interval, prec).is_ok_and(|e| e == p.enclosure && e.lo().is_positive())
    }) && !n.probes.is_empty()
        && n.probes.iter().map(|p| &p.interval).eq(probe_intervals(&anchor_of(start, n), n.side, k_of(&n.sliver)).iter())
}

fn anchor_of(start: &Rational, n: &BoundaryNote) -> Rational {
    match n.side {
        Side::Lo => start - &n.sliver,
        Side::Hi => start + &n.sliver,
    }
}

fn k_of(sliver: &Rational) -> u32 {
    let mut k = 0;
    let mut v = Rational::from(1);
    while &v > sliver && k < 64 {
        v = v / Rational::from(10);
        k += 1;
    }
    k
}

fn check_interval(p: &IntervalProof, claim: &Claim) -> bool {
    let prec = Precision::from_bits(p.prec_bits);
    let h = &claim.h;
    let h1 = diff(h);
    let h2 = diff(&h1);
    let d = &claim.domain;
    for n in &p.neighborhoods {
        if !within_closure(&n.interval, d) || !vanishes(h, &n.center) {
            return false;
        }
        if !claim.strict_interior_zeros_allowed && d.contains(&n.center) {
            return false;
        }
        let ok = match n.kind {
            NeighborhoodKind::Tangency => {
                vanishes(&h1, &n.center)
                    && q(n.interval.lo()).cmp_exact(&n.center).is_lt()
                    && q(n.interval.hi()).cmp_exact(&n.center).is_gt()
                    && eval_interval(&h2, &n.interval, &prec).is_ok_and(|e| e == n.enclosure && e.lo().is_positive())
            }
            NeighborhoodKind::Rising => {
                n.center == q(n.interval.lo())
                    && eval_interval(&h1, &n.interval, &prec).is_ok_and(|e| e == n.enclosure && e.lo().is_positive())
            }
            NeighborhoodKind::Falling => {
                n.center == q(n.interval.hi())
                    && eval_interval(&h1, &n.interval, &prec).is_ok_and(|e| e == n.enclosure && e.hi().is_negative())
            }
        };
        if !ok {
            return false;
        }
    }
    for piece in &p.pieces {
        if !within_closure(&piece.interval, d) {
            return false;
        }
        if !piece_enclosure(h, &h1, &piece.interval, &prec).is_some_and(|e| e == piece.enclosure && e.lo().is_positive()) {
            return false;
        }
    }
    let mut segs: Vec<&RatInterval> =
        p.pieces.iter().map(|x| &x.interval).chain(p.neighborhoods.iter().map(|n| &n.interval)).collect();
    if segs.is_empty() {
        return false;
    }
    segs.sort_by(|a, b| a.lo().cmp(b.lo()));
    let start = segs[0].lo().clone();
    let mut end = segs[0].hi().clone();
    for s in &segs[1..] {
        if s.lo() > &end {
            return false;
        }
        if s.hi() > &end {
            end = s.hi().clone();
        }
    }
    let side_ok = |side: Side, at: &Rational| {
        let bound = match side {
            Side::Lo => &d.lo,
            Side::Hi => &d.hi,
        };
        let notes: Vec<&BoundaryNote> = p.boundary.iter().filter(|n| n.side == side).collect();
        match notes.as_slice() {
            [] => bound.finite() == Some(&q(at)),
            [n] => check_note(n, h, claim, at, &prec),
            _ => false,
        }
    };
    side_ok(Side::Lo, &start) && side_ok(Side::Hi, &end)
}
