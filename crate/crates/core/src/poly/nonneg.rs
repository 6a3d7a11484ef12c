use serde::{Deserialize, Serialize};

use super::sturm::{count_with_chain, isolate_in_decomp, refine_box, sign_at_quad, sturm_chain};
use super::{square_free_decompose, PolyError, RootBox, SqfDecomp, UniPoly};
use crate::expr::{Bound, Domain};
use crate::numerics::{QuadExt, RatInterval, Rational, Scalar, Sign};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SamplePoint {
    pub point: Rational,
    pub sign: Sign,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonnegVerdict {
    Nonneg,
    FailsAt(Rational),
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct EndpointSign {
    pub at: QuadExt,
    pub sign: Sign,
}

/// Replayable evidence for the sign of a polynomial on a domain: the
/// interior roots with their multiplicities, one exact sample per root-free
/// gap, and the signs at closed endpoints.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct NonnegCert<F> {
    pub poly: UniPoly<F>,
    pub domain: Domain,
    pub decomposition: Option<SqfDecomp<F>>,
    pub roots: Vec<RootBox>,
    pub endpoints: Vec<EndpointSign>,
    pub samples: Vec<SamplePoint>,
    pub verdict: NonnegVerdict,
}

impl<F> NonnegCert<F> {
    pub fn is_nonneg(&self) -> bool {
        self.verdict == NonnegVerdict::Nonneg
    }

    pub fn witness(&self) -> Option<&Rational> {
        match &self.verdict {
            NonnegVerdict::FailsAt(w) => Some(w),
            NonnegVerdict::Nonneg => None,
        }
    }
}

enum Edge<'a> {
    Inf,
    Exact(&'a QuadExt),
    Rat(&'a Rational),
}

fn rough_lo(e: &Edge) -> Option<Rational> {
    match e {
        Edge::Inf => None,
        Edge::Exact(q) => Some(q.enclose(64).lo().clone()),
        Edge::Rat(r) => Some((*r).clone()),
    }
}

fn rough_hi(e: &Edge) -> Option<Rational> {
    match e {
        Edge::Inf => None,
        Edge::Exact(q) => Some(q.enclose(64).hi().clone()),
        Edge::Rat(r) => Some((*r).clone()),
    }
}

/// The canonical sample strictly between two gap edges.
fn gap_sample(left: &Edge, right: &Edge) -> Rational {
    let one = Rational::from(1);
    match (left, right) {
        (Edge::Inf, Edge::Inf) => Rational::from(0),
        (Edge::Inf, r) => Rational::from(rough_lo(r).expect("finite").floor()) - one,
        (l, Edge::Inf) => Rational::from(rough_hi(l).expect("finite").ceil()) + one,
        (Edge::Rat(a), Edge::Rat(b)) => (*a + *b) / Rational::from(2),
        (l, r) => {
            let a = edge_quad(l);
            let b = edge_quad(r);
            a.rational_between(&b)
        }
    }
}

fn edge_quad(e: &Edge) -> QuadExt {
    match e {
        Edge::Exact(q) => (*q).clone(),
        Edge::Rat(r) => QuadExt::rational((*r).clone()),
        Edge::Inf => unreachable!("finite edge"),
    }
}

fn bound_edge(b: &Bound) -> Edge<'_> {
    match b {
        Bound::Finite(q) => match q.as_rational() {
            Some(r) => Edge::Rat(r),
            None => Edge::Exact(q),
        },
        _ => Edge::Inf,
    }
}

/// Canonical samples for the gaps between consecutive boxes.
fn canonical_samples(roots: &[RootBox], domain: &Domain) -> Vec<Rational> {
    let mut edges_left = vec![bound_edge(&domain.lo)];
    let mut edges_right = Vec::new();
    for b in roots {
        edges_right.push(Edge::Rat(b.interval.lo()));
        edges_left.push(Edge::Rat(b.interval.hi()));
    }
    edges_right.push(bound_edge(&domain.hi));
    edges_left.iter().zip(edges_right.iter()).map(|(l, r)| gap_sample(l, r)).collect()
}

/// Shrinks each box to at most 1/64 of its neighbouring gaps.
fn tighten<F: Scalar>(roots: &mut [RootBox], factors: &[(UniPoly<F>, u32)], domain: &Domain) {
    let n = roots.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            if roots[i].interval.is_point() {
                continue;
            }
            let left = if i == 0 { rough_hi(&bound_edge(&domain.lo)) } else { Some(roots[i - 1].interval.hi().clone()) };
            let right =
                if i + 1 == n { rough_lo(&bound_edge(&domain.hi)) } else { Some(roots[i + 1].interval.lo().clone()) };
            let w = roots[i].interval.width();
            let mut limit: Option<Rational> = None;
            if let Some(l) = left {
                let gap = roots[i].interval.lo() - &l;
                limit = Some(gap);
            }
            if let Some(r) = right {
                let gap = &r - roots[i].interval.hi();
                limit = Some(match limit {
                    Some(g) if g < gap => g,
                    _ => gap,
                });
            }
            if let Some(g) = limit {
                if g.is_positive() && w * Rational::from(64) > g {
                    let f = &factors[roots[i].factor].0;
                    roots[i].interval = refine_box(f, &roots[i].interval);
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

fn closed_endpoints(domain: &Domain) -> Vec<QuadExt> {
    let mut out = Vec::new();
    if let (false, Bound::Finite(a)) = (domain.lo_open, &domain.lo) {
        out.push(a.clone());
    }
    if let (false, Bound::Finite(b)) = (domain.hi_open, &domain.hi) {
        out.push(b.clone());
    }
    out
}

fn decide(roots: &[RootBox], endpoints: &[EndpointSign], samples: &[SamplePoint]) -> NonnegVerdict {
    if let Some(s) = samples.iter().find(|s| s.sign == Sign::Negative) {
        return NonnegVerdict::FailsAt(s.point.clone());
    }
    let parity_ok = roots.iter().all(|r| r.multiplicity % 2 == 0);
    let ends_ok = endpoints.iter().all(|e| e.sign != Sign::Negative);
    debug_assert!(parity_ok && ends_ok, "a sign flip always shows in some gap sample");
    NonnegVerdict::Nonneg
}

/// Decides `p >= 0` on the domain.
pub fn nonneg_on<F: Scalar>(p: &UniPoly<F>, domain: &Domain) -> Result<NonnegCert<F>, PolyError> {
    if p.is_zero() {
        return Ok(NonnegCert {
            poly: p.clone(),
            domain: domain.clone(),
            decomposition: None,
            roots: Vec::new(),
            endpoints: Vec::new(),
            samples: Vec::new(),
            verdict: NonnegVerdict::Nonneg,
        });
    }
    let dec = square_free_decompose(p);
    let interior = domain.interior();
    let mut roots = isolate_in_decomp(&dec.factors, &interior)?;
    tighten(&mut roots, &dec.factors, domain);
    let mut endpoints = Vec::new();
    for e in closed_endpoints(domain) {
        endpoints.push(EndpointSign { sign: sign_at_quad(p, &e)?, at: e });
    }
    let samples: Vec<SamplePoint> = canonical_samples(&roots, domain)
        .into_iter()
        .map(|x| SamplePoint { sign: p.sign_at(&x), point: x })
        .collect();
    let verdict = decide(&roots, &endpoints, &samples);
    Ok(NonnegCert { poly: p.clone(), domain: domain.clone(), decomposition: Some(dec), roots, endpoints, samples, verdict })
}

fn strictly_inside(iv: &RatInterval, domain: &Domain) -> bool {
    let lo = QuadExt::rational(iv.lo().clone());
    let hi = QuadExt::rational(iv.hi().clone());
    domain.in_interior(&lo) && domain.in_interior(&hi)
}

/// Independent replay: exact division, gcds and sign evaluations only.
pub fn check_nonneg_cert<F: Scalar>(cert: &NonnegCert<F>, p: &UniPoly<F>, domain: &Domain) -> bool {
    check_inner(cert, p, domain).is_ok()
}

fn check_inner<F: Scalar>(cert: &NonnegCert<F>, p: &UniPoly<F>, domain: &Domain) -> Result<(), &'static str> {
    let ensure = |c: bool, why: &'static str| if c { Ok(()) } else { Err(why) };
    ensure(&cert.poly == p, "polynomial differs")?;
    ensure(&cert.domain == domain, "domain differs")?;
    let Some(dec) = &cert.decomposition else {
        ensure(p.is_zero(), "missing decomposition")?;
        ensure(cert.roots.is_empty() && cert.samples.is_empty() && cert.endpoints.is_empty(), "zero poly extras")?;
        return ensure(cert.verdict == NonnegVerdict::Nonneg, "zero poly verdict");
    };
    ensure(!p.is_zero(), "zero polynomial with decomposition")?;
    ensure(&dec.reconstruct() == p, "decomposition does not reconstruct")?;
    for (i, (f, m)) in dec.factors.iter().enumerate() {
        ensure(*m >= 1 && f.degree().unwrap_or(0) >= 1, "trivial factor")?;
        ensure(f.lc().is_one(), "factor not monic")?;
        ensure(f.gcd(&f.derivative()).degree() == Some(0), "factor not square-free")?;
        for (g, _) in &dec.factors[i + 1..] {
            ensure(f.gcd(g).degree() == Some(0), "factors share a root")?;
        }
    }
    let interior = domain.interior();
    for (i, (f, m)) in dec.factors.iter().enumerate() {
        let chain = sturm_chain(f);
        let n = count_with_chain(f, &chain, &interior).map_err(|_| "endpoint not representable")?;
        let mine: Vec<&RootBox> = cert.roots.iter().filter(|b| b.factor == i).collect();
        ensure(mine.len() == n, "root count differs from Sturm count")?;
        ensure(mine.iter().all(|b| b.multiplicity == *m), "multiplicity mismatch")?;
    }
    for b in &cert.roots {
        ensure(b.factor < dec.factors.len(), "bad factor index")?;
        let f = &dec.factors[b.factor].0;
        ensure(strictly_inside(&b.interval, domain), "root box leaves the interior")?;
        if b.interval.is_point() {
            ensure(f.sign_at(b.interval.lo()) == Sign::Zero, "degenerate box is not a root")?;
        } else {
            let sl = f.sign_at(b.interval.lo());
            let sh = f.sign_at(b.interval.hi());
            ensure(sl != Sign::Zero && sh != Sign::Zero && sl != sh, "no sign change across box")?;
        }
        if let Some(v) = &b.exact {
            ensure(sign_at_quad(f, v).ok() == Some(Sign::Zero), "stored exact root is not a root")?;
            let inside = QuadExt::rational(b.interval.lo().clone()).cmp_exact(v).is_le()
                && v.cmp_exact(&QuadExt::rational(b.interval.hi().clone())).is_le();
            ensure(inside, "exact root outside its box")?;
        }
    }
    for w in cert.roots.windows(2) {
        ensure(w[0].interval.hi() < w[1].interval.lo(), "boxes overlap or unsorted")?;
    }
    let expected = canonical_samples(&cert.roots, domain);
    ensure(expected.len() == cert.samples.len(), "sample count")?;
    for (s, e) in cert.samples.iter().zip(expected.iter()) {
        ensure(&s.point == e, "sample is not the canonical gap point")?;
        ensure(p.sign_at(&s.point) == s.sign, "sample sign")?;
    }
    let ends = closed_endpoints(domain);
    ensure(ends.len() == cert.endpoints.len(), "endpoint count")?;
    for (stored, e) in cert.endpoints.iter().zip(ends.iter()) {
        ensure(&stored.at == e, "endpoint value")?;
        ensure(sign_at_quad(p, e).ok() == Some(stored.sign), "endpoint sign")?;
    }
    let nonneg = cert.samples.iter().all(|s| s.sign == Sign::Positive)
        && cert.roots.iter().all(|r| r.multiplicity % 2 == 0)
        && cert.endpoints.iter().all(|e| e.sign != Sign::Negative);
    let want = if nonneg {
        NonnegVerdict::Nonneg
    } else {
        match cert.samples.iter().find(|s| s.sign == Sign::Negative) {
            Some(s) => NonnegVerdict::FailsAt(s.point.clone()),
            None => return Err("failure without a negative sample"),
        }
    };
    ensure(cert.verdict == want, "verdict")
}
