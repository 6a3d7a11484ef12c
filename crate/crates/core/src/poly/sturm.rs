use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{square_free_decompose, PolyError, UniPoly};
use crate::expr::{Bound, Domain};
use crate::numerics::{QuadExt, RatInterval, Rational, Scalar, Sign};

/// Isolating box for one real root of a square-free factor. A non-degenerate
/// box has a strict sign change of the factor across it; a degenerate box is
/// an exact rational root.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RootBox {
    pub interval: RatInterval,
    pub multiplicity: u32,
    /// Index of the factor in the square-free decomposition.
    pub factor: usize,
    /// Exact value when it is known (rational, or a quadratic irrational).
    pub exact: Option<QuadExt>,
}

/// Signed remainder sequence of `(p, p')`, each member scaled by `1/|lc|`.
pub fn sturm_chain<F: Scalar>(p: &UniPoly<F>) -> Vec<UniPoly<F>> {
    let norm = |q: UniPoly<F>| -> UniPoly<F> {
        let lc = q.lc();
        let s = if lc.sign() == Sign::Negative { -lc } else { lc };
        q.scale(&(F::one() / s))
    };
    let mut chain = vec![norm(p.clone())];
    if p.degree().unwrap_or(0) == 0 {
        return chain;
    }
    chain.push(norm(p.derivative()));
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].divrem(&chain[n - 1]).expect("nonzero chain member");
        if r.is_zero() {
            return chain;
        }
        chain.push(norm(r.neg()));
    }
}

fn variations(signs: impl Iterator<Item = Sign>) -> usize {
    let mut last = Sign::Zero;
    let mut v = 0;
    for s in signs {
        if s == Sign::Zero {
            continue;
        }
        if last != Sign::Zero && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn sign_at_inf<F: Scalar>(p: &UniPoly<F>, negative: bool) -> Sign {
    let s = p.lc().sign();
    if negative && p.degree().unwrap_or(0) % 2 == 1 {
        s.flip()
    } else {
        s
    }
}

pub(crate) fn sign_at_quad<F: Scalar>(p: &UniPoly<F>, x: &QuadExt) -> Result<Sign, PolyError> {
    if let Some(r) = x.as_rational() {
        return Ok(p.sign_at(r));
    }
    p.eval_quad(x)
        .map(|v| v.sign())
        .map_err(|_| PolyError::EndpointNotRepresentable(format!("{x} with coefficients in another extension")))
}

pub(crate) fn sign_at_bound<F: Scalar>(p: &UniPoly<F>, b: &Bound) -> Result<Sign, PolyError> {
    match b {
        Bound::NegInf => Ok(sign_at_inf(p, true)),
        Bound::PosInf => Ok(sign_at_inf(p, false)),
        Bound::Finite(v) => sign_at_quad(p, v),
    }
}

fn chain_var_rat<F: Scalar>(chain: &[UniPoly<F>], x: &Rational) -> usize {
    variations(chain.iter().map(|p| p.sign_at(x)))
}

fn chain_var_bound<F: Scalar>(chain: &[UniPoly<F>], b: &Bound) -> Result<usize, PolyError> {
    let signs: Result<Vec<Sign>, PolyError> = chain.iter().map(|p| sign_at_bound(p, b)).collect();
    Ok(variations(signs?.into_iter()))
}

/// Square-free part `p / gcd(p, p')`.
pub(crate) fn square_free_part<F: Scalar>(p: &UniPoly<F>) -> UniPoly<F> {
    if p.degree().unwrap_or(0) == 0 {
        return p.clone();
    }
    let g = p.gcd(&p.derivative());
    p.exact_div(&g).expect("gcd divides")
}

/// Number of distinct real roots of `p` in the domain.
pub fn sturm_count<F: Scalar>(p: &UniPoly<F>, domain: &Domain) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::DivisionByZeroPoly);
    }
    let g = square_free_part(p);
    if g.degree() == Some(0) {
        return Ok(0);
    }
    let chain = sturm_chain(&g);
    count_with_chain(&g, &chain, domain)
}

pub(crate) fn count_with_chain<F: Scalar>(
    g: &UniPoly<F>,
    chain: &[UniPoly<F>],
    domain: &Domain,
) -> Result<usize, PolyError> {
    // V(a) - V(b) counts roots in (a, b]
    let va = chain_var_bound(chain, &domain.lo)?;
    let vb = chain_var_bound(chain, &domain.hi)?;
    let mut n = va as i64 - vb as i64;
    if !domain.lo_open && sign_at_bound(g, &domain.lo)? == Sign::Zero {
        n += 1;
    }
    if domain.hi_open && matches!(domain.hi, Bound::Finite(_)) && sign_at_bound(g, &domain.hi)? == Sign::Zero {
        n -= 1;
    }
    Ok(n.max(0) as usize)
}

fn abs_upper<F: Scalar>(c: &F) -> Rational {
    let e = c.enclose(16);
    e.lo().abs().max(e.hi().abs())
}

fn abs_lower<F: Scalar>(c: &F) -> Rational {
    let mut bits = 16;
    loop {
        let e = c.enclose(bits);
        if !e.contains_zero() {
            return e.lo().abs().min(e.hi().abs());
        }
        bits *= 2;
    }
}

/// Power of two strictly exceeding every root modulus.
pub(crate) fn cauchy_bound<F: Scalar>(p: &UniPoly<F>) -> Rational {
    let n = p.degree().expect("nonzero");
    let lc = abs_lower(&p.lc());
    let mut m = Rational::zero();
    for c in &p.coeffs()[..n] {
        m = m.max(abs_upper(c) / &lc);
    }
    let bound = m + Rational::one();
    let mut b = Rational::one();
    while b < bound {
        b = b * Rational::from(2);
    }
    b
}

/// Bisects a box with a strict sign change (or hits the root exactly).
pub(crate) fn refine_box<F: Scalar>(f: &UniPoly<F>, b: &RatInterval) -> RatInterval {
    if b.is_point() {
        return b.clone();
    }
    let mid = b.midpoint();
    let sm = f.sign_at(&mid);
    if sm == Sign::Zero {
        return RatInterval::point(mid);
    }
    if f.sign_at(b.lo()) != sm {
        RatInterval::new(b.lo().clone(), mid)
    } else {
        RatInterval::new(mid, b.hi().clone())
    }
}

/// Isolating boxes for all real roots of a square-free `f`, ascending.
pub(crate) fn isolate_all<F: Scalar>(f: &UniPoly<F>) -> Vec<RatInterval> {
    let deg = f.degree().unwrap_or(0);
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        let root = -(f.coeff(0) / &f.coeff(1));
        if let Some(r) = root.to_quad().as_rational() {
            return vec![RatInterval::point(r.clone())];
        }
    }
    let chain = sturm_chain(f);
    let b = cauchy_bound(f);
    let lo = -b.clone();
    let n = chain_var_rat(&chain, &lo) - chain_var_rat(&chain, &b);
    let mut out = Vec::new();
    bisect(f, &chain, lo, b, n, &mut out);
    out
}

fn bisect<F: Scalar>(
    f: &UniPoly<F>,
    chain: &[UniPoly<F>],
    lo: Rational,
    hi: Rational,
    n: usize,
    out: &mut Vec<RatInterval>,
) {
    if n == 0 {
        return;
    }
    if n == 1 {
        if f.sign_at(&hi) == Sign::Zero {
            out.push(RatInterval::point(hi));
            return;
        }
        if f.sign_at(&lo) != Sign::Zero {
            out.push(RatInterval::new(lo, hi));
            return;
        }
    }
    let mid = (&lo + &hi) / Rational::from(2);
    let v_lo = chain_var_rat(chain, &lo);
    let v_mid = chain_var_rat(chain, &mid);
    let left = v_lo - v_mid;
    bisect(f, chain, lo, mid.clone(), left, out);
    bisect(f, chain, mid, hi, n - left, out);
}

/// Exact real roots of a factor of degree one or two, ascending; empty
/// when they cannot be written in `ℚ` or a single `ℚ(√d)`.
pub fn exact_roots<F: Scalar>(f: &UniPoly<F>) -> Vec<QuadExt> {
    let q: Vec<QuadExt> = f.coeffs().iter().map(Scalar::to_quad).collect();
    match q.len() {
        2 => {
            let Ok(Some(r)) = q[0].checked_div(&q[1]) else { return Vec::new() };
            vec![-r]
        }
        3 => {
            let (c, b, a) = (&q[0], &q[1], &q[2]);
            let Ok(disc) = b.checked_mul(b).and_then(|bb| {
                a.checked_mul(c).and_then(|ac| bb.checked_sub(&(ac * QuadExt::from(Rational::from(4)))))
            }) else {
                return Vec::new();
            };
            if disc.sign() == Sign::Negative {
                return Vec::new();
            }
            let Some(s) = disc.exact_sqrt() else { return Vec::new() };
            let two_a = a * &QuadExt::from(Rational::from(2));
            let mut roots = Vec::new();
            for cand in [(-b).checked_sub(&s), (-b).checked_add(&s)] {
                let Ok(num) = cand else { return Vec::new() };
                let Ok(Some(r)) = num.checked_div(&two_a) else { return Vec::new() };
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            roots.sort_by(|x, y| x.cmp_exact(y));
            roots
        }
        _ => Vec::new(),
    }
}

/// The rational with the smallest denominator (then smallest magnitude)
/// in `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = Rational::from(lo.floor());
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(
        &(hi - &fl).recip().expect("positive"),
        &(lo - &fl).recip().expect("positive"),
    );
    fl + inner.recip().expect("positive")
}

/// All rational roots, ascending.
pub(crate) fn rational_roots(p: &UniPoly<Rational>) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let g = square_free_part(p);
    let (_, prim) = g.primitive_part();
    let a: BigInt = prim.lc().numer().abs();
    let tol = Rational::new(BigInt::one(), &a * &a);
    let mut out = Vec::new();
    for mut b in isolate_all(&prim) {
        while !b.is_point() && b.width() >= tol {
            b = refine_box(&prim, &b);
        }
        let r = if b.is_point() { b.lo().clone() } else { simplest_between(b.lo(), b.hi()) };
        if prim.sign_at(&r) == Sign::Zero {
            out.push(r);
        }
    }
    out
}

enum Place {
    Below,
    AtLo,
    Inside,
    AtHi,
    Above,
}

fn place_exact(v: &QuadExt, d: &Domain) -> Place {
    if let Bound::Finite(a) = &d.lo {
        match v.cmp_exact(a) {
            Ordering::Less => return Place::Below,
            Ordering::Equal => return Place::AtLo,
            Ordering::Greater => {}
        }
    }
    if let Bound::Finite(b) = &d.hi {
        match v.cmp_exact(b) {
            Ordering::Greater => return Place::Above,
            Ordering::Equal => return Place::AtHi,
            Ordering::Less => {}
        }
    }
    Place::Inside
}

/// Strict position of a rational box relative to an exact point:
/// `Less` if the box lies below `a`, `Greater` if above, `Equal` if it straddles.
fn box_vs(b: &RatInterval, a: &QuadExt) -> Ordering {
    let lo = QuadExt::rational(b.lo().clone());
    let hi = QuadExt::rational(b.hi().clone());
    if hi.cmp_exact(a) == Ordering::Less {
        Ordering::Less
    } else if lo.cmp_exact(a) == Ordering::Greater {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Locates the root in box `b` relative to the domain, refining until the
/// box no longer straddles a finite endpoint. Returns the placement and the
/// (refined) box plus an exact value when the root sits on an endpoint.
fn place_box<F: Scalar>(
    f: &UniPoly<F>,
    mut b: RatInterval,
    d: &Domain,
) -> Result<(Place, RatInterval, Option<QuadExt>), PolyError> {
    for (bound, is_lo) in [(&d.lo, true), (&d.hi, false)] {
        let Bound::Finite(a) = bound else { continue };
        if box_vs(&b, a) == Ordering::Equal {
            if sign_at_quad(f, a)? == Sign::Zero {
                let place = if is_lo { Place::AtLo } else { Place::AtHi };
                return Ok((place, b, Some(a.clone())));
            }
            while box_vs(&b, a) == Ordering::Equal {
                b = refine_box(f, &b);
            }
        }
    }
    let place = match (&d.lo, &d.hi) {
        (Bound::Finite(a), _) if box_vs(&b, a) == Ordering::Less => Place::Below,
        (_, Bound::Finite(c)) if box_vs(&b, c) == Ordering::Greater => Place::Above,
        _ => Place::Inside,
    };
    Ok((place, b, None))
}

/// Boxes for the distinct roots of `p` inside the domain (closed endpoints
/// included, open ones excluded), pairwise disjoint and ascending, with
/// multiplicities from the square-free decomposition.
pub fn isolate_roots<F: Scalar>(p: &UniPoly<F>, domain: &Domain) -> Result<Vec<RootBox>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::DivisionByZeroPoly);
    }
    let dec = square_free_decompose(p);
    isolate_in_decomp(&dec.factors, domain)
}

pub(crate) fn isolate_in_decomp<F: Scalar>(
    factors: &[(UniPoly<F>, u32)],
    domain: &Domain,
) -> Result<Vec<RootBox>, PolyError> {
    let mut boxes = Vec::new();
    for (idx, (f, m)) in factors.iter().enumerate() {
        let exacts = exact_roots(f);
        for b in isolate_all(f) {
            let known = exacts
                .iter()
                .find(|v| box_vs(&b, v) == Ordering::Equal)
                .cloned()
                .or_else(|| b.is_point().then(|| QuadExt::rational(b.lo().clone())));
            let (place, b, at_end) = match &known {
                Some(v) => {
                    let place = place_exact(v, domain);
                    let mut b = b;
                    // keep the box away from the endpoints it does not sit on
                    if matches!(place, Place::Inside) {
                        b = place_box(f, b, domain)?.1;
                    }
                    (place, b, None)
                }
                None => place_box(f, b, domain)?,
            };
            let exact = at_end.or(known);
            let keep = match place {
                Place::Inside => true,
                Place::AtLo => !domain.lo_open,
                Place::AtHi => !domain.hi_open,
                Place::Below | Place::Above => false,
            };
            if keep {
                boxes.push(RootBox { interval: b, multiplicity: *m, factor: idx, exact });
            }
        }
    }
    separate(&mut boxes, factors);
    Ok(boxes)
}

/// Sorts boxes and refines until no two overlap.
pub(crate) fn separate<F: Scalar>(boxes: &mut [RootBox], factors: &[(UniPoly<F>, u32)]) {
    loop {
        boxes.sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()).then(a.interval.hi().cmp(b.interval.hi())));
        let mut changed = false;
        for i in 1..boxes.len() {
            if boxes[i - 1].interval.hi() >= boxes[i].interval.lo() {
                for j in [i - 1, i] {
                    let f = &factors[boxes[j].factor].0;
                    let nb = refine_box(f, &boxes[j].interval);
                    boxes[j].interval = nb;
                }
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}
