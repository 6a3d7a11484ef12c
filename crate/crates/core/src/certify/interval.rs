use super::{
    confirms_negative, BoundaryNote, Certificate, Claim, DeclaredZero, IntervalProof, Neighborhood, NeighborhoodKind,
    Piece, Proof, Side, Verdict, ZeroKind,
};
use crate::expr::{diff, eval_exact, eval_interval, Bound, Expr};
use crate::numerics::{Precision, QuadExt, RatInterval, Rational, Sign};

const MAX_PIECES: usize = 200_000;

pub(crate) fn ten_pow(k: u32) -> Rational {
    Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(10), k as usize))
}

/// Geometric probe pieces `[e ± 10^-(k+j+1), e ± 10^-(k+j)]`, `j = 0..6`,
/// listed left to right.
pub(crate) fn probe_intervals(endpoint: &Rational, side: Side, k: u32) -> Vec<RatInterval> {
    let mut out: Vec<RatInterval> = (0..6)
        .map(|j| {
            let near = ten_pow(k + j + 1).recip().expect("nonzero");
            let far = ten_pow(k + j).recip().expect("nonzero");
            match side {
                Side::Lo => RatInterval::new(endpoint + &near, endpoint + &far),
                Side::Hi => RatInterval::new(endpoint - &far, endpoint - &near),
            }
        })
        .collect();
    if side == Side::Lo {
        out.reverse();
    }
    out
}

/// The natural enclosure of `h` on `iv`, tightened by the mean-value form
/// `h(m) + h′(iv)·(iv − m)` when `h′` is defined on `iv`.
pub(crate) fn piece_enclosure(h: &Expr, h1: &Expr, iv: &RatInterval, prec: &Precision) -> Option<RatInterval> {
    let natural = eval_interval(h, iv, prec).ok();
    let m = iv.midpoint();
    let mean_value = eval_interval(h, &RatInterval::point(m.clone()), prec)
        .ok()
        .zip(eval_interval(h1, iv, prec).ok())
        .map(|(hm, slope)| hm.add(&slope.mul(&iv.sub(&RatInterval::point(m)))));
    match (natural, mean_value) {
        (Some(a), Some(b)) => {
            let lo = a.lo().max(b.lo()).clone();
            let hi = a.hi().min(b.hi()).clone();
            Some(RatInterval::new(lo, hi))
        }
        (a, b) => a.or(b),
    }
}

struct Ctx<'a> {
    h: &'a Expr,
    h1: Expr,
    prec: Precision,
    max_depth: u32,
    pieces: Vec<Piece>,
}

enum Cover {
    Done,
    Negative(Rational),
    Stuck(String),
}

impl Ctx<'_> {
    fn enclose(&self, iv: &RatInterval) -> Option<RatInterval> {
        piece_enclosure(self.h, &self.h1, iv, &self.prec)
    }

    /// Left-to-right bisection of `[a, b]` until every piece is positive.
    fn cover(&mut self, iv: RatInterval, depth: u32) -> Cover {
        if self.pieces.len() > MAX_PIECES {
            return Cover::Stuck("piece budget exhausted".into());
        }
        let enc = self.enclose(&iv);
        if let Some(e) = &enc {
            if e.lo().is_positive() {
                self.pieces.push(Piece { interval: iv, enclosure: e.clone() });
                return Cover::Done;
            }
            if e.hi().is_negative() {
                return Cover::Negative(iv.midpoint());
            }
        }
        if depth >= self.max_depth {
            let m = iv.midpoint();
            if confirms_negative(self.h, &m) {
                return Cover::Negative(m);
            }
            return Cover::Stuck(format!("no positive enclosure on [{}, {}]", iv.lo(), iv.hi()));
        }
        let (l, r) = iv.split();
        match self.cover(l, depth + 1) {
            Cover::Done => self.cover(r, depth + 1),
            other => other,
        }
    }
}

fn rational_center(z: &QuadExt) -> Option<Rational> {
    z.as_rational().cloned()
}

/// `[z − δ, z + δ]` in rational endpoints, halving from `1/10` until `h″`
/// is positive on it.
fn tangency(h2: &Expr, z: &QuadExt, claim: &Claim, prec: &Precision) -> Result<Neighborhood, String> {
    let enc = z.enclose(prec.bits() + 8);
    let mut delta = Rational::new(1, 10);
    for _ in 0..=20 {
        let iv = RatInterval::new(enc.lo() - &delta, enc.hi() + &delta);
        let inside = claim.domain.contains(&QuadExt::rational(iv.lo().clone()))
            && claim.domain.contains(&QuadExt::rational(iv.hi().clone()));
        if inside {
            if let Ok(e) = eval_interval(h2, &iv, prec) {
                if e.lo().is_positive() {
                    return Ok(Neighborhood { center: z.clone(), interval: iv, kind: NeighborhoodKind::Tangency, enclosure: e });
                }
            }
        }
        delta = delta / Rational::from(2);
    }
    Err(format!("no neighbourhood of {z} with positive second derivative"))
}

fn monotone(h1: &Expr, z: &Rational, side: Side, prec: &Precision) -> Result<Neighborhood, String> {
    let mut delta = Rational::new(1, 10);
    for _ in 0..=20 {
        let (iv, kind) = match side {
            Side::Lo => (RatInterval::new(z.clone(), z + &delta), NeighborhoodKind::Rising),
            Side::Hi => (RatInterval::new(z - &delta, z.clone()), NeighborhoodKind::Falling),
        };
        if let Ok(e) = eval_interval(h1, &iv, prec) {
            let ok = match kind {
                NeighborhoodKind::Rising => e.lo().is_positive(),
                _ => e.hi().is_negative(),
            };
            if ok {
                return Ok(Neighborhood { center: QuadExt::rational(z.clone()), interval: iv, kind, enclosure: e });
            }
        }
        delta = delta / Rational::from(2);
    }
    Err(format!("derivative sign not certified next to {z}"))
}

/// Where coverage starts on one side: the endpoint itself, or a point a
/// sliver inside it together with the probe evidence.
fn boundary_start(h: &Expr, b: &Bound, open: bool, side: Side, prec: &Precision) -> Result<(Rational, Option<BoundaryNote>), String> {
    let e = b.finite().ok_or("unbounded domain")?;
    if let Some(r) = e.as_rational() {
        let touch = match side {
            Side::Lo => RatInterval::new(r.clone(), r + &ten_pow(12).recip().expect("nonzero")),
            Side::Hi => RatInterval::new(r - &ten_pow(12).recip().expect("nonzero"), r.clone()),
        };
        if eval_interval(h, &touch, prec).is_ok() {
            return Ok((r.clone(), None));
        }
    }
    if !open {
        return Err(format!("h not enclosed up to the closed endpoint {e}"));
    }
    let approx = e.enclose(prec.bits() + 8);
    let anchor = match side {
        Side::Lo => approx.hi().clone(),
        Side::Hi => approx.lo().clone(),
    };
    for k in 3..=12 {
        let probes: Option<Vec<Piece>> = probe_intervals(&anchor, side, k)
            .into_iter()
            .map(|iv| {
                let enc = eval_interval(h, &iv, prec).ok()?;
                enc.lo().is_positive().then_some(Piece { interval: iv, enclosure: enc })
            })
            .collect();
        if let Some(probes) = probes {
            let sliver = ten_pow(k).recip().expect("nonzero");
            let start = match side {
                Side::Lo => &anchor + &sliver,
                Side::Hi => &anchor - &sliver,
            };
            return Ok((start, Some(BoundaryNote { side, endpoint: e.clone(), sliver, probes })));
        }
    }
    Err(format!("no sign evidence near the endpoint {e}"))
}

/// Covers the domain by positive enclosures and second-derivative
/// neighbourhoods of the declared zeros.
pub fn interval_prove(
    claim: &Claim,
    declared_zeros: &[DeclaredZero],
    prec: &Precision,
    max_depth: u32,
) -> (Verdict, Option<Certificate>) {
    let prec = Precision::from_bits(prec.bits());
    let h = &claim.h;
    let h1 = diff(h);
    let h2 = diff(&h1);
    let d = &claim.domain;
    let mut neighborhoods = Vec::new();
    for z in declared_zeros {
        if !d.contains(&z.point) && z.kind == ZeroKind::Tangency {
            return (Verdict::unknown(format!("declared zero {} outside the domain", z.point)), None);
        }
        match eval_exact(h, &z.point) {
            Ok(v) if v.sign() == Sign::Zero => {}
            Ok(v) if v.sign() == Sign::Negative => {
                if let Some(w) = rational_center(&z.point) {
                    return (Verdict::Disproved { witness: w }, None);
                }
                return (Verdict::unknown(format!("h is negative at {}", z.point)), None);
            }
            _ => return (Verdict::unknown(format!("h does not vanish exactly at {}", z.point)), None),
        }
        if !claim.strict_interior_zeros_allowed && d.contains(&z.point) {
            return (Verdict::unknown(format!("strict claim vanishes at {}", z.point)), None);
        }
        let nb = match z.kind {
            ZeroKind::Tangency => {
                if !matches!(eval_exact(&h1, &z.point), Ok(v) if v.sign() == Sign::Zero) {
                    return (Verdict::unknown(format!("h' does not vanish exactly at {}", z.point)), None);
                }
                tangency(&h2, &z.point, claim, &prec)
            }
            ZeroKind::Boundary => {
                let Some(r) = rational_center(&z.point) else {
                    return (Verdict::unknown("irrational boundary zero"), None);
                };
                let side = if d.lo.finite() == Some(&z.point) {
                    Side::Lo
                } else if d.hi.finite() == Some(&z.point) {
                    Side::Hi
                } else {
                    return (Verdict::unknown(format!("{r} is not an endpoint")), None);
                };
                monotone(&h1, &r, side, &prec)
            }
        };
        match nb {
            Ok(nb) => neighborhoods.push(nb),
            Err(r) => return (Verdict::unknown(r), None),
        }
    }
    neighborhoods.sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()));
    if neighborhoods.windows(2).any(|w| w[0].interval.hi() > w[1].interval.lo()) {
        return (Verdict::unknown("overlapping neighbourhoods"), None);
    }
    let mut boundary = Vec::new();
    let lo_start = match neighborhoods.first() {
        Some(n) if n.kind == NeighborhoodKind::Rising => n.interval.lo().clone(),
        _ => match boundary_start(h, &d.lo, d.lo_open, Side::Lo, &prec) {
            Ok((s, note)) => {
                boundary.extend(note);
                s
            }
            Err(r) => return (Verdict::unknown(r), None),
        },
    };
    let hi_end = match neighborhoods.last() {
        Some(n) if n.kind == NeighborhoodKind::Falling => n.interval.hi().clone(),
        _ => match boundary_start(h, &d.hi, d.hi_open, Side::Hi, &prec) {
            Ok((s, note)) => {
                boundary.extend(note);
                s
            }
            Err(r) => return (Verdict::unknown(r), None),
        },
    };
    let mut gaps = Vec::new();
    let mut cur = lo_start;
    for n in &neighborhoods {
        if n.interval.lo() > &cur {
            gaps.push(RatInterval::new(cur.clone(), n.interval.lo().clone()));
        }
        cur = n.interval.hi().clone();
    }
    if hi_end > cur {
        gaps.push(RatInterval::new(cur, hi_end));
    }
    let mut ctx = Ctx { h, h1: h1.clone(), prec: prec.clone(), max_depth, pieces: Vec::new() };
    for g in gaps {
        match ctx.cover(g, 0) {
            Cover::Done => {}
            Cover::Negative(w) => {
                if confirms_negative(h, &w) {
                    return (Verdict::Disproved { witness: w }, None);
                }
                return (Verdict::unknown(format!("enclosure negative near {w} but not confirmed")), None);
            }
            Cover::Stuck(r) => return (Verdict::unknown(r), None),
        }
    }
    let proof = IntervalProof { prec_bits: prec.bits(), pieces: ctx.pieces, neighborhoods, boundary };
    (Verdict::Proved, Some(Certificate { claim: claim.clone(), proof: Proof::Interval(proof) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::numerics::rat;

    fn claim(h: &str, d: &str) -> Claim {
        Claim::nonneg(parse(h).unwrap(), d.parse().unwrap())
    }

    fn tangent(z: Rational) -> DeclaredZero {
        DeclaredZero { point: QuadExt::rational(z), kind: ZeroKind::Tangency }
    }

    #[test]
    fn fourth_example() {
        let c = claim("sqrt(1-x) - sqrt(x) + sqrt2*x^2 - sqrt2/4", "(0, 1)");
        let (v, cert) = interval_prove(&c, &[tangent(rat(1, 2))], &Precision::default(), 40);
        assert_eq!(v, Verdict::Proved);
        let Proof::Interval(p) = cert.unwrap().proof else { panic!() };
        assert_eq!(p.neighborhoods.len(), 1);
        assert_eq!(p.neighborhoods[0].interval, RatInterval::new(rat(2, 5), rat(3, 5)));
        assert!(p.neighborhoods[0].enclosure.lo() >= &rat(23, 10));
        assert!(p.boundary.is_empty());
    }

    #[test]
    fn square_and_negative() {
        let c = claim("(x - 1/2)^2", "(0, 1)");
        assert_eq!(interval_prove(&c, &[tangent(rat(1, 2))], &Precision::default(), 40).0, Verdict::Proved);
        let c = claim("x^2 - 1/1000000", "(0, 1)");
        match interval_prove(&c, &[], &Precision::default(), 40).0 {
            Verdict::Disproved { witness } => assert!(witness < rat(1, 1000)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn undeclared_tangency_is_unknown() {
        let c = claim("(x - 1/3)^2", "(0, 1)");
        assert!(matches!(interval_prove(&c, &[], &Precision::default(), 30).0, Verdict::Unknown { .. }));
    }

    #[test]
    fn pole_at_open_end_gets_probes() {
        let c = claim("1/x - 1", "(0, 1/2)");
        let (v, cert) = interval_prove(&c, &[], &Precision::default(), 40);
        assert_eq!(v, Verdict::Proved);
        let Proof::Interval(p) = cert.unwrap().proof else { panic!() };
        assert_eq!(p.boundary.len(), 1);
        assert_eq!(p.boundary[0].sliver, rat(1, 1000));
    }

    #[test]
    fn rising_boundary_zero() {
        let c = claim("x/sqrt(4-x^2) - x^2/2 + x", "[0, 1]");
        let z = DeclaredZero { point: QuadExt::rational(rat(0, 1)), kind: ZeroKind::Boundary };
        let (v, cert) = interval_prove(&c, &[z], &Precision::default(), 40);
        assert_eq!(v, Verdict::Proved);
        let Proof::Interval(p) = cert.unwrap().proof else { panic!() };
        assert_eq!(p.neighborhoods[0].kind, NeighborhoodKind::Rising);
    }
}
