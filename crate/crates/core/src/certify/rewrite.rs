use num_integer::Integer;
use num_traits::ToPrimitive;

use super::radical::{decompose, sign_at, DecompError, RatFun};
use super::{Claim, Orientation, RewriteError, RewriteStep};
use crate::expr::{build, Bound, Domain, Expr};
use crate::numerics::{Rational, Sign};
use crate::poly::{poly_to_expr, to_rational_function};

/// A rewritten claim together with the side conditions that make the step
/// an equivalence.
#[derive(Clone, Debug)]
pub struct Rewrite {
    pub step: RewriteStep,
    pub child: Claim,
    pub side: Vec<Claim>,
}

/// `h = N/M` ⇒ `±N ≥ 0` given `±M > 0` on the domain.
pub fn rewrite_clear_denominators(claim: &Claim) -> Result<Rewrite, RewriteError> {
    let (n, d) = to_rational_function::<Rational>(&claim.h).ok_or(RewriteError::NotRationalStructure)?;
    let f = RatFun::new(n, d).ok_or(RewriteError::NotRationalStructure)?;
    let negated = f.den.sign_at(&claim.domain.interior_point()) == Sign::Negative;
    // the smallest integer scaling that clears every coefficient denominator
    let mut lcm = num_bigint::BigInt::from(1);
    for c in f.num.coeffs().iter().chain(f.den.coeffs()) {
        lcm = lcm.lcm(c.denom());
    }
    let s = Rational::from_integer(if negated { -lcm } else { lcm });
    let (num, den) = (f.num.scale(&s), f.den.scale(&s));
    let multiplier = poly_to_expr(&den);
    Ok(Rewrite {
        step: RewriteStep::ClearDenominator { multiplier: multiplier.clone(), negated },
        child: Claim { h: poly_to_expr(&num), ..claim.clone() },
        side: vec![Claim::positive(multiplier, claim.domain.clone())],
    })
}

fn decomp_err(e: DecompError) -> RewriteError {
    match e {
        DecompError::TwoRadicals | DecompError::OtherRoot => RewriteError::NoSingleRadicalDecomposition,
        DecompError::Singular => RewriteError::NotRationalStructure,
    }
}

/// Writes `h = P + Q·√R` and squares, choosing the orientation from the
/// sign of `Q` at an interior point.
pub fn rewrite_move_and_square(claim: &Claim) -> Result<Rewrite, RewriteError> {
    let d = decompose(&claim.h).map_err(decomp_err)?;
    let x = claim.domain.interior_point();
    let o = match sign_at(&d.q, &x) {
        Some(Sign::Negative) => Orientation::RadicalBelow,
        _ => Orientation::RadicalAbove,
    };
    move_and_square_oriented(claim, o)
}

/// `A ≥ B√R ⇔ A² − B²R ≥ 0` or `B√R ≥ A ⇔ B²R − A² ≥ 0`, each given
/// `A, B, R ≥ 0` on the domain.
pub(crate) fn move_and_square_oriented(claim: &Claim, o: Orientation) -> Result<Rewrite, RewriteError> {
    let d = decompose(&claim.h).map_err(decomp_err)?;
    let r = match d.r {
        Some(r) if !d.q.is_zero() => r,
        _ => return Err(RewriteError::NoSingleRadicalDecomposition),
    };
    let (a, b) = match o {
        Orientation::RadicalBelow => (d.p.clone(), d.q.neg()),
        Orientation::RadicalAbove => (d.p.neg(), d.q.clone()),
    };
    let sq = a.mul(&a).sub(&b.mul(&b).mul(&r));
    let child = match o {
        Orientation::RadicalBelow => sq,
        Orientation::RadicalAbove => sq.neg(),
    };
    let (ae, be, re) = (a.to_expr(), b.to_expr(), r.to_expr());
    let dom = &claim.domain;
    Ok(Rewrite {
        step: RewriteStep::MoveAndSquare { a: ae.clone(), b: be.clone(), r: re.clone(), orientation: o },
        child: Claim { h: child.to_expr(), ..claim.clone() },
        side: vec![Claim::nonneg(ae, dom.clone()), Claim::nonneg(be, dom.clone()), Claim::nonneg(re, dom.clone())],
    })
}

/// Least `q` making every exponent applied directly to `x` an integer.
pub(crate) fn var_root_index(e: &Expr) -> u32 {
    let mut q = 1u32;
    e.visit(&mut |n| {
        if let Expr::Pow(base, r) = n {
            if matches!(**base, Expr::Var) {
                let d = r.denom().to_u32().unwrap_or(1);
                q = q.lcm(&d);
            }
        }
    });
    q
}

fn substitute(e: &Expr, q: u32) -> Result<Expr, RewriteError> {
    let qr = Rational::from(q as i64);
    Ok(match e {
        Expr::Const(_) => e.clone(),
        Expr::Var => build::pow(Expr::x(), qr),
        Expr::Neg(a) => build::neg(substitute(a, q)?),
        Expr::Add(a, b) => build::add(substitute(a, q)?, substitute(b, q)?),
        Expr::Sub(a, b) => build::sub(substitute(a, q)?, substitute(b, q)?),
        Expr::Mul(a, b) => build::mul(substitute(a, q)?, substitute(b, q)?),
        Expr::Div(a, b) => build::div(substitute(a, q)?, substitute(b, q)?),
        Expr::Pow(a, r) => {
            if matches!(**a, Expr::Var) {
                let s = r * &qr;
                if !s.is_integer() {
                    return Err(RewriteError::ExponentNotClearedByQ(q));
                }
                build::pow(Expr::x(), s)
            } else {
                if !r.is_integer() && r.denom() != &2.into() {
                    return Err(RewriteError::ExponentNotClearedByQ(q));
                }
                build::pow(substitute(a, q)?, r.clone())
            }
        }
    })
}

fn image_bound(b: &Bound, q: u32) -> Result<Bound, RewriteError> {
    Ok(match b {
        Bound::NegInf if q % 2 == 0 => {
            return Err(RewriteError::EndpointNotRepresentable("even root of -inf".into()));
        }
        Bound::Finite(v) => {
            if q % 2 == 0 && v.sign() == Sign::Negative {
                return Err(RewriteError::EndpointNotRepresentable(format!("even root of {v}")));
            }
            let root = if v.sign() == Sign::Negative { v.abs().exact_root(q).map(|r| -r) } else { v.exact_root(q) };
            Bound::Finite(root.ok_or_else(|| RewriteError::EndpointNotRepresentable(format!("({v})^(1/{q})")))?)
        }
        other => other.clone(),
    })
}

/// `x = t^q` with the domain mapped through the increasing `q`-th root.
pub fn rewrite_substitute_root(claim: &Claim, q: u32) -> Result<Rewrite, RewriteError> {
    if ![2, 3, 6].contains(&q) {
        return Err(RewriteError::ExponentNotClearedByQ(q));
    }
    let h = substitute(&claim.h, q)?;
    let d = &claim.domain;
    let image = Domain::new(image_bound(&d.lo, q)?, d.lo_open, image_bound(&d.hi, q)?, d.hi_open)
        .ok_or_else(|| RewriteError::EndpointNotRepresentable("empty image".into()))?;
    Ok(Rewrite {
        step: RewriteStep::SubstituteRoot { q, image: image.clone() },
        child: Claim { h, domain: image, strict_interior_zeros_allowed: claim.strict_interior_zeros_allowed },
        side: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::numerics::{rat, QuadExt};
    use crate::poly::{to_polynomial, UniPoly};

    fn claim(h: &str, d: &str) -> Claim {
        Claim::nonneg(parse(h).unwrap(), d.parse().unwrap())
    }

    fn poly_of(c: &Claim) -> UniPoly<Rational> {
        to_polynomial::<Rational>(&c.h).unwrap()
    }

    #[test]
    fn clearing_denominators() {
        let rw = rewrite_clear_denominators(&claim("x/(4-x) + (4-x)/x - (62-32*x)/9", "(0, 4)")).unwrap();
        let p = poly_of(&rw.child);
        let target = UniPoly::from_rationals(&[rat(-9, 1), rat(20, 1), rat(-13, 1), rat(2, 1)]);
        assert_eq!(p, target.scale(&rat(-16, 1)));
        let RewriteStep::ClearDenominator { multiplier, negated } = &rw.step else { panic!() };
        assert!(*negated);
        assert_eq!(to_polynomial::<Rational>(multiplier).unwrap(), UniPoly::from_rationals(&[rat(0, 1), rat(36, 1), rat(-9, 1)]));
        let rw = rewrite_clear_denominators(&claim("(x-1)/x", "(0, inf)")).unwrap();
        assert_eq!(poly_of(&rw.child), UniPoly::from_rationals(&[rat(-1, 1), rat(1, 1)]));
        assert_eq!(rw.step, RewriteStep::ClearDenominator { multiplier: Expr::x(), negated: false });
        assert!(rewrite_clear_denominators(&claim("sqrt(x)", "(0, 1)")).is_err());
    }

    #[test]
    fn squaring_first_example() {
        let rw = rewrite_move_and_square(&claim("(1-x)/x - 2*sqrt(2*(1-x)/x) + 2", "(0, 1)")).unwrap();
        let RewriteStep::MoveAndSquare { orientation, .. } = &rw.step else { panic!() };
        assert_eq!(*orientation, Orientation::RadicalBelow);
        let next = rewrite_clear_denominators(&rw.child).unwrap();
        let p = poly_of(&next.child);
        let target = UniPoly::from_rationals(&[rat(1, 1), rat(-6, 1), rat(9, 1)]);
        assert_eq!(p.monic(), target.monic());
        assert!(p.lc().is_positive());
    }

    #[test]
    fn substitution() {
        let rw = rewrite_substitute_root(&claim("x^2 - x^(4/3) - x^(2/3) + 1", "(0, 3*sqrt3)"), 3).unwrap();
        assert_eq!(rw.child.domain.hi, Bound::Finite(QuadExt::sqrt_int(3)));
        assert_eq!(
            poly_of(&rw.child),
            UniPoly::from_rationals(&[rat(1, 1), rat(0, 1), rat(-1, 1), rat(0, 1), rat(-1, 1), rat(0, 1), rat(1, 1)])
        );
        assert_eq!(var_root_index(&parse("x + x^(1/2) - x^(2/3)").unwrap()), 6);
        assert_eq!(
            rewrite_substitute_root(&claim("x^(1/3)", "(0, 1)"), 2).unwrap_err(),
            RewriteError::ExponentNotClearedByQ(2)
        );
        assert!(matches!(
            rewrite_substitute_root(&claim("x^(1/3)", "(0, 2)"), 3),
            Err(RewriteError::EndpointNotRepresentable(_))
        ));
    }
}
