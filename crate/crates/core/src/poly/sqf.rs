use serde::{Deserialize, Serialize};

use super::sturm::rational_roots;
use super::UniPoly;
use crate::numerics::{Rational, Scalar};

/// `p = unit · Π factor^multiplicity` with monic, square-free, pairwise
/// coprime factors listed by increasing multiplicity.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SqfDecomp<F> {
    pub unit: F,
    pub factors: Vec<(UniPoly<F>, u32)>,
}

impl<F: Scalar> SqfDecomp<F> {
    pub fn reconstruct(&self) -> UniPoly<F> {
        let mut acc = UniPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    pub fn multiplicity_of(&self, factor: &UniPoly<F>) -> Option<u32> {
        self.factors.iter().find(|(f, _)| f == factor).map(|(_, m)| *m)
    }
}

/// Peels linear factors `x - r` with rational `r` off every factor that has
/// rational coefficients.
fn split_rational_roots<F: Scalar>(factors: Vec<(UniPoly<F>, u32)>) -> Vec<(UniPoly<F>, u32)> {
    let mut out = Vec::new();
    for (f, m) in factors {
        let rat_coeffs: Option<Vec<Rational>> =
            f.coeffs().iter().map(|c| c.to_quad().as_rational().cloned()).collect();
        let Some(rc) = rat_coeffs else {
            out.push((f, m));
            continue;
        };
        if f.degree() == Some(1) {
            out.push((f, m));
            continue;
        }
        let mut rest = f;
        for r in rational_roots(&UniPoly::new(rc)) {
            let lin = UniPoly::new(vec![F::from_rational(-r), F::one()]);
            rest = rest.exact_div(&lin).expect("rational root divides");
            out.push((lin, m));
        }
        if rest.degree().unwrap_or(0) > 0 {
            out.push((rest, m));
        }
    }
    out
}

/// Yun's algorithm, followed by splitting off rational linear factors.
/// Panics on the zero polynomial.
pub fn square_free_decompose<F: Scalar>(p: &UniPoly<F>) -> SqfDecomp<F> {
    assert!(!p.is_zero(), "square-free decomposition of zero");
    let unit = p.lc();
    let mut factors = Vec::new();
    if p.degree() == Some(0) {
        return SqfDecomp { unit, factors };
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.exact_div(&a0).expect("gcd divides");
    let mut c = dp.exact_div(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut i = 1u32;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            factors.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    SqfDecomp { unit, factors: split_rational_roots(factors) }
}
