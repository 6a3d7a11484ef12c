use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::numerics::Rational;

/// Sparse polynomial in up to four variables with rational coefficients.
/// Zero coefficients are never stored, so equality is identity of the
/// expanded canonical forms.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<[u32; 4], Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = MultiPoly::zero();
        p.insert([0; 4], c);
        p
    }

    /// The `i`-th variable (`0..4`).
    pub fn var(i: usize) -> Self {
        assert!(i < 4, "at most four variables");
        let mut e = [0; 4];
        e[i] = 1;
        let mut p = MultiPoly::zero();
        p.insert(e, Rational::from(1));
        p
    }

    fn insert(&mut self, e: [u32; 4], c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        self.add(&o.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, k: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            out.insert(*e, c * k);
        }
        out
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.insert(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(Rational::from(1));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    t *= &point[i].pow(*k as i32);
                }
            }
            acc += &t;
        }
        acc
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ['a', 'b', 'c', 'd'];
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| **k > 0)
                    .map(|(i, k)| if *k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// True iff both sides expand to the same canonical polynomial.
pub fn expand_equal(lhs: &MultiPoly, rhs: &MultiPoly) -> bool {
    lhs == rhs
}
