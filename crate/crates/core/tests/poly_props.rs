mod common;

use common::{ordered_pair, small_rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangent_core::expr::{Bound, Domain};
use tangent_core::numerics::{rat, QuadExt, Rational, Sign};
use tangent_core::poly::{nonneg_on, square_free_decompose, sturm_count, NonnegVerdict};
use tangent_core::RatPoly;

/// A polynomial given by its factors, so its real roots are known.
#[derive(Debug, Clone)]
struct Built {
    scale: Rational,
    roots: Vec<(Rational, u32)>,
    /// `x² + s` with `s > 0`
    positive_quadratics: Vec<Rational>,
    /// `x² − d`, roots `±√d`
    surds: Vec<u64>,
}

impl Built {
    fn poly(&self) -> RatPoly {
        let mut p = RatPoly::constant(self.scale.clone());
        for (r, m) in &self.roots {
            p = p.mul(&RatPoly::from_rationals(&[-r.clone(), rat(1, 1)]).pow(*m));
        }
        for s in &self.positive_quadratics {
            p = p.mul(&RatPoly::from_rationals(&[s.clone(), rat(0, 1), rat(1, 1)]));
        }
        for d in &self.surds {
            p = p.mul(&RatPoly::from_rationals(&[rat(-(*d as i64), 1), rat(0, 1), rat(1, 1)]));
        }
        p
    }
}

fn built() -> impl Strategy<Value = Built> {
    (
        small_rational().prop_filter("nonzero", |s| *s != Rational::from(0)),
        prop::collection::vec((small_rational(), 1u32..=3), 0..=4),
        prop::collection::vec((1i64..=20, 1i64..=5).prop_map(|(n, d)| rat(n, d)), 0..=1),
        prop::collection::vec(prop::sample::select(vec![2u64, 3, 5, 7]), 0..=1),
    )
        .prop_map(|(scale, mut roots, positive_quadratics, surds)| {
            roots.sort_by(|a, b| a.0.cmp(&b.0));
            roots.dedup_by(|a, b| a.0 == b.0);
            let mut b = Built { scale, roots, positive_quadratics, surds };
            // keep the degree at most 8
            while b.poly().degree().unwrap_or(0) > 8 {
                b.roots.pop();
            }
            b
        })
}

#[derive(Debug, Clone)]
struct Dom {
    lo: Option<(Rational, bool)>,
    hi: Option<(Rational, bool)>,
}

impl Dom {
    fn domain(&self) -> Domain {
        let b = |e: &Option<(Rational, bool)>, inf: Bound| match e {
            Some((v, _)) => Bound::Finite(QuadExt::rational(v.clone())),
            None => inf,
        };
        Domain::new(
            b(&self.lo, Bound::NegInf),
            self.lo.as_ref().is_none_or(|e| e.1),
            b(&self.hi, Bound::PosInf),
            self.hi.as_ref().is_none_or(|e| e.1),
        )
        .unwrap()
    }

    fn above_lo(&self, x: &Rational) -> bool {
        match &self.lo {
            None => true,
            Some((v, open)) => x > v || (!open && x == v),
        }
    }

    fn below_hi(&self, x: &Rational) -> bool {
        match &self.hi {
            None => true,
            Some((v, open)) => x < v || (!open && x == v),
        }
    }

    /// Whether `s·√d` (s = ±1) lies in the domain, by comparing squares.
    fn holds_surd(&self, d: u64, s: i64) -> bool {
        let dd = Rational::from(d as i64);
        // v < s·√d
        let below = |v: &Rational| if s > 0 { v.is_negative() || v * v < dd } else { v.is_negative() && v * v > dd };
        let above = |v: &Rational| if s > 0 { !v.is_negative() && v * v > dd } else { !v.is_positive() && v * v < dd || v.is_positive() };
        self.lo.as_ref().is_none_or(|(v, _)| below(v)) && self.hi.as_ref().is_none_or(|(v, _)| above(v))
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        let (lo, hi) = match (&self.lo, &self.hi) {
            (Some((a, _)), Some((b, _))) => (a.clone(), b.clone()),
            (Some((a, _)), None) => (a.clone(), a + &rat(50, 1)),
            (None, Some((b, _))) => (b - &rat(50, 1), b.clone()),
            (None, None) => (rat(-50, 1), rat(50, 1)),
        };
        loop {
            let t = rat(rng.gen_range(0..=1_000_000), 1_000_000);
            let x = &lo + &(&(&hi - &lo) * &t);
            if self.above_lo(&x) && self.below_hi(&x) {
                return x;
            }
        }
    }
}

fn dom() -> impl Strategy<Value = Dom> {
    (ordered_pair(), any::<bool>(), any::<bool>(), 0u8..6).prop_map(|((a, b), oa, ob, inf)| Dom {
        lo: (inf != 1 && inf != 3).then_some((a, oa)),
        hi: (inf != 2 && inf != 3).then_some((b, ob)),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sturm_count_matches_known_roots(b in built(), d in dom()) {
        let p = b.poly();
        prop_assume!(!p.is_zero());
        let mut want = b.roots.iter().filter(|(r, _)| d.above_lo(r) && d.below_hi(r)).count();
        for s in &b.surds {
            want += usize::from(d.holds_surd(*s, 1)) + usize::from(d.holds_surd(*s, -1));
        }
        prop_assert_eq!(sturm_count(&p, &d.domain()).unwrap(), want, "{} on {}", p.display_in("x"), d.domain());
    }

    #[test]
    fn decomposition_reconstructs(b in built()) {
        let p = b.poly();
        let sqf = square_free_decompose(&p);
        prop_assert_eq!(sqf.reconstruct(), p.clone());
        for (i, (f, _)) in sqf.factors.iter().enumerate() {
            prop_assert_eq!(f.gcd(&f.derivative()).degree(), Some(0), "{} not square-free", f.display_in("x"));
            for (g, _) in &sqf.factors[i + 1..] {
                prop_assert_eq!(f.gcd(g).degree(), Some(0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn nonneg_verdicts_hold_pointwise(b in built(), d in dom(), seed in any::<u64>()) {
        let p = b.poly();
        let cert = nonneg_on(&p, &d.domain()).unwrap();
        match &cert.verdict {
            NonnegVerdict::Nonneg => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..10_000 {
                    let x = d.sample(&mut rng);
                    prop_assert!(p.sign_at(&x) != Sign::Negative, "{} < 0 at {x}", p.display_in("x"));
                }
            }
            NonnegVerdict::FailsAt(w) => {
                prop_assert!(d.above_lo(w) && d.below_hi(w));
                prop_assert_eq!(p.sign_at(w), Sign::Negative);
            }
        }
    }
}
