//! One test per acceptance criterion. Each prints a `criterion N: PASS|FAIL`
//! line to stderr before asserting, so the summary survives output capture.

mod common;

use std::cmp::Ordering;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use common::{corpus_file, examples, load, tamper};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tangent_cli::{build_claims, run, Problem};
use tangent_core::certify::{Certificate, PolyLeaf, Proof, Strategy};
use tangent_core::compose::{check_optimality, Constraint, Direction};
use tangent_core::expr::{build, diff, eval_exact, eval_interval, parse, Bound, Domain, Expr};
use tangent_core::numerics::{rat, Precision, QuadExt, RatInterval, Rational, Sign};
use tangent_core::poly::sturm_count;
use tangent_core::surrogate::SurrogateFamily;
use tangent_core::RatPoly;

fn verdict(n: u32, failures: &[String], detail: &str) {
    let line = if failures.is_empty() {
        format!("criterion {n}: PASS {detail}")
    } else {
        format!("criterion {n}: FAIL {detail}; {}", failures.join("; "))
    };
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(failures.is_empty(), "{line}");
}

fn q(n: i64, d: i64) -> QuadExt {
    QuadExt::rational(rat(n, d))
}

/// `a + b·√2`
fn s2(a: Rational, b: Rational) -> QuadExt {
    QuadExt::new(a, b, 2)
}

fn same(a: &QuadExt, b: &QuadExt) -> bool {
    (a.clone() - b.clone()).sign() == Sign::Zero
}

fn constant(text: &str) -> QuadExt {
    eval_exact(&parse(text).unwrap(), &q(0, 1)).unwrap()
}

fn tol(exp: u32) -> Rational {
    rat(1, 10i64.pow(exp))
}

enum Want {
    Line(QuadExt, QuadExt),
    Affine(QuadExt, QuadExt, Rational),
    Monomial(QuadExt, Rational),
}

fn family_is(g: &SurrogateFamily, w: &Want) -> bool {
    match (g, w) {
        (SurrogateFamily::Line { alpha, beta }, Want::Line(a, b)) => same(alpha, a) && same(beta, b),
        (SurrogateFamily::AffineInC { k, m, c }, Want::Affine(wk, wm, p)) => same(k, wk) && same(m, wm) && c.exponent() == p,
        (SurrogateFamily::Monomial { k, m }, Want::Monomial(wk, wm)) => same(k, wk) && m == wm,
        _ => false,
    }
}

#[test]
fn criterion_1_surrogates_exact() {
    let wants = [
        ("ex01", Want::Line(q(-2, 1), q(0, 1))),
        ("ex02", Want::Line(q(-1, 4), q(3, 4))),
        ("ex03", Want::Line(q(0, 1), q(2, 3))),
        ("ex04", Want::Affine(s2(rat(0, 1), rat(-1, 1)), s2(rat(0, 1), rat(1, 4)), rat(2, 1))),
        ("ex05", Want::Monomial(q(3, 2), rat(1, 2))),
        ("ex07", Want::Affine(q(1, 1), q(2, 1), rat(3, 1))),
        ("ex08", Want::Line(q(62, 9), q(-32, 9))),
        ("ex09", Want::Affine(q(1, 1), q(-1, 1), rat(2, 3))),
        ("ex10", Want::Affine(q(1, 2), q(0, 1), rat(2, 1))),
    ];
    let problems: Vec<Problem> = wants.iter().map(|(n, _)| load(&format!("{n}.ineq"))).collect();
    let mut failures = Vec::new();
    let t0 = Instant::now();
    for ((name, want), p) in wants.iter().zip(&problems) {
        match build_claims(p) {
            Ok(c) => {
                for g in &c.surrogates {
                    if !family_is(&g.family, want) {
                        failures.push(format!("{name}: got {}", g.family));
                    }
                }
                if *name == "ex02" && !c.surrogates[0].tangency_points.contains(&q(1, 2)) {
                    failures.push("ex02: x0 is not 1/2".into());
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let elapsed = t0.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(1, &failures, &format!("9 surrogates exact in {} ms", elapsed.as_millis()));
}

fn poly(c: &[i64]) -> RatPoly {
    RatPoly::from_rationals(&c.iter().map(|v| rat(*v, 1)).collect::<Vec<_>>())
}

fn product(fs: &[RatPoly]) -> RatPoly {
    fs.iter().fold(poly(&[1]), |a, f| a.mul(f))
}

/// The polynomial a certificate's main branch ends in.
fn main_leaf(c: &Certificate) -> Option<RatPoly> {
    match &c.proof {
        Proof::PolyNonneg(PolyLeaf::Rational(n)) => Some(n.poly.clone()),
        Proof::Rewrite { main, .. } => main_leaf(main),
        _ => None,
    }
}

/// `leaf = c·xʲ·want` with `c > 0`, by exact division.
fn divides_up_to_monomial(leaf: &RatPoly, want: &RatPoly) -> bool {
    let Ok((quot, rem)) = leaf.divrem(want) else { return false };
    let nz: Vec<&Rational> = quot.coeffs().iter().filter(|c| **c != Rational::from(0)).collect();
    rem.is_zero() && nz.len() == 1 && nz[0].is_positive()
}

#[test]
fn criterion_2_certificate_factorizations() {
    let sq = |p: RatPoly| p.mul(&p);
    let x_minus_1 = poly(&[-1, 1]);
    let wants: Vec<(&str, Vec<RatPoly>)> = vec![
        ("ex01", vec![sq(poly(&[-1, 3]))]),
        ("ex02", vec![sq(RatPoly::from_rationals(&[rat(-1, 2), rat(1, 1)])).mul(&poly(&[1, 1]))]),
        ("ex03", vec![product(&[poly(&[0, 1]), sq(poly(&[-3, 2]))])]),
        ("ex05", vec![product(&[sq(x_minus_1.clone()), poly(&[2, 1, 2])])]),
        (
            "ex07",
            vec![
                product(&[sq(x_minus_1.clone()), poly(&[1, 1, 1])]),
                product(&[sq(x_minus_1.clone()), poly(&[1, 1, 1]), poly(&[1, 1])]),
            ],
        ),
        ("ex08", vec![product(&[sq(x_minus_1.clone()), poly(&[9, -2])])]),
        ("ex09", vec![product(&[sq(poly(&[-1, 0, 1])), poly(&[1, 0, 1])])]),
        ("ex10", vec![product(&[poly(&[0, 0, 1]), sq(poly(&[-2, 0, 1]))])]),
    ];
    let mut failures = Vec::new();
    let mut matched = 0;
    let t0 = Instant::now();
    for (name, expected) in &wants {
        let p = load(&format!("{name}.ineq"));
        let r = run(&p, Some(Strategy::Symbolic));
        let bundle = r.bundle();
        let leaves: Vec<RatPoly> = bundle.pointwise.iter().chain(&bundle.chain).flatten().filter_map(main_leaf).collect();
        if leaves.is_empty() {
            failures.push(format!("{name}: no polynomial leaf"));
        }
        for want in expected {
            if leaves.iter().any(|l| divides_up_to_monomial(l, want)) {
                matched += 1;
            } else {
                failures.push(format!("{name}: no leaf is a positive multiple of {}", want.display_in("x")));
            }
        }
    }
    let elapsed = t0.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(2, &failures, &format!("{matched}/9 factorizations matched in {} ms", elapsed.as_millis()));
}

/// Any node of the certificate is an interval proof.
fn uses_intervals(c: &Certificate) -> bool {
    match &c.proof {
        Proof::Interval(_) => true,
        Proof::Rewrite { main, side, .. } => uses_intervals(main) || side.iter().any(uses_intervals),
        Proof::PolyNonneg(_) => false,
    }
}

/// Minimum of `3a/(1−a) + 4b/(1−b) + 5c/(1−c)` on the simplex grid of step
/// 10⁻³.
fn ex06_grid_min() -> f64 {
    let f = |w: f64, x: f64| w * x / (1.0 - x);
    let mut best = f64::INFINITY;
    for i in 1..1000 {
        for j in 1..(1000 - i) {
            let (a, b) = (i as f64 / 1000.0, j as f64 / 1000.0);
            let c = 1.0 - a - b;
            best = best.min(f(3.0, a) + f(4.0, b) + f(5.0, c));
        }
    }
    best
}

#[test]
fn criterion_3_bounds() {
    let mut failures = Vec::new();
    let exact = [
        ("ex01", q(-6, 1)),
        ("ex02", q(3, 4)),
        ("ex03", q(2, 1)),
        ("ex04", q(0, 1)),
        ("ex05", q(27, 8)),
        ("ex08", q(40, 3)),
        ("ex09", q(0, 1)),
        ("ex10", q(2, 1)),
    ];
    for (name, want) in &exact {
        let p = load(&format!("{name}.ineq"));
        let r = run(&p, None);
        if r.report.verdict != "proved" {
            failures.push(format!("{name}: {}", r.report.reason));
        }
        match r.composed.as_ref().and_then(|c| c.bound.exact.as_ref()) {
            Some(b) if same(b, want) => {}
            other => failures.push(format!("{name}: bound {other:?}")),
        }
        match *name {
            "ex02" => {
                // k = 3/4 is attained at Σx = 2 > 0, so any larger k fails there
                let spec = p.spec();
                let w = vec![q(1, 2); 4];
                let at = check_optimality(&spec, &w, want).unwrap();
                let above = check_optimality(&spec, &w, &(want.clone() + q(1, 1_000_000))).unwrap();
                if !at.equality || above.margin.sign() != Sign::Negative {
                    failures.push("ex02: k not maximal".into());
                }
            }
            "ex03" => {
                if p.direction != Direction::Gt || r.composed.as_ref().and_then(|c| c.strict) != Some(true) {
                    failures.push("ex03: not strict".into());
                }
            }
            "ex04" => {
                let b = r.bundle();
                if !b.pointwise.iter().flatten().all(uses_intervals) {
                    failures.push("ex04: not via the interval backend".into());
                }
            }
            _ => {}
        }
    }

    let p = load("ex06.ineq");
    let r = run(&p, None);
    let prec = Precision::from_bits(300);
    let closed = eval_interval(&parse("(sqrt3 + 2 + sqrt5)^2/2 - 12").unwrap(), &RatInterval::point(rat(0, 1)), &prec).unwrap();
    let grid = ex06_grid_min();
    match &r.composed {
        Some(c) => {
            let e = &c.bound.enclosure;
            let overlap = e.lo() <= closed.hi() && closed.lo() <= e.hi();
            if r.report.verdict != "proved" || !overlap || e.width() >= tol(9) {
                failures.push(format!("ex06: enclosure {:?} vs {}", e, closed.midpoint().to_decimal(12)));
            }
            if (grid - closed.midpoint().to_f64()).abs() > 1e-4 || (closed.midpoint().to_f64() - 5.809).abs() > 1e-3 {
                failures.push(format!("ex06: grid minimum {grid}"));
            }
        }
        None => failures.push("ex06: no composed bound".into()),
    }
    verdict(3, &failures, &format!("8 exact bounds; ex06 {} (grid {grid:.6})", closed.midpoint().to_decimal(9)));
}

/// `Σ f(xᵢ)`, or `Σ f(xᵢ) − offset − k·Σ xᵢ` when unconstrained, exactly.
fn objective(p: &Problem, xs: &[QuadExt], k: &QuadExt) -> QuadExt {
    let spec = p.spec();
    let vals: Vec<QuadExt> = xs.iter().enumerate().map(|(i, x)| eval_exact(spec.function(i), x).unwrap()).collect();
    let zero = q(0, 1);
    match &p.constraint {
        Constraint::SumOfC { .. } => vals.into_iter().fold(zero, |a, v| a + v),
        Constraint::ProductAtLeast { .. } | Constraint::PairSum { .. } => vals.into_iter().fold(q(1, 1), |a, v| a * v),
        Constraint::Free { offset } => {
            let s = vals.into_iter().fold(zero.clone(), |a, v| a + v);
            let sx = xs.iter().fold(zero, |a, v| a + v.clone());
            s - QuadExt::rational(offset.clone()) - k.clone() * sx
        }
    }
}

#[test]
fn criterion_4_equality_and_strictness() {
    let mut failures = Vec::new();
    let r2 = constant("sqrt2");
    let wants = [
        ("ex01", vec![q(1, 3); 3], q(-6, 1)),
        ("ex02", vec![q(1, 2); 4], q(0, 1)),
        ("ex08", vec![q(1, 1); 4], q(40, 3)),
        ("ex10", vec![r2.clone(), r2.clone(), q(0, 1), q(0, 1)], q(2, 1)),
    ];
    for (name, w, value) in &wants {
        let p = load(&format!("{name}.ineq"));
        let r = run(&p, None);
        let Some(s) = &r.strictness else {
            failures.push(format!("{name}: no strictness analysis"));
            continue;
        };
        let mut sorted_w = w.clone();
        sorted_w.sort_by(|a, b| b.cmp_exact(a));
        let found = s.witnesses.iter().any(|v| {
            let mut v = v.clone();
            v.sort_by(|a, b| b.cmp_exact(a));
            v.len() == sorted_w.len() && v.iter().zip(&sorted_w).all(|(a, b)| same(a, b))
        });
        let k = q(3, 4);
        if s.strict || !found {
            failures.push(format!("{name}: witnesses {:?}", s.witnesses));
        }
        if !same(&objective(&p, w, &k), value) {
            failures.push(format!("{name}: objective at witness is {}", objective(&p, w, &k)));
        }
    }

    // ex03: the pointwise zero set is {3/2}; no assignment from it meets a+b+c=3
    let p = load("ex03.ineq");
    let r = run(&p, None);
    let claims = build_claims(&p).unwrap();
    let h = &claims.pointwise[0].h;
    let zs = &r.zero_sets[0];
    let zeros_ok = zs.is_exact()
        && zs.exact.iter().all(|z| eval_exact(h, z).is_ok_and(|v| v.sign() == Sign::Zero))
        && zs.exact == vec![q(3, 2)];
    // x(2x−3)² has exactly one root in (0, 3)
    let leaf = product(&[poly(&[0, 1]), poly(&[-3, 2]), poly(&[-3, 2])]);
    let one_root = sturm_count(&leaf, &Domain::open(rat(0, 1), rat(3, 1))).ok() == Some(1);
    let mut meets = 0;
    let n = zs.exact.len();
    for i in 0..n.pow(3) {
        let pick = [i % n, (i / n) % n, i / (n * n)];
        let s = pick.iter().fold(q(0, 1), |a, j| a + zs.exact[*j].clone());
        if same(&s, &q(3, 1)) {
            meets += 1;
        }
    }
    let strict = r.strictness.as_ref().is_some_and(|s| s.strict) && r.report.strict == Some(true);
    if !(zeros_ok && one_root && meets == 0 && strict) {
        failures.push(format!("ex03: zeros {:?}, {meets} assignments meet the constraint", zs.exact));
    }
    verdict(4, &failures, "4 exact equality cases; ex03 strict by enumeration");
}

/// The point where `p` is claimed to fail, checked from scratch.
fn refutes(p: &Problem, w: &[String]) -> Result<(), String> {
    let xs: Vec<QuadExt> = w.iter().map(|s| constant(s)).collect();
    if xs.len() != p.vars || !xs.iter().all(|x| p.domain.contains(x)) {
        return Err(format!("{w:?} outside the domain"));
    }
    let feasible = match &p.constraint {
        Constraint::SumOfC { c, total } => {
            let s = xs.iter().fold(q(0, 1), |a, x| a + c.eval(x).unwrap());
            same(&s, &QuadExt::rational(total.clone()))
        }
        Constraint::ProductAtLeast { min } => {
            xs.iter().fold(q(1, 1), |a, x| a * x.clone()).cmp_exact(&QuadExt::rational(min.clone())) != Ordering::Less
        }
        Constraint::PairSum { total } => {
            let s = (0..3).fold(q(0, 1), |a, i| a + xs[i].clone() * xs[(i + 1) % 3].clone());
            same(&s, &QuadExt::rational(total.clone()))
        }
        Constraint::Free { .. } => true,
    };
    if !feasible {
        return Err(format!("{w:?} violates the constraint"));
    }
    let bound = constant(&tangent_core::expr::print(&p.bound));
    let value = objective(p, &xs, &bound);
    let rhs = if matches!(p.constraint, Constraint::Free { .. }) { q(0, 1) } else { bound };
    let gap = (value - rhs).sign();
    match (gap, p.direction) {
        (Sign::Negative, _) | (Sign::Zero, Direction::Gt) => Ok(()),
        _ => Err(format!("objective at {w:?} does not violate the bound")),
    }
}

#[test]
fn criterion_5_perturbed_variants_never_prove() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    let (mut disproved, mut total) = (0, 0);
    for (name, base) in examples() {
        for _ in 0..20 {
            let delta = rat(rng.gen_range(1..=100), 1000);
            let mut p = base.clone();
            p.bound = build::add(p.bound.clone(), Expr::constant(QuadExt::rational(delta.clone())));
            let r = run(&p, None);
            total += 1;
            match r.report.verdict.as_str() {
                "proved" => failures.push(format!("{name} + {delta} proved")),
                "disproved" => {
                    disproved += 1;
                    match &r.report.counterexample {
                        Some(w) => {
                            if let Err(e) = refutes(&p, w) {
                                failures.push(format!("{name} + {delta}: {e}"));
                            }
                        }
                        None => failures.push(format!("{name} + {delta}: disproved without a witness")),
                    }
                }
                _ => {}
            }
        }
    }
    verdict(5, &failures, &format!("{total} variants, 0 proved, {disproved} disproved with checked witnesses"));
}

/// Random expression text over the operations the parser accepts.
fn expr_text(rng: &mut ChaCha8Rng, depth: u32, radicals: bool) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        let mut leaves = vec!["x", "1", "2", "3", "5", "1/3", "3/2", "x"];
        if radicals {
            leaves.extend(["x^(1/2)", "x^(1/3)", "x^(2/3)", "x^(3/2)", "x^(-1/6)", "sqrt2"]);
        }
        return leaves[rng.gen_range(0..leaves.len())].to_string();
    }
    let a = expr_text(rng, depth - 1, radicals);
    let b = expr_text(rng, depth - 1, radicals);
    match rng.gen_range(0..6) {
        0 => format!("({a} + {b})"),
        1 => format!("({a} - {b})"),
        2 => format!("({a}) * ({b})"),
        3 => format!("({a}) / ({b})"),
        4 => format!("({a})^{}", [2, 3][rng.gen_range(0..2)]),
        _ => format!("-({a})"),
    }
}

/// Polynomial with known real roots: rational roots with multiplicity, one
/// optional `x² + s` and one optional `x² − d`.
fn known_roots(rng: &mut ChaCha8Rng) -> (RatPoly, Vec<QuadExt>) {
    let mut p = RatPoly::constant(rat(rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=4)));
    let mut roots: Vec<QuadExt> = Vec::new();
    let mut degree = 0;
    for _ in 0..rng.gen_range(0..=4) {
        let r = rat(rng.gen_range(-12..=12), rng.gen_range(1..=4));
        let m = rng.gen_range(1..=3);
        if degree + m > 8 || roots.contains(&QuadExt::rational(r.clone())) {
            continue;
        }
        p = p.mul(&RatPoly::from_rationals(&[-r.clone(), rat(1, 1)]).pow(m));
        roots.push(QuadExt::rational(r));
        degree += m;
    }
    if degree <= 6 && rng.gen_bool(0.5) {
        p = p.mul(&RatPoly::from_rationals(&[rat(rng.gen_range(1..=20), rng.gen_range(1..=5)), rat(0, 1), rat(1, 1)]));
        degree += 2;
    }
    if degree <= 6 && rng.gen_bool(0.5) {
        let d = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        p = p.mul(&RatPoly::from_rationals(&[rat(-(d as i64), 1), rat(0, 1), rat(1, 1)]));
        roots.push(QuadExt::new(rat(0, 1), rat(1, 1), d));
        roots.push(QuadExt::new(rat(0, 1), rat(-1, 1), d));
    }
    (p, roots)
}

#[test]
fn criterion_6_kernel_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();

    for _ in 0..1000 {
        let (p, roots) = known_roots(&mut rng);
        let a = rat(rng.gen_range(-60..=60), 4);
        let b = &a + &rat(rng.gen_range(1..=80), 4);
        let (qa, qb) = (QuadExt::rational(a.clone()), QuadExt::rational(b.clone()));
        let want = roots.iter().filter(|r| qa.cmp_exact(r) != Ordering::Greater && r.cmp_exact(&qb) != Ordering::Greater).count();
        let dom = Domain::new(Bound::from(a), false, Bound::from(b), false).unwrap();
        let got = sturm_count(&p, &dom);
        if got.as_ref().ok() != Some(&want) {
            failures.push(format!("sturm: {} on {dom}: {got:?} vs {want}", p.display_in("x")));
        }
    }

    let h = rat(1, 1_000_000);
    let mut derivatives = 0;
    while derivatives < 500 {
        let e = parse(&expr_text(&mut rng, 4, false)).unwrap();
        let x = rat(rng.gen_range(-40..=40), rng.gen_range(1..=8));
        let at = |x: Rational| eval_exact(&e, &QuadExt::rational(x)).ok().and_then(|v| v.as_rational().cloned());
        let (Some(up), Some(down), Some(mid)) = (at(&x + &h), at(&x - &h), at(x.clone())) else { continue };
        let Some(dv) = eval_exact(&diff(&e), &QuadExt::rational(x.clone())).ok().and_then(|v| v.as_rational().cloned())
        else {
            failures.push(format!("derivative of {} undefined at {x}", tangent_core::expr::print(&e)));
            continue;
        };
        // next to a pole the symmetric step straddles a blow-up
        if mid.abs() >= rat(1000, 1) || dv.abs() >= rat(1000, 1) {
            continue;
        }
        derivatives += 1;
        let fd = (up - down) / (&h * &rat(2, 1));
        if (&fd - &dv).abs() > rat(1, 10_000) * (rat(1, 1) + dv.abs()) {
            failures.push(format!("derivative of {} at {x}", tangent_core::expr::print(&e)));
        }
    }

    let prec = Precision::from_bits(64);
    let mut pairs = 0;
    while pairs < 10_000 {
        let e = parse(&expr_text(&mut rng, 4, true)).unwrap();
        // sixth powers keep fractional powers of x exact
        let t = rat(rng.gen_range(1..=40), rng.gen_range(1..=6));
        let x = t.pow(6);
        let Ok(exact) = eval_exact(&e, &QuadExt::rational(x.clone())) else { continue };
        let w = rat(rng.gen_range(0..=50), 1_000_000);
        let iv = RatInterval::new(&x - &w, &x + &rat(rng.gen_range(0..=50), 1_000_000));
        let Ok(enc) = eval_interval(&e, &iv, &prec) else { continue };
        pairs += 1;
        let inside = QuadExt::rational(enc.lo().clone()).cmp_exact(&exact) != Ordering::Greater
            && exact.cmp_exact(&QuadExt::rational(enc.hi().clone())) != Ordering::Greater;
        if !inside {
            failures.push(format!("enclosure of {} at {x}", tangent_core::expr::print(&e)));
        }
    }
    failures.truncate(10);
    verdict(6, &failures, "1000 Sturm counts, 500 derivatives, 10000 enclosures");
}

fn tangent(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tangent")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tangent-acceptance-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn criterion_7_cold_replay_and_tampering() {
    let dir = scratch("replay");
    let mut failures = Vec::new();
    let (mut accepted, mut rejected) = (0, 0);
    for (i, (name, _)) in examples().into_iter().enumerate() {
        let file = corpus_file(&name);
        let file = file.to_str().unwrap();
        let cert = dir.join(format!("{name}.cert.json"));
        let cert_s = cert.to_str().unwrap();
        let (code, _) = tangent(&["check", file, "--emit-cert", cert_s]);
        if code != 0 {
            failures.push(format!("{name}: check exited {code}"));
            continue;
        }
        let (code, out) = tangent(&["replay", cert_s, file]);
        if code == 0 && out.trim() == "accepted" {
            accepted += 1;
        } else {
            failures.push(format!("{name}: replay exited {code}: {out}"));
        }
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
        for (j, (ptr, bad)) in tamper(&doc, 10, i as u64).into_iter().enumerate() {
            let path = dir.join(format!("{name}.tampered{j}.json"));
            std::fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
            let (code, _) = tangent(&["replay", path.to_str().unwrap(), file]);
            if code == 0 {
                failures.push(format!("{name}: mutation at {ptr} accepted"));
            } else {
                rejected += 1;
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict(7, &failures, &format!("{accepted}/10 replayed cold, {rejected}/100 tampered rejected"));
}

#[test]
fn criterion_8_plot_geometry() {
    let mut failures = Vec::new();
    let eps = tol(12);
    let mut tangency_rows = 0;
    for (name, _) in examples() {
        let (code, csv) = tangent(&["plot", corpus_file(&name).to_str().unwrap(), "--samples", "200"]);
        if code != 0 {
            failures.push(format!("{name}: plot exited {code}"));
            continue;
        }
        let mut lines = csv.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        let pairs = (header.len() - 2) / 2;
        let mut touched = vec![false; pairs];
        for line in lines {
            let cols: Vec<&str> = line.split(',').collect();
            let kind = *cols.last().unwrap();
            for i in 0..pairs {
                let (f, g) = (cols[1 + 2 * i], cols[2 + 2 * i]);
                let (Some(f), Some(g)) = (Rational::from_decimal_str(f), Rational::from_decimal_str(g)) else { continue };
                let gap = &f - &g;
                if gap < -eps.clone() {
                    failures.push(format!("{name}: f{} < g{} at x = {}", i + 1, i + 1, cols[0]));
                }
                if kind == "tangency" && gap.abs() <= eps {
                    touched[i] = true;
                }
            }
            if kind == "tangency" {
                tangency_rows += 1;
            }
        }
        if let Some(i) = touched.iter().position(|t| !t) {
            failures.push(format!("{name}: f{} never meets g{} at a tangency row", i + 1, i + 1));
        }
    }
    verdict(8, &failures, &format!("{tangency_rows} tangency rows, f ≥ g at every sample"));
}
