//! Line-oriented `key: value` problem files.
//!
//! ```text
//! name: ex01
//! vars: 3
//! domain: (0, 1)
//! constraint: sum(c=x^1, total=1)
//! f: (1-x)/x - 2*sqrt(2*(1-x)/x)
//! family: line
//! tangency: tangent_at(1/3)
//! bound: -6
//! ```

use std::fmt;

use tangent_core::certify::Strategy;
use tangent_core::compose::{Constraint, Direction, ProblemSpec};
use tangent_core::expr::{eval_exact, parse, print, Domain, Expr, ParseError};
use tangent_core::numerics::{QuadExt, Rational};
use tangent_core::surrogate::{ConstraintFn, TangencyCondition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ProblemError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ProblemError> {
    Err(ProblemError { line, col, msg: msg.into() })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilySpec {
    Line,
    Affine(ConstraintFn),
    Monomial,
    /// Weights `cᵢ` of `cᵢ·x/(s − x)`, tied by equal slopes.
    EqualSlopes(Vec<Rational>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Expect {
    #[default]
    Proved,
    Disproved,
    Unknown,
    /// Either disproved or unknown.
    NotProved,
}

impl Expect {
    pub fn matches(self, verdict: &str) -> bool {
        match self {
            Expect::Proved => verdict == "proved",
            Expect::Disproved => verdict == "disproved",
            Expect::Unknown => verdict == "unknown",
            Expect::NotProved => verdict != "proved",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Expect::Proved => "proved",
            Expect::Disproved => "disproved",
            Expect::Unknown => "unknown",
            Expect::NotProved => "not_proved",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Problem {
    pub name: String,
    pub vars: usize,
    pub domain: Domain,
    pub constraint: Constraint,
    pub functions: Vec<Expr>,
    pub family: FamilySpec,
    pub tangency: Vec<TangencyCondition>,
    pub chain: Vec<Expr>,
    pub direction: Direction,
    pub bound: Expr,
    pub notes: String,
    pub expect: Expect,
    pub strategy: Strategy,
}

impl Problem {
    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec {
            name: self.name.clone(),
            n: self.vars,
            functions: self.functions.clone(),
            domain: self.domain.clone(),
            constraint: self.constraint.clone(),
            bound: self.bound.clone(),
            direction: self.direction,
            notes: self.notes.clone(),
        }
    }
}

const KEYS: &[&str] = &[
    "name", "vars", "domain", "constraint", "f", "family", "tangency", "chain", "direction", "bound", "notes", "expect",
    "strategy",
];

fn is_fn_key(k: &str) -> Option<usize> {
    let d = k.strip_prefix('f')?;
    let i: usize = d.parse().ok()?;
    (i >= 1 && !d.starts_with('0')).then_some(i)
}

fn expr_at(text: &str, line: usize, col: usize) -> Result<Expr, ProblemError> {
    parse(text).or_else(|e| {
        let (pos, msg) = match &e {
            ParseError::SyntaxError { pos, .. } | ParseError::UnsupportedExponent { pos, .. } => (*pos, e.to_string()),
        };
        err(line, col + pos, msg)
    })
}

fn rational_at(text: &str, line: usize, col: usize) -> Result<Rational, ProblemError> {
    text.trim().parse::<Rational>().or_else(|_| err(line, col, format!("expected a rational, found `{}`", text.trim())))
}

fn constant_at(text: &str, line: usize, col: usize) -> Result<QuadExt, ProblemError> {
    let e = expr_at(text, line, col)?;
    if e.has_var() {
        return err(line, col, "expected a constant");
    }
    eval_exact(&e, &QuadExt::rational(Rational::from(0))).or_else(|m| err(line, col, m.to_string()))
}

/// `name(a=1, b=2)` → (`name`, [(`a`, `1`), (`b`, `2`)]) or positional
/// arguments with an empty key.
fn call(text: &str, line: usize, col: usize) -> Result<(String, Vec<(String, String)>), ProblemError> {
    let t = text.trim();
    let Some(open) = t.find('(') else {
        return Ok((t.to_string(), Vec::new()));
    };
    if !t.ends_with(')') {
        return err(line, col + t.len(), "missing `)`");
    }
    let inner = &t[open + 1..t.len() - 1];
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|a| match a.split_once('=') {
                Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
                None => (String::new(), a.trim().to_string()),
            })
            .collect()
    };
    Ok((t[..open].trim().to_string(), args))
}

fn arg<'a>(args: &'a [(String, String)], key: &str, line: usize, col: usize) -> Result<&'a str, ProblemError> {
    match args.iter().find(|(k, _)| k == key) {
        Some((_, v)) => Ok(v),
        None => err(line, col, format!("missing argument `{key}`")),
    }
}

fn check_args(args: &[(String, String)], allowed: &[&str], line: usize, col: usize) -> Result<(), ProblemError> {
    match args.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => err(line, col, format!("unexpected argument `{k}`")),
        None => Ok(()),
    }
}

fn constraint_fn(text: &str, line: usize, col: usize) -> Result<ConstraintFn, ProblemError> {
    let p = text.trim().strip_prefix("x^").map(|p| p.trim_start_matches('(').trim_end_matches(')'));
    let p = match p {
        Some(p) => rational_at(p, line, col)?,
        None if text.trim() == "x" => Rational::from(1),
        None => return err(line, col, format!("expected x^p, found `{}`", text.trim())),
    };
    ConstraintFn::new(p).map_or_else(|| err(line, col, "exponent must be positive with denominator 1, 2, 3 or 6"), Ok)
}

fn parse_constraint(text: &str, line: usize, col: usize) -> Result<Constraint, ProblemError> {
    let (name, args) = call(text, line, col)?;
    Ok(match name.as_str() {
        "sum" => {
            check_args(&args, &["c", "total"], line, col)?;
            Constraint::SumOfC {
                c: constraint_fn(arg(&args, "c", line, col)?, line, col)?,
                total: rational_at(arg(&args, "total", line, col)?, line, col)?,
            }
        }
        "product" => {
            check_args(&args, &["min"], line, col)?;
            Constraint::ProductAtLeast { min: rational_at(arg(&args, "min", line, col)?, line, col)? }
        }
        "none" => {
            check_args(&args, &["offset"], line, col)?;
            Constraint::Free { offset: rational_at(arg(&args, "offset", line, col)?, line, col)? }
        }
        "pairsum" => {
            check_args(&args, &["total"], line, col)?;
            Constraint::PairSum { total: rational_at(arg(&args, "total", line, col)?, line, col)? }
        }
        other => return err(line, col, format!("unknown constraint `{other}`")),
    })
}

fn parse_family(text: &str, line: usize, col: usize) -> Result<FamilySpec, ProblemError> {
    let (name, args) = call(text, line, col)?;
    Ok(match name.as_str() {
        "line" if args.is_empty() => FamilySpec::Line,
        "monomial" if args.is_empty() => FamilySpec::Monomial,
        "affine" => {
            check_args(&args, &["c"], line, col)?;
            FamilySpec::Affine(constraint_fn(arg(&args, "c", line, col)?, line, col)?)
        }
        "equal_slopes" => {
            check_args(&args, &[""], line, col)?;
            let w = args.iter().map(|(_, v)| rational_at(v, line, col)).collect::<Result<Vec<_>, _>>()?;
            if w.len() < 2 {
                return err(line, col, "equal_slopes needs at least two weights");
            }
            FamilySpec::EqualSlopes(w)
        }
        other => return err(line, col, format!("unknown family `{other}`")),
    })
}

/// Splits at top-level whitespace, keeping parenthesised groups whole.
fn top_level_words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, None);
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch.is_whitespace() && depth == 0 {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn parse_tangency(text: &str, line: usize, col: usize) -> Result<Vec<TangencyCondition>, ProblemError> {
    top_level_words(text)
        .into_iter()
        .map(|(off, w)| {
            let c = col + off;
            let (name, args) = call(w, line, c)?;
            let one = |args: &[(String, String)]| match args {
                [(k, v)] if k.is_empty() => constant_at(v, line, c),
                _ => err(line, c, format!("`{name}` takes one point")),
            };
            Ok(match name.as_str() {
                "tangent_at" => TangencyCondition::TangentAt(one(&args)?),
                "through" => TangencyCondition::Through(one(&args)?),
                "intercept" => {
                    check_args(&args, &["n", "A"], line, c)?;
                    let n = arg(&args, "n", line, c)?;
                    let n: u32 = n.parse().or_else(|_| err(line, c, format!("bad count `{n}`")))?;
                    TangencyCondition::InterceptSum { n, a: rational_at(arg(&args, "A", line, c)?, line, c)? }
                }
                other => return err(line, c, format!("unknown tangency condition `{other}`")),
            })
        })
        .collect()
}

pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let mut seen: Vec<(String, usize, usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim_start();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let indent = raw.len() - t.len();
        let Some((k, v)) = t.split_once(':') else {
            return err(line, indent + 1, "expected `key: value`");
        };
        let key = k.trim().to_string();
        if !KEYS.contains(&key.as_str()) && is_fn_key(&key).is_none() {
            return err(line, indent + 1, format!("unknown key `{key}`"));
        }
        if seen.iter().any(|s| s.0 == key) {
            return err(line, indent + 1, format!("duplicate key `{key}`"));
        }
        let vcol = indent + k.len() + 2 + (v.len() - v.trim_start().len());
        seen.push((key, line, vcol, v.trim().to_string()));
    }
    let last = text.lines().count().max(1);
    let get = |k: &str| seen.iter().find(|s| s.0 == k);
    let need = |k: &str| get(k).map_or_else(|| err(last, 1, format!("missing key `{k}`")), Ok);

    let name = need("name")?.3.clone();
    let (_, l, c, v) = need("vars")?;
    let vars: usize = v.parse().or_else(|_| err(*l, *c, format!("bad variable count `{v}`")))?;
    if vars < 2 {
        return err(*l, *c, "need at least two variables");
    }
    let (_, l, c, v) = need("domain")?;
    let domain: Domain = v.parse().or_else(|e: tangent_core::expr::DomainParseError| err(*l, *c, e.to_string()))?;
    let (_, l, c, v) = need("constraint")?;
    let constraint = parse_constraint(v, *l, *c)?;

    let mut indexed: Vec<(usize, &(String, usize, usize, String))> =
        seen.iter().filter_map(|s| is_fn_key(&s.0).map(|i| (i, s))).collect();
    indexed.sort_by_key(|p| p.0);
    let functions = match (get("f"), indexed.is_empty()) {
        (Some(_), false) => {
            let (_, s) = indexed[0];
            return err(s.1, 1, "use either `f` or `f1`..`fn`, not both");
        }
        (Some((_, l, c, v)), true) => vec![expr_at(v, *l, *c)?],
        (None, true) => return err(last, 1, "missing key `f`"),
        (None, false) => {
            for (want, (i, s)) in indexed.iter().enumerate() {
                if *i != want + 1 {
                    return err(s.1, 1, format!("expected f{}", want + 1));
                }
            }
            if indexed.len() != vars {
                return err(indexed[0].1 .1, 1, format!("{} functions for {vars} variables", indexed.len()));
            }
            indexed.iter().map(|(_, s)| expr_at(&s.3, s.1, s.2)).collect::<Result<_, _>>()?
        }
    };

    let (_, l, c, v) = need("family")?;
    let family = parse_family(v, *l, *c)?;
    if let FamilySpec::EqualSlopes(w) = &family {
        if w.len() != vars {
            return err(*l, *c, format!("{} weights for {vars} variables", w.len()));
        }
    }
    let tangency = match get("tangency") {
        Some((_, l, c, v)) => parse_tangency(v, *l, *c)?,
        None if matches!(family, FamilySpec::EqualSlopes(_)) => Vec::new(),
        None => return err(last, 1, "missing key `tangency`"),
    };
    let chain = match get("chain") {
        Some((_, l, c, v)) => {
            let mut off = 0;
            let mut out = Vec::new();
            for part in v.split(">=") {
                out.push(expr_at(part, *l, c + off)?);
                off += part.len() + 2;
            }
            out
        }
        None => Vec::new(),
    };
    let direction = match get("direction").map(|s| (s.1, s.2, s.3.as_str())) {
        None | Some((_, _, "ge")) => Direction::Ge,
        Some((_, _, "gt")) => Direction::Gt,
        Some((l, c, v)) => return err(l, c, format!("direction must be ge or gt, found `{v}`")),
    };
    let (_, l, c, v) = need("bound")?;
    let bound = expr_at(v, *l, *c)?;
    if bound.has_var() {
        return err(*l, *c, "bound must be a constant");
    }
    let notes = get("notes").map(|s| s.3.clone()).unwrap_or_default();
    let expect = match get("expect").map(|s| (s.1, s.2, s.3.as_str())) {
        None | Some((_, _, "proved")) => Expect::Proved,
        Some((_, _, "disproved")) => Expect::Disproved,
        Some((_, _, "unknown")) => Expect::Unknown,
        Some((_, _, "not_proved")) => Expect::NotProved,
        Some((l, c, v)) => return err(l, c, format!("unknown expectation `{v}`")),
    };
    let strategy = match get("strategy") {
        None => Strategy::Auto,
        Some((_, l, c, v)) => v.parse().or_else(|e: String| err(*l, *c, e))?,
    };
    Ok(Problem { name, vars, domain, constraint, functions, family, tangency, chain, direction, bound, notes, expect, strategy })
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name: {}", self.name)?;
        writeln!(f, "vars: {}", self.vars)?;
        writeln!(f, "domain: {}", self.domain)?;
        let c = match &self.constraint {
            Constraint::SumOfC { c, total } => format!("sum(c={c}, total={total})"),
            Constraint::ProductAtLeast { min } => format!("product(min={min})"),
            Constraint::Free { offset } => format!("none(offset={offset})"),
            Constraint::PairSum { total } => format!("pairsum(total={total})"),
        };
        writeln!(f, "constraint: {c}")?;
        if self.functions.len() == 1 {
            writeln!(f, "f: {}", print(&self.functions[0]))?;
        } else {
            for (i, e) in self.functions.iter().enumerate() {
                writeln!(f, "f{}: {}", i + 1, print(e))?;
            }
        }
        let fam = match &self.family {
            FamilySpec::Line => "line".to_string(),
            FamilySpec::Monomial => "monomial".to_string(),
            FamilySpec::Affine(c) => format!("affine(c={c})"),
            FamilySpec::EqualSlopes(w) => {
                format!("equal_slopes({})", w.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "))
            }
        };
        writeln!(f, "family: {fam}")?;
        if !self.tangency.is_empty() {
            let t: Vec<String> = self.tangency.iter().map(|t| t.to_string()).collect();
            writeln!(f, "tangency: {}", t.join(" "))?;
        }
        if !self.chain.is_empty() {
            let t: Vec<String> = self.chain.iter().map(print).collect();
            writeln!(f, "chain: {}", t.join(" >= "))?;
        }
        if self.direction == Direction::Gt {
            writeln!(f, "direction: gt")?;
        }
        writeln!(f, "bound: {}", print(&self.bound))?;
        if !self.notes.is_empty() {
            writeln!(f, "notes: {}", self.notes)?;
        }
        if self.expect != Expect::Proved {
            writeln!(f, "expect: {}", self.expect.name())?;
        }
        if self.strategy != Strategy::Auto {
            writeln!(f, "strategy: {}", self.strategy)?;
        }
        Ok(())
    }
}
