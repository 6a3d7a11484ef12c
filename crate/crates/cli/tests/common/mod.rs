#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tangent_cli::{parse_problem, Problem};
use tangent_core::expr::{parse, print, Domain};
use tangent_core::Rational;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_file(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

pub fn load(name: &str) -> Problem {
    let text = std::fs::read_to_string(corpus_file(name)).unwrap();
    parse_problem(&text).unwrap()
}

/// The ten positive problems, in order.
pub fn examples() -> Vec<(String, Problem)> {
    (1..=10).map(|i| format!("ex{i:02}.ineq")).map(|f| (f.clone(), load(&f))).collect()
}

/// Pointers to every scalar in a JSON tree.
pub fn leaves(v: &Value, at: String, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(x, format!("{at}/{k}"), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| leaves(x, format!("{at}/{i}"), out)),
        Value::Null => {}
        _ => out.push(at),
    }
}

const SWAPS: [(&str, &str); 4] =
    [("radical_below", "radical_above"), ("radical_above", "radical_below"), ("lo", "hi"), ("hi", "lo")];
const SIGNS: [&str; 3] = ["Negative", "Zero", "Positive"];

/// A replacement that changes the meaning of one scalar.
pub fn mutate(v: &Value, rng: &mut ChaCha8Rng) -> Value {
    match v {
        Value::Bool(b) => Value::Bool(!b),
        Value::Number(n) => Value::from(n.as_u64().unwrap_or(0) + rng.gen_range(1..4)),
        Value::String(s) => {
            if let Some(i) = SIGNS.iter().position(|x| x == s) {
                return Value::from(SIGNS[(i + rng.gen_range(1..3)) % 3]);
            }
            if let Some((_, b)) = SWAPS.iter().find(|(a, _)| a == s) {
                return Value::from(*b);
            }
            if let Ok(r) = s.parse::<Rational>() {
                return Value::from((r + Rational::new(rng.gen_range(1..20), 7)).to_string());
            }
            if s.parse::<Domain>().is_ok() {
                let other = if s == "[-1, 9]" { "[-2, 9]" } else { "[-1, 9]" };
                return Value::from(other);
            }
            if let Ok(e) = parse(s) {
                return Value::from(format!("{} + 1/{}", print(&e), rng.gen_range(2..50)));
            }
            Value::from(format!("{s}_"))
        }
        _ => v.clone(),
    }
}

/// `count` single-field mutations of `doc`, each with its pointer.
pub fn tamper(doc: &Value, count: usize, seed: u64) -> Vec<(String, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ptrs = Vec::new();
    leaves(doc, String::new(), &mut ptrs);
    ptrs.retain(|p| p != "/problem");
    (0..count)
        .map(|_| {
            let p = ptrs[rng.gen_range(0..ptrs.len())].clone();
            let mut d = doc.clone();
            let slot = d.pointer_mut(&p).unwrap();
            *slot = mutate(slot, &mut rng);
            (p, d)
        })
        .collect()
}
