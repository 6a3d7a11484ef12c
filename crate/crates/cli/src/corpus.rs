use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pipeline::{run, Report};
use crate::problem::parse_problem;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CorpusEntry {
    pub path: String,
    pub expect: String,
    pub verdict: String,
    pub matched: bool,
    pub error: Option<String>,
    pub report: Option<Report>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CorpusReport {
    pub entries: Vec<CorpusEntry>,
    pub matched: usize,
    pub mismatched: usize,
}

fn problem_files(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            problem_files(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "ineq") {
            out.push(path);
        }
    }
    Ok(())
}

fn run_file(root: &Path, path: &Path) -> CorpusEntry {
    let rel = path.strip_prefix(root).unwrap_or(path).to_string_lossy().replace('\\', "/");
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return CorpusEntry { path: rel, expect: "?".into(), verdict: "input_error".into(), matched: false, error: Some(e.to_string()), report: None },
    };
    match parse_problem(&text) {
        Err(e) => CorpusEntry { path: rel, expect: "?".into(), verdict: "input_error".into(), matched: false, error: Some(e.to_string()), report: None },
        Ok(p) => {
            let r = run(&p, None);
            CorpusEntry {
                path: rel,
                expect: p.expect.name().into(),
                verdict: r.report.verdict.clone(),
                matched: p.expect.matches(&r.report.verdict),
                error: None,
                report: Some(r.report),
            }
        }
    }
}

/// Runs every `.ineq` file below `dir` in parallel; entries are ordered by
/// relative path.
pub fn run_corpus(dir: &Path) -> std::io::Result<CorpusReport> {
    let mut files = Vec::new();
    problem_files(dir, &mut files)?;
    files.sort();
    let entries: Vec<CorpusEntry> = files.par_iter().map(|f| run_file(dir, f)).collect();
    let matched = entries.iter().filter(|e| e.matched).count();
    Ok(CorpusReport { mismatched: entries.len() - matched, matched, entries })
}

impl CorpusReport {
    /// JSON with timings zeroed, so repeated runs compare byte for byte.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        for e in &mut c.entries {
            if let Some(r) = &mut e.report {
                r.timing_ms = 0;
            }
        }
        serde_json::to_string_pretty(&c).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                let mark = if e.matched { "ok  " } else { "FAIL" };
                let extra = e.error.as_deref().or(e.report.as_ref().map(|r| r.reason.as_str())).unwrap_or("");
                format!("{mark} {:<28} {:<10} (expected {}) {extra}", e.path, e.verdict, e.expect)
            })
            .collect();
        lines.push(format!("{}/{} as expected", self.matched, self.entries.len()));
        lines.join("\n")
    }
}
