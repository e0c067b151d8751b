//! JSON fixtures: a command line plus expected values at JSON pointers into its report.
//!
//! ```json
//! {"name": "...", "origin": "published", "note": "...",
//!  "args": ["ellsurf", "fibers", "@models/x.json"],
//!  "expect": [{"path": "/result/euler_sum", "value": 12}],
//!  "exit": 0}
//! ```
//! Arguments starting with `@` are paths relative to the fixture file.

use crate::{Output, UsageError};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// Value printed in the source material.
    Published,
    /// Value computed by an independent route.
    Derived,
    /// Harness sanity checks.
    Harness,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Expectation {
    pub path: String,
    pub value: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub origin: Origin,
    #[serde(default)]
    pub note: String,
    pub args: Vec<String>,
    #[serde(default)]
    pub expect: Vec<Expectation>,
    #[serde(default)]
    pub exit: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub origin: Origin,
    pub passed: bool,
    pub failures: Vec<String>,
    /// The fixture's report, kept for callers that inspect results further.
    #[serde(skip)]
    pub report: Option<Value>,
}

/// Fixture files in `dir`, sorted by path.
pub fn load_dir(dir: &Path) -> Result<Vec<(PathBuf, Fixture)>> {
    if !dir.is_dir() {
        bail!("fixture directory {} not found", dir.display());
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let s = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            let f: Fixture =
                serde_json::from_str(&s).with_context(|| format!("parsing {}", p.display()))?;
            Ok((p, f))
        })
        .collect()
}

pub fn run_fixture(path: &Path, f: &Fixture) -> FixtureResult {
    let base = path.parent().unwrap_or(Path::new("."));
    let mut argv = vec!["sk3".to_string()];
    argv.extend(f.args.iter().map(|a| match a.strip_prefix('@') {
        Some(rel) => base.join(rel).to_string_lossy().into_owned(),
        None => a.clone(),
    }));
    argv.push("--json".into());
    let out = crate::run(argv);
    let mut failures = Vec::new();
    if out.code != f.exit {
        failures.push(format!(
            "exit {} (expected {}): {}",
            out.code,
            f.exit,
            out.stderr.trim()
        ));
    }
    let report: Option<Value> = serde_json::from_str(&out.stdout).ok();
    for e in &f.expect {
        let got = report.as_ref().and_then(|r| r.pointer(&e.path));
        if got != Some(&e.value) {
            failures.push(format!(
                "{}: expected {}, got {}",
                e.path,
                e.value,
                got.map(|v| v.to_string())
                    .unwrap_or_else(|| "nothing".into())
            ));
        }
    }
    FixtureResult {
        name: f.name.clone(),
        origin: f.origin.clone(),
        passed: failures.is_empty(),
        failures,
        report,
    }
}

pub(crate) fn run_dir(dir: &Path, filter: Option<&str>) -> Result<Output> {
    if filter == Some("") {
        return Err(UsageError("--filter must not be empty".into()).into());
    }
    let all = load_dir(dir)?;
    let selected: Vec<&(PathBuf, Fixture)> = all
        .iter()
        .filter(|(_, f)| filter.is_none_or(|s| f.name.contains(s)))
        .collect();
    if selected.is_empty() {
        return Err(UsageError(format!("no fixtures match in {}", dir.display())).into());
    }
    let results: Vec<FixtureResult> = selected.iter().map(|(p, f)| run_fixture(p, f)).collect();
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!(
            "{} {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.name
        ));
        for m in &r.failures {
            text.push_str(&format!("    {m}\n"));
        }
    }
    text.push_str(&format!(
        "{} passed, {failed} failed\n",
        results.len() - failed
    ));
    let mut out = Output::new(
        json!({"total": results.len(), "failed": failed, "results": results}),
        text,
    );
    if failed > 0 {
        out.code = 1;
    }
    Ok(out)
}
