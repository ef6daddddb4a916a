//! Per-suite CSV summaries of a records file.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::{Context, Result};

use crate::record::{fmt_num, ResultRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub suite: String,
    pub cases: u64,
    pub failures: u64,
    pub min_slack: Option<f64>,
    pub max_residual: Option<f64>,
}

/// Aggregates records by suite, sorted by suite name. Blank lines are skipped.
pub fn summarize<R: BufRead>(input: R) -> Result<Vec<SuiteSummary>> {
    let mut by: BTreeMap<String, SuiteSummary> = BTreeMap::new();
    for (k, line) in input.lines().enumerate() {
        let line = line.with_context(|| format!("line {}: read failed", k + 1))?;
        if line.trim().is_empty() {
            continue;
        }
        let r: ResultRecord =
            serde_json::from_str(&line).with_context(|| format!("line {}: malformed record", k + 1))?;
        let s = by.entry(r.suite.clone()).or_insert_with(|| SuiteSummary {
            suite: r.suite.clone(),
            cases: 0,
            failures: 0,
            min_slack: None,
            max_residual: None,
        });
        s.cases += 1;
        s.failures += !r.pass as u64;
        if let Some(v) = r.min_slack() {
            s.min_slack = Some(s.min_slack.map_or(v, |m| m.min(v)));
        }
        if let Some(v) = r.max_residual() {
            s.max_residual = Some(s.max_residual.map_or(v, |m| m.max(v)));
        }
    }
    Ok(by.into_values().collect())
}

pub fn write_csv<W: Write>(out: W, rows: &[SuiteSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["suite", "cases", "failures", "min_slack", "max_residual"])?;
    let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.suite.clone(),
            r.cases.to_string(),
            r.failures.to_string(),
            opt(r.min_slack),
            opt(r.max_residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `input` and writes the summary CSV to `output`. Nothing is written
/// when the input is malformed.
pub fn emit_report(input: &Path, output: &Path) -> Result<Vec<SuiteSummary>> {
    let f = std::fs::File::open(input).with_context(|| format!("cannot read {}", input.display()))?;
    let rows = summarize(std::io::BufReader::new(f))?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows)?;
    std::fs::write(output, buf).with_context(|| format!("cannot write {}", output.display()))?;
    Ok(rows)
}
