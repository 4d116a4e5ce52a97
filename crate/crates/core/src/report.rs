//! Artifact emission: fixed-schema CSV and JSON renderings of experiment
//! results, written to a file or stdout. Formatting is deterministic so that
//! identical runs produce byte-identical artifacts.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Result};
use crate::experiments::{
    ConjectureRow, CounterexampleReport, DepthMomentRow, GapReport, MomentComparison,
    SpectralSummary,
};
use crate::limits::MomentTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown format {other:?}, expected csv or json"
            ))),
        }
    }
}

/// Output target: a path, or stdout for "-".
#[derive(Clone, Debug)]
pub struct Sink {
    target: Option<PathBuf>,
}

impl Sink {
    pub fn parse(s: &str) -> Sink {
        Sink {
            target: (s != "-").then(|| PathBuf::from(s)),
        }
    }

    pub fn is_stdout(&self) -> bool {
        self.target.is_none()
    }

    pub fn write(&self, content: &str) -> Result<()> {
        match &self.target {
            Some(path) => Ok(std::fs::write(path, content)?),
            None => {
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                out.write_all(content.as_bytes())?;
                Ok(out.flush()?)
            }
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Histogram rows: bin_lo,bin_hi,count.
pub fn esd_csv(s: &SpectralSummary) -> String {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for (i, &c) in s.histogram.counts.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{c}",
            s.histogram.edges[i],
            s.histogram.edges[i + 1]
        );
    }
    out
}

pub fn esd_json(s: &SpectralSummary) -> Result<String> {
    let v = json!({
        "eigenvalue_count": s.eigenvalues.len(),
        "moments": s.moments,
        "histogram": s.histogram,
        "gap_count": s.gaps.len(),
    });
    to_json_string(&v)
}

fn moment_comparison_fields(r: &MomentComparison) -> (String, String) {
    (fmt_opt(r.exact_as_float()), fmt_opt(r.abs_deviation()))
}

/// Moment rows: order,estimate,std_error,exact_limit,abs_dev. The exact
/// columns stay empty when no limit is known for the configuration.
pub fn moments_csv(rows: &[MomentComparison]) -> String {
    let mut out = String::from("order,estimate,std_error,exact_limit,abs_dev\n");
    for r in rows {
        let (exact, dev) = moment_comparison_fields(r);
        let _ = writeln!(out, "{},{},{},{exact},{dev}", r.order, r.estimate, r.std_error);
    }
    out
}

fn moment_comparison_json(r: &MomentComparison) -> serde_json::Value {
    json!({
        "order": r.order,
        "estimate": r.estimate,
        "std_error": r.std_error,
        "exact_limit": r.exact_limit.as_ref().map(|e| e.to_string()),
        "exact_limit_float": r.exact_as_float(),
        "abs_dev": r.abs_deviation(),
    })
}

pub fn moments_json(rows: &[MomentComparison]) -> Result<String> {
    let v = serde_json::Value::Array(rows.iter().map(moment_comparison_json).collect());
    to_json_string(&v)
}

/// Depth-sweep rows: depth,order,estimate,std_error,exact_limit,abs_dev.
pub fn dsweep_csv(rows: &[DepthMomentRow]) -> String {
    let mut out = String::from("depth,order,estimate,std_error,exact_limit,abs_dev\n");
    for r in rows {
        let (exact, dev) = moment_comparison_fields(&r.comparison);
        let _ = writeln!(
            out,
            "{},{},{},{},{exact},{dev}",
            r.depth, r.comparison.order, r.comparison.estimate, r.comparison.std_error
        );
    }
    out
}

pub fn dsweep_json(rows: &[DepthMomentRow]) -> Result<String> {
    let v = serde_json::Value::Array(
        rows.iter()
            .map(|r| {
                let mut m = moment_comparison_json(&r.comparison);
                m["depth"] = json!(r.depth);
                m
            })
            .collect(),
    );
    to_json_string(&v)
}

/// Gap rows: index,spacing.
pub fn gaps_csv(r: &GapReport) -> String {
    let mut out = String::from("index,spacing\n");
    for (i, s) in r.spacings.iter().enumerate() {
        let _ = writeln!(out, "{i},{s}");
    }
    out
}

pub fn gaps_json(r: &GapReport) -> Result<String> {
    let v = json!({
        "spacings": r.spacings,
        "histogram": r.histogram,
    });
    to_json_string(&v)
}

/// Conjecture rows: k,m_a,se_a,m_disco,se_disco,m_b,se_b,verdict.
pub fn conjecture_csv(rows: &[ConjectureRow]) -> String {
    let mut out = String::from("k,m_a,se_a,m_disco,se_disco,m_b,se_b,verdict\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.k, r.m_a, r.se_a, r.m_disco, r.se_disco, r.m_b, r.se_b, r.verdict
        );
    }
    out
}

pub fn conjecture_json(rows: &[ConjectureRow]) -> Result<String> {
    to_json_string(&serde_json::to_value(rows).map_err(json_err)?)
}

/// Counterexample rows: quantity,exact,quoted,matches.
pub fn counterexample_csv(r: &CounterexampleReport) -> String {
    let mut out = String::from("quantity,exact,quoted,matches\n");
    for (name, exact, quoted) in [
        ("trace_a4", &r.trace_a4, &r.quoted_a4),
        ("trace_b4", &r.trace_b4, &r.quoted_b4),
        ("normalized_disco", &r.normalized_disco, &r.quoted_normalized),
    ] {
        let _ = writeln!(out, "{name},{exact},{quoted},{}", exact == quoted);
    }
    out
}

pub fn counterexample_json(r: &CounterexampleReport) -> Result<String> {
    let v = json!({
        "blocks": r.blocks,
        "trace_a4": r.trace_a4.to_string(),
        "trace_b4": r.trace_b4.to_string(),
        "normalized_disco": r.normalized_disco.to_string(),
        "quoted_a4": r.quoted_a4.to_string(),
        "quoted_b4": r.quoted_b4.to_string(),
        "quoted_normalized": r.quoted_normalized.to_string(),
        "sandwich_violated": r.sandwich_violated(),
        "mismatches": r.mismatches(),
    });
    to_json_string(&v)
}

/// Limit-moment rows: two_k,exact_num,exact_den,float.
pub fn moment_table_csv(t: &MomentTable) -> String {
    let mut out = String::from("two_k,exact_num,exact_den,float\n");
    for r in &t.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.two_k,
            r.exact.numer(),
            r.exact.denom(),
            r.float()
        );
    }
    out
}

pub fn moment_table_json(t: &MomentTable) -> Result<String> {
    let v = serde_json::Value::Array(
        t.rows
            .iter()
            .map(|r| {
                json!({
                    "two_k": r.two_k,
                    "exact_num": r.exact.numer().to_string(),
                    "exact_den": r.exact.denom().to_string(),
                    "float": r.float(),
                    "provenance": r.provenance,
                })
            })
            .collect(),
    );
    to_json_string(&v)
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Numerical(format!("json encoding: {e}"))
}

fn to_json_string(v: &serde_json::Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(json_err)?;
    s.push('\n');
    Ok(s)
}
