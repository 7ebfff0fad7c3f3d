//! Rendering of suite results as JSON, CSV or text.
//!
//! Output depends only on the result value: maps are ordered, reports keep
//! the order in which the suite produced them, and scalars print as exact
//! fractions.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::cohomology::{cohomology_csv, CohomologyReport, HarmonicReport, KoszulBox, CSV_HEADER};
use crate::error::{Error, Result};
use crate::verify::RelationReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Usage(format!("unknown format `{other}`"))),
        }
    }
}

/// Everything one suite run produced.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteResult {
    pub mode: String,
    pub config: BTreeMap<String, String>,
    pub summary: BTreeMap<String, String>,
    pub reports: Vec<RelationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<CohomologyReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub koszul: Vec<KoszulBox>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub harmonic: Option<HarmonicReport>,
}

impl SuiteResult {
    /// Names of everything that failed, in output order.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.reports.iter().filter(|r| !r.passed()).map(|r| r.check.clone()).collect();
        for t in &self.tables {
            if !t.audit.passed() {
                out.push(format!("matrix-audit[{}]", t.backend));
            }
        }
        for k in &self.koszul {
            if !k.passed() {
                out.push(format!("koszul[c={},m={}]", k.component + 1, k.mode));
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

pub fn emit_report(result: &SuiteResult, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(result).map_err(|e| Error::Structural(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => emit_csv(result),
        Format::Text => Ok(emit_text(result)),
    }
}

fn emit_csv(result: &SuiteResult) -> Result<String> {
    if !result.tables.is_empty() {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for t in &result.tables {
            for line in cohomology_csv(t).lines().skip(1) {
                out.push_str(line);
                out.push('\n');
            }
        }
        return Ok(out);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Structural(e.to_string());
    w.write_record(["check", "status", "box", "relations", "states", "witness_relation", "witness_monomial"])
        .map_err(csv_err)?;
    for r in &result.reports {
        let (rel, mono) = r.witness.as_ref().map(|w| (w.relation.as_str(), w.monomial.as_str())).unwrap_or(("", ""));
        let status = if r.passed() { "pass" } else { "fail" };
        w.write_record([
            r.check.as_str(),
            status,
            r.box_desc.as_str(),
            &r.relations.to_string(),
            &r.states.to_string(),
            rel,
            mono,
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Structural(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Structural(e.to_string()))
}

fn emit_text(result: &SuiteResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", if result.mode.is_empty() { "-" } else { &result.mode });
    for (k, v) in &result.config {
        let _ = writeln!(out, "  {k} = {v}");
    }
    if result.reports.is_empty() && result.tables.is_empty() && result.koszul.is_empty() {
        out.push_str("no checks\n");
    }
    for r in &result.reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = write!(out, "{status} {} [{}] relations={} states={}", r.check, r.box_desc, r.relations, r.states);
        if let Some(ms) = r.millis {
            let _ = write!(out, " {ms}ms");
        }
        out.push('\n');
        if let Some(w) = &r.witness {
            let _ = writeln!(out, "  relation: {}", w.relation);
            if !w.monomial.is_empty() {
                let _ = writeln!(out, "  monomial: {}", w.monomial);
            }
            let _ = writeln!(out, "  lhs: {}", w.lhs);
            let _ = writeln!(out, "  rhs: {}", w.rhs);
        }
        for n in &r.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    for t in &result.tables {
        let kind = if t.ranges.relative { "relative" } else { "absolute" };
        let _ = writeln!(out, "table {} on {} ({kind}, E<={}, DegS>={})", t.differential, t.backend, t.ranges.emax, t.ranges.deg_s_min);
        out.push_str(&cohomology_csv(t));
        let audit = if t.audit.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(out, "audit: {audit} ({} matrices)", t.audit.matrices);
        for n in &t.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    for k in &result.koszul {
        let status = if k.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{status} koszul c={} m={} states={} rank={} homology={}",
            k.component + 1,
            k.mode,
            k.states,
            k.rank,
            k.homology_dim
        );
    }
    if let Some(h) = &result.harmonic {
        let _ = writeln!(out, "harmonic report on {} (E<={})", h.backend, h.emax);
        for l in &h.lefschetz {
            let _ = writeln!(
                out,
                "  E={} DegS={} degree={} coh={} sl2={} EE-closed={} FF-closed={}",
                l.e,
                l.deg_s,
                l.degree,
                l.coh_dim,
                l.sl2_on_cocycles,
                l.ee_not_closed == 0,
                l.ff_not_closed == 0
            );
        }
        for n in &h.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    for (k, v) in &result.summary {
        let _ = writeln!(out, "{k}: {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_result_is_a_valid_document() {
        let r = SuiteResult::default();
        let j = emit_report(&r, Format::Json).unwrap();
        assert!(serde_json::from_str::<serde_json::Value>(&j).is_ok());
        assert_eq!(emit_report(&r, Format::Csv).unwrap().lines().count(), 1);
        assert!(emit_report(&r, Format::Text).unwrap().contains("no checks"));
    }

    #[test]
    fn unknown_format_is_a_usage_error() {
        assert!(matches!("xml".parse::<Format>(), Err(Error::Usage(_))));
    }
}
