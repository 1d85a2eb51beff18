//! Report renderings: JSON document, CSV summary and markdown digest.

use serde::Serialize;

use crate::verifier::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Md,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

pub fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
        Format::Md => to_markdown(report),
    }
}

pub fn to_json(report: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    group: &'a str,
    vacuous: usize,
    confirmed: usize,
    counterexamples: usize,
}

/// One row per (check id, group).
pub fn to_csv(report: &VerificationReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for g in &report.groups {
        for s in &g.suites {
            w.serialize(CsvRow {
                suite: &s.id,
                group: &g.label,
                vacuous: s.vacuous,
                confirmed: s.confirmed,
                counterexamples: s.counterexamples.len(),
            })
            .expect("in-memory csv");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

pub fn to_markdown(report: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str("# Verification digest\n\n");
    out.push_str(&format!("Manifest hash: `{}`\n\n", report.manifest_hash));
    out.push_str(&format!(
        "Groups: {}, catalog errors: {}, counterexamples: {}\n\n",
        report.groups.len(),
        report.error_count(),
        report.counterexample_count()
    ));
    out.push_str("| check | vacuous | confirmed | counterexamples |\n|---|---:|---:|---:|\n");
    for id in report.check_ids() {
        let (v, c, x) = report.totals(&id);
        out.push_str(&format!("| {id} | {v} | {c} | {x} |\n"));
    }
    let errors: Vec<_> = report.groups.iter().filter(|g| g.error.is_some()).collect();
    if !errors.is_empty() {
        out.push_str("\n## Catalog errors\n\n");
        for g in errors {
            out.push_str(&format!("- {}: {}\n", g.label, g.error.as_deref().unwrap_or("")));
        }
    }
    let cex: Vec<_> = report
        .groups
        .iter()
        .flat_map(|g| &g.suites)
        .flat_map(|s| &s.counterexamples)
        .collect();
    if !cex.is_empty() {
        out.push_str("\n## Counterexamples\n\n");
        for r in cex {
            let inst: Vec<String> = r
                .instance
                .iter()
                .map(|b| format!("{} (order {}, gens {:?})", b.var, b.order, b.generators))
                .collect();
            out.push_str(&format!("- {} on {}: {}\n", r.suite, r.group, inst.join(", ")));
        }
    }
    out
}
