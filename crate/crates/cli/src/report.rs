//! Rendering of reports as text, JSON or CSV. Every renderer is a pure
//! function of its input, so equal inputs give byte-identical output.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use freqmom_core::congruence::{CertificationRecord, ScanHit, ScanReport};
use freqmom_core::moments::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn ms_list(ms: &[u32]) -> String {
    let items: Vec<String> = ms.iter().map(u32::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn text_classes(out: &mut String, title: &str, hits: &[ScanHit]) {
    let _ = writeln!(out, "\n=== {title} ===");
    if hits.is_empty() {
        out.push_str("(none)\n");
    }
    for h in hits {
        let _ = writeln!(out, "(ell,r)=({},{}): m = {}", h.ell, h.r, ms_list(&h.m));
    }
}

pub fn render_scan(report: &ScanReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut rows: Vec<(u64, u64, u32)> = report
                .triples()
                .into_iter()
                .map(|(m, ell, r)| (ell, r, m))
                .collect();
            rows.sort_unstable();
            csv_table(
                &["ell", "r", "class", "m"],
                rows.into_iter().map(|(ell, r, m)| {
                    vec![
                        ell.to_string(),
                        r.to_string(),
                        if r == 0 { "zero" } else { "nonzero" }.to_string(),
                        m.to_string(),
                    ]
                }),
            )
        }
        Format::Text => {
            let p = &report.parameters;
            let mut out = String::new();
            let _ = writeln!(
                out,
                "scan: ensemble={} weight={} n_scan={} include_r0={}",
                p.ensemble,
                if p.weight.is_empty() { "plain" } else { &p.weight },
                p.n_scan,
                p.include_r0
            );
            let _ = writeln!(out, "m = {}", ms_list(&p.m_values));
            let ells: Vec<String> = p.ells.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "ell = [{}]", ells.join(", "));
            out.push_str("\nSummary (grouped by (ell,r) -> list of m):\n");
            if p.include_r0 {
                text_classes(&mut out, "r = 0 classes", &report.zero_class);
            }
            text_classes(&mut out, "1 <= r < ell classes", &report.nonzero_class);
            out
        }
    }
}

const RECORD_HEADER: [&str; 9] = [
    "m",
    "ell",
    "r",
    "prime",
    "L",
    "model",
    "sturm_B",
    "max_index",
    "status",
];

fn record_row(r: &CertificationRecord) -> Vec<String> {
    vec![
        r.m.to_string(),
        r.ell.to_string(),
        r.r.to_string(),
        r.modulus.to_string(),
        r.level_l.to_string(),
        r.model.clone(),
        r.bound_b.to_string(),
        r.max_index_checked.to_string(),
        r.status.to_string(),
    ]
}

fn text_record(out: &mut String, r: &CertificationRecord) {
    let _ = writeln!(
        out,
        "Certifying (m={}, ell={}, r={}) mod {} with {} [{}, L={}, {}]:",
        r.m, r.ell, r.r, r.modulus, r.model, r.ensemble, r.level_l, r.weight
    );
    let _ = writeln!(
        out,
        "  Sturm bound B={} ({}), so need indices up to N_max={}",
        r.bound_b, r.mode, r.max_index_checked
    );
    match &r.fail_witness {
        None => out.push_str("  PASS\n"),
        Some(w) => {
            let _ = writeln!(out, "  FAIL at n={}, t={}, residue={}", w.n, w.t, w.residue);
        }
    }
}

pub fn render_records(records: &[CertificationRecord], format: Format) -> String {
    match format {
        Format::Json => json(records),
        Format::Csv => csv_table(&RECORD_HEADER, records.iter().map(record_row)),
        Format::Text => {
            let mut out = String::new();
            for r in records {
                text_record(&mut out, r);
            }
            out
        }
    }
}

/// One row of a reproduced table, expected values beside computed ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub table: String,
    pub m: u32,
    pub ell: u64,
    pub r: u64,
    pub prime: u64,
    #[serde(rename = "L")]
    pub level_l: Option<u64>,
    pub model: String,
    #[serde(rename = "expected_B")]
    pub expected_bound: Option<u64>,
    #[serde(rename = "bound_B")]
    pub bound: Option<u64>,
    pub expected_max_index: Option<u64>,
    pub max_index: Option<u64>,
    pub expected_status: String,
    pub status: String,
    pub note: String,
    pub matches: bool,
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

pub fn render_tables(rows: &[TableRow], format: Format) -> String {
    match format {
        Format::Json => json(rows),
        Format::Csv => csv_table(
            &[
                "table",
                "m",
                "ell",
                "r",
                "prime",
                "L",
                "model",
                "expected_B",
                "sturm_B",
                "expected_max_index",
                "max_index",
                "expected_status",
                "status",
                "match",
                "note",
            ],
            rows.iter().map(|t| {
                vec![
                    t.table.clone(),
                    t.m.to_string(),
                    t.ell.to_string(),
                    t.r.to_string(),
                    t.prime.to_string(),
                    opt(t.level_l),
                    t.model.clone(),
                    opt(t.expected_bound),
                    opt(t.bound),
                    opt(t.expected_max_index),
                    opt(t.max_index),
                    t.expected_status.clone(),
                    t.status.clone(),
                    t.matches.to_string(),
                    t.note.clone(),
                ]
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            let mut current = "";
            for t in rows {
                if t.table != current {
                    current = &t.table;
                    let total = rows.iter().filter(|x| x.table == t.table).count();
                    let ok = rows.iter().filter(|x| x.table == t.table && x.matches).count();
                    let _ = writeln!(out, "\n[{}] {ok}/{total} rows match", t.table);
                    let _ = writeln!(
                        out,
                        "{:>3} {:>4} {:>3} {:>5} {:>6} {:<13} {:>11} {:>15} {:>13} match",
                        "m", "ell", "r", "prime", "L", "model", "B exp/got", "max exp/got", "status"
                    );
                }
                let _ = writeln!(
                    out,
                    "{:>3} {:>4} {:>3} {:>5} {:>6} {:<13} {:>11} {:>15} {:>13} {}{}",
                    t.m,
                    t.ell,
                    t.r,
                    t.prime,
                    opt(t.level_l),
                    t.model,
                    format!("{}/{}", opt(t.expected_bound), opt(t.bound)),
                    format!("{}/{}", opt(t.expected_max_index), opt(t.max_index)),
                    t.status,
                    if t.matches { "ok" } else { "MISMATCH" },
                    if t.note.is_empty() {
                        String::new()
                    } else {
                        format!("  ({})", t.note)
                    }
                );
            }
            out
        }
    }
}

pub fn render_checks(checks: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => json(checks),
        Format::Csv => csv_table(
            &["check", "n_max", "status", "first_n", "left", "right"],
            checks.iter().map(|c| {
                let (n, l, r) = match &c.counterexample {
                    Some(x) => (x.n.to_string(), x.left.clone(), x.right.clone()),
                    None => (String::new(), String::new(), String::new()),
                };
                vec![
                    c.check.clone(),
                    c.n_max.to_string(),
                    if c.passed() { "pass" } else { "FAIL" }.to_string(),
                    n,
                    l,
                    r,
                ]
            }),
        ),
        Format::Text => checks.iter().map(|c| format!("{c}\n")).collect(),
    }
}

/// Scan followed by certification of every hit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub scan: ScanReport,
    pub certifications: Vec<CertificationRecord>,
}

pub fn render_pipeline(report: &PipelineReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => render_records(&report.certifications, Format::Csv),
        Format::Text => {
            let mut out = render_scan(&report.scan, Format::Text);
            out.push_str("\n==============================\nCERTIFICATIONS (Sturm checks)\n==============================\n");
            for r in &report.certifications {
                out.push('\n');
                text_record(&mut out, r);
            }
            out
        }
    }
}
