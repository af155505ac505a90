//! CSV and JSON-lines rendering of verification records.

use std::fmt::Write as _;

use crate::verify::{Status, VerificationRecord};

pub const CSV_COLUMNS: [&str; 13] = [
    "q",
    "case",
    "m",
    "ord_plus",
    "ord_minus",
    "ord_eta4",
    "ord_log",
    "u_mod4",
    "cw_index",
    "corollary_rank",
    "status",
    "precision",
    "seconds",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv_header() -> String {
    CSV_COLUMNS.join(",")
}

pub fn csv_row(r: &VerificationRecord) -> String {
    let cells = [
        r.q.to_string(),
        r.case.as_str().to_string(),
        opt(&r.m),
        opt(&r.ord_plus),
        opt(&r.ord_minus),
        opt(&r.ord_eta4),
        opt(&r.ord_log),
        opt(&r.u_mod4),
        opt(&r.cw_index),
        opt(&r.corollary_rank),
        r.status.to_string(),
        r.precision.to_string(),
        r.seconds.map(|s| format!("{s:.3}")).unwrap_or_default(),
    ];
    cells.join(",")
}

pub fn json_line(r: &VerificationRecord) -> String {
    serde_json::to_string(r).expect("records serialize")
}

/// Renders records; CSV output gets a header only when there is at least one row.
pub fn render(records: &[VerificationRecord], format: Format) -> String {
    let mut out = String::new();
    if format == Format::Csv && !records.is_empty() {
        out.push_str(&csv_header());
        out.push('\n');
    }
    for r in records {
        let line = match format {
            Format::Csv => csv_row(r),
            Format::Json => json_line(r),
        };
        let _ = writeln!(out, "{line}");
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub consistent: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(records: &[VerificationRecord]) -> Self {
        let mut s = Summary::default();
        for r in records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Consistent => s.consistent += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn line(&self) -> String {
        let mut l = format!("summary: PASS {} / FAIL {} / SKIPPED {}", self.pass, self.fail, self.skipped);
        if self.consistent > 0 {
            let _ = write!(l, " / CONSISTENT {}", self.consistent);
        }
        l
    }
}
