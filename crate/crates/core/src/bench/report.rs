use std::fmt::Write as _;

use super::harness::{BenchError, BenchReport, BenchRow, DEFAULT_RUNS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Table,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "table" | "text" => Ok(ReportFormat::Table),
            _ => Err(format!("unknown report format {s:?}")),
        }
    }
}

fn run_count(report: &BenchReport) -> usize {
    report.rows.iter().map(|r| r.run_ms.len()).max().unwrap_or(DEFAULT_RUNS)
}

fn header(runs: usize) -> Vec<String> {
    let mut h: Vec<String> = ["queryId", "kind", "representation", "strategy"].map(String::from).to_vec();
    h.extend((1..=runs).map(|i| format!("run{i}")));
    h.extend(
        ["meanMs", "indexProbes", "docsFetched", "entriesScanned", "bindingsMaterialized", "digest", "timedOut"]
            .map(String::from),
    );
    h
}

fn record(row: &BenchRow) -> Vec<String> {
    let mut r = vec![
        row.query_id.clone(),
        row.kind.to_string(),
        row.representation.to_string(),
        row.strategy.to_string(),
    ];
    r.extend(row.run_ms.iter().map(f64::to_string));
    r.extend([
        row.mean_ms.to_string(),
        row.index_probes.to_string(),
        row.docs_fetched.to_string(),
        row.entries_scanned.to_string(),
        row.bindings_materialized.to_string(),
        row.digest.clone(),
        row.timed_out.to_string(),
    ]);
    r
}

pub fn emit_report(report: &BenchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Table => emit_table(report),
    }
}

fn emit_csv(report: &BenchReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(run_count(report))).expect("in-memory write");
    for row in &report.rows {
        w.write_record(record(row)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
}

fn emit_table(report: &BenchReport) -> String {
    let head = ["query", "kind", "repr", "strategy", "mean ms", "probes", "docs", "scanned", "bindings", "digest"];
    let body: Vec<[String; 10]> = report
        .rows
        .iter()
        .map(|r| {
            [
                r.query_id.clone(),
                r.kind.to_string(),
                r.representation.to_string(),
                r.strategy.to_string(),
                if r.timed_out { "0 (timeout)".into() } else { format!("{:.3}", r.mean_ms) },
                r.index_probes.to_string(),
                r.docs_fetched.to_string(),
                r.entries_scanned.to_string(),
                r.bindings_materialized.to_string(),
                r.digest.chars().take(12).collect(),
            ]
        })
        .collect();
    let mut widths = head.map(str::len);
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let mut l = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            // numbers right-aligned
            if (4..9).contains(&i) {
                let _ = write!(l, "{cell:>w$}  ");
            } else {
                let _ = write!(l, "{cell:<w$}  ");
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(&head);
    for row in &body {
        line(&row.each_ref().map(String::as_str));
    }
    out
}

/// Reads a report back from its CSV form.
pub fn parse_report_csv(text: &str) -> Result<BenchReport, BenchError> {
    let bad = |m: String| BenchError::MalformedReport(m);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let head = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let runs = head.iter().filter(|h| h.starts_with("run")).count();
    let expected = header(runs);
    if head.iter().ne(expected.iter().map(String::as_str)) {
        return Err(bad(format!("unexpected header {:?}", head.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let field = |k: usize| rec.get(k).ok_or_else(|| bad(format!("row {}: missing field {k}", i + 1)));
        let num = |k: usize| -> Result<u64, BenchError> {
            field(k)?.parse().map_err(|e| bad(format!("row {}: field {k}: {e}", i + 1)))
        };
        let float = |k: usize| -> Result<f64, BenchError> {
            field(k)?.parse().map_err(|e| bad(format!("row {}: field {k}: {e}", i + 1)))
        };
        let m = 4 + runs;
        rows.push(BenchRow {
            query_id: field(0)?.to_string(),
            kind: field(1)?.parse().map_err(bad)?,
            representation: field(2)?.parse().map_err(|e| bad(format!("{e}")))?,
            strategy: field(3)?.parse().map_err(bad)?,
            run_ms: (4..m).map(float).collect::<Result<_, _>>()?,
            mean_ms: float(m)?,
            index_probes: num(m + 1)?,
            docs_fetched: num(m + 2)?,
            entries_scanned: num(m + 3)?,
            bindings_materialized: num(m + 4)?,
            digest: field(m + 5)?.to_string(),
            timed_out: field(m + 6)?.parse().map_err(|e| bad(format!("row {}: {e}", i + 1)))?,
        });
    }
    Ok(BenchReport { rows })
}
