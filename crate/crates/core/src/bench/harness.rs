use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use crate::json::Representation;
use crate::query::{execute_with_deadline, QueryError, QueryKind, ResultSet, Strategy};
use crate::store::{OpCounters, Store};

use super::workload::WorkloadQuery;

pub const DEFAULT_RUNS: usize = 5;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub runs: usize,
    /// Per execution.
    pub timeout: Duration,
    /// Also time the brute-force oracle.
    pub include_oracle: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { runs: DEFAULT_RUNS, timeout: DEFAULT_TIMEOUT, include_oracle: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub query_id: String,
    pub kind: QueryKind,
    pub representation: Representation,
    pub strategy: Strategy,
    /// Wall-clock per run; all zero when the cell timed out.
    pub run_ms: Vec<f64>,
    pub mean_ms: f64,
    pub index_probes: u64,
    pub docs_fetched: u64,
    pub entries_scanned: u64,
    pub bindings_materialized: u64,
    /// Hex SHA-256 of the result's TSV form; empty when timed out.
    pub digest: String,
    pub timed_out: bool,
}

impl BenchRow {
    pub fn cell(&self) -> String {
        format!("{}/{}", self.representation, self.strategy)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn rows_for<'a>(&'a self, query_id: &'a str) -> impl Iterator<Item = &'a BenchRow> + 'a {
        self.rows.iter().filter(move |r| r.query_id == query_id)
    }

    pub fn row(&self, query_id: &str, repr: Representation, strategy: Strategy) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.query_id == query_id && r.representation == repr && r.strategy == strategy)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("query {query_id}: {store_a} and {store_b} returned different results")]
    ResultMismatch { query_id: String, store_a: String, store_b: String },
    #[error("query {query_id} on {cell}: {source}")]
    Query { query_id: String, cell: String, source: QueryError },
    #[error("runs must be at least 1")]
    NoRuns,
    #[error("malformed report: {0}")]
    MalformedReport(String),
}

pub fn result_digest(rs: &ResultSet) -> String {
    hex::encode(Sha256::digest(rs.to_tsv().as_bytes()))
}

/// Strategies timed on a store of representation `repr`.
pub fn bench_strategies(repr: Representation, include_oracle: bool) -> Vec<Strategy> {
    Strategy::compatible(repr).into_iter().filter(|s| include_oracle || *s != Strategy::Oracle).collect()
}

fn run_cell(store: &Store, q: &WorkloadQuery, strategy: Strategy, cfg: &BenchConfig) -> Result<BenchRow, BenchError> {
    let mut run_ms = Vec::with_capacity(cfg.runs);
    let mut last: Option<(ResultSet, OpCounters)> = None;
    let mut timed_out = false;
    for _ in 0..cfg.runs {
        let start = Instant::now();
        match execute_with_deadline(store, &q.query, strategy, Some(start + cfg.timeout)) {
            Ok(out) => {
                run_ms.push(start.elapsed().as_secs_f64() * 1e3);
                last = Some(out);
            }
            Err(QueryError::Timeout) => {
                timed_out = true;
                break;
            }
            Err(source) => {
                return Err(BenchError::Query {
                    query_id: q.id.clone(),
                    cell: format!("{}/{}", store.representation(), strategy),
                    source,
                })
            }
        }
    }
    let (digest, counters) = match (&last, timed_out) {
        (Some((rs, c)), false) => (result_digest(rs), *c),
        _ => {
            run_ms = vec![0.0; cfg.runs];
            (String::new(), OpCounters::default())
        }
    };
    let mean_ms = run_ms.iter().sum::<f64>() / cfg.runs as f64;
    Ok(BenchRow {
        query_id: q.id.clone(),
        kind: q.kind,
        representation: store.representation(),
        strategy,
        run_ms,
        mean_ms,
        index_probes: counters.index_probes,
        docs_fetched: counters.docs_fetched,
        entries_scanned: counters.entries_scanned,
        bindings_materialized: counters.bindings_materialized,
        digest,
        timed_out,
    })
}

/// Times every workload query on every store under each applicable
/// strategy, `cfg.runs` successive runs per cell, one execution at a time.
/// Fails if two cells of one query disagree on the result.
pub fn run_benchmark(stores: &[Store], workload: &[WorkloadQuery], cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    if cfg.runs == 0 {
        return Err(BenchError::NoRuns);
    }
    let mut report = BenchReport::default();
    for q in workload {
        let mut reference: Option<(String, String)> = None;
        for store in stores {
            for strategy in bench_strategies(store.representation(), cfg.include_oracle) {
                let row = run_cell(store, q, strategy, cfg)?;
                if !row.timed_out {
                    match &reference {
                        None => reference = Some((row.cell(), row.digest.clone())),
                        Some((cell, digest)) if *digest != row.digest => {
                            return Err(BenchError::ResultMismatch {
                                query_id: q.id.clone(),
                                store_a: cell.clone(),
                                store_b: row.cell(),
                            })
                        }
                        Some(_) => {}
                    }
                }
                report.rows.push(row);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::generator::{generate_kg, GeneratorConfig};
    use crate::bench::workload::generate_workload;
    use crate::repr::{build_cnv, build_dt, build_snv};

    fn stores(n: usize) -> (Vec<Store>, Vec<WorkloadQuery>) {
        let kg = generate_kg(&GeneratorConfig::new(n, 5));
        let wl = generate_workload(&kg).unwrap();
        let stores = vec![
            Store::load(build_snv(&kg).unwrap()).unwrap(),
            Store::load(build_dt(&kg).unwrap()).unwrap(),
            Store::load(build_cnv(&kg, 5).unwrap()).unwrap(),
        ];
        (stores, wl)
    }

    #[test]
    fn digests_agree_and_runs_recorded() {
        let (stores, wl) = stores(120);
        let cfg = BenchConfig { runs: 3, ..BenchConfig::default() };
        let report = run_benchmark(&stores, &wl, &cfg).unwrap();
        // 3 on SNV, 2 on DT, 3 on CNV
        assert_eq!(report.rows.len(), wl.len() * 8);
        for q in &wl {
            let digests: Vec<&str> = report.rows_for(&q.id).map(|r| r.digest.as_str()).collect();
            assert!(digests.iter().all(|d| *d == digests[0] && d.len() == 64));
        }
        assert!(report.rows.iter().all(|r| r.run_ms.len() == 3 && !r.timed_out));
    }

    #[test]
    fn zero_timeout_marks_cells() {
        let (stores, wl) = stores(60);
        let cfg = BenchConfig { runs: 5, timeout: Duration::ZERO, include_oracle: false };
        let report = run_benchmark(&stores[1..2], &wl[..1], &cfg).unwrap();
        for row in &report.rows {
            assert!(row.timed_out);
            assert_eq!(row.mean_ms, 0.0);
            assert_eq!(row.run_ms, vec![0.0; 5]);
        }
    }

    #[test]
    fn digest_is_canonical() {
        let a = ResultSet::new(vec!["x".into()], [vec![crate::ntriples::Term::literal("b")], vec![crate::ntriples::Term::literal("a")]]);
        let b = ResultSet::new(vec!["x".into()], [vec![crate::ntriples::Term::literal("a")], vec![crate::ntriples::Term::literal("b")]]);
        assert_eq!(result_digest(&a), result_digest(&b));
    }

    #[test]
    fn zero_runs_rejected() {
        let cfg = BenchConfig { runs: 0, ..BenchConfig::default() };
        assert!(matches!(run_benchmark(&[], &[], &cfg), Err(BenchError::NoRuns)));
    }
}
