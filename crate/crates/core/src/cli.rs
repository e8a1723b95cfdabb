//! The `kgdoc` command line.
//!
//! Exit status: 0 on success, 2 for usage errors (including a strategy that
//! cannot run on the chosen representation), 1 for any other failure.
//! Results go to stdout (or `--out`), diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::random::random_query;
use crate::bench::{
    emit_report, generate_kg, generate_workload, run_benchmark, BenchConfig, GeneratorConfig, ReportFormat,
};
use crate::json::{parse_ndjson, serialize_ndjson, Representation, DEFAULT_MAX_DOC_BYTES};
use crate::ntriples::{apply_prefix_map, parse_ntriples, write_ntriples, KnowledgeGraph, PrefixMap};
use crate::query::{execute, oracle_execute, parse_query, QueryError, Strategy};
use crate::repr::{build, check_equivalence, extract_triples, BuildOptions, DEFAULT_MAX_DEPTH};
use crate::store::Store;

#[derive(Debug, Parser)]
#[command(name = "kgdoc", version, about = "Store and query RDF graphs as JSON documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic e-commerce graph as N-Triples.
    Generate {
        #[arg(long)]
        products: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Chance of dropping each optional predicate, 0 to 0.5.
        #[arg(long, default_value_t = 0.0)]
        heterogeneity: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert N-Triples into an NDJSON document collection.
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        repr: Representation,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        /// TSV of `prefix<TAB>short` lines applied before building.
        #[arg(long)]
        prefix_map: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_DOC_BYTES)]
        max_doc_bytes: usize,
    },
    /// Load a collection and answer one query, printing TSV bindings.
    Query {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        repr: Representation,
        #[arg(long)]
        query: PathBuf,
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DOC_BYTES)]
        max_doc_bytes: usize,
        /// Print index sizes and operation counters to stderr.
        #[arg(long)]
        dump_index_stats: bool,
    },
    /// Time the generated workload over all three representations.
    Bench {
        #[arg(long)]
        kg: PathBuf,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, default_value_t = 60_000)]
        timeout_ms: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
    },
    /// Check round trips, equivalence and strategy agreement on a graph.
    Verify {
        #[arg(long)]
        kg: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        /// Random queries compared against the oracle.
        #[arg(long, default_value_t = 20)]
        queries: usize,
    },
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Failed(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, data: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, data).map_err(|e| Failure::Failed(format!("{}: {e}", p.display()))),
        None => out.write_all(data.as_bytes()).map_err(Failure::from),
    }
}

fn load_kg(path: &Path) -> Result<KnowledgeGraph, Failure> {
    parse_ntriples(&read(path)?).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Failed(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Generate { products, seed, heterogeneity, out: path } => {
            if products == 0 {
                return Err(Failure::Usage("--products must be at least 1".into()));
            }
            if !(0.0..=0.5).contains(&heterogeneity) {
                return Err(Failure::Usage("--heterogeneity must lie in [0, 0.5]".into()));
            }
            let kg = generate_kg(&GeneratorConfig { product_count: products, seed, heterogeneity });
            writeln!(err, "{} triples", kg.len())?;
            emit(out, path.as_deref(), &write_ntriples(&kg))
        }
        Command::Convert { input, repr, out: path, max_depth, prefix_map, max_doc_bytes } => {
            let mut kg = load_kg(&input)?;
            if let Some(pm_path) = prefix_map {
                let pm = PrefixMap::parse_tsv(&read(&pm_path)?)?;
                kg = apply_prefix_map(&kg, &pm)?;
            }
            let coll = build(&kg, repr, &BuildOptions { max_doc_bytes, max_depth })?;
            writeln!(err, "{} {} documents from {} triples", coll.len(), repr, kg.len())?;
            emit(out, path.as_deref(), &serialize_ndjson(&coll)?)
        }
        Command::Query { input, repr, query, strategy, max_depth, max_doc_bytes, dump_index_stats } => {
            let q = parse_query(&read(&query)?)?;
            if !strategy.supports(repr) {
                return Err(Failure::Usage(
                    QueryError::StrategyMismatch { strategy, representation: repr }.to_string(),
                ));
            }
            let coll = parse_ndjson(&read(&input)?, repr, max_doc_bytes)?;
            let store = Store::load_with_depth(coll, max_depth)?;
            let (rs, counters) = execute(&store, &q, strategy).map_err(|e| match e {
                QueryError::StrategyMismatch { .. } => Failure::Usage(e.to_string()),
                e => Failure::Failed(e.to_string()),
            })?;
            if dump_index_stats {
                writeln!(err, "{}", store.stats())?;
                writeln!(err, "index_probes\t{}", counters.index_probes)?;
                writeln!(err, "docs_fetched\t{}", counters.docs_fetched)?;
                writeln!(err, "entries_scanned\t{}", counters.entries_scanned)?;
                writeln!(err, "bindings_materialized\t{}", counters.bindings_materialized)?;
                writeln!(err, "key_comparisons\t{}", counters.key_comparisons)?;
            }
            out.write_all(rs.to_tsv().as_bytes())?;
            Ok(())
        }
        Command::Bench { kg, runs, timeout_ms, out: path, format, max_depth } => {
            if runs == 0 {
                return Err(Failure::Usage("--runs must be at least 1".into()));
            }
            let kg = load_kg(&kg)?;
            let workload = generate_workload(&kg)?;
            let opts = BuildOptions { max_depth, ..BuildOptions::default() };
            let mut stores = Vec::new();
            for repr in Representation::ALL {
                stores.push(Store::load_with_depth(build(&kg, repr, &opts)?, max_depth)?);
            }
            let cfg = BenchConfig { runs, timeout: Duration::from_millis(timeout_ms), include_oracle: false };
            let report = run_benchmark(&stores, &workload, &cfg)?;
            writeln!(err, "{} rows, {} queries", report.rows.len(), workload.len())?;
            emit(out, path.as_deref(), &emit_report(&report, format))
        }
        Command::Verify { kg, max_depth, queries } => verify(&load_kg(&kg)?, max_depth, queries, out, err),
    }
}

fn verify(kg: &KnowledgeGraph, max_depth: usize, queries: usize, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let opts = BuildOptions { max_depth, ..BuildOptions::default() };
    let mut problems = Vec::new();
    let mut colls = Vec::new();
    for repr in Representation::ALL {
        let coll = build(kg, repr, &opts)?;
        if extract_triples(&coll)? != *kg {
            problems.push(format!("{repr} round trip lost or added triples"));
        }
        colls.push(coll);
    }
    let mut equivalent = true;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let report = check_equivalence(&colls[i], &colls[j])?;
        if !report.equivalent {
            equivalent = false;
            problems.push(format!(
                "{} and {} are not equivalent ({} / {} unmatched triples)",
                colls[i].representation(),
                colls[j].representation(),
                report.missing_in_target.len(),
                report.missing_in_source.len()
            ));
        }
    }
    writeln!(
        out,
        "{} SNV docs, {} DT docs, {} CNV docs, equivalent: {}",
        colls[0].len(),
        colls[1].len(),
        colls[2].len(),
        if equivalent { "yes" } else { "no" }
    )?;

    let mut stores = Vec::new();
    for coll in colls {
        stores.push(Store::load_with_depth(coll, max_depth)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    for _ in 0..if kg.is_empty() { 0 } else { queries } {
        let n = rng.gen_range(1..=3);
        let q = random_query(&mut rng, kg, n);
        let expected = oracle_execute(kg, &q);
        for store in &stores {
            for strategy in Strategy::compatible(store.representation()).into_iter().chain([Strategy::Auto]) {
                match execute(store, &q, strategy) {
                    Ok((got, _)) if got == expected => checked += 1,
                    Ok(_) => problems.push(format!("{}/{strategy} disagrees with the oracle on {q}", store.representation())),
                    Err(QueryError::ChainTooLong { .. }) => {}
                    Err(e) => problems.push(format!("{}/{strategy} failed on {q}: {e}", store.representation())),
                }
            }
        }
    }
    writeln!(err, "{checked} strategy runs matched the oracle")?;
    if problems.is_empty() {
        Ok(())
    } else {
        for p in &problems {
            writeln!(err, "{p}")?;
        }
        Err(Failure::Failed(format!("{} verification failures", problems.len())))
    }
}
