//! Acceptance criteria, run in order on one thread. Each prints one line:
//! `[PASS] <n> <name>: <details>` or `[FAIL] ...`. The process exits non-zero
//! if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kgdoc::bench::random::{random_kg, random_query, RandomKgConfig};
use kgdoc::bench::{
    generate_kg, generate_workload, run_benchmark, BenchConfig, BenchReport, GeneratorConfig, WorkloadQuery,
};
use kgdoc::fixtures::{landmarks, SO_QUERY, SS_QUERY, TYPE_QUERY};
use kgdoc::json::{serialize_ndjson, JsonError, Representation, DEFAULT_MAX_DOC_BYTES};
use kgdoc::ntriples::{KnowledgeGraph, Term, Triple};
use kgdoc::query::{execute, oracle_execute, parse_query, PatternTerm, Query, QueryKind, ResultSet, Strategy};
use kgdoc::repr::{build, build_cnv, check_equivalence, extract_triples, BuildOptions, ReprError};
use kgdoc::store::Store;

const LANDMARKS_BUDGET: Duration = Duration::from_secs(1);
const ROUND_TRIP_CASES: usize = 200;
const ROUND_TRIP_MAX_TRIPLES: usize = 1000;
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(120);
const ORACLE_CASES: usize = 100;
const ORACLE_MAX_TRIPLES: usize = 500;
const ORACLE_MAX_PATTERNS: usize = 4;
const ORACLE_BUDGET: Duration = Duration::from_secs(300);
/// Gives about 100K triples.
const TREND_PRODUCTS: usize = 9000;
const TREND_SEED: u64 = 42;
const TREND_MIN_TRIPLES: usize = 90_000;
const TREND_MAX_TRIPLES: usize = 130_000;
const RUNS: usize = 5;
const MIN_SPEEDUP: f64 = 3.0;
const TREND_BUDGET: Duration = Duration::from_secs(600);
const CLIQUE_SIZE: usize = 20;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn stores_for(kg: &KnowledgeGraph) -> Vec<Store> {
    Representation::ALL
        .into_iter()
        .map(|r| Store::load(build(kg, r, &BuildOptions::default()).unwrap()).unwrap())
        .collect()
}

fn cells(store: &Store) -> impl Iterator<Item = Strategy> {
    Strategy::compatible(store.representation()).into_iter().chain([Strategy::Auto])
}

fn landmarks_suite() -> Outcome {
    let start = Instant::now();
    let kg = landmarks();
    let iri = |s: &str| Term::iri(s).unwrap();
    let expected = [
        (TYPE_QUERY, "Ins", Term::literal("Statue")),
        (SS_QUERY, "x", iri("StatueOfLiberty")),
        (SO_QUERY, "y", iri("StatueOfLiberty")),
    ];
    let mut runs = 0;
    for store in stores_for(&kg) {
        for (text, var, value) in &expected {
            let q = parse_query(text).unwrap();
            let want = ResultSet::new(vec![(*var).into()], [vec![value.clone()]]);
            for strategy in cells(&store) {
                let (got, _) = execute(&store, &q, strategy).map_err(|e| e.to_string())?;
                ensure!(got == want, "{}/{strategy}: got {}", store.representation(), got.to_tsv());
                runs += 1;
            }
        }
    }
    let cnv = build_cnv(&kg, 5).unwrap();
    ensure!(cnv.len() == 3, "CNV has {} documents", cnv.len());
    for doc in cnv.documents() {
        ensure!(doc.to_line().contains("\"biggest_city_is\""), "biggest_city_is missing from {}", doc.id());
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < LANDMARKS_BUDGET, "took {elapsed:?}");
    Ok(format!("{runs} (representation, strategy, query) runs exact; 3 CNV docs all mention biggest_city_is; {elapsed:.1?}"))
}

fn round_trip_property() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total = 0;
    for case in 0..ROUND_TRIP_CASES {
        let max_triples = rng.gen_range(1..=ROUND_TRIP_MAX_TRIPLES);
        // small cases are dense with cycles, large ones sparse enough that
        // CNV expansion stays within the size limit
        let cfg = RandomKgConfig {
            max_triples,
            entities: (max_triples / 3).max(rng.gen_range(2..8)),
            predicates: rng.gen_range(1..8),
            link_rate: rng.gen_range(0.2..0.8),
        };
        let kg = random_kg(&mut rng, &cfg);
        ensure!(kg.len() <= ROUND_TRIP_MAX_TRIPLES, "case {case} has {} triples", kg.len());
        total += kg.len();
        let colls: Vec<_> = Representation::ALL
            .into_iter()
            .map(|r| build(&kg, r, &BuildOptions::default()).map_err(|e| format!("case {case} {r}: {e}")))
            .collect::<Result<_, _>>()?;
        for c in &colls {
            let back = extract_triples(c).map_err(|e| e.to_string())?;
            ensure!(back == kg, "case {case}: {} round trip differs", c.representation());
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let rep = check_equivalence(&colls[i], &colls[j]).map_err(|e| e.to_string())?;
            ensure!(rep.equivalent, "case {case}: {} vs {} not equivalent", colls[i].representation(), colls[j].representation());
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < ROUND_TRIP_BUDGET, "took {elapsed:?}");
    Ok(format!("{ROUND_TRIP_CASES} graphs ({total} triples) round-trip under SNV/DT/CNV, 3 pairs equivalent each; {elapsed:.1?}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut executions = 0;
    let mut nonempty = 0;
    for case in 0..ORACLE_CASES {
        let cfg = RandomKgConfig {
            max_triples: ORACLE_MAX_TRIPLES,
            entities: rng.gen_range(5..120),
            predicates: rng.gen_range(1..6),
            link_rate: rng.gen_range(0.3..0.8),
        };
        let kg = random_kg(&mut rng, &cfg);
        let n = rng.gen_range(1..=ORACLE_MAX_PATTERNS);
        let q = random_query(&mut rng, &kg, n);
        let want = oracle_execute(&kg, &q);
        if !want.is_empty() {
            nonempty += 1;
        }
        for store in stores_for(&kg) {
            for strategy in cells(&store) {
                let (got, _) = execute(&store, &q, strategy).map_err(|e| format!("case {case}: {e}"))?;
                ensure!(
                    got == want,
                    "case {case} {}/{strategy} on {q}: {} rows vs oracle {}",
                    store.representation(),
                    got.len(),
                    want.len()
                );
                executions += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < ORACLE_BUDGET, "took {elapsed:?}");
    Ok(format!("{executions} executions over {ORACLE_CASES} cases equal the oracle ({nonempty} non-empty); {elapsed:.1?}"))
}

fn cardinality(kg: &KnowledgeGraph) -> Result<(), String> {
    let subjects: BTreeSet<&Term> = kg.iter().map(|t| &t.subject).collect();
    for repr in Representation::ALL {
        let coll = build(kg, repr, &BuildOptions::default()).map_err(|e| e.to_string())?;
        let want = match repr {
            Representation::Dt => kg.len(),
            _ => subjects.len(),
        };
        ensure!(coll.len() == want, "{repr}: {} docs, expected {want}", coll.len());
    }
    Ok(())
}

fn cardinality_identities(big: &KnowledgeGraph) -> Outcome {
    let mut graphs = 1;
    cardinality(big)?;
    for (n, seed, h) in [(1, 0, 0.0), (7, 1, 0.5), (100, 2, 0.0), (1000, 3, 0.25), (3000, 4, 0.5)] {
        cardinality(&generate_kg(&GeneratorConfig::new(n, seed).with_heterogeneity(h)))?;
        graphs += 1;
    }
    Ok(format!("|SNV| = |CNV| = subjects and |DT| = triples on {graphs} generated graphs"))
}

struct Trend {
    kg: KnowledgeGraph,
    workload: Vec<WorkloadQuery>,
    report: BenchReport,
    elapsed: Duration,
}

fn trend_setup() -> Result<Trend, String> {
    let start = Instant::now();
    let kg = generate_kg(&GeneratorConfig::new(TREND_PRODUCTS, TREND_SEED));
    let workload = generate_workload(&kg).map_err(|e| e.to_string())?;
    let stores = stores_for(&kg);
    let cfg = BenchConfig { runs: RUNS, timeout: Duration::from_secs(60), include_oracle: false };
    let report = run_benchmark(&stores, &workload, &cfg).map_err(|e| e.to_string())?;
    Ok(Trend { kg, workload, report, elapsed: start.elapsed() })
}

/// Matches of one pattern on the graph, by brute force.
fn pattern_matches(kg: &KnowledgeGraph, q: &Query, i: usize) -> usize {
    let single = Query::new(q.patterns[i].vars().cloned().collect::<BTreeSet<_>>().into_iter().collect(), vec![q.patterns[i].clone()]).unwrap();
    oracle_execute(kg, &single).len()
}

fn total_mean(t: &Trend, kind: QueryKind, repr: Representation, strategy: Strategy) -> Result<f64, String> {
    let mut sum = 0.0;
    for q in t.workload.iter().filter(|q| q.kind == kind) {
        let row = t.report.row(&q.id, repr, strategy).ok_or(format!("no row for {} {repr}/{strategy}", q.id))?;
        ensure!(!row.timed_out, "{} {repr}/{strategy} timed out", q.id);
        sum += row.mean_ms;
    }
    Ok(sum)
}

fn ss_trend(t: &Trend) -> Outcome {
    ensure!(
        (TREND_MIN_TRIPLES..=TREND_MAX_TRIPLES).contains(&t.kg.len()),
        "graph has {} triples",
        t.kg.len()
    );
    // candidate set: subjects of the rarest constant (p, o) pattern
    let mut po_counts: BTreeMap<(&Term, &Term), usize> = BTreeMap::new();
    for tr in &t.kg {
        *po_counts.entry((&tr.predicate, &tr.object)).or_default() += 1;
    }
    for q in t.workload.iter().filter(|q| q.kind == QueryKind::SS) {
        let candidates = q
            .query
            .patterns
            .iter()
            .filter_map(|p| match (&p.predicate, &p.object) {
                (PatternTerm::Constant(p), PatternTerm::Constant(o)) => Some(po_counts.get(&(p, o)).copied().unwrap_or(0)),
                _ => None,
            })
            .min()
            .ok_or(format!("{} has no constant (p, o) pattern", q.id))?;
        let snv = t.report.row(&q.id, Representation::Snv, Strategy::SnvSubjectLookup).unwrap();
        ensure!(
            snv.docs_fetched as usize <= candidates,
            "{}: snv-lookup fetched {} docs for {candidates} candidates",
            q.id,
            snv.docs_fetched
        );
        let matches: usize = (0..q.query.patterns.len()).map(|i| pattern_matches(&t.kg, &q.query, i)).sum();
        let hj = t.report.row(&q.id, Representation::Dt, Strategy::HashJoin).unwrap();
        ensure!(
            hj.entries_scanned as usize >= matches,
            "{}: DT hash-join scanned {} < {matches} pattern matches",
            q.id,
            hj.entries_scanned
        );
    }
    let fast = total_mean(t, QueryKind::SS, Representation::Snv, Strategy::SnvSubjectLookup)?;
    let slow = total_mean(t, QueryKind::SS, Representation::Dt, Strategy::HashJoin)?;
    let speedup = slow / fast;
    ensure!(speedup >= MIN_SPEEDUP, "snv-lookup {fast:.3} ms vs DT hash-join {slow:.3} ms: {speedup:.2}x");
    ensure!(t.elapsed < TREND_BUDGET, "took {:?}", t.elapsed);
    Ok(format!(
        "{} triples; SS workload snv-lookup {fast:.3} ms vs DT hash-join {slow:.3} ms = {speedup:.1}x (>= {MIN_SPEEDUP}x); counter bounds hold",
        t.kg.len()
    ))
}

fn so_trend(t: &Trend) -> Outcome {
    for q in t.workload.iter().filter(|q| q.kind == QueryKind::SO) {
        let row = t.report.row(&q.id, Representation::Cnv, Strategy::CnvPathLookup).unwrap();
        ensure!(row.index_probes == 1, "{}: cnv-path made {} index probes", q.id, row.index_probes);
    }
    let fast = total_mean(t, QueryKind::SO, Representation::Cnv, Strategy::CnvPathLookup)?;
    let slow = total_mean(t, QueryKind::SO, Representation::Dt, Strategy::IndexNestedLoop)?;
    let speedup = slow / fast;
    ensure!(speedup >= MIN_SPEEDUP, "cnv-path {fast:.3} ms vs DT index-nested-loop {slow:.3} ms: {speedup:.2}x");
    Ok(format!(
        "SO workload cnv-path {fast:.3} ms vs DT index-nested-loop {slow:.3} ms = {speedup:.1}x (>= {MIN_SPEEDUP}x); 1 path probe per chain query"
    ))
}

fn benchmark_integrity(t: &Trend) -> Outcome {
    let mut digests = 0;
    for q in &t.workload {
        let rows: Vec<_> = t.report.rows_for(&q.id).collect();
        let reprs: BTreeSet<Representation> = rows.iter().map(|r| r.representation).collect();
        ensure!(reprs.len() == 3, "{}: only {} representations", q.id, reprs.len());
        let set: BTreeSet<&str> = rows.iter().map(|r| r.digest.as_str()).collect();
        ensure!(set.len() == 1, "{}: {} distinct digests", q.id, set.len());
        digests += rows.len();
    }
    for r in &t.report.rows {
        ensure!(r.run_ms.len() == RUNS, "{} {}: {} timings", r.query_id, r.cell(), r.run_ms.len());
        ensure!(!r.timed_out, "{} {} timed out", r.query_id, r.cell());
    }
    Ok(format!("{} rows over {} queries; one digest per query; {RUNS} timings per row", digests, t.workload.len()))
}

fn document_size_guard() -> Outcome {
    let mut kg = KnowledgeGraph::new();
    let node = |k: usize| Term::iri(format!("ex:c{k}")).unwrap();
    let link = Term::iri("ex:link").unwrap();
    for a in 0..CLIQUE_SIZE {
        kg.insert(Triple::new(Term::iri("ex:hub").unwrap(), link.clone(), node(a)));
        for b in 0..CLIQUE_SIZE {
            if a != b {
                kg.insert(Triple::new(node(a), link.clone(), node(b)));
            }
        }
    }
    let snv = build(&kg, Representation::Snv, &BuildOptions::default()).map_err(|e| e.to_string())?;
    ensure!(serialize_ndjson(&snv).is_ok(), "SNV of the same graph should fit");
    match build_cnv(&kg, 5) {
        Err(ReprError::Json(JsonError::DocumentTooLarge(id))) => Ok(format!(
            "hub + {CLIQUE_SIZE}-clique ({} triples): CNV document {id} exceeds {DEFAULT_MAX_DOC_BYTES} bytes",
            kg.len()
        )),
        Err(e) => Err(format!("wrong error: {e}")),
        Ok(c) => Err(format!("built {} documents without error", c.len())),
    }
}

fn report(n: usize, name: &str, outcome: std::thread::Result<Outcome>) -> bool {
    let (ok, detail) = match outcome {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(panic) => (
            false,
            panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()),
        ),
    };
    println!("[{}] {n} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() {
    let mut all = true;
    all &= report(1, "landmarks micro-suite", catch_unwind(landmarks_suite));
    all &= report(2, "round-trip property", catch_unwind(round_trip_property));
    all &= report(3, "oracle equivalence", catch_unwind(oracle_equivalence));

    let trend = catch_unwind(trend_setup);
    let trend = match trend {
        Ok(Ok(t)) => Some(t),
        Ok(Err(e)) => {
            println!("trend setup failed: {e}");
            None
        }
        Err(_) => {
            println!("trend setup panicked");
            None
        }
    };
    let big = trend.as_ref().map(|t| t.kg.clone()).unwrap_or_default();
    all &= report(4, "cardinality identities", catch_unwind(|| cardinality_identities(&big)));
    let with_trend = |f: fn(&Trend) -> Outcome| -> Outcome {
        match &trend {
            Some(t) => f(t),
            None => Err("benchmark setup failed".into()),
        }
    };
    all &= report(5, "SS trend", catch_unwind(AssertUnwindSafe(|| with_trend(ss_trend))));
    all &= report(6, "SO trend", catch_unwind(AssertUnwindSafe(|| with_trend(so_trend))));
    all &= report(7, "benchmark integrity", catch_unwind(AssertUnwindSafe(|| with_trend(benchmark_integrity))));
    all &= report(8, "document size guard", catch_unwind(document_size_guard));
    if !all {
        std::process::exit(1);
    }
}
