//! The eight-triple landmark graph, end to end: parse it, lay it out as SNV,
//! DT and CNV documents, and answer the three sample queries on each store.
//!
//!     cargo run --example landmarks

use kgdoc::fixtures::{LANDMARKS_NT, SO_QUERY, SS_QUERY, TYPE_QUERY};
use kgdoc::json::{serialize_ndjson, Representation};
use kgdoc::ntriples::parse_ntriples;
use kgdoc::query::{auto_strategy, execute, parse_query, Strategy};
use kgdoc::repr::{build, BuildOptions};
use kgdoc::store::Store;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = parse_ntriples(LANDMARKS_NT)?;
    println!("{} triples, {} subjects\n", kg.len(), kg.subjects().len());

    for repr in Representation::ALL {
        let coll = build(&kg, repr, &BuildOptions::default())?;
        println!("== {repr}: {} documents", coll.len());
        print!("{}", serialize_ndjson(&coll)?);
        let store = Store::load(coll)?;

        for text in [TYPE_QUERY, SS_QUERY, SO_QUERY] {
            let q = parse_query(text)?;
            let chosen = auto_strategy(&store, &q);
            let (rows, counters) = execute(&store, &q, Strategy::Auto)?;
            println!("-- {q}");
            println!(
                "   auto -> {chosen}: {} row(s), {} probe(s), {} doc(s) fetched",
                rows.len(),
                counters.index_probes,
                counters.docs_fetched
            );
            for line in rows.to_tsv().lines() {
                println!("   {line}");
            }
        }
        println!();
    }
    Ok(())
}
