//! Every join strategy on every representation, with operation counters.
//!
//!     cargo run --release --example strategies -- [products]

use std::time::Instant;

use kgdoc::bench::{generate_kg, generate_workload, GeneratorConfig};
use kgdoc::json::Representation;
use kgdoc::query::{execute, Strategy};
use kgdoc::repr::{build, BuildOptions};
use kgdoc::store::Store;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let products = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2000);
    let kg = generate_kg(&GeneratorConfig::new(products, 42));
    let workload = generate_workload(&kg)?;
    println!("{} triples, {} queries", kg.len(), workload.len());

    let mut stores = Vec::new();
    for repr in Representation::ALL {
        let t = Instant::now();
        let store = Store::load(build(&kg, repr, &BuildOptions::default())?)?;
        println!("{repr}: loaded in {:.1?}, {} path index entries", t.elapsed(), store.stats().path_index_entries);
        stores.push(store);
    }

    for q in &workload {
        println!("\n{} ({}): {}", q.id, q.kind, q.query);
        for store in &stores {
            for strategy in Strategy::compatible(store.representation()) {
                if strategy == Strategy::Oracle {
                    continue;
                }
                let t = Instant::now();
                let (rows, c) = execute(store, &q.query, strategy)?;
                println!(
                    "  {:<4}{:<18}{:>9.3} ms  rows {:<5} probes {:<6} docs {:<6} scanned {:<7} bindings {}",
                    store.representation().as_str(),
                    strategy.as_str(),
                    t.elapsed().as_secs_f64() * 1e3,
                    rows.len(),
                    c.index_probes,
                    c.docs_fetched,
                    c.entries_scanned,
                    c.bindings_materialized
                );
            }
        }
    }
    Ok(())
}
