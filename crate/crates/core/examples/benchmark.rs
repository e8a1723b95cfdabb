//! Generate a graph, run the timed workload across all layouts and print the
//! report. Every cell of a query must return the same answer, or the run
//! fails.
//!
//!     cargo run --release --example benchmark -- [products] [csv|table]

use std::time::Duration;

use kgdoc::bench::{
    emit_report, generate_kg, generate_workload, parse_report_csv, run_benchmark, BenchConfig, GeneratorConfig,
    ReportFormat,
};
use kgdoc::json::Representation;
use kgdoc::repr::{build, BuildOptions};
use kgdoc::store::Store;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let products: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let format: ReportFormat = args.next().map(|s| s.parse()).transpose()?.unwrap_or(ReportFormat::Table);

    let kg = generate_kg(&GeneratorConfig::new(products, 7).with_heterogeneity(0.2));
    let workload = generate_workload(&kg)?;
    let stores = Representation::ALL
        .into_iter()
        .map(|r| Ok(Store::load(build(&kg, r, &BuildOptions::default())?)?))
        .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;

    let cfg = BenchConfig { runs: 5, timeout: Duration::from_secs(10), include_oracle: false };
    let report = run_benchmark(&stores, &workload, &cfg)?;
    eprintln!("{} triples, {} rows", kg.len(), report.rows.len());
    print!("{}", emit_report(&report, format));

    let csv = emit_report(&report, ReportFormat::Csv);
    assert_eq!(parse_report_csv(&csv)?, report);
    Ok(())
}
