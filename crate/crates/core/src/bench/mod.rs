//! Synthetic workloads and timing.

pub mod generator;
pub mod harness;
pub mod random;
pub mod report;
pub mod workload;

pub use generator::{generate_kg, GeneratorConfig, PREDICATES};
pub use harness::{
    bench_strategies, result_digest, run_benchmark, BenchConfig, BenchError, BenchReport, BenchRow, DEFAULT_RUNS,
    DEFAULT_TIMEOUT,
};
pub use report::{emit_report, parse_report_csv, ReportFormat};
pub use workload::{generate_workload, WorkloadError, WorkloadQuery};
