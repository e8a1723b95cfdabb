//! Building, serializing and checking document collections.
//!
//! Shows the NDJSON round trip, the triple-level equivalence check between
//! two layouts, the CNV depth cap, and the document size guard.
//!
//!     cargo run --example representations

use kgdoc::fixtures::landmarks;
use kgdoc::json::{parse_ndjson, serialize_ndjson, JsonError, Representation, DEFAULT_MAX_DOC_BYTES};
use kgdoc::ntriples::{KnowledgeGraph, Term, Triple};
use kgdoc::repr::{build_cnv, build_cnv_with, build_dt, build_snv, check_equivalence, extract_triples, BuildOptions, ReprError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = landmarks();

    // NDJSON text parses back into the same documents
    let snv = build_snv(&kg)?;
    let text = serialize_ndjson(&snv)?;
    let back = parse_ndjson(&text, Representation::Snv, DEFAULT_MAX_DOC_BYTES)?;
    assert_eq!(extract_triples(&back)?, kg);
    println!("SNV NDJSON: {} bytes, round trip ok", text.len());

    let dt = build_dt(&kg)?;
    let report = check_equivalence(&snv, &dt)?;
    println!("SNV vs DT equivalent: {}", report.equivalent);
    for m in report.mapping_trace.iter().take(3) {
        println!("  {} -> {}: {}", m.source_doc, m.target_doc, m.triple);
    }

    // a shallower cap stops nesting sooner
    for depth in [1, 2, 5] {
        let cnv = build_cnv(&kg, depth)?;
        let bytes: usize = cnv.documents().iter().map(|d| d.serialized_len()).sum();
        println!("CNV max depth {depth}: {bytes} bytes");
    }

    // A hub pointing into a clique expands combinatorially under CNV.
    let mut hub = KnowledgeGraph::new();
    let node = |k: usize| Term::iri(format!("ex:n{k}")).unwrap();
    let link = Term::iri("ex:link").unwrap();
    for a in 0..12 {
        hub.insert(Triple::new(Term::iri("ex:hub").unwrap(), link.clone(), node(a)));
        for b in 0..12 {
            if a != b {
                hub.insert(Triple::new(node(a), link.clone(), node(b)));
            }
        }
    }
    let opts = BuildOptions { max_doc_bytes: 1_000_000, max_depth: 5 };
    match build_cnv_with(&hub, &opts) {
        Err(ReprError::Json(JsonError::DocumentTooLarge(id))) => {
            println!("CNV of {} triples: document {id} exceeds {} bytes", hub.len(), opts.max_doc_bytes)
        }
        other => println!("unexpected: {other:?}"),
    }
    println!("SNV of the same graph: {} documents", build_snv(&hub)?.len());
    Ok(())
}
