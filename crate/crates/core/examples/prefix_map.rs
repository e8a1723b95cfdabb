//! Shortening IRIs with a prefix map before building documents, and undoing
//! it afterwards.
//!
//!     cargo run --example prefix_map

use kgdoc::json::serialize_ndjson;
use kgdoc::ntriples::{apply_prefix_map, parse_ntriples, reverse_prefix_map, PrefixMap};
use kgdoc::query::{execute, parse_query, Strategy};
use kgdoc::repr::build_snv;
use kgdoc::store::Store;

const DATA: &str = "\
<http://dbpedia.org/resource/Berlin> <http://dbpedia.org/ontology/country> <http://dbpedia.org/resource/Germany> .
<http://dbpedia.org/resource/Berlin> <http://www.w3.org/2000/01/rdf-schema#label> \"Berlin\"@de .
<http://dbpedia.org/resource/Germany> <http://dbpedia.org/ontology/capital> <http://dbpedia.org/resource/Berlin> .
";

const PREFIXES: &str = "\
http://dbpedia.org/resource/\tdbr
http://dbpedia.org/ontology/\tdbo
http://www.w3.org/2000/01/rdf-schema#\trdfs
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = parse_ntriples(DATA)?;
    let pm = PrefixMap::parse_tsv(PREFIXES)?;
    let short = apply_prefix_map(&kg, &pm)?;
    print!("{}", serialize_ndjson(&build_snv(&short)?)?);

    let store = Store::load(build_snv(&short)?)?;
    let q = parse_query("SELECT ?city ?label WHERE { ?city dbo:country dbr:Germany . ?city rdfs:label ?label }")?;
    let (rows, _) = execute(&store, &q, Strategy::SnvSubjectLookup)?;
    print!("{}", rows.to_tsv());

    assert_eq!(reverse_prefix_map(&short, &pm.reversed())?, kg);
    println!("reversed map restores all {} triples", kg.len());
    Ok(())
}
