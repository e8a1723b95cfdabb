//! Benchmark queries grouped by join shape.
//!
//! Constants are read off the graph (the features, type and producer of the
//! first product, and so on) so every query has answers. Patterns are
//! written most selective first, which keeps the brute-force oracle cheap on
//! large graphs; the index-backed strategies reorder them anyway.

use std::collections::BTreeMap;

use crate::ntriples::{KnowledgeGraph, Term};
use crate::query::{classify_query, oracle_execute, parse_query, Query, QueryKind};

use super::generator::{
    offer_iri, producer_iri, product_iri, review_iri, COUNTRY, PRICE, PRODUCER, PRODUCT_FEATURE, RDF_TYPE, REVIEWER,
};

#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadQuery {
    pub id: String,
    pub kind: QueryKind,
    pub query: Query,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum WorkloadError {
    #[error("graph lacks {0}; was it produced by the generator?")]
    MissingEntity(String),
    #[error("query {id} has no answers on this graph")]
    EmptyResult { id: String },
    #[error("query {id} classifies as {got}, expected {expected}")]
    WrongKind { id: String, expected: QueryKind, got: QueryKind },
}

struct Lookup<'a> {
    by_subject: BTreeMap<&'a Term, Vec<(&'a Term, &'a Term)>>,
}

impl<'a> Lookup<'a> {
    fn new(kg: &'a KnowledgeGraph) -> Self {
        let mut by_subject: BTreeMap<&Term, Vec<(&Term, &Term)>> = BTreeMap::new();
        for t in kg {
            by_subject.entry(&t.subject).or_default().push((&t.predicate, &t.object));
        }
        Lookup { by_subject }
    }

    /// Objects of `(s, p)`, sorted.
    fn objects(&self, s: &str, p: &str) -> Vec<&'a Term> {
        let Ok(s) = Term::iri(s) else { return Vec::new() };
        self.by_subject
            .get(&s)
            .map(|pairs| pairs.iter().filter(|(pp, _)| pp.lexical() == p).map(|(_, o)| *o).collect())
            .unwrap_or_default()
    }

    fn first(&self, s: &str, p: &str) -> Result<String, WorkloadError> {
        self.objects(s, p)
            .into_iter()
            .find(|o| o.is_iri() && !o.lexical().starts_with("bsbm:"))
            .map(|o| o.lexical().to_string())
            .ok_or_else(|| WorkloadError::MissingEntity(format!("{s} {p}")))
    }
}

/// Builds the workload for a generated graph and checks that every query
/// classifies as intended and has a non-empty oracle answer.
pub fn generate_workload(kg: &KnowledgeGraph) -> Result<Vec<WorkloadQuery>, WorkloadError> {
    let l = Lookup::new(kg);
    let p1 = product_iri(1);
    let feature = l.first(&p1, PRODUCT_FEATURE)?;
    let ptype = l.first(&p1, RDF_TYPE)?;
    let producer = l.first(&p1, PRODUCER)?;
    let country = l.first(&producer_iri(1), COUNTRY)?;
    let reviewer = l.first(&review_iri(1), REVIEWER)?;
    let reviewer_country = l.first(&reviewer, COUNTRY)?;

    let texts: Vec<(&str, QueryKind, String)> = vec![
        (
            "ss1",
            QueryKind::SS,
            format!("SELECT ?p ?label WHERE {{ ?p {PRODUCT_FEATURE} {feature} . ?p rdf:type bsbm:Product . ?p rdfs:label ?label }}"),
        ),
        (
            "ss2",
            QueryKind::SS,
            format!("SELECT ?p ?n WHERE {{ ?p {PRODUCER} {producer} . ?p rdf:type {ptype} . ?p bsbm:productPropertyNumeric1 ?n }}"),
        ),
        (
            "so1",
            QueryKind::SO,
            format!("SELECT ?v ?o ?p WHERE {{ ?p rdf:type {ptype} . ?o bsbm:product ?p . ?v bsbm:offers ?o }}"),
        ),
        (
            "so2",
            QueryKind::SO,
            format!(
                "SELECT ?v ?p WHERE {{ ?r {COUNTRY} {country} . ?p {PRODUCER} ?r . ?o bsbm:product ?p . ?v bsbm:offers ?o }}"
            ),
        ),
        (
            "so3",
            QueryKind::SO,
            format!("SELECT ?rev WHERE {{ ?u {COUNTRY} {reviewer_country} . ?rev {REVIEWER} ?u }}"),
        ),
        (
            "co1",
            QueryKind::Co,
            format!(
                "SELECT ?p ?o ?price WHERE {{ ?p {PRODUCT_FEATURE} {feature} . ?p rdf:type bsbm:Product . ?o bsbm:product ?p . ?o {PRICE} ?price }}"
            ),
        ),
        (
            "co2",
            QueryKind::Co,
            format!(
                "SELECT ?p ?rev ?name WHERE {{ ?p {PRODUCER} {producer} . ?p rdfs:label ?l . ?rev bsbm:reviewFor ?p . ?rev {REVIEWER} ?u . ?u foaf:name ?name }}"
            ),
        ),
        (
            "single1",
            QueryKind::SinglePattern,
            format!("SELECT ?label WHERE {{ {} rdfs:label ?label }}", producer_iri(1)),
        ),
        (
            "single2",
            QueryKind::SinglePattern,
            format!("SELECT ?price WHERE {{ {} {PRICE} ?price }}", offer_iri(1)),
        ),
    ];

    let mut out = Vec::with_capacity(texts.len());
    for (id, kind, text) in texts {
        let query = parse_query(&text).expect("workload queries are well formed");
        let got = classify_query(&query, None).kind;
        if got != kind {
            return Err(WorkloadError::WrongKind { id: id.into(), expected: kind, got });
        }
        if oracle_execute(kg, &query).is_empty() {
            return Err(WorkloadError::EmptyResult { id: id.into() });
        }
        out.push(WorkloadQuery { id: id.into(), kind, query });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::generator::{generate_kg, GeneratorConfig};
    use crate::repr::build_snv;
    use crate::store::Store;

    #[test]
    fn two_of_each_kind_and_nonempty() {
        for (n, seed) in [(1, 0), (50, 1), (400, 9)] {
            let kg = generate_kg(&GeneratorConfig::new(n, seed));
            let wl = generate_workload(&kg).unwrap();
            for kind in [QueryKind::SS, QueryKind::SO, QueryKind::Co, QueryKind::SinglePattern] {
                assert!(wl.iter().filter(|q| q.kind == kind).count() >= 2, "{kind} n={n}");
            }
        }
    }

    #[test]
    fn single_pattern_queries_are_selective() {
        let kg = generate_kg(&GeneratorConfig::new(400, 9));
        let store = Store::load(build_snv(&kg).unwrap()).unwrap();
        for q in generate_workload(&kg).unwrap() {
            if q.kind == QueryKind::SinglePattern {
                assert!(classify_query(&q.query, Some(&store)).selective, "{}", q.id);
            }
        }
    }

    #[test]
    fn foreign_graph_is_rejected() {
        let kg = crate::fixtures::landmarks();
        assert!(matches!(generate_workload(&kg), Err(WorkloadError::MissingEntity(_))));
    }
}
