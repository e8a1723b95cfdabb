//! Small random graphs and queries for property checks.
//!
//! Graphs draw from a tight vocabulary so subjects repeat, objects link back
//! to subjects (including cycles and self-loops), and literals exercise the
//! escaping and tag paths. Queries are grown from actual triples so they
//! usually have answers, with constants turned into shared variables.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ntriples::{KnowledgeGraph, Term, Triple};
use crate::query::{PatternTerm, Query, TriplePattern, Var};

const LITERALS: [(&str, Option<&str>); 8] = [
    ("plain", None),
    ("The US", None),
    ("quote \" and \\ backslash", None),
    ("two\nlines\tand tab", None),
    ("chat", Some("@fr")),
    ("42", Some("^^<xsd:integer>")),
    ("", None),
    ("ünïcödé ✓", None),
];

#[derive(Debug, Clone, Copy)]
pub struct RandomKgConfig {
    pub max_triples: usize,
    pub entities: usize,
    pub predicates: usize,
    /// Probability that an object is an entity rather than a literal.
    pub link_rate: f64,
}

impl Default for RandomKgConfig {
    fn default() -> Self {
        RandomKgConfig { max_triples: 1000, entities: 40, predicates: 6, link_rate: 0.6 }
    }
}

fn entity(k: usize) -> Term {
    Term::iri(format!("ex:e{k}")).unwrap()
}

fn predicate(k: usize) -> Term {
    Term::iri(format!("ex:p{k}")).unwrap()
}

pub fn random_kg<R: Rng>(rng: &mut R, cfg: &RandomKgConfig) -> KnowledgeGraph {
    let target = rng.gen_range(1..=cfg.max_triples.max(1));
    let entities = cfg.entities.max(1);
    let mut kg = KnowledgeGraph::new();
    for _ in 0..target {
        let s = entity(rng.gen_range(0..entities));
        let p = predicate(rng.gen_range(0..cfg.predicates.max(1)));
        let o = if rng.gen_bool(cfg.link_rate) {
            entity(rng.gen_range(0..entities))
        } else {
            let (lex, tag) = LITERALS[rng.gen_range(0..LITERALS.len())];
            match tag {
                Some(tag) => Term::tagged_literal(lex, tag),
                None => Term::literal(lex),
            }
        };
        kg.insert(Triple::new(s, p, o));
    }
    kg
}

/// A query of `patterns` triple patterns grown from `kg`'s triples.
///
/// Each new pattern starts from a triple connected to the ones already
/// picked when possible. Every distinct subject/object term becomes a
/// variable with probability 0.6 (consistently, so joins appear),
/// predicates with probability 0.2, and one constant in ten is swapped for
/// an unknown term so empty answers occur too.
pub fn random_query<R: Rng>(rng: &mut R, kg: &KnowledgeGraph, patterns: usize) -> Query {
    let triples: Vec<&Triple> = kg.iter().collect();
    assert!(!triples.is_empty(), "random_query needs a non-empty graph");
    let mut picked: Vec<&Triple> = vec![triples[rng.gen_range(0..triples.len())]];
    while picked.len() < patterns.max(1) {
        let linked: Vec<&Triple> = triples
            .iter()
            .copied()
            .filter(|t| {
                picked.iter().any(|p| t.subject == p.subject || t.subject == p.object || t.object == p.subject)
            })
            .collect();
        let next = if !linked.is_empty() && rng.gen_bool(0.8) {
            *linked.choose(rng).unwrap()
        } else {
            *triples.choose(rng).unwrap()
        };
        picked.push(next);
    }

    let mut names: BTreeMap<Term, Option<Var>> = BTreeMap::new();
    let mut counter = 0;
    let mut convert = |t: &Term, var_rate: f64, rng: &mut R| -> PatternTerm {
        let slot = names.entry(t.clone()).or_insert_with(|| {
            if rng.gen_bool(var_rate) {
                counter += 1;
                Some(Var::from(format!("v{counter}")))
            } else {
                None
            }
        });
        match slot {
            Some(v) => PatternTerm::Variable(v.clone()),
            None if rng.gen_bool(0.1) && t.is_iri() => PatternTerm::Constant(Term::iri("ex:missing").unwrap()),
            None => PatternTerm::Constant(t.clone()),
        }
    };
    let mut pats = Vec::with_capacity(picked.len());
    for t in picked {
        let s = convert(&t.subject, 0.6, rng);
        let p = convert(&t.predicate, 0.2, rng);
        let o = convert(&t.object, 0.6, rng);
        pats.push(TriplePattern::new(s, p, o));
    }
    let probe = Query { projection: Vec::new(), patterns: pats };
    let vars = probe.variables();
    let projection: Vec<Var> = if vars.is_empty() || rng.gen_bool(0.5) {
        vars
    } else {
        let keep: Vec<Var> = vars.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if keep.is_empty() {
            vec![vars[0].clone()]
        } else {
            keep
        }
    };
    Query::new(projection, probe.patterns).expect("projection drawn from pattern variables")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::query::oracle_execute;

    #[test]
    fn respects_size_and_is_seeded() {
        let cfg = RandomKgConfig { max_triples: 50, ..Default::default() };
        let a = random_kg(&mut ChaCha8Rng::seed_from_u64(1), &cfg);
        let b = random_kg(&mut ChaCha8Rng::seed_from_u64(1), &cfg);
        assert_eq!(a, b);
        assert!(!a.is_empty() && a.len() <= 50);
    }

    #[test]
    fn queries_often_have_answers() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut answered = 0;
        for _ in 0..50 {
            let kg = random_kg(&mut rng, &RandomKgConfig { max_triples: 200, ..Default::default() });
            let n = rng.gen_range(1..=4);
            let q = random_query(&mut rng, &kg, n);
            assert_eq!(q.patterns.len(), n);
            if !oracle_execute(&kg, &q).is_empty() {
                answered += 1;
            }
        }
        assert!(answered >= 25, "{answered}");
    }
}
