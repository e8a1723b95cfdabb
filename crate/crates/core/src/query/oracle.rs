use std::collections::BTreeMap;

use crate::ntriples::{KnowledgeGraph, Term};

use super::{PatternTerm, Query, ResultSet, Var};

type Partial = BTreeMap<Var, Term>;

fn compatible(pt: &PatternTerm, value: &Term, partial: &Partial) -> bool {
    match pt {
        PatternTerm::Constant(c) => c == value,
        PatternTerm::Variable(v) => partial.get(v).is_none_or(|bound| bound == value),
    }
}

fn unify(pt: &PatternTerm, value: &Term, partial: &mut Partial) -> bool {
    match pt {
        PatternTerm::Constant(c) => c == value,
        PatternTerm::Variable(v) => match partial.get(v) {
            Some(bound) => bound == value,
            None => {
                partial.insert(v.clone(), value.clone());
                true
            }
        },
    }
}

/// Brute-force evaluation: patterns in written order, each one checked
/// against every triple for every partial solution. No indexes.
pub fn oracle_execute(kg: &KnowledgeGraph, q: &Query) -> ResultSet {
    let mut partials: Vec<Partial> = vec![Partial::new()];
    for tp in &q.patterns {
        let mut next = Vec::new();
        for partial in &partials {
            for t in kg {
                if !(compatible(&tp.subject, &t.subject, partial)
                    && compatible(&tp.predicate, &t.predicate, partial)
                    && compatible(&tp.object, &t.object, partial))
                {
                    continue;
                }
                let mut candidate = partial.clone();
                if unify(&tp.subject, &t.subject, &mut candidate)
                    && unify(&tp.predicate, &t.predicate, &mut candidate)
                    && unify(&tp.object, &t.object, &mut candidate)
                {
                    next.push(candidate);
                }
            }
        }
        next.sort();
        next.dedup();
        partials = next;
    }
    let rows = partials
        .into_iter()
        .map(|p| q.projection.iter().map(|v| p[v].clone()).collect::<Vec<_>>());
    ResultSet::new(q.projection.clone(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{landmarks, SS_QUERY, TYPE_QUERY};
    use crate::query::parse_query;

    #[test]
    fn landmarks_answers() {
        let kg = landmarks();
        let r = oracle_execute(&kg, &parse_query(TYPE_QUERY).unwrap());
        assert_eq!(r.to_tsv(), "?Ins\n\"Statue\"\n");
        let r = oracle_execute(&kg, &parse_query(SS_QUERY).unwrap());
        assert_eq!(r.to_tsv(), "?x\n<StatueOfLiberty>\n");
    }

    #[test]
    fn unsatisfiable_and_full_scan() {
        let kg = landmarks();
        let r = oracle_execute(&kg, &parse_query("SELECT ?x WHERE { ?x <located_in> <Mars> }").unwrap());
        assert!(r.is_empty());
        let r = oracle_execute(&kg, &parse_query("SELECT ?a ?b ?c WHERE { ?a ?b ?c }").unwrap());
        assert_eq!(r.len(), 8);
        // repeated variable within one pattern
        let r = oracle_execute(&kg, &parse_query("SELECT ?a WHERE { ?a ?b ?a }").unwrap());
        assert!(r.is_empty());
    }

    #[test]
    fn ground_patterns() {
        let kg = landmarks();
        let hit = parse_query("SELECT * WHERE { <NewYork> <located_in> <UnitedStates> . ?x <known_as> ?y }").unwrap();
        assert_eq!(oracle_execute(&kg, &hit).len(), 1);
        let miss = parse_query("SELECT * WHERE { <NewYork> <located_in> <Mars> . ?x <known_as> ?y }").unwrap();
        assert!(oracle_execute(&kg, &miss).is_empty());
    }
}
