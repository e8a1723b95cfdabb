use std::fmt;

use crate::store::Store;

use super::{PatternTerm, Query, TriplePattern};

/// Queries whose most selective pattern is estimated at or below this many
/// matches are marked selective.
pub const DEFAULT_SELECTIVITY_THRESHOLD: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QueryKind {
    /// Every pattern shares one subject.
    SS,
    /// Patterns connect only through object-to-subject links.
    SO,
    /// Anything else with two or more patterns, typically a mix of both.
    Co,
    SinglePattern,
}

impl QueryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::SS => "SS",
            QueryKind::SO => "SO",
            QueryKind::Co => "Co",
            QueryKind::SinglePattern => "Single",
        }
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for QueryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [QueryKind::SS, QueryKind::SO, QueryKind::Co, QueryKind::SinglePattern]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown query kind {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryClass {
    pub kind: QueryKind,
    pub selective: bool,
}

/// Upper-bound match estimate for one pattern from index sizes alone.
pub(crate) fn estimate_pattern(store: &Store, tp: &TriplePattern) -> usize {
    let s = tp.subject.as_const();
    let p = tp.predicate.as_const();
    let o = tp.object.as_const();
    match (s, p, o) {
        (Some(s), _, _) => store.estimate_subject(s),
        (None, Some(p), Some(o)) => store.estimate_predicate_object(p, o),
        (None, Some(p), None) => store.estimate_predicate(p),
        _ => store.triple_count(),
    }
}

fn subject_object_link(a: &TriplePattern, b: &TriplePattern) -> bool {
    matches!((&a.object, &b.subject), (PatternTerm::Variable(x), PatternTerm::Variable(y)) if x == y)
}

fn shared_subject_var(a: &TriplePattern, b: &TriplePattern) -> bool {
    matches!((&a.subject, &b.subject), (PatternTerm::Variable(x), PatternTerm::Variable(y)) if x == y)
}

/// Whether the patterns form one connected component when only
/// object-to-subject links count as edges.
fn so_connected(patterns: &[TriplePattern]) -> bool {
    let n = patterns.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j]
                && (subject_object_link(&patterns[i], &patterns[j]) || subject_object_link(&patterns[j], &patterns[i]))
            {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn classify_query(q: &Query, store: Option<&Store>) -> QueryClass {
    classify_with_threshold(q, store, DEFAULT_SELECTIVITY_THRESHOLD)
}

pub fn classify_with_threshold(q: &Query, store: Option<&Store>, threshold: usize) -> QueryClass {
    let pats = &q.patterns;
    let kind = if pats.len() < 2 {
        QueryKind::SinglePattern
    } else {
        let pairs = || (0..pats.len()).flat_map(|i| (0..pats.len()).filter(move |&j| j != i).map(move |j| (i, j)));
        let any_so = pairs().any(|(i, j)| subject_object_link(&pats[i], &pats[j]));
        let any_ss = pairs().any(|(i, j)| shared_subject_var(&pats[i], &pats[j]));
        let star = pats.iter().all(|p| p.subject == pats[0].subject);
        if star && !any_so {
            QueryKind::SS
        } else if !any_ss && any_so && so_connected(pats) {
            QueryKind::SO
        } else {
            QueryKind::Co
        }
    };
    let selective = store.is_some_and(|store| {
        pats.iter().map(|p| estimate_pattern(store, p)).min().unwrap_or(0) <= threshold
    });
    QueryClass { kind, selective }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{landmarks, SO_QUERY, SS_QUERY, TYPE_QUERY};
    use crate::query::parse_query;
    use crate::repr::build_snv;

    fn kind(text: &str) -> QueryKind {
        classify_query(&parse_query(text).unwrap(), None).kind
    }

    #[test]
    fn landmarks_kinds() {
        assert_eq!(kind(SS_QUERY), QueryKind::SS);
        assert_eq!(kind(SO_QUERY), QueryKind::SO);
        assert_eq!(kind(TYPE_QUERY), QueryKind::SinglePattern);
    }

    #[test]
    fn combined_and_other_shapes() {
        // star on ?x plus a chain out of it
        assert_eq!(kind("SELECT ?x WHERE { ?x <a> <b> . ?x <c> ?y . ?y <d> ?z }"), QueryKind::Co);
        // object-object join only
        assert_eq!(kind("SELECT ?x WHERE { ?a <p> ?x . ?b <q> ?x }"), QueryKind::Co);
        // disconnected
        assert_eq!(kind("SELECT ?x WHERE { ?x <p> ?y . ?a <q> ?b }"), QueryKind::Co);
        // long chain
        assert_eq!(kind("SELECT ?a WHERE { ?a <p> ?b . ?b <q> ?c . ?c <r> ?d }"), QueryKind::SO);
        // star on a constant subject
        assert_eq!(kind("SELECT ?a WHERE { <s> <p> ?a . <s> <q> ?b }"), QueryKind::SS);
    }

    #[test]
    fn selectivity_needs_store() {
        let q = parse_query(SS_QUERY).unwrap();
        assert!(!classify_query(&q, None).selective);
        let store = Store::load(build_snv(&landmarks()).unwrap()).unwrap();
        assert!(classify_query(&q, Some(&store)).selective);
        assert!(!classify_with_threshold(&q, Some(&store), 0).selective);
    }
}
