//! Immutable in-memory document store with ordered indexes.
//!
//! Every index is a sorted array searched by binary search, so each probe
//! costs at most `floor(log2 n) + 1` key comparisons; the comparison count is
//! reported through [`OpCounters`] together with probes, fetched documents,
//! scanned index entries and materialized bindings.
//!
//! Indexes built on load:
//! - subject index: document id to document (SNV/CNV ids are subjects, DT ids
//!   are synthetic)
//! - DT subject index: subject to the DT documents holding its triples
//! - predicate/object index: `(p, o)` to the sorted subjects having that pair
//! - predicate index: `p` to every `(s, o)` pair
//! - path index (CNV only): predicate sequence from a document root to every
//!   node in the document tree

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::json::{DocCollection, JsonDocument, JsonError, JsonValue, Representation};
use crate::ntriples::{KnowledgeGraph, Term};
use crate::repr::{decode_term, extract_triples, ReprError, DEFAULT_MAX_DEPTH, DT_OBJECT, DT_PREDICATE, DT_SUBJECT, ID_NAME};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error("path lookups need a CNV store, this one is {0}")]
    NotACnvStore(Representation),
    #[error("path of length {len} is outside 1..={max}")]
    PathLength { len: usize, max: usize },
}

impl From<JsonError> for StoreError {
    fn from(e: JsonError) -> Self {
        StoreError::Repr(ReprError::Json(e))
    }
}

/// Work counters for one query execution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub index_probes: u64,
    pub docs_fetched: u64,
    pub entries_scanned: u64,
    pub bindings_materialized: u64,
    /// Key comparisons performed inside index probes.
    pub key_comparisons: u64,
}

impl OpCounters {
    pub fn reset(&mut self) {
        *self = OpCounters::default();
    }

    /// Field-wise `self >= earlier`.
    pub fn dominates(&self, earlier: &OpCounters) -> bool {
        self.index_probes >= earlier.index_probes
            && self.docs_fetched >= earlier.docs_fetched
            && self.entries_scanned >= earlier.entries_scanned
            && self.bindings_materialized >= earlier.bindings_materialized
            && self.key_comparisons >= earlier.key_comparisons
    }
}

/// Sorted-array ordered map with counted binary search.
#[derive(Debug, Clone)]
pub struct SortedIndex<K, V> {
    keys: Vec<K>,
    values: Vec<V>,
}

impl<K: Ord, V> SortedIndex<K, V> {
    fn from_btree(map: BTreeMap<K, V>) -> Self {
        let (keys, values) = map.into_iter().unzip();
        SortedIndex { keys, values }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    fn position<Q>(&self, key: &Q, comparisons: &mut u64) -> Option<usize>
    where
        Q: ?Sized + Ord,
        K: std::borrow::Borrow<Q>,
    {
        let (mut lo, mut hi) = (0, self.keys.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            *comparisons += 1;
            match self.keys[mid].borrow().cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn get<Q>(&self, key: &Q, comparisons: &mut u64) -> Option<&V>
    where
        Q: ?Sized + Ord,
        K: std::borrow::Borrow<Q>,
    {
        self.position(key, comparisons).map(|i| &self.values[i])
    }

    /// Lookup without touching any counter, for planning.
    pub fn peek<Q>(&self, key: &Q) -> Option<&V>
    where
        Q: ?Sized + Ord,
        K: std::borrow::Borrow<Q>,
    {
        let mut ignored = 0;
        self.get(key, &mut ignored)
    }
}

/// One walk from a document root: the entities at every intermediate hop and
/// the value at the end.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathHit {
    pub root: Term,
    pub hops: Vec<Term>,
    pub leaf: Term,
}

#[derive(Debug, Default)]
struct PathBucket {
    /// Sorted by (leaf, root, hops).
    entries: Vec<PathHit>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub build_time: Duration,
    pub documents: usize,
    pub subject_index: usize,
    pub dt_subject_index: usize,
    pub predicate_object_index: usize,
    pub predicate_index: usize,
    pub path_index_keys: usize,
    pub path_index_entries: usize,
}

impl std::fmt::Display for LoadStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "documents\t{}", self.documents)?;
        writeln!(f, "subject_index\t{}", self.subject_index)?;
        writeln!(f, "dt_subject_index\t{}", self.dt_subject_index)?;
        writeln!(f, "predicate_object_index\t{}", self.predicate_object_index)?;
        writeln!(f, "predicate_index\t{}", self.predicate_index)?;
        writeln!(f, "path_index_keys\t{}", self.path_index_keys)?;
        writeln!(f, "path_index_entries\t{}", self.path_index_entries)?;
        write!(f, "build_time_ms\t{:.3}", self.build_time.as_secs_f64() * 1e3)
    }
}

/// A loaded, read-only collection plus its indexes.
#[derive(Debug)]
pub struct Store {
    collection: DocCollection,
    max_depth: usize,
    /// Subject of every document (DT: the triple's subject).
    doc_subjects: Vec<Term>,
    /// Root-level (predicate, object) pairs of every document, decoded once.
    doc_pairs: Vec<Vec<(Term, Term)>>,
    subject_index: SortedIndex<String, usize>,
    dt_subject_index: SortedIndex<Term, Vec<usize>>,
    predicate_object_index: SortedIndex<(Term, Term), Vec<Term>>,
    predicate_index: SortedIndex<Term, Vec<(Term, Term)>>,
    path_index: SortedIndex<Vec<Term>, PathBucket>,
    graph: KnowledgeGraph,
    stats: LoadStats,
}

fn decode_root_pairs(repr: Representation, doc: &JsonDocument) -> Result<(Term, Vec<(Term, Term)>), ReprError> {
    let id = doc.id();
    let bad = |reason: &str| ReprError::SchemaViolation { doc_id: id.to_string(), reason: reason.to_string() };
    let iri = |v: Option<&JsonValue>| v.and_then(JsonValue::as_text).and_then(|s| Term::iri(s).ok());
    let atomic = |v: &JsonValue| v.as_text().and_then(decode_term).ok_or_else(|| bad("undecodable value"));
    match repr {
        Representation::Dt => {
            let body = doc.body();
            let s = iri(body.get(DT_SUBJECT)).ok_or_else(|| bad("Subject"))?;
            let p = iri(body.get(DT_PREDICATE)).ok_or_else(|| bad("Predicate"))?;
            let o = atomic(body.get(DT_OBJECT).ok_or_else(|| bad("Object"))?)?;
            Ok((s, vec![(p, o)]))
        }
        Representation::Snv | Representation::Cnv => {
            let s = Term::iri(id).map_err(|_| bad("id is not an IRI"))?;
            let mut pairs = Vec::new();
            for (name, value) in doc.pairs() {
                if name == ID_NAME {
                    continue;
                }
                let p = Term::iri(name).map_err(|_| bad("name is not an IRI"))?;
                let items: &[JsonValue] = match value {
                    JsonValue::Array(items) => items,
                    v => std::slice::from_ref(v),
                };
                for item in items {
                    let o = match item {
                        JsonValue::Object(_) => iri(item.get(ID_NAME)).ok_or_else(|| bad("nested node id"))?,
                        v => atomic(v)?,
                    };
                    pairs.push((p.clone(), o));
                }
            }
            Ok((s, pairs))
        }
    }
}

struct PathBuilder<'a> {
    max_depth: usize,
    adjacency: &'a BTreeMap<&'a Term, &'a [(Term, Term)]>,
    out: BTreeMap<Vec<Term>, PathBucket>,
}

impl PathBuilder<'_> {
    fn emit(&mut self, seq: &[Term], root: &Term, hops: &[Term], leaf: &Term) {
        self.out.entry(seq.to_vec()).or_default().entries.push(PathHit {
            root: root.clone(),
            hops: hops.to_vec(),
            leaf: leaf.clone(),
        });
    }

    /// Walks a document tree node, recording every prefix sequence.
    fn tree(&mut self, node: &JsonValue, root: &Term, seq: &mut Vec<Term>, hops: &mut Vec<Term>) {
        let Some(pairs) = node.as_object() else { return };
        for (name, value) in pairs {
            if name == ID_NAME {
                continue;
            }
            let Ok(p) = Term::iri(name) else { continue };
            let items: &[JsonValue] = match value {
                JsonValue::Array(items) => items,
                v => std::slice::from_ref(v),
            };
            seq.push(p);
            for item in items {
                match item {
                    JsonValue::Object(_) => {
                        let Some(entity) = item.get(ID_NAME).and_then(JsonValue::as_text).and_then(|s| Term::iri(s).ok()) else {
                            continue;
                        };
                        self.emit(seq, root, hops, &entity);
                        if seq.len() < self.max_depth {
                            hops.push(entity);
                            self.tree(item, root, seq, hops);
                            hops.pop();
                        }
                    }
                    v => {
                        let Some(leaf) = v.as_text().and_then(decode_term) else { continue };
                        self.emit(seq, root, hops, &leaf);
                        // Expansion was cut here (cycle or depth); keep walking
                        // through the entity's own edges up to the depth cap.
                        if leaf.is_iri() && seq.len() < self.max_depth && self.adjacency.contains_key(&leaf) {
                            hops.push(leaf);
                            self.walk(root, seq, hops);
                            hops.pop();
                        }
                    }
                }
            }
            seq.pop();
        }
    }

    fn walk(&mut self, root: &Term, seq: &mut Vec<Term>, hops: &mut Vec<Term>) {
        let entity = hops.last().expect("walk starts at an entity").clone();
        let adjacency = self.adjacency;
        let Some(edges) = adjacency.get(&entity) else { return };
        for (p, o) in edges.iter() {
            seq.push(p.clone());
            self.emit(seq, root, hops, o);
            if o.is_iri() && seq.len() < self.max_depth && adjacency.contains_key(o) {
                hops.push(o.clone());
                self.walk(root, seq, hops);
                hops.pop();
            }
            seq.pop();
        }
    }
}

impl Store {
    /// Loads a collection with the default CNV depth cap.
    pub fn load(collection: DocCollection) -> Result<Store, StoreError> {
        Store::load_with_depth(collection, DEFAULT_MAX_DEPTH)
    }

    pub fn load_with_depth(collection: DocCollection, max_depth: usize) -> Result<Store, StoreError> {
        if max_depth == 0 {
            return Err(ReprError::InvalidDepth.into());
        }
        let started = Instant::now();
        let repr = collection.representation();
        let n = collection.len();

        let mut subject_map = BTreeMap::new();
        let mut doc_subjects = Vec::with_capacity(n);
        let mut doc_pairs = Vec::with_capacity(n);
        for (pos, doc) in collection.documents().iter().enumerate() {
            if subject_map.insert(doc.id().to_string(), pos).is_some() {
                return Err(JsonError::DuplicateId(doc.id().to_string()).into());
            }
            let (s, pairs) = decode_root_pairs(repr, doc)?;
            doc_subjects.push(s);
            doc_pairs.push(pairs);
        }

        let mut dt_subjects: BTreeMap<Term, Vec<usize>> = BTreeMap::new();
        let mut po: BTreeMap<(Term, Term), BTreeSet<Term>> = BTreeMap::new();
        let mut by_predicate: BTreeMap<Term, BTreeSet<(Term, Term)>> = BTreeMap::new();
        for (pos, (s, pairs)) in doc_subjects.iter().zip(&doc_pairs).enumerate() {
            if repr == Representation::Dt {
                dt_subjects.entry(s.clone()).or_default().push(pos);
            }
            for (p, o) in pairs {
                po.entry((p.clone(), o.clone())).or_default().insert(s.clone());
                by_predicate.entry(p.clone()).or_default().insert((s.clone(), o.clone()));
            }
        }

        let mut path_index = BTreeMap::new();
        if repr == Representation::Cnv {
            let adjacency: BTreeMap<&Term, &[(Term, Term)]> =
                doc_subjects.iter().zip(&doc_pairs).map(|(s, p)| (s, p.as_slice())).collect();
            let mut builder = PathBuilder { max_depth, adjacency: &adjacency, out: BTreeMap::new() };
            for (doc, root) in collection.documents().iter().zip(&doc_subjects) {
                builder.tree(doc.body(), root, &mut Vec::new(), &mut Vec::new());
            }
            path_index = builder.out;
            for bucket in path_index.values_mut() {
                bucket.entries.sort_unstable_by(|a, b| {
                    a.leaf.cmp(&b.leaf).then_with(|| a.root.cmp(&b.root)).then_with(|| a.hops.cmp(&b.hops))
                });
                bucket.entries.dedup();
            }
        }

        let graph = extract_triples(&collection)?;
        let subject_index = SortedIndex::from_btree(subject_map);
        let dt_subject_index = SortedIndex::from_btree(dt_subjects);
        let predicate_object_index =
            SortedIndex::from_btree(po.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect());
        let predicate_index =
            SortedIndex::from_btree(by_predicate.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect());
        let path_index = SortedIndex::from_btree(path_index);

        let stats = LoadStats {
            build_time: started.elapsed(),
            documents: n,
            subject_index: subject_index.len(),
            dt_subject_index: dt_subject_index.len(),
            predicate_object_index: predicate_object_index.len(),
            predicate_index: predicate_index.len(),
            path_index_keys: path_index.len(),
            path_index_entries: path_index.values.iter().map(|b| b.entries.len()).sum(),
        };
        Ok(Store {
            collection,
            max_depth,
            doc_subjects,
            doc_pairs,
            subject_index,
            dt_subject_index,
            predicate_object_index,
            predicate_index,
            path_index,
            graph,
            stats,
        })
    }

    pub fn representation(&self) -> Representation {
        self.collection.representation()
    }

    pub fn collection(&self) -> &DocCollection {
        &self.collection
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn stats(&self) -> &LoadStats {
        &self.stats
    }

    /// The triples the collection encodes.
    pub fn graph(&self) -> &KnowledgeGraph {
        &self.graph
    }

    pub fn subject_index(&self) -> &SortedIndex<String, usize> {
        &self.subject_index
    }

    pub fn predicate_object_index_len(&self) -> usize {
        self.predicate_object_index.len()
    }

    /// Number of triples the collection holds.
    pub fn triple_count(&self) -> usize {
        self.graph.len()
    }

    /// Fetches the document whose id is `s`. For DT stores ids are synthetic,
    /// so entity IRIs never match.
    pub fn lookup_subject(&self, s: &str, c: &mut OpCounters) -> Option<&JsonDocument> {
        c.index_probes += 1;
        let pos = *self.subject_index.get(s, &mut c.key_comparisons)?;
        c.docs_fetched += 1;
        Some(&self.collection.documents()[pos])
    }

    /// Subjects having `(p, o)`, canonically sorted.
    pub fn lookup_predicate_object(&self, p: &Term, o: &Term, c: &mut OpCounters) -> &[Term] {
        c.index_probes += 1;
        let key = (p.clone(), o.clone());
        let hits = self
            .predicate_object_index
            .get(&key, &mut c.key_comparisons)
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        c.entries_scanned += hits.len() as u64;
        self.count_dt_fetches(hits.len(), c);
        hits
    }

    /// Every `(s, o)` with predicate `p`.
    pub fn lookup_predicate(&self, p: &Term, c: &mut OpCounters) -> &[(Term, Term)] {
        c.index_probes += 1;
        let hits = self.predicate_index.get(p, &mut c.key_comparisons).map(Vec::as_slice).unwrap_or(&[]);
        c.entries_scanned += hits.len() as u64;
        self.count_dt_fetches(hits.len(), c);
        hits
    }

    /// On DT every index hit is a separate triple document.
    fn count_dt_fetches(&self, hits: usize, c: &mut OpCounters) {
        if self.representation() == Representation::Dt {
            c.docs_fetched += hits as u64;
        }
    }

    /// Outgoing `(p, o)` pairs of entity `s`, through the subject index on
    /// SNV/CNV or the DT subject index (one fetch per triple document) on DT.
    pub fn subject_pairs(&self, s: &Term, c: &mut OpCounters) -> Vec<(Term, Term)> {
        match self.representation() {
            Representation::Dt => {
                c.index_probes += 1;
                let Some(docs) = self.dt_subject_index.get(s, &mut c.key_comparisons) else {
                    return Vec::new();
                };
                c.docs_fetched += docs.len() as u64;
                c.entries_scanned += docs.len() as u64;
                docs.iter().map(|&d| self.doc_pairs[d][0].clone()).collect()
            }
            _ => {
                if !s.is_iri() {
                    return Vec::new();
                }
                match self.fetch_subject_pairs(s.lexical(), c) {
                    Some(pairs) => pairs.to_vec(),
                    None => Vec::new(),
                }
            }
        }
    }

    /// Decoded root-level pairs of the SNV/CNV document rooted at `s`.
    pub fn fetch_subject_pairs(&self, s: &str, c: &mut OpCounters) -> Option<&[(Term, Term)]> {
        debug_assert!(self.representation() != Representation::Dt);
        c.index_probes += 1;
        let pos = *self.subject_index.get(s, &mut c.key_comparisons)?;
        c.docs_fetched += 1;
        let pairs = &self.doc_pairs[pos];
        c.entries_scanned += pairs.len() as u64;
        Some(pairs)
    }

    /// Full collection scan yielding `(s, p, o)` for every stored pair.
    pub fn scan<'a>(&'a self, c: &mut OpCounters) -> impl Iterator<Item = (&'a Term, &'a Term, &'a Term)> + 'a {
        c.docs_fetched += self.doc_pairs.len() as u64;
        c.entries_scanned += self.doc_pairs.iter().map(Vec::len).sum::<usize>() as u64;
        self.doc_subjects
            .iter()
            .zip(&self.doc_pairs)
            .flat_map(|(s, pairs)| pairs.iter().map(move |(p, o)| (s, p, o)))
    }

    /// Distinct subjects, canonically sorted (SNV/CNV: the subject index keys).
    pub fn subjects(&self) -> Vec<Term> {
        let set: BTreeSet<&Term> = self.doc_subjects.iter().collect();
        set.into_iter().cloned().collect()
    }

    /// Walks matching `predicates` from document roots, optionally requiring
    /// the final value to equal `leaf`. One index probe per call.
    pub fn lookup_path(
        &self,
        predicates: &[Term],
        leaf: Option<&Term>,
        c: &mut OpCounters,
    ) -> Result<&[PathHit], StoreError> {
        if self.representation() != Representation::Cnv {
            return Err(StoreError::NotACnvStore(self.representation()));
        }
        if predicates.is_empty() || predicates.len() > self.max_depth {
            return Err(StoreError::PathLength { len: predicates.len(), max: self.max_depth });
        }
        c.index_probes += 1;
        let Some(bucket) = self.path_index.get(predicates, &mut c.key_comparisons) else {
            return Ok(&[]);
        };
        let hits = match leaf {
            None => &bucket.entries[..],
            Some(leaf) => {
                let lo = bucket.entries.partition_point(|h| &h.leaf < leaf);
                let hi = lo + bucket.entries[lo..].partition_point(|h| &h.leaf == leaf);
                c.key_comparisons += (usize::BITS - bucket.entries.len().leading_zeros()) as u64 * 2;
                &bucket.entries[lo..hi]
            }
        };
        c.entries_scanned += hits.len() as u64;
        Ok(hits)
    }

    // -- planning estimates, counter-free --

    pub fn estimate_subject(&self, s: &Term) -> usize {
        match self.representation() {
            Representation::Dt => self.dt_subject_index.peek(s).map_or(0, Vec::len),
            _ => self.subject_index.peek(s.lexical()).map_or(0, |&pos| self.doc_pairs[pos].len()),
        }
    }

    pub fn estimate_predicate_object(&self, p: &Term, o: &Term) -> usize {
        self.predicate_object_index.peek(&(p.clone(), o.clone())).map_or(0, Vec::len)
    }

    pub fn estimate_predicate(&self, p: &Term) -> usize {
        self.predicate_index.peek(p).map_or(0, Vec::len)
    }

    /// Number of distinct subjects.
    pub fn subject_count(&self) -> usize {
        match self.representation() {
            Representation::Dt => self.dt_subject_index.len(),
            _ => self.subject_index.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::landmarks;
    use crate::repr::{build_cnv, build_dt, build_snv};

    fn iri(s: &str) -> Term {
        Term::iri(s).unwrap()
    }

    #[test]
    fn load_landmarks_snv() {
        let store = Store::load(build_snv(&landmarks()).unwrap()).unwrap();
        assert_eq!(store.stats().subject_index, 3);
        assert_eq!(store.stats().predicate_object_index, 8);
        assert_eq!(store.stats().path_index_keys, 0);
    }

    #[test]
    fn load_landmarks_dt() {
        let store = Store::load(build_dt(&landmarks()).unwrap()).unwrap();
        assert_eq!(store.stats().subject_index, 8);
        assert!(store.subject_index().keys().iter().all(|k| k.starts_with('t')));
        assert_eq!(store.stats().dt_subject_index, 3);
        let mut c = OpCounters::default();
        assert!(store.lookup_subject("NewYork", &mut c).is_none());
        assert_eq!(store.subject_pairs(&iri("NewYork"), &mut c).len(), 3);
    }

    #[test]
    fn load_empty() {
        for repr in Representation::ALL {
            let store = Store::load(DocCollection::new(repr, 100)).unwrap();
            let s = store.stats();
            assert_eq!((s.subject_index, s.predicate_object_index, s.path_index_keys), (0, 0, 0));
        }
    }

    #[test]
    fn lookup_subject_counts() {
        let store = Store::load(build_snv(&landmarks()).unwrap()).unwrap();
        let mut c = OpCounters::default();
        let doc = store.lookup_subject("NewYork", &mut c).unwrap();
        assert_eq!(doc.id(), "NewYork");
        assert_eq!((c.index_probes, c.docs_fetched), (1, 1));
        assert!(c.key_comparisons <= 2); // ceil(log2 3) + 1 = 3, binary search needs ≤ 2
        let mut c = OpCounters::default();
        assert!(store.lookup_subject("Paris", &mut c).is_none());
        assert_eq!((c.index_probes, c.docs_fetched), (1, 0));
    }

    #[test]
    fn lookup_predicate_object_examples() {
        let store = Store::load(build_snv(&landmarks()).unwrap()).unwrap();
        let mut c = OpCounters::default();
        assert_eq!(
            store.lookup_predicate_object(&iri("located_in"), &Term::literal("The US"), &mut c),
            [iri("StatueOfLiberty")]
        );
        assert_eq!(c.entries_scanned, 1);
        assert_eq!(
            store.lookup_predicate_object(&iri("instance_of"), &Term::literal("metropolis"), &mut c),
            [iri("NewYork")]
        );
        assert!(store.lookup_predicate_object(&iri("located_in"), &Term::literal("Mars"), &mut c).is_empty());
        // kind matters
        assert!(store.lookup_predicate_object(&iri("located_in"), &Term::literal("NewYork"), &mut c).is_empty());
        assert_eq!(c.entries_scanned, 2);
    }

    #[test]
    fn lookup_path_examples() {
        let store = Store::load(build_cnv(&landmarks(), 5).unwrap()).unwrap();
        let li = iri("located_in");
        let mut c = OpCounters::default();
        let hits = store.lookup_path(&[li.clone(), li.clone()], Some(&iri("UnitedStates")), &mut c).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].root, iri("StatueOfLiberty"));
        assert_eq!(hits[0].hops, [iri("NewYork")]);
        assert_eq!(c.index_probes, 1);

        let hits = store.lookup_path(std::slice::from_ref(&li), None, &mut c).unwrap();
        assert_eq!(hits.len(), 3);
        let roots: Vec<&str> = hits.iter().map(|h| h.root.lexical()).collect();
        assert_eq!(roots.iter().filter(|r| **r == "StatueOfLiberty").count(), 2);
        assert_eq!(roots.iter().filter(|r| **r == "NewYork").count(), 1);

        let long = vec![li.clone(); 6];
        assert_eq!(store.lookup_path(&long, None, &mut c), Err(StoreError::PathLength { len: 6, max: 5 }));
        assert!(matches!(store.lookup_path(&[], None, &mut c), Err(StoreError::PathLength { .. })));

        let snv = Store::load(build_snv(&landmarks()).unwrap()).unwrap();
        assert_eq!(snv.lookup_path(&[li], None, &mut c), Err(StoreError::NotACnvStore(Representation::Snv)));
    }

    #[test]
    fn path_index_walks_through_cycles() {
        // NewYork -> UnitedStates -> NewYork -> UnitedStates is not a simple
        // path, yet chain queries over it must still be answered.
        let store = Store::load(build_cnv(&landmarks(), 5).unwrap()).unwrap();
        let seq = [iri("located_in"), iri("biggest_city_is"), iri("located_in")];
        let mut c = OpCounters::default();
        let hits = store.lookup_path(&seq, None, &mut c).unwrap();
        let roots: BTreeSet<&str> = hits.iter().map(|h| h.root.lexical()).collect();
        assert!(roots.contains("NewYork"));
        assert!(hits.iter().all(|h| h.leaf == iri("UnitedStates")));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let d = JsonDocument::new(JsonValue::Object(vec![("id".into(), JsonValue::text("a"))])).unwrap();
        let coll = DocCollection::from_documents(Representation::Snv, vec![d.clone()], 100).unwrap();
        assert!(Store::load(coll).is_ok());
        assert!(DocCollection::from_documents(Representation::Snv, vec![d.clone(), d], 100).is_err());
    }
}
