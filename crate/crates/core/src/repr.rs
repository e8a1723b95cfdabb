//! Builds the SNV, DT and CNV document collections from a knowledge graph and
//! inverts them back to triples.
//!
//! Term encoding inside documents: an IRI is written as its bare lexical form,
//! a literal as its N-Triples token (`"text"`, `"chat"@fr`, ...). IRIs can
//! never start with a double quote, so the encoding is unambiguous.
//!
//! CNV documents expand an IRI object in place when it is itself a subject,
//! unless it already occurs on the current root-to-node path or the hop count
//! has reached the depth cap. Cut objects are written atomically.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::json::{DocCollection, JsonDocument, JsonError, JsonValue, Representation, DEFAULT_MAX_DOC_BYTES};
use crate::ntriples::{parse_literal_token, KnowledgeGraph, Term, Triple};

pub const DEFAULT_MAX_DEPTH: usize = 5;

/// Name carrying the document identifier in every representation.
pub const ID_NAME: &str = "id";
pub const DT_SUBJECT: &str = "Subject";
pub const DT_PREDICATE: &str = "Predicate";
pub const DT_OBJECT: &str = "Object";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReprError {
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("document {doc_id:?} violates the schema: {reason}")]
    SchemaViolation { doc_id: String, reason: String },
    #[error("predicate {0:?} clashes with the reserved document id name")]
    ReservedPredicate(String),
    #[error("max depth must be at least 1")]
    InvalidDepth,
}

fn violation(doc_id: &str, reason: impl Into<String>) -> ReprError {
    ReprError::SchemaViolation { doc_id: doc_id.to_string(), reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub max_doc_bytes: usize,
    /// Longest predicate chain a CNV document spells out from its root.
    pub max_depth: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_doc_bytes: DEFAULT_MAX_DOC_BYTES, max_depth: DEFAULT_MAX_DEPTH }
    }
}

pub fn encode_term(term: &Term) -> String {
    if term.is_iri() {
        term.lexical().to_string()
    } else {
        term.to_ntriples()
    }
}

pub fn decode_term(text: &str) -> Option<Term> {
    if text.starts_with('"') {
        match parse_literal_token(text) {
            Some((term, used)) if used == text.len() => Some(term),
            _ => None,
        }
    } else {
        Term::iri(text).ok()
    }
}

fn collapse(mut values: Vec<JsonValue>) -> JsonValue {
    if values.len() == 1 {
        values.pop().unwrap()
    } else {
        JsonValue::Array(values)
    }
}

fn check_reserved(kg: &KnowledgeGraph) -> Result<(), ReprError> {
    match kg.predicates().into_iter().find(|p| p.lexical() == ID_NAME) {
        Some(p) => Err(ReprError::ReservedPredicate(p.lexical().to_string())),
        None => Ok(()),
    }
}

/// Groups a subject's outgoing triples by predicate, both in canonical order.
fn group_by_predicate<'a>(triples: &[&'a Triple]) -> Vec<(&'a Term, Vec<&'a Term>)> {
    let mut groups: Vec<(&Term, Vec<&Term>)> = Vec::new();
    for t in triples {
        match groups.last_mut() {
            Some((p, objs)) if *p == &t.predicate => objs.push(&t.object),
            _ => groups.push((&t.predicate, vec![&t.object])),
        }
    }
    groups
}

pub fn build(kg: &KnowledgeGraph, repr: Representation, opts: &BuildOptions) -> Result<DocCollection, ReprError> {
    match repr {
        Representation::Snv => build_snv_with(kg, opts),
        Representation::Dt => build_dt_with(kg, opts),
        Representation::Cnv => build_cnv_with(kg, opts),
    }
}

pub fn build_snv(kg: &KnowledgeGraph) -> Result<DocCollection, ReprError> {
    build_snv_with(kg, &BuildOptions::default())
}

pub fn build_dt(kg: &KnowledgeGraph) -> Result<DocCollection, ReprError> {
    build_dt_with(kg, &BuildOptions::default())
}

pub fn build_cnv(kg: &KnowledgeGraph, max_depth: usize) -> Result<DocCollection, ReprError> {
    build_cnv_with(kg, &BuildOptions { max_depth, ..BuildOptions::default() })
}

pub fn build_snv_with(kg: &KnowledgeGraph, opts: &BuildOptions) -> Result<DocCollection, ReprError> {
    check_reserved(kg)?;
    let mut docs = Vec::new();
    for (subject, triples) in kg.by_subject() {
        let mut pairs = vec![(ID_NAME.to_string(), JsonValue::text(subject.lexical()))];
        for (predicate, objects) in group_by_predicate(&triples) {
            let values = objects.into_iter().map(|o| JsonValue::Text(encode_term(o))).collect();
            pairs.push((predicate.lexical().to_string(), collapse(values)));
        }
        docs.push(JsonDocument::new(JsonValue::Object(pairs))?);
    }
    Ok(DocCollection::from_documents(Representation::Snv, docs, opts.max_doc_bytes)?)
}

pub fn dt_id(index: usize) -> String {
    format!("t{index}")
}

pub fn build_dt_with(kg: &KnowledgeGraph, opts: &BuildOptions) -> Result<DocCollection, ReprError> {
    let docs = kg
        .iter()
        .enumerate()
        .map(|(k, t)| {
            JsonDocument::new(JsonValue::Object(vec![
                (ID_NAME.to_string(), JsonValue::text(dt_id(k))),
                (DT_SUBJECT.to_string(), JsonValue::text(t.subject.lexical())),
                (DT_PREDICATE.to_string(), JsonValue::text(t.predicate.lexical())),
                (DT_OBJECT.to_string(), JsonValue::Text(encode_term(&t.object))),
            ]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DocCollection::from_documents(Representation::Dt, docs, opts.max_doc_bytes)?)
}

struct CnvBuilder<'a> {
    adjacency: BTreeMap<&'a Term, Vec<(&'a Term, Vec<&'a Term>)>>,
    max_depth: usize,
    max_bytes: usize,
}

impl<'a> CnvBuilder<'a> {
    /// Expands `entity` whose node sits `depth` hops below the root. Returns
    /// the node and its serialized size, failing as soon as the size passes
    /// the document limit.
    fn node(
        &self,
        root: &Term,
        entity: &'a Term,
        depth: usize,
        on_path: &mut Vec<&'a Term>,
    ) -> Result<(JsonValue, usize), ReprError> {
        let too_large = || ReprError::Json(JsonError::DocumentTooLarge(root.lexical().to_string()));
        let id = JsonValue::text(entity.lexical());
        let mut size = 2 + 4 + 1 + id.serialized_len();
        let mut pairs = vec![(ID_NAME.to_string(), id)];
        on_path.push(entity);
        let empty = Vec::new();
        for (predicate, objects) in self.adjacency.get(entity).unwrap_or(&empty) {
            let mut values = Vec::with_capacity(objects.len());
            let mut values_size = 0;
            for &object in objects {
                let hop = depth + 1;
                let nest = object.is_iri()
                    && hop < self.max_depth
                    && self.adjacency.contains_key(object)
                    && !on_path.contains(&object);
                let (value, len) = if nest {
                    self.node(root, object, hop, on_path)?
                } else {
                    let v = JsonValue::Text(encode_term(object));
                    let len = v.serialized_len();
                    (v, len)
                };
                values_size += len;
                if size + values_size > self.max_bytes {
                    return Err(too_large());
                }
                values.push(value);
            }
            let name = JsonValue::text(predicate.lexical());
            size += 1 + name.serialized_len() + 1 + values_size;
            if values.len() > 1 {
                size += 2 + values.len() - 1;
            }
            if size > self.max_bytes {
                return Err(too_large());
            }
            pairs.push((predicate.lexical().to_string(), collapse(values)));
        }
        on_path.pop();
        Ok((JsonValue::Object(pairs), size))
    }
}

pub fn build_cnv_with(kg: &KnowledgeGraph, opts: &BuildOptions) -> Result<DocCollection, ReprError> {
    if opts.max_depth == 0 {
        return Err(ReprError::InvalidDepth);
    }
    check_reserved(kg)?;
    let adjacency: BTreeMap<&Term, Vec<(&Term, Vec<&Term>)>> = kg
        .by_subject()
        .into_iter()
        .map(|(s, triples)| (s, group_by_predicate(&triples)))
        .collect();
    let builder = CnvBuilder { adjacency, max_depth: opts.max_depth, max_bytes: opts.max_doc_bytes };
    let mut docs = Vec::with_capacity(builder.adjacency.len());
    let mut on_path = Vec::with_capacity(opts.max_depth + 1);
    for &subject in builder.adjacency.keys() {
        let (body, size) = builder.node(subject, subject, 0, &mut on_path)?;
        debug_assert_eq!(size, body.serialized_len());
        docs.push(JsonDocument::new(body)?);
    }
    Ok(DocCollection::from_documents(Representation::Cnv, docs, opts.max_doc_bytes)?)
}

/// A triple occurrence and the document it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub triple: Triple,
    pub doc_id: String,
}

fn decode_atomic(doc_id: &str, value: &JsonValue) -> Result<Term, ReprError> {
    match value {
        JsonValue::Text(s) => decode_term(s).ok_or_else(|| violation(doc_id, format!("undecodable term {s:?}"))),
        _ => Err(violation(doc_id, "expected an atomic text value")),
    }
}

fn iri_text(doc_id: &str, value: Option<&JsonValue>, what: &str) -> Result<Term, ReprError> {
    match value {
        Some(JsonValue::Text(s)) => Term::iri(s).map_err(|_| violation(doc_id, format!("{what} is not an IRI"))),
        _ => Err(violation(doc_id, format!("missing {what}"))),
    }
}

fn values_of<'v>(doc_id: &str, value: &'v JsonValue) -> Result<Vec<&'v JsonValue>, ReprError> {
    match value {
        JsonValue::Array(items) if items.is_empty() => Err(violation(doc_id, "empty array")),
        JsonValue::Array(items) => Ok(items.iter().collect()),
        v => Ok(vec![v]),
    }
}

fn extract_snv_doc(doc: &JsonDocument, out: &mut Vec<Located>) -> Result<(), ReprError> {
    let id = doc.id();
    let subject = iri_text(id, doc.body().get(ID_NAME), "subject id")?;
    for (name, value) in doc.pairs() {
        if name == ID_NAME {
            continue;
        }
        let predicate = Term::iri(name).map_err(|_| violation(id, format!("name {name:?} is not an IRI")))?;
        for v in values_of(id, value)? {
            if matches!(v, JsonValue::Array(_)) {
                return Err(violation(id, "nested array"));
            }
            let object = decode_atomic(id, v)?;
            out.push(Located {
                triple: Triple { subject: subject.clone(), predicate: predicate.clone(), object },
                doc_id: id.to_string(),
            });
        }
    }
    Ok(())
}

fn extract_dt_doc(doc: &JsonDocument, out: &mut Vec<Located>) -> Result<(), ReprError> {
    let id = doc.id();
    let names: Vec<&str> = doc.pairs().iter().map(|(n, _)| n.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    if sorted != [DT_OBJECT, DT_PREDICATE, DT_SUBJECT, ID_NAME] {
        return Err(violation(id, format!("expected exactly id/Subject/Predicate/Object, found {names:?}")));
    }
    let body = doc.body();
    let subject = iri_text(id, body.get(DT_SUBJECT), "Subject")?;
    let predicate = iri_text(id, body.get(DT_PREDICATE), "Predicate")?;
    let object = decode_atomic(id, body.get(DT_OBJECT).expect("checked above"))?;
    out.push(Located { triple: Triple { subject, predicate, object }, doc_id: id.to_string() });
    Ok(())
}

fn extract_cnv_node(doc_id: &str, node: &JsonValue, out: &mut Vec<Located>) -> Result<Term, ReprError> {
    let pairs = node.as_object().ok_or_else(|| violation(doc_id, "node is not an object"))?;
    let subject = iri_text(doc_id, node.get(ID_NAME), "node id")?;
    for (name, value) in pairs {
        if name == ID_NAME {
            continue;
        }
        let predicate = Term::iri(name).map_err(|_| violation(doc_id, format!("name {name:?} is not an IRI")))?;
        for v in values_of(doc_id, value)? {
            let object = match v {
                JsonValue::Object(_) => extract_cnv_node(doc_id, v, out)?,
                JsonValue::Array(_) => return Err(violation(doc_id, "nested array")),
                atomic => decode_atomic(doc_id, atomic)?,
            };
            out.push(Located {
                triple: Triple { subject: subject.clone(), predicate: predicate.clone(), object },
                doc_id: doc_id.to_string(),
            });
        }
    }
    Ok(subject)
}

/// Every triple occurrence in the collection, with duplicates (CNV overlap)
/// retained, in document order.
pub fn extract_located(coll: &DocCollection) -> Result<Vec<Located>, ReprError> {
    let mut out = Vec::new();
    for doc in coll.documents() {
        match coll.representation() {
            Representation::Snv => extract_snv_doc(doc, &mut out)?,
            Representation::Dt => extract_dt_doc(doc, &mut out)?,
            Representation::Cnv => {
                extract_cnv_node(doc.id(), doc.body(), &mut out)?;
            }
        }
    }
    Ok(out)
}

pub fn extract_triples(coll: &DocCollection) -> Result<KnowledgeGraph, ReprError> {
    Ok(extract_located(coll)?.into_iter().map(|l| l.triple).collect())
}

/// One source name/value occurrence and where the target holds the same pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingEntry {
    pub source_doc: String,
    pub target_doc: String,
    pub triple: Triple,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub missing_in_target: Vec<Triple>,
    pub missing_in_source: Vec<Triple>,
    pub mapping_trace: Vec<MappingEntry>,
}

pub fn check_equivalence(source: &DocCollection, target: &DocCollection) -> Result<EquivalenceReport, ReprError> {
    let src = extract_located(source)?;
    let tgt = extract_located(target)?;
    let mut target_home: HashMap<&Triple, &str> = HashMap::with_capacity(tgt.len());
    for l in &tgt {
        target_home.entry(&l.triple).or_insert(&l.doc_id);
    }
    let source_set: HashSet<&Triple> = src.iter().map(|l| &l.triple).collect();

    let mut report = EquivalenceReport::default();
    let mut reported = HashSet::new();
    for l in &src {
        match target_home.get(&l.triple) {
            Some(target_doc) => report.mapping_trace.push(MappingEntry {
                source_doc: l.doc_id.clone(),
                target_doc: target_doc.to_string(),
                triple: l.triple.clone(),
            }),
            None => {
                if reported.insert(&l.triple) {
                    report.missing_in_target.push(l.triple.clone());
                }
            }
        }
    }
    let mut reported = HashSet::new();
    for l in &tgt {
        if !source_set.contains(&l.triple) && reported.insert(&l.triple) {
            report.missing_in_source.push(l.triple.clone());
        }
    }
    report.missing_in_target.sort();
    report.missing_in_source.sort();
    report.equivalent = report.missing_in_target.is_empty() && report.missing_in_source.is_empty();
    Ok(report)
}
