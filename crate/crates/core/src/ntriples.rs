//! RDF terms, triples and knowledge graphs, plus the line-oriented
//! N-Triples subset used to ship every benchmark graph.
//!
//! Only IRIs (`<...>`) and quoted literals are accepted. A literal may carry a
//! language tag or `^^<datatype>` suffix; the suffix is kept verbatim in
//! [`Term::tag`] and never interpreted.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NtError {
    #[error("line {0}: malformed triple")]
    MalformedLine(usize),
    #[error("line {0}: literal in subject or predicate position")]
    NonIriSubject(usize),
    #[error("invalid IRI {0:?}")]
    InvalidIri(String),
    #[error("prefix map: short name {0:?} used twice")]
    DuplicateShortName(String),
    #[error("prefix map: IRI {0:?} matches two entries of equal length")]
    AmbiguousPrefix(String),
    #[error("prefix map: rewriting {0:?} collides with an existing IRI")]
    PrefixCollision(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Iri,
    Literal,
}

/// An IRI or literal. Equality is exact over kind, lexical form and tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    kind: TermKind,
    lexical: Arc<str>,
    tag: Option<Arc<str>>,
}

/// Characters that may never appear inside an IRI.
fn is_forbidden_iri_char(c: char) -> bool {
    c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

pub fn is_valid_iri(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(is_forbidden_iri_char)
}

impl Term {
    pub fn iri(lexical: impl AsRef<str>) -> Result<Self, NtError> {
        let s = lexical.as_ref();
        if !is_valid_iri(s) {
            return Err(NtError::InvalidIri(s.to_string()));
        }
        Ok(Term { kind: TermKind::Iri, lexical: Arc::from(s), tag: None })
    }

    pub fn literal(lexical: impl AsRef<str>) -> Self {
        Term { kind: TermKind::Literal, lexical: Arc::from(lexical.as_ref()), tag: None }
    }

    /// A literal with a raw suffix such as `@en` or `^^<xsd:int>`.
    pub fn tagged_literal(lexical: impl AsRef<str>, tag: impl AsRef<str>) -> Self {
        Term {
            kind: TermKind::Literal,
            lexical: Arc::from(lexical.as_ref()),
            tag: Some(Arc::from(tag.as_ref())),
        }
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn is_iri(&self) -> bool {
        self.kind == TermKind::Iri
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    /// N-Triples token for this term: `<iri>` or `"escaped"` plus tag.
    pub fn to_ntriples(&self) -> String {
        match self.kind {
            TermKind::Iri => format!("<{}>", self.lexical),
            TermKind::Literal => {
                let mut out = String::with_capacity(self.lexical.len() + 2);
                out.push('"');
                escape_literal_into(&self.lexical, &mut out);
                out.push('"');
                if let Some(tag) = &self.tag {
                    out.push_str(tag);
                }
                out
            }
        }
    }
}

/// Canonical order: lexical form first, then kind, then tag.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lexical
            .cmp(&other.lexical)
            .then(self.kind.cmp(&other.kind))
            .then_with(|| self.tag.cmp(&other.tag))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Iri => f.write_str(&self.lexical),
            TermKind::Literal => f.write_str(&self.to_ntriples()),
        }
    }
}

fn escape_literal_into(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

/// One N-Triples line without the newline.
impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject.to_ntriples(), self.predicate.to_ntriples(), self.object.to_ntriples())
    }
}

impl Triple {
    /// Panics if subject or predicate is a literal.
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        assert!(subject.is_iri() && predicate.is_iri(), "subject and predicate must be IRIs");
        Triple { subject, predicate, object }
    }

    /// Convenience constructor for IRI subject/predicate given as plain text.
    pub fn from_parts(subject: &str, predicate: &str, object: Term) -> Result<Self, NtError> {
        Ok(Triple { subject: Term::iri(subject)?, predicate: Term::iri(predicate)?, object })
    }
}

/// A set of triples in canonical (subject, predicate, object) order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    triples: BTreeSet<Triple>,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn subjects(&self) -> BTreeSet<&Term> {
        self.triples.iter().map(|t| &t.subject).collect()
    }

    pub fn predicates(&self) -> BTreeSet<&Term> {
        self.triples.iter().map(|t| &t.predicate).collect()
    }

    pub fn objects(&self) -> BTreeSet<&Term> {
        self.triples.iter().map(|t| &t.object).collect()
    }

    /// Outgoing edges per subject, in canonical order.
    pub fn by_subject(&self) -> BTreeMap<&Term, Vec<&Triple>> {
        let mut map: BTreeMap<&Term, Vec<&Triple>> = BTreeMap::new();
        for t in &self.triples {
            map.entry(&t.subject).or_default().push(t);
        }
        map
    }
}

impl FromIterator<Triple> for KnowledgeGraph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        KnowledgeGraph { triples: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a KnowledgeGraph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start_matches([' ', '\t']);
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }
}

/// Parses one N-Triples literal token (`"..."` plus optional tag) from the
/// start of `s`, returning the term and the number of bytes consumed.
pub(crate) fn parse_literal_token(s: &str) -> Option<(Term, usize)> {
    let mut chars = s.char_indices();
    if chars.next()?.1 != '"' {
        return None;
    }
    let mut lexical = String::new();
    let end;
    loop {
        let (i, c) = chars.next()?;
        match c {
            '"' => {
                end = i + 1;
                break;
            }
            '\\' => {
                let (_, e) = chars.next()?;
                match e {
                    '"' => lexical.push('"'),
                    '\\' => lexical.push('\\'),
                    'n' => lexical.push('\n'),
                    'r' => lexical.push('\r'),
                    't' => lexical.push('\t'),
                    'u' | 'U' => {
                        let width = if e == 'u' { 4 } else { 8 };
                        let mut code = 0u32;
                        for _ in 0..width {
                            code = code * 16 + chars.next()?.1.to_digit(16)?;
                        }
                        lexical.push(char::from_u32(code)?);
                    }
                    _ => return None,
                }
            }
            '\n' | '\r' => return None,
            c => lexical.push(c),
        }
    }
    let rest = &s[end..];
    if let Some(lang) = rest.strip_prefix('@') {
        let len = lang
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
            .unwrap_or(lang.len());
        if len == 0 {
            return None;
        }
        return Some((Term::tagged_literal(lexical, &rest[..len + 1]), end + len + 1));
    }
    if let Some(dt) = rest.strip_prefix("^^<") {
        let close = dt.find('>')?;
        if !is_valid_iri(&dt[..close]) {
            return None;
        }
        let tag_len = 3 + close + 1;
        return Some((Term::tagged_literal(lexical, &rest[..tag_len]), end + tag_len));
    }
    Some((Term::literal(lexical), end))
}

fn parse_iri_token(cur: &mut Cursor<'_>) -> Option<Term> {
    let rest = cur.rest().strip_prefix('<')?;
    let close = rest.find('>')?;
    let term = Term::iri(&rest[..close]).ok()?;
    cur.pos += close + 2;
    Some(term)
}

fn parse_line(line: &str, line_no: usize) -> Result<Option<Triple>, NtError> {
    let malformed = || NtError::MalformedLine(line_no);
    let mut cur = Cursor { src: line, pos: 0 };
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => return Ok(None),
        _ => {}
    }
    let mut terms = Vec::with_capacity(3);
    for position in 0..3 {
        cur.skip_ws();
        let term = match cur.peek() {
            Some('<') => parse_iri_token(&mut cur).ok_or_else(malformed)?,
            Some('"') => {
                let (term, used) = parse_literal_token(cur.rest()).ok_or_else(malformed)?;
                if position < 2 {
                    return Err(NtError::NonIriSubject(line_no));
                }
                cur.pos += used;
                term
            }
            _ => return Err(malformed()),
        };
        terms.push(term);
    }
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err(malformed());
    }
    cur.pos += 1;
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => {}
        _ => return Err(malformed()),
    }
    let object = terms.pop().unwrap();
    let predicate = terms.pop().unwrap();
    let subject = terms.pop().unwrap();
    Ok(Some(Triple { subject, predicate, object }))
}

/// Parses N-Triples text. Blank lines and `#` comments are skipped, duplicate
/// triples collapse.
pub fn parse_ntriples(text: &str) -> Result<KnowledgeGraph, NtError> {
    let mut kg = KnowledgeGraph::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(t) = parse_line(line.trim_end_matches('\r'), i + 1)? {
            kg.insert(t);
        }
    }
    Ok(kg)
}

/// Emits one line per triple in canonical order.
pub fn write_ntriples(kg: &KnowledgeGraph) -> String {
    let mut out = String::new();
    for t in kg {
        out.push_str(&t.to_string());
        out.push('\n');
    }
    out
}

/// Ordered (prefix IRI, short name) pairs used to shorten long IRIs into
/// `short:rest` form. Longer prefixes win.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: Vec<(String, String)>,
}

impl PrefixMap {
    pub fn new<I, A, B>(entries: I) -> Result<Self, NtError>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let entries: Vec<(String, String)> =
            entries.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        let mut seen = BTreeSet::new();
        for (prefix, short) in &entries {
            if !seen.insert(short.as_str()) {
                return Err(NtError::DuplicateShortName(short.clone()));
            }
            if !is_valid_iri(prefix) || !is_valid_iri(&format!("{short}:")) {
                return Err(NtError::InvalidIri(format!("{prefix} / {short}")));
            }
        }
        Ok(PrefixMap { entries })
    }

    /// Reads `prefix<TAB>short` lines; blank lines and `#` comments skipped.
    pub fn parse_tsv(text: &str) -> Result<Self, NtError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (prefix, short) = line
                .split_once('\t')
                .ok_or(NtError::MalformedLine(i + 1))?;
            entries.push((prefix.trim().to_string(), short.trim().to_string()));
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Shortens a single IRI, or returns `None` when no prefix matches.
    pub fn shorten(&self, iri: &str) -> Result<Option<String>, NtError> {
        let mut best: Option<&(String, String)> = None;
        for entry in &self.entries {
            if !iri.starts_with(entry.0.as_str()) {
                continue;
            }
            match best {
                Some(b) if b.0.len() > entry.0.len() => {}
                Some(b) if b.0.len() == entry.0.len() => {
                    if b.1 != entry.1 {
                        return Err(NtError::AmbiguousPrefix(iri.to_string()));
                    }
                }
                _ => best = Some(entry),
            }
        }
        Ok(best.map(|(prefix, short)| format!("{short}:{}", &iri[prefix.len()..])))
    }

    /// Expands a `short:rest` IRI back to its long form.
    pub fn expand(&self, iri: &str) -> Option<String> {
        let (short, rest) = iri.split_once(':')?;
        self.entries
            .iter()
            .find(|(_, s)| s == short)
            .map(|(prefix, _)| format!("{prefix}{rest}"))
    }

    pub fn reversed(&self) -> ReversePrefixMap<'_> {
        ReversePrefixMap(self)
    }
}

/// The inverse rewriting of a [`PrefixMap`].
pub struct ReversePrefixMap<'a>(&'a PrefixMap);

fn rewrite_iris<F>(kg: &KnowledgeGraph, mut rewrite: F) -> Result<KnowledgeGraph, NtError>
where
    F: FnMut(&str) -> Result<Option<String>, NtError>,
{
    let mut cache: BTreeMap<Term, Term> = BTreeMap::new();
    let mut image: BTreeMap<Term, Term> = BTreeMap::new();
    let mut map_term = |t: &Term| -> Result<Term, NtError> {
        if !t.is_iri() {
            return Ok(t.clone());
        }
        if let Some(done) = cache.get(t) {
            return Ok(done.clone());
        }
        let mapped = match rewrite(t.lexical())? {
            Some(s) => Term::iri(s)?,
            None => t.clone(),
        };
        if let Some(prev) = image.insert(mapped.clone(), t.clone()) {
            if &prev != t {
                return Err(NtError::PrefixCollision(mapped.lexical().to_string()));
            }
        }
        cache.insert(t.clone(), mapped.clone());
        Ok(mapped)
    };
    let mut out = KnowledgeGraph::new();
    for t in kg {
        out.insert(Triple {
            subject: map_term(&t.subject)?,
            predicate: map_term(&t.predicate)?,
            object: map_term(&t.object)?,
        });
    }
    Ok(out)
}

/// Rewrites every IRI with a matching prefix to `short:rest`. Literals are
/// untouched. Fails if two distinct IRIs would collapse into one.
pub fn apply_prefix_map(kg: &KnowledgeGraph, pm: &PrefixMap) -> Result<KnowledgeGraph, NtError> {
    if pm.is_empty() {
        return Ok(kg.clone());
    }
    rewrite_iris(kg, |iri| pm.shorten(iri))
}

/// Expands `short:rest` IRIs back to their long form.
pub fn reverse_prefix_map(
    kg: &KnowledgeGraph,
    rev: &ReversePrefixMap<'_>,
) -> Result<KnowledgeGraph, NtError> {
    if rev.0.is_empty() {
        return Ok(kg.clone());
    }
    rewrite_iris(kg, |iri| Ok(rev.0.expand(iri)))
}
