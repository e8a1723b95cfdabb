//! Name/value document trees and their NDJSON collection format.
//!
//! Serialization is byte-deterministic: names are written in stored order and
//! numbers keep their original decimal text. Duplicate names inside one object
//! are rejected on both construction and parsing.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

pub const DEFAULT_MAX_DOC_BYTES: usize = 16_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("document {0:?} exceeds the maximum document size")]
    DocumentTooLarge(String),
    #[error("line {0}: malformed document")]
    MalformedDocument(usize),
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("line {0}: document has no \"id\" pair")]
    MissingId(usize),
    #[error("duplicate name {0:?} in one object")]
    DuplicateName(String),
    #[error("invalid number literal {0:?}")]
    InvalidNumber(String),
    #[error("document body must be an object with an \"id\" text pair equal to {0:?}")]
    BadDocument(String),
    #[error("unknown representation {0:?}")]
    UnknownRepresentation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JsonValue {
    Text(String),
    /// Decimal text exactly as written.
    Number(String),
    Bool(bool),
    Object(Vec<(String, JsonValue)>),
    Array(Vec<JsonValue>),
}

impl JsonValue {
    pub fn text(s: impl Into<String>) -> Self {
        JsonValue::Text(s.into())
    }

    pub fn number(s: impl Into<String>) -> Result<Self, JsonError> {
        let s = s.into();
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        match p.number() {
            Ok(_) if p.pos == s.len() => Ok(JsonValue::Number(s)),
            _ => Err(JsonError::InvalidNumber(s)),
        }
    }

    /// Builds an object, rejecting duplicate names.
    pub fn object(pairs: Vec<(String, JsonValue)>) -> Result<Self, JsonError> {
        check_unique_names(&pairs)?;
        Ok(JsonValue::Object(pairs))
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            JsonValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_object(&self) -> Option<&[(String, JsonValue)]> {
        match self {
            JsonValue::Object(pairs) => Some(pairs),
            _ => None,
        }
    }

    pub fn get(&self, name: &str) -> Option<&JsonValue> {
        self.as_object()?.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, JsonValue::Text(_) | JsonValue::Number(_) | JsonValue::Bool(_))
    }

    pub fn write_to(&self, out: &mut String) {
        match self {
            JsonValue::Text(s) => write_json_string(s, out),
            JsonValue::Number(n) => out.push_str(n),
            JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JsonValue::Object(pairs) => {
                out.push('{');
                for (i, (name, value)) in pairs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_json_string(name, out);
                    out.push(':');
                    value.write_to(out);
                }
                out.push('}');
            }
            JsonValue::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write_to(out);
                }
                out.push(']');
            }
        }
    }

    /// Length in bytes of the serialized form, without allocating it.
    pub fn serialized_len(&self) -> usize {
        match self {
            JsonValue::Text(s) => json_string_len(s),
            JsonValue::Number(n) => n.len(),
            JsonValue::Bool(b) => if *b { 4 } else { 5 },
            JsonValue::Object(pairs) => {
                2 + pairs.len().saturating_sub(1)
                    + pairs
                        .iter()
                        .map(|(n, v)| json_string_len(n) + 1 + v.serialized_len())
                        .sum::<usize>()
            }
            JsonValue::Array(items) => {
                2 + items.len().saturating_sub(1)
                    + items.iter().map(JsonValue::serialized_len).sum::<usize>()
            }
        }
    }

    /// Parses a single JSON value occupying the whole input.
    pub fn parse(text: &str) -> Option<JsonValue> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        p.ws();
        let v = p.value(0).ok()?;
        p.ws();
        (p.pos == text.len()).then_some(v)
    }
}

impl fmt::Display for JsonValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_to(&mut s);
        f.write_str(&s)
    }
}

fn check_unique_names(pairs: &[(String, JsonValue)]) -> Result<(), JsonError> {
    if pairs.len() > 8 {
        let mut seen = HashSet::with_capacity(pairs.len());
        for (n, _) in pairs {
            if !seen.insert(n.as_str()) {
                return Err(JsonError::DuplicateName(n.clone()));
            }
        }
    } else {
        for (i, (n, _)) in pairs.iter().enumerate() {
            if pairs[..i].iter().any(|(m, _)| m == n) {
                return Err(JsonError::DuplicateName(n.clone()));
            }
        }
    }
    Ok(())
}

fn escape_len(c: char) -> usize {
    match c {
        '"' | '\\' | '\n' | '\r' | '\t' | '\u{8}' | '\u{c}' => 2,
        c if (c as u32) < 0x20 => 6,
        c => c.len_utf8(),
    }
}

pub(crate) fn json_string_len(s: &str) -> usize {
    2 + s.chars().map(escape_len).sum::<usize>()
}

pub(crate) fn write_json_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

const MAX_NESTING: usize = 512;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while let Some(b' ' | b'\t' | b'\n' | b'\r') = self.src.get(self.pos) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> Result<(), ()> {
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(())
        }
    }

    fn literal(&mut self, word: &[u8]) -> Result<(), ()> {
        if self.src[self.pos..].starts_with(word) {
            self.pos += word.len();
            Ok(())
        } else {
            Err(())
        }
    }

    fn value(&mut self, depth: usize) -> Result<JsonValue, ()> {
        if depth > MAX_NESTING {
            return Err(());
        }
        match self.src.get(self.pos).ok_or(())? {
            b'{' => {
                self.pos += 1;
                let mut pairs = Vec::new();
                self.ws();
                if self.eat(b'}').is_ok() {
                    return Ok(JsonValue::Object(pairs));
                }
                loop {
                    self.ws();
                    let name = self.string()?;
                    self.ws();
                    self.eat(b':')?;
                    self.ws();
                    let value = self.value(depth + 1)?;
                    pairs.push((name, value));
                    self.ws();
                    if self.eat(b',').is_ok() {
                        continue;
                    }
                    self.eat(b'}')?;
                    break;
                }
                check_unique_names(&pairs).map_err(|_| ())?;
                Ok(JsonValue::Object(pairs))
            }
            b'[' => {
                self.pos += 1;
                let mut items = Vec::new();
                self.ws();
                if self.eat(b']').is_ok() {
                    return Ok(JsonValue::Array(items));
                }
                loop {
                    self.ws();
                    items.push(self.value(depth + 1)?);
                    self.ws();
                    if self.eat(b',').is_ok() {
                        continue;
                    }
                    self.eat(b']')?;
                    break;
                }
                Ok(JsonValue::Array(items))
            }
            b'"' => Ok(JsonValue::Text(self.string()?)),
            b't' => self.literal(b"true").map(|_| JsonValue::Bool(true)),
            b'f' => self.literal(b"false").map(|_| JsonValue::Bool(false)),
            _ => self.number().map(JsonValue::Number),
        }
    }

    fn number(&mut self) -> Result<String, ()> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
            if p.pos > s { Ok(()) } else { Err(()) }
        };
        let _ = self.eat(b'-');
        if self.eat(b'0').is_err() {
            match self.src.get(self.pos) {
                Some(b'1'..=b'9') => digits(self)?,
                _ => return Err(()),
            }
        }
        if self.eat(b'.').is_ok() {
            digits(self)?;
        }
        if let Some(b'e' | b'E') = self.src.get(self.pos) {
            self.pos += 1;
            if let Some(b'+' | b'-') = self.src.get(self.pos) {
                self.pos += 1;
            }
            digits(self)?;
        }
        String::from_utf8(self.src[start..self.pos].to_vec()).map_err(|_| ())
    }

    fn hex4(&mut self) -> Result<u32, ()> {
        let chunk = self.src.get(self.pos..self.pos + 4).ok_or(())?;
        let s = std::str::from_utf8(chunk).map_err(|_| ())?;
        let v = u32::from_str_radix(s, 16).map_err(|_| ())?;
        self.pos += 4;
        Ok(v)
    }

    fn string(&mut self) -> Result<String, ()> {
        self.eat(b'"')?;
        let mut out = Vec::new();
        loop {
            let b = *self.src.get(self.pos).ok_or(())?;
            self.pos += 1;
            match b {
                b'"' => break,
                b'\\' => {
                    let e = *self.src.get(self.pos).ok_or(())?;
                    self.pos += 1;
                    let c = match e {
                        b'"' => '"',
                        b'\\' => '\\',
                        b'/' => '/',
                        b'b' => '\u{8}',
                        b'f' => '\u{c}',
                        b'n' => '\n',
                        b'r' => '\r',
                        b't' => '\t',
                        b'u' => {
                            let hi = self.hex4()?;
                            let code = if (0xD800..0xDC00).contains(&hi) {
                                self.literal(b"\\u")?;
                                let lo = self.hex4()?;
                                if !(0xDC00..0xE000).contains(&lo) {
                                    return Err(());
                                }
                                0x10000 + ((hi - 0xD800) << 10) + (lo - 0xDC00)
                            } else {
                                hi
                            };
                            char::from_u32(code).ok_or(())?
                        }
                        _ => return Err(()),
                    };
                    let mut buf = [0u8; 4];
                    out.extend_from_slice(c.encode_utf8(&mut buf).as_bytes());
                }
                b if b < 0x20 => return Err(()),
                b => out.push(b),
            }
        }
        String::from_utf8(out).map_err(|_| ())
    }
}

/// Which of the three JSON layouts a collection uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Representation {
    /// One document per subject, predicates as names.
    Snv,
    /// One document per triple.
    Dt,
    /// One document per subject with nested object expansion.
    Cnv,
}

impl Representation {
    pub const ALL: [Representation; 3] = [Representation::Snv, Representation::Dt, Representation::Cnv];

    pub fn as_str(self) -> &'static str {
        match self {
            Representation::Snv => "snv",
            Representation::Dt => "dt",
            Representation::Cnv => "cnv",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Representation {
    type Err = JsonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "snv" => Ok(Representation::Snv),
            "dt" => Ok(Representation::Dt),
            "cnv" => Ok(Representation::Cnv),
            _ => Err(JsonError::UnknownRepresentation(s.to_string())),
        }
    }
}

/// A document: an object body carrying an `"id"` text pair equal to `id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonDocument {
    id: String,
    body: JsonValue,
}

impl JsonDocument {
    pub fn new(body: JsonValue) -> Result<Self, JsonError> {
        let id = match body.get("id") {
            Some(JsonValue::Text(id)) if body.as_object().is_some() => id.clone(),
            _ => return Err(JsonError::BadDocument(String::new())),
        };
        Ok(JsonDocument { id, body })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn body(&self) -> &JsonValue {
        &self.body
    }

    /// Name/value pairs of the body, `"id"` included.
    pub fn pairs(&self) -> &[(String, JsonValue)] {
        self.body.as_object().expect("document body is an object")
    }

    pub fn to_line(&self) -> String {
        self.body.to_string()
    }

    pub fn serialized_len(&self) -> usize {
        self.body.serialized_len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocCollection {
    representation: Representation,
    documents: Vec<JsonDocument>,
    max_doc_bytes: usize,
}

impl DocCollection {
    pub fn new(representation: Representation, max_doc_bytes: usize) -> Self {
        assert!(max_doc_bytes > 0, "max_doc_bytes must be positive");
        DocCollection { representation, documents: Vec::new(), max_doc_bytes }
    }

    /// Builds a collection, enforcing id uniqueness and the size limit.
    pub fn from_documents(
        representation: Representation,
        documents: Vec<JsonDocument>,
        max_doc_bytes: usize,
    ) -> Result<Self, JsonError> {
        let mut coll = DocCollection::new(representation, max_doc_bytes);
        let mut ids = HashSet::with_capacity(documents.len());
        for doc in &documents {
            if !ids.insert(doc.id.as_str()) {
                return Err(JsonError::DuplicateId(doc.id.clone()));
            }
            if doc.serialized_len() > max_doc_bytes {
                return Err(JsonError::DocumentTooLarge(doc.id.clone()));
            }
        }
        coll.documents = documents;
        Ok(coll)
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn documents(&self) -> &[JsonDocument] {
        &self.documents
    }

    pub fn max_doc_bytes(&self) -> usize {
        self.max_doc_bytes
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

/// One document per line, `\n` terminated.
pub fn serialize_ndjson(coll: &DocCollection) -> Result<String, JsonError> {
    let mut out = String::new();
    for doc in &coll.documents {
        let start = out.len();
        doc.body.write_to(&mut out);
        if out.len() - start > coll.max_doc_bytes {
            return Err(JsonError::DocumentTooLarge(doc.id.clone()));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_ndjson(
    text: &str,
    representation: Representation,
    max_doc_bytes: usize,
) -> Result<DocCollection, JsonError> {
    let mut docs = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let value = JsonValue::parse(line).ok_or(JsonError::MalformedDocument(line_no))?;
        if value.as_object().is_none() {
            return Err(JsonError::MalformedDocument(line_no));
        }
        if line.len() > max_doc_bytes {
            let id = value.get("id").and_then(JsonValue::as_text).unwrap_or_default();
            return Err(JsonError::DocumentTooLarge(id.to_string()));
        }
        let doc = JsonDocument::new(value).map_err(|_| JsonError::MissingId(line_no))?;
        if !ids.insert(doc.id.clone()) {
            return Err(JsonError::DuplicateId(doc.id));
        }
        docs.push(doc);
    }
    let mut coll = DocCollection::new(representation, max_doc_bytes);
    coll.documents = docs;
    Ok(coll)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(pairs: Vec<(&str, JsonValue)>) -> JsonDocument {
        let pairs = pairs.into_iter().map(|(n, v)| (n.to_string(), v)).collect();
        JsonDocument::new(JsonValue::object(pairs).unwrap()).unwrap()
    }

    #[test]
    fn empty_collection_serializes_to_nothing() {
        let coll = DocCollection::new(Representation::Snv, DEFAULT_MAX_DOC_BYTES);
        assert_eq!(serialize_ndjson(&coll).unwrap(), "");
        let back = parse_ndjson("", Representation::Snv, DEFAULT_MAX_DOC_BYTES).unwrap();
        assert!(back.is_empty());
    }

    #[test]
    fn names_keep_stored_order_and_numbers_keep_text() {
        let d = doc(vec![
            ("id", JsonValue::text("x")),
            ("zeta", JsonValue::number("1.50").unwrap()),
            ("alpha", JsonValue::Array(vec![JsonValue::Bool(true), JsonValue::text("a\"b\n")])),
        ]);
        let line = d.to_line();
        assert_eq!(line, r#"{"id":"x","zeta":1.50,"alpha":[true,"a\"b\n"]}"#);
        assert_eq!(d.serialized_len(), line.len());
        assert_eq!(JsonValue::parse(&line).unwrap(), *d.body());
    }

    #[test]
    fn size_guard_boundary() {
        let d = doc(vec![("id", JsonValue::text("big")), ("v", JsonValue::text("0123456789"))]);
        let len = d.serialized_len();
        let ok = DocCollection::from_documents(Representation::Dt, vec![d.clone()], len).unwrap();
        assert!(serialize_ndjson(&ok).is_ok());
        assert_eq!(
            DocCollection::from_documents(Representation::Dt, vec![d.clone()], len - 1),
            Err(JsonError::DocumentTooLarge("big".into()))
        );
        // A collection loaded under a larger limit still refuses to serialize past a smaller one.
        let mut relaxed = ok.clone();
        relaxed.max_doc_bytes = len - 1;
        assert_eq!(serialize_ndjson(&relaxed), Err(JsonError::DocumentTooLarge("big".into())));
    }

    #[test]
    fn parse_errors() {
        let r = Representation::Snv;
        let m = DEFAULT_MAX_DOC_BYTES;
        assert_eq!(parse_ndjson("{\"id\":\"a\"}\n{\"id\":\"a\"}\n", r, m), Err(JsonError::DuplicateId("a".into())));
        assert_eq!(parse_ndjson("{\"x\":1}\n", r, m), Err(JsonError::MissingId(1)));
        assert_eq!(parse_ndjson("{\"id\":2}\n", r, m), Err(JsonError::MissingId(1)));
        assert_eq!(parse_ndjson("\n{\"id\":\"a\"\n", r, m), Err(JsonError::MalformedDocument(2)));
        assert_eq!(parse_ndjson("[1]\n", r, m), Err(JsonError::MalformedDocument(1)));
        assert_eq!(parse_ndjson("{\"id\":\"a\",\"id\":\"b\"}\n", r, m), Err(JsonError::MalformedDocument(1)));
        assert_eq!(parse_ndjson("{\"id\":\"a\",\"n\":null}\n", r, m), Err(JsonError::MalformedDocument(1)));
        assert_eq!(parse_ndjson("{\"id\":\"a\",\"n\":01}\n", r, m), Err(JsonError::MalformedDocument(1)));
    }

    #[test]
    fn blank_lines_skipped() {
        let c = parse_ndjson("\n{\"id\":\"a\"}\n\n  \n{\"id\":\"b\"}\n", Representation::Dt, 100).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.documents()[1].id(), "b");
    }

    #[test]
    fn escapes_round_trip() {
        let v = JsonValue::parse(r#""é😀\/\b\f\u0001""#).unwrap();
        assert_eq!(v, JsonValue::text("é😀/\u{8}\u{c}\u{1}"));
        let s = v.to_string();
        assert_eq!(s, "\"é😀/\\b\\f\\u0001\"");
        assert_eq!(JsonValue::parse(&s).unwrap(), v);
    }

    #[test]
    fn duplicate_names_rejected_on_construction() {
        let pairs = vec![("a".to_string(), JsonValue::Bool(true)), ("a".to_string(), JsonValue::Bool(false))];
        assert_eq!(JsonValue::object(pairs), Err(JsonError::DuplicateName("a".into())));
        assert!(JsonValue::number("1e").is_err());
        assert!(JsonValue::number("-0.5E+3").is_ok());
    }
}
