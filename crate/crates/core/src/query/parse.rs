use crate::ntriples::{parse_literal_token, Term};

use super::{PatternTerm, Query, QueryError, TriplePattern, Var};

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn syntax(position: usize, message: impl Into<String>) -> QueryError {
    QueryError::Syntax { position, message: message.into() }
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '{' | '}')
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let trimmed = self.rest().trim_start();
            self.pos = self.src.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let rest = self.rest();
        if rest.len() >= kw.len()
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && rest[kw.len()..].chars().next().is_none_or(is_delimiter)
        {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    /// A bare word up to whitespace or a brace.
    fn word(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest.find(is_delimiter).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn variable(&mut self) -> Result<Var, QueryError> {
        let start = self.pos;
        self.pos += 1;
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(syntax(start, "empty variable name"));
        }
        self.pos += len;
        Ok(Var::from(&rest[..len]))
    }

    fn term(&mut self) -> Result<PatternTerm, QueryError> {
        let start = self.pos;
        match self.peek() {
            None => Err(syntax(start, "unexpected end of query")),
            Some('?' | '$') => self.variable().map(PatternTerm::Variable),
            Some('<') => {
                let rest = &self.rest()[1..];
                let close = rest.find('>').ok_or_else(|| syntax(start, "unterminated IRI"))?;
                let iri = Term::iri(&rest[..close]).map_err(|_| syntax(start, "invalid IRI"))?;
                self.pos += close + 2;
                Ok(PatternTerm::Constant(iri))
            }
            Some('"') => {
                let (lit, used) =
                    parse_literal_token(self.rest()).ok_or_else(|| syntax(start, "malformed literal"))?;
                self.pos += used;
                Ok(PatternTerm::Constant(lit))
            }
            Some('{' | '}' | '.') => Err(syntax(start, "expected a term")),
            Some(_) => {
                let mut word = self.word();
                // `name.` at the end of a pattern: the dot is the separator
                if let Some(stripped) = word.strip_suffix('.') {
                    self.pos -= 1;
                    word = stripped;
                }
                let iri = Term::iri(word).map_err(|_| syntax(start, format!("invalid term {word:?}")))?;
                Ok(PatternTerm::Constant(iri))
            }
        }
    }
}

/// Parses `SELECT ?a ?b WHERE { s p o . ... }`.
///
/// Terms are `?var` (or `$var`), `<iri>`, N-Triples literals, or bare words,
/// which are read as IRIs (`StatueOfLiberty`, `bsbm:producer`). `SELECT *`
/// projects every variable in order of appearance.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let mut lx = Lexer { src: text, pos: 0 };
    lx.skip_ws();
    if !lx.keyword("SELECT") {
        return Err(syntax(lx.pos, "expected SELECT"));
    }
    let mut projection = Vec::new();
    let mut star = false;
    loop {
        lx.skip_ws();
        match lx.peek() {
            Some('?' | '$') => {
                let v = lx.variable()?;
                if !projection.contains(&v) {
                    projection.push(v);
                }
            }
            Some('*') if projection.is_empty() && !star => {
                lx.pos += 1;
                star = true;
            }
            _ => break,
        }
    }
    if projection.is_empty() && !star {
        return Err(syntax(lx.pos, "expected projected variables"));
    }
    if !lx.keyword("WHERE") {
        return Err(syntax(lx.pos, "expected WHERE"));
    }
    lx.skip_ws();
    if lx.peek() != Some('{') {
        return Err(syntax(lx.pos, "expected '{'"));
    }
    lx.pos += 1;

    let mut patterns = Vec::new();
    loop {
        lx.skip_ws();
        if lx.peek() == Some('}') {
            lx.pos += 1;
            break;
        }
        let s = lx.term()?;
        lx.skip_ws();
        let p = lx.term()?;
        lx.skip_ws();
        let o = lx.term()?;
        if let PatternTerm::Constant(t) = &s {
            if !t.is_iri() {
                return Err(syntax(lx.pos, "literal in subject position"));
            }
        }
        if let PatternTerm::Constant(t) = &p {
            if !t.is_iri() {
                return Err(syntax(lx.pos, "literal in predicate position"));
            }
        }
        patterns.push(TriplePattern::new(s, p, o));
        lx.skip_ws();
        match lx.peek() {
            Some('.') => lx.pos += 1,
            Some('}') => {}
            _ => return Err(syntax(lx.pos, "expected '.' or '}'")),
        }
    }
    lx.skip_ws();
    if lx.pos != text.len() {
        return Err(syntax(lx.pos, "trailing input after '}'"));
    }
    if patterns.is_empty() {
        return Err(syntax(lx.pos, "empty basic graph pattern"));
    }
    let mut query = Query { projection, patterns };
    if star {
        query.projection = query.variables();
    }
    Query::new(query.projection, query.patterns)
}
