//! SELECT queries over basic graph patterns.
//!
//! [`parse_query`] reads the query text, [`classify_query`] assigns the join
//! shape, [`execute`] runs a query against a [`Store`](crate::store::Store)
//! with one of several strategies, and [`oracle_execute`] evaluates it by
//! brute force over the raw triples.

mod classify;
mod exec;
mod oracle;
mod parse;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::json::Representation;
use crate::ntriples::Term;
use crate::store::StoreError;

pub use classify::{classify_query, QueryClass, QueryKind, DEFAULT_SELECTIVITY_THRESHOLD};
pub use exec::{auto_strategy, execute, execute_with_deadline, join_bindings, match_bgp, JoinKind};
pub use oracle::oracle_execute;
pub use parse::parse_query;

pub type Var = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("projected variable ?{0} does not occur in the pattern")]
    UnboundProjection(String),
    #[error("the two inputs share no variable; refusing a cross product")]
    NoSharedVariable,
    #[error("strategy {strategy} cannot run on a {representation} store")]
    StrategyMismatch { strategy: Strategy, representation: Representation },
    #[error("chain of {len} patterns exceeds the path depth {max}")]
    ChainTooLong { len: usize, max: usize },
    #[error("execution exceeded its deadline")]
    Timeout,
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Constant(Term),
    Variable(Var),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Variable(Arc::from(name))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            PatternTerm::Variable(v) => Some(v),
            PatternTerm::Constant(_) => None,
        }
    }

    pub fn as_const(&self) -> Option<&Term> {
        match self {
            PatternTerm::Constant(t) => Some(t),
            PatternTerm::Variable(_) => None,
        }
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Variable(v) => write!(f, "?{v}"),
            PatternTerm::Constant(t) => f.write_str(&t.to_ntriples()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: PatternTerm, object: PatternTerm) -> Self {
        TriplePattern { subject, predicate, object }
    }

    pub fn terms(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.terms().into_iter().filter_map(PatternTerm::as_var)
    }

    pub fn is_ground(&self) -> bool {
        self.vars().next().is_none()
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub projection: Vec<Var>,
    pub patterns: Vec<TriplePattern>,
}

impl Query {
    /// Checks the projection and pattern invariants.
    pub fn new(projection: Vec<Var>, patterns: Vec<TriplePattern>) -> Result<Self, QueryError> {
        if patterns.is_empty() {
            return Err(QueryError::Syntax { position: 0, message: "empty basic graph pattern".into() });
        }
        let q = Query { projection, patterns };
        let vars = q.variables();
        if let Some(v) = q.projection.iter().find(|v| !vars.contains(v)) {
            return Err(QueryError::UnboundProjection(v.to_string()));
        }
        Ok(q)
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = Vec::new();
        for v in self.patterns.iter().flat_map(TriplePattern::vars) {
            if !seen.contains(v) {
                seen.push(v.clone());
            }
        }
        seen
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SELECT")?;
        for v in &self.projection {
            write!(f, " ?{v}")?;
        }
        writeln!(f, " WHERE {{")?;
        for p in &self.patterns {
            writeln!(f, "  {p}")?;
        }
        writeln!(f, "}}")
    }
}

/// A single solution, variable name to term.
pub type Binding = BTreeMap<String, Term>;

/// A set of solutions over a fixed variable schema. Equality is set equality
/// and ignores column order.
#[derive(Debug, Clone, Default)]
pub struct ResultSet {
    vars: Vec<Var>,
    rows: Vec<Vec<Term>>,
}

impl ResultSet {
    /// Builds a set, collapsing duplicate rows.
    pub fn new(vars: Vec<Var>, rows: impl IntoIterator<Item = Vec<Term>>) -> Self {
        let rows: Vec<Vec<Term>> = rows.into_iter().collect();
        assert!(rows.iter().all(|r| r.len() == vars.len()), "row width must match the schema");
        // keep the first occurrence of each row, in input order
        let keep: Vec<bool> = {
            let mut seen: HashSet<&[Term]> = HashSet::with_capacity(rows.len());
            rows.iter().map(|r| seen.insert(r.as_slice())).collect()
        };
        let rows = if keep.iter().all(|&k| k) {
            rows
        } else {
            rows.into_iter().zip(keep).filter_map(|(r, k)| k.then_some(r)).collect()
        };
        ResultSet { vars, rows }
    }

    /// Rows already known to be distinct.
    pub(crate) fn from_distinct(vars: Vec<Var>, rows: Vec<Vec<Term>>) -> Self {
        ResultSet { vars, rows }
    }

    /// The single empty solution: what a satisfied ground pattern yields.
    pub fn unit() -> Self {
        ResultSet { vars: Vec::new(), rows: vec![Vec::new()] }
    }

    pub fn empty(vars: Vec<Var>) -> Self {
        ResultSet { vars, rows: Vec::new() }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn rows(&self) -> &[Vec<Term>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| &**v == var)
    }

    pub fn bindings(&self) -> impl Iterator<Item = Binding> + '_ {
        self.rows.iter().map(|row| {
            self.vars.iter().map(|v| v.to_string()).zip(row.iter().cloned()).collect()
        })
    }

    /// Restricts to `vars` (in that order), collapsing duplicates.
    pub fn project(&self, vars: &[Var]) -> ResultSet {
        let cols: Vec<usize> = vars
            .iter()
            .map(|v| self.column(v).expect("projected variable is bound"))
            .collect();
        ResultSet::new(vars.to_vec(), self.rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()))
    }

    /// Rows reordered to the given column order and sorted.
    fn canonical_rows(&self, order: &[Var]) -> Option<Vec<Vec<Term>>> {
        let cols: Vec<usize> = order.iter().map(|v| self.column(v)).collect::<Option<_>>()?;
        let mut rows: Vec<Vec<Term>> =
            self.rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        rows.sort_unstable();
        Some(rows)
    }

    /// Sorted tab-separated rendering: a header of `?var` names, then one
    /// line per solution with terms in N-Triples form.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.vars.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join("\t"));
        out.push('\n');
        for row in self.canonical_rows(&self.vars).expect("own schema") {
            out.push_str(&row.iter().map(Term::to_ntriples).collect::<Vec<_>>().join("\t"));
            out.push('\n');
        }
        out
    }
}

impl PartialEq for ResultSet {
    fn eq(&self, other: &Self) -> bool {
        if self.vars.len() != other.vars.len() || self.rows.len() != other.rows.len() {
            return false;
        }
        let mut order = self.vars.clone();
        order.sort();
        match (self.canonical_rows(&order), other.canonical_rows(&order)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for ResultSet {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Oracle,
    HashJoin,
    IndexNestedLoop,
    SnvSubjectLookup,
    CnvPathLookup,
    Auto,
}

impl Strategy {
    pub const CONCRETE: [Strategy; 5] = [
        Strategy::Oracle,
        Strategy::HashJoin,
        Strategy::IndexNestedLoop,
        Strategy::SnvSubjectLookup,
        Strategy::CnvPathLookup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Oracle => "oracle",
            Strategy::HashJoin => "hash-join",
            Strategy::IndexNestedLoop => "index-nested-loop",
            Strategy::SnvSubjectLookup => "snv-lookup",
            Strategy::CnvPathLookup => "cnv-path",
            Strategy::Auto => "auto",
        }
    }

    pub fn supports(self, repr: Representation) -> bool {
        match self {
            Strategy::SnvSubjectLookup => repr == Representation::Snv,
            Strategy::CnvPathLookup => repr == Representation::Cnv,
            _ => true,
        }
    }

    /// Strategies that can run on `repr`, `Auto` excluded.
    pub fn compatible(repr: Representation) -> Vec<Strategy> {
        Strategy::CONCRETE.into_iter().filter(|s| s.supports(repr)).collect()
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Strategy::Auto]
            .into_iter()
            .chain(Strategy::CONCRETE)
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<Var> {
        names.iter().map(|n| Var::from(*n)).collect()
    }

    #[test]
    fn result_set_equality_ignores_column_order_and_duplicates() {
        let a = Term::iri("a").unwrap();
        let b = Term::iri("b").unwrap();
        let left = ResultSet::new(vars(&["x", "y"]), [vec![a.clone(), b.clone()], vec![a.clone(), b.clone()]]);
        let right = ResultSet::new(vars(&["y", "x"]), [vec![b.clone(), a.clone()]]);
        assert_eq!(left.len(), 1);
        assert_eq!(left, right);
        assert_ne!(left, ResultSet::empty(vars(&["x", "y"])));
        assert_ne!(ResultSet::unit(), ResultSet::empty(vec![]));
    }

    #[test]
    fn tsv_is_sorted() {
        let rs = ResultSet::new(
            vars(&["x"]),
            [vec![Term::literal("z")], vec![Term::iri("b").unwrap()], vec![Term::iri("a").unwrap()]],
        );
        assert_eq!(rs.to_tsv(), "?x\n<a>\n<b>\n\"z\"\n");
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::CONCRETE.into_iter().chain([Strategy::Auto]) {
            assert_eq!(s.as_str().parse::<Strategy>(), Ok(s));
        }
        assert!("nope".parse::<Strategy>().is_err());
        assert_eq!(Strategy::compatible(Representation::Dt).len(), 3);
        assert_eq!(Strategy::compatible(Representation::Snv).len(), 4);
    }
}
