//! Strategy implementations.
//!
//! Intermediate results are [`ResultSet`]s: a variable schema plus distinct
//! rows. Patterns are compiled against the schema they extend into three
//! slots (constant, existing column, or new column), which lets every
//! strategy share the same unification code.

use std::collections::HashMap;
use std::time::Instant;

use crate::json::Representation;
use crate::ntriples::Term;
use crate::store::{OpCounters, Store};

use super::classify::{classify_query, estimate_pattern};
use super::{oracle_execute, PatternTerm, Query, QueryError, QueryKind, ResultSet, Strategy, TriplePattern, Var};

/// Which join a pair of inputs realizes. Informational: both kinds run as
/// the same hash join.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinKind {
    SS,
    SO,
}

struct Ctx<'s> {
    store: &'s Store,
    counters: OpCounters,
    deadline: Option<Instant>,
    ticks: u32,
}

impl<'s> Ctx<'s> {
    fn new(store: &'s Store, deadline: Option<Instant>) -> Self {
        Ctx { store, counters: OpCounters::default(), deadline, ticks: 0 }
    }

    #[inline]
    fn tick(&mut self) -> Result<(), QueryError> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks % 512 == 1 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(QueryError::Timeout);
                }
            }
        }
        Ok(())
    }

    /// Triples matching the given constants through the cheapest index.
    fn access(&mut self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<[Term; 3]> {
        let store = self.store;
        let c = &mut self.counters;
        let keep = |x: &Term, want: Option<&Term>| want.is_none_or(|w| w == x);
        match (s, p, o) {
            (Some(s), _, _) => store
                .subject_pairs(s, c)
                .into_iter()
                .filter(|(pp, oo)| keep(pp, p) && keep(oo, o))
                .map(|(pp, oo)| [s.clone(), pp, oo])
                .collect(),
            (None, Some(p), Some(o)) => store
                .lookup_predicate_object(p, o, c)
                .iter()
                .map(|ss| [ss.clone(), p.clone(), o.clone()])
                .collect(),
            (None, Some(p), None) => store
                .lookup_predicate(p, c)
                .iter()
                .map(|(ss, oo)| [ss.clone(), p.clone(), oo.clone()])
                .collect(),
            (None, None, o) => store
                .scan(c)
                .filter(|(_, _, oo)| keep(oo, o))
                .map(|(ss, pp, oo)| [ss.clone(), pp.clone(), oo.clone()])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot<'a> {
    Const(&'a Term),
    /// Must equal an existing or earlier-assigned column.
    Col(usize),
    /// Assigns the next new column.
    New,
}

/// Compiles `terms` against `schema`, returning the new variables in order of
/// first appearance and one slot per term.
fn compile<'a>(terms: &[&'a PatternTerm], schema: &[Var]) -> (Vec<Var>, Vec<Slot<'a>>) {
    let mut new_vars: Vec<Var> = Vec::new();
    let slots = terms
        .iter()
        .map(|t| match t {
            PatternTerm::Constant(c) => Slot::Const(c),
            PatternTerm::Variable(v) => {
                if let Some(i) = schema.iter().position(|s| s == v) {
                    Slot::Col(i)
                } else if let Some(k) = new_vars.iter().position(|s| s == v) {
                    Slot::Col(schema.len() + k)
                } else {
                    new_vars.push(v.clone());
                    Slot::New
                }
            }
        })
        .collect();
    (new_vars, slots)
}

fn apply(slots: &[Slot<'_>], row: &[Term], values: &[&Term]) -> Option<Vec<Term>> {
    let mut out: Vec<Term> = Vec::with_capacity(row.len() + values.len());
    out.extend_from_slice(row);
    for (slot, value) in slots.iter().zip(values) {
        match slot {
            Slot::Const(c) => {
                if c != value {
                    return None;
                }
            }
            Slot::Col(i) => {
                if &out[*i] != *value {
                    return None;
                }
            }
            Slot::New => out.push((*value).clone()),
        }
    }
    Some(out)
}

/// The value a slot pins down for a given row, usable as an index key.
fn bound<'a>(slot: &Slot<'a>, row: &'a [Term]) -> Option<&'a Term> {
    match slot {
        Slot::Const(c) => Some(c),
        Slot::Col(i) if *i < row.len() => Some(&row[*i]),
        _ => None,
    }
}

fn with_vars(schema: &[Var], extra: Vec<Var>) -> Vec<Var> {
    let mut vars = schema.to_vec();
    vars.extend(extra);
    vars
}

fn match_pattern(ctx: &mut Ctx<'_>, tp: &TriplePattern) -> Result<ResultSet, QueryError> {
    let (vars, slots) = compile(&tp.terms(), &[]);
    let triples = ctx.access(bound(&slots[0], &[]), bound(&slots[1], &[]), bound(&slots[2], &[]));
    let mut rows = Vec::with_capacity(triples.len());
    for [s, p, o] in &triples {
        ctx.tick()?;
        if let Some(row) = apply(&slots, &[], &[s, p, o]) {
            rows.push(row);
        }
    }
    rows.sort_unstable();
    rows.dedup();
    ctx.counters.bindings_materialized += rows.len() as u64;
    Ok(ResultSet::from_distinct(vars, rows))
}

/// All bindings of one pattern, using the subject index for a constant
/// subject, the predicate/object index for constant `(p, o)`, the predicate
/// index for a constant predicate, and a full scan otherwise.
pub fn match_bgp(store: &Store, tp: &TriplePattern, counters: &mut OpCounters) -> ResultSet {
    let mut ctx = Ctx::new(store, None);
    let rs = match_pattern(&mut ctx, tp).expect("no deadline set");
    accumulate(counters, &ctx.counters);
    rs
}

fn accumulate(into: &mut OpCounters, from: &OpCounters) {
    into.index_probes += from.index_probes;
    into.docs_fetched += from.docs_fetched;
    into.entries_scanned += from.entries_scanned;
    into.bindings_materialized += from.bindings_materialized;
    into.key_comparisons += from.key_comparisons;
}

fn shared_columns(left: &ResultSet, right: &ResultSet) -> Vec<(usize, usize)> {
    left.vars()
        .iter()
        .enumerate()
        .filter_map(|(li, v)| right.column(v).map(|ri| (li, ri)))
        .collect()
}

fn hash_join(ctx: &mut Ctx<'_>, left: &ResultSet, right: &ResultSet) -> Result<ResultSet, QueryError> {
    let shared = shared_columns(left, right);
    if shared.is_empty() {
        return Err(QueryError::NoSharedVariable);
    }
    let right_only: Vec<usize> =
        (0..right.vars().len()).filter(|ri| !shared.iter().any(|&(_, r)| r == *ri)).collect();
    let vars = with_vars(left.vars(), right_only.iter().map(|&ri| right.vars()[ri].clone()).collect());

    let left_is_build = left.len() <= right.len();
    let (build, probe) = if left_is_build { (left, right) } else { (right, left) };
    let key_of = |row: &[Term], is_left: bool| -> Vec<Term> {
        shared.iter().map(|&(l, r)| row[if is_left { l } else { r }].clone()).collect()
    };
    let mut table: HashMap<Vec<Term>, Vec<usize>> = HashMap::with_capacity(build.len());
    for (i, row) in build.rows().iter().enumerate() {
        ctx.tick()?;
        table.entry(key_of(row, left_is_build)).or_default().push(i);
    }
    let mut rows = Vec::new();
    for prow in probe.rows() {
        ctx.tick()?;
        let Some(matches) = table.get(&key_of(prow, !left_is_build)) else { continue };
        for &bi in matches {
            let brow = &build.rows()[bi];
            let (lrow, rrow) = if left_is_build { (brow, prow) } else { (prow, brow) };
            let mut out = lrow.clone();
            out.extend(right_only.iter().map(|&ri| rrow[ri].clone()));
            rows.push(out);
        }
    }
    ctx.counters.bindings_materialized += rows.len() as u64;
    Ok(ResultSet::from_distinct(vars, rows))
}

fn cross_product(ctx: &mut Ctx<'_>, left: &ResultSet, right: &ResultSet) -> Result<ResultSet, QueryError> {
    let vars = with_vars(left.vars(), right.vars().to_vec());
    let mut rows = Vec::with_capacity(left.len() * right.len());
    for l in left.rows() {
        for r in right.rows() {
            ctx.tick()?;
            let mut out = l.clone();
            out.extend_from_slice(r);
            rows.push(out);
        }
    }
    ctx.counters.bindings_materialized += rows.len() as u64;
    Ok(ResultSet::from_distinct(vars, rows))
}

/// Merges compatible bindings of two sets sharing at least one variable.
/// Hash join: the smaller side is the build side.
pub fn join_bindings(
    left: &ResultSet,
    right: &ResultSet,
    _kind: JoinKind,
    store: &Store,
    counters: &mut OpCounters,
) -> Result<ResultSet, QueryError> {
    let mut ctx = Ctx::new(store, None);
    let out = hash_join(&mut ctx, left, right)?;
    accumulate(counters, &ctx.counters);
    Ok(out)
}

/// Joins relations left to right, preferring at each step the first one that
/// shares a variable with the running result.
fn join_all(ctx: &mut Ctx<'_>, rels: Vec<ResultSet>) -> Result<ResultSet, QueryError> {
    let mut rest = rels.into_iter();
    let Some(mut acc) = rest.next() else { return Ok(ResultSet::unit()) };
    let mut pending: Vec<ResultSet> = rest.collect();
    while !pending.is_empty() {
        let pick = pending
            .iter()
            .position(|r| !shared_columns(&acc, r).is_empty())
            .unwrap_or(0);
        let next = pending.remove(pick);
        acc = if shared_columns(&acc, &next).is_empty() {
            cross_product(ctx, &acc, &next)?
        } else {
            hash_join(ctx, &acc, &next)?
        };
    }
    Ok(acc)
}

/// Pattern indices by ascending estimated cardinality, ties by position.
fn plan_order(store: &Store, patterns: &[TriplePattern]) -> Vec<usize> {
    let mut order: Vec<(usize, usize)> =
        patterns.iter().enumerate().map(|(i, p)| (estimate_pattern(store, p), i)).collect();
    order.sort_unstable();
    order.into_iter().map(|(_, i)| i).collect()
}

fn run_hash_join(ctx: &mut Ctx<'_>, q: &Query) -> Result<ResultSet, QueryError> {
    let mut rels = Vec::with_capacity(q.patterns.len());
    for i in plan_order(ctx.store, &q.patterns) {
        rels.push(match_pattern(ctx, &q.patterns[i])?);
    }
    join_all(ctx, rels)
}

fn run_index_nested_loop(ctx: &mut Ctx<'_>, q: &Query) -> Result<ResultSet, QueryError> {
    let mut pending = plan_order(ctx.store, &q.patterns);
    let first = pending.remove(0);
    let mut acc = match_pattern(ctx, &q.patterns[first])?;
    while !pending.is_empty() {
        let pick = pending
            .iter()
            .position(|&i| q.patterns[i].vars().any(|v| acc.column(v).is_some()))
            .unwrap_or(0);
        let tp = &q.patterns[pending.remove(pick)];
        if !tp.vars().any(|v| acc.column(v).is_some()) {
            let rel = match_pattern(ctx, tp)?;
            acc = cross_product(ctx, &acc, &rel)?;
            continue;
        }
        let (new_vars, slots) = compile(&tp.terms(), acc.vars());
        let vars = with_vars(acc.vars(), new_vars);
        let mut rows = Vec::new();
        for row in acc.rows() {
            ctx.tick()?;
            let triples = ctx.access(bound(&slots[0], row), bound(&slots[1], row), bound(&slots[2], row));
            for [s, p, o] in &triples {
                if let Some(out) = apply(&slots, row, &[s, p, o]) {
                    rows.push(out);
                }
            }
        }
        ctx.counters.bindings_materialized += rows.len() as u64;
        acc = ResultSet::from_distinct(vars, rows);
    }
    Ok(acc)
}

fn require(store: &Store, strategy: Strategy) -> Result<(), QueryError> {
    if strategy.supports(store.representation()) {
        Ok(())
    } else {
        Err(QueryError::StrategyMismatch { strategy, representation: store.representation() })
    }
}

/// Candidate subjects for a star of patterns sharing a variable subject.
fn seed_candidates(ctx: &mut Ctx<'_>, group: &[&TriplePattern]) -> Vec<Term> {
    let store = ctx.store;
    let po = group
        .iter()
        .filter_map(|tp| Some((tp.predicate.as_const()?, tp.object.as_const()?)))
        .min_by_key(|(p, o)| store.estimate_predicate_object(p, o));
    if let Some((p, o)) = po {
        return store.lookup_predicate_object(p, o, &mut ctx.counters).to_vec();
    }
    let p_only = group
        .iter()
        .filter_map(|tp| tp.predicate.as_const())
        .min_by_key(|p| store.estimate_predicate(p));
    if let Some(p) = p_only {
        let mut subjects: Vec<Term> =
            store.lookup_predicate(p, &mut ctx.counters).iter().map(|(s, _)| s.clone()).collect();
        subjects.dedup();
        return subjects;
    }
    ctx.counters.index_probes += 1;
    let all = store.subjects();
    ctx.counters.entries_scanned += all.len() as u64;
    all
}

fn run_snv_lookup(ctx: &mut Ctx<'_>, q: &Query) -> Result<ResultSet, QueryError> {
    // Star groups keyed by subject term, in order of first appearance.
    let mut groups: Vec<(&PatternTerm, Vec<&TriplePattern>)> = Vec::new();
    for tp in &q.patterns {
        match groups.iter_mut().find(|(s, _)| *s == &tp.subject) {
            Some((_, members)) => members.push(tp),
            None => groups.push((&tp.subject, vec![tp])),
        }
    }
    let mut rels = Vec::with_capacity(groups.len());
    for (subject, members) in &groups {
        let candidates = match subject {
            PatternTerm::Constant(s) => vec![s.clone()],
            PatternTerm::Variable(_) => seed_candidates(ctx, members),
        };
        let head = [*subject];
        let (mut vars, head_slots) = compile(&head, &[]);
        let mut compiled = Vec::with_capacity(members.len());
        for tp in members {
            let (new_vars, slots) = compile(&[&tp.predicate, &tp.object], &vars);
            vars.extend(new_vars);
            compiled.push(slots);
        }
        let mut rows = Vec::new();
        for cand in &candidates {
            ctx.tick()?;
            if !cand.is_iri() {
                continue;
            }
            let Some(pairs) = ctx.store.fetch_subject_pairs(cand.lexical(), &mut ctx.counters) else {
                continue;
            };
            let Some(start) = apply(&head_slots, &[], &[cand]) else { continue };
            let mut local = vec![start];
            for slots in &compiled {
                let mut next = Vec::new();
                for row in &local {
                    for (p, o) in pairs {
                        if let Some(out) = apply(slots, row, &[p, o]) {
                            next.push(out);
                        }
                    }
                }
                local = next;
                if local.is_empty() {
                    break;
                }
            }
            rows.extend(local);
        }
        rows.sort_unstable();
        rows.dedup();
        ctx.counters.bindings_materialized += rows.len() as u64;
        rels.push(ResultSet::from_distinct(vars, rows));
    }
    join_all(ctx, rels)
}

/// Splits the patterns into subject-object chains over constant predicates.
/// Returns the chains and the indices of patterns left over.
fn decompose_chains(patterns: &[TriplePattern]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let chainable: Vec<usize> = (0..patterns.len()).filter(|&i| patterns[i].predicate.as_const().is_some()).collect();
    let others: Vec<usize> = (0..patterns.len()).filter(|i| !chainable.contains(i)).collect();
    let links_to = |a: usize, b: usize| {
        a != b
            && matches!((&patterns[a].object, &patterns[b].subject),
                (PatternTerm::Variable(x), PatternTerm::Variable(y)) if x == y)
    };
    let mut unused = chainable;
    let mut chains = Vec::new();
    while !unused.is_empty() {
        let start = unused
            .iter()
            .copied()
            .find(|&i| !unused.iter().any(|&j| links_to(j, i)))
            .unwrap_or(unused[0]);
        unused.retain(|&i| i != start);
        let mut chain = vec![start];
        while let Some(pos) = unused.iter().position(|&j| links_to(*chain.last().unwrap(), j)) {
            chain.push(unused.remove(pos));
        }
        chains.push(chain);
    }
    (chains, others)
}

fn run_cnv_path(ctx: &mut Ctx<'_>, q: &Query) -> Result<ResultSet, QueryError> {
    let (chains, others) = decompose_chains(&q.patterns);
    let max = ctx.store.max_depth();
    if let Some(long) = chains.iter().find(|c| c.len() > max) {
        return Err(QueryError::ChainTooLong { len: long.len(), max });
    }
    // single edges gain nothing from the path index
    let (chains, singles): (Vec<Vec<usize>>, Vec<Vec<usize>>) = chains.into_iter().partition(|c| c.len() > 1);
    let others: Vec<usize> = singles.into_iter().flatten().chain(others).collect();
    let mut rels = Vec::with_capacity(chains.len() + others.len());
    for chain in &chains {
        let pats: Vec<&TriplePattern> = chain.iter().map(|&i| &q.patterns[i]).collect();
        let predicates: Vec<Term> = pats.iter().map(|tp| tp.predicate.as_const().unwrap().clone()).collect();
        let leaf = pats.last().unwrap().object.as_const();
        // root, each hop entity, leaf
        let mut terms: Vec<&PatternTerm> = vec![&pats[0].subject];
        terms.extend(pats.iter().map(|tp| &tp.object));
        let (vars, slots) = compile(&terms, &[]);
        let store = ctx.store;
        let hits = store.lookup_path(&predicates, leaf, &mut ctx.counters)?;
        let mut rows = Vec::with_capacity(hits.len());
        let mut values: Vec<&Term> = Vec::with_capacity(terms.len());
        for hit in hits {
            ctx.tick()?;
            values.clear();
            values.push(&hit.root);
            values.extend(hit.hops.iter());
            values.push(&hit.leaf);
            if let Some(row) = apply(&slots, &[], &values) {
                rows.push(row);
            }
        }
        // Hits arrive sorted and distinct. Without repeated variables the
        // mapping to rows is injective, so only a repeated variable can
        // produce duplicates that need a sort.
        if slots.iter().any(|s| matches!(s, Slot::Col(_))) {
            rows.sort_unstable();
        }
        rows.dedup();
        ctx.counters.bindings_materialized += rows.len() as u64;
        rels.push(ResultSet::from_distinct(vars, rows));
    }
    for &i in &others {
        rels.push(match_pattern(ctx, &q.patterns[i])?);
    }
    join_all(ctx, rels)
}

fn resolve_auto(store: &Store, q: &Query) -> Strategy {
    let class = classify_query(q, Some(store));
    match (class.kind, store.representation()) {
        (QueryKind::SS, Representation::Snv) => Strategy::SnvSubjectLookup,
        (QueryKind::SO, Representation::Cnv) => {
            let (chains, _) = decompose_chains(&q.patterns);
            if chains.iter().all(|c| c.len() <= store.max_depth()) {
                Strategy::CnvPathLookup
            } else {
                Strategy::HashJoin
            }
        }
        _ => Strategy::HashJoin,
    }
}

pub fn execute(store: &Store, q: &Query, strategy: Strategy) -> Result<(ResultSet, OpCounters), QueryError> {
    execute_with_deadline(store, q, strategy, None)
}

/// Runs `q` with `strategy`, failing with [`QueryError::Timeout`] once
/// `deadline` passes.
pub fn execute_with_deadline(
    store: &Store,
    q: &Query,
    strategy: Strategy,
    deadline: Option<Instant>,
) -> Result<(ResultSet, OpCounters), QueryError> {
    require(store, strategy)?;
    let strategy = if strategy == Strategy::Auto { resolve_auto(store, q) } else { strategy };
    let mut ctx = Ctx::new(store, deadline);
    let raw = match strategy {
        Strategy::Oracle => return Ok((oracle_execute(store.graph(), q), OpCounters::default())),
        Strategy::HashJoin => run_hash_join(&mut ctx, q)?,
        Strategy::IndexNestedLoop => run_index_nested_loop(&mut ctx, q)?,
        Strategy::SnvSubjectLookup => run_snv_lookup(&mut ctx, q)?,
        Strategy::CnvPathLookup => run_cnv_path(&mut ctx, q)?,
        Strategy::Auto => unreachable!("resolved above"),
    };
    Ok((raw.project(&q.projection), ctx.counters))
}

/// The strategy `Auto` picks for `q` on `store`.
pub fn auto_strategy(store: &Store, q: &Query) -> Strategy {
    resolve_auto(store, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{landmarks, SO_QUERY, SS_QUERY, TYPE_QUERY};
    use crate::query::parse_query;
    use crate::repr::{build_cnv, build_dt, build_snv};

    fn stores() -> Vec<Store> {
        let kg = landmarks();
        vec![
            Store::load(build_snv(&kg).unwrap()).unwrap(),
            Store::load(build_dt(&kg).unwrap()).unwrap(),
            Store::load(build_cnv(&kg, 5).unwrap()).unwrap(),
        ]
    }

    fn var(s: &str) -> Var {
        Var::from(s)
    }

    fn single(v: &str, t: Term) -> ResultSet {
        ResultSet::new(vec![var(v)], [vec![t]])
    }

    #[test]
    fn match_bgp_examples() {
        for store in stores() {
            let mut c = OpCounters::default();
            let q = parse_query(TYPE_QUERY).unwrap();
            assert_eq!(match_bgp(&store, &q.patterns[0], &mut c), single("Ins", Term::literal("Statue")));
            let q = parse_query(SS_QUERY).unwrap();
            assert_eq!(
                match_bgp(&store, &q.patterns[0], &mut c),
                single("x", Term::iri("StatueOfLiberty").unwrap())
            );
            let q = parse_query("SELECT * WHERE { ?a ?b ?c }").unwrap();
            assert_eq!(match_bgp(&store, &q.patterns[0], &mut c).len(), 8);
        }
    }

    #[test]
    fn ground_pattern_yields_unit_or_empty() {
        let store = &stores()[0];
        let mut c = OpCounters::default();
        let q = parse_query("SELECT * WHERE { <NewYork> <located_in> <UnitedStates> }").unwrap();
        assert_eq!(match_bgp(store, &q.patterns[0], &mut c), ResultSet::unit());
        let q = parse_query("SELECT * WHERE { <NewYork> <located_in> <Mars> }").unwrap();
        assert!(match_bgp(store, &q.patterns[0], &mut c).is_empty());
    }

    #[test]
    fn join_examples() {
        let store = &stores()[0];
        let sol = Term::iri("StatueOfLiberty").unwrap();
        let mut c = OpCounters::default();
        let l = single("x", sol.clone());
        let joined = join_bindings(&l, &l, JoinKind::SS, store, &mut c).unwrap();
        assert_eq!(joined, l);
        assert_eq!(c.bindings_materialized, 1);

        let ny = single("x", Term::iri("NewYork").unwrap());
        let boston = single("x", Term::iri("Boston").unwrap());
        assert!(join_bindings(&ny, &boston, JoinKind::SS, store, &mut c).unwrap().is_empty());
        assert!(join_bindings(&l, &ResultSet::empty(vec![var("x")]), JoinKind::SO, store, &mut c)
            .unwrap()
            .is_empty());
        assert_eq!(
            join_bindings(&l, &single("y", sol), JoinKind::SS, store, &mut c),
            Err(QueryError::NoSharedVariable)
        );
    }

    #[test]
    fn landmarks_all_strategies() {
        let expected = [
            (TYPE_QUERY, single("Ins", Term::literal("Statue"))),
            (SS_QUERY, single("x", Term::iri("StatueOfLiberty").unwrap())),
            (SO_QUERY, single("y", Term::iri("StatueOfLiberty").unwrap())),
        ];
        for store in stores() {
            for (text, want) in &expected {
                let q = parse_query(text).unwrap();
                for strategy in Strategy::compatible(store.representation()).into_iter().chain([Strategy::Auto]) {
                    let (got, _) = execute(&store, &q, strategy).unwrap();
                    assert_eq!(&got, want, "{} {strategy}", store.representation());
                }
            }
        }
    }

    #[test]
    fn snv_lookup_counters() {
        let store = &stores()[0];
        let q = parse_query(SS_QUERY).unwrap();
        let (_, c) = execute(store, &q, Strategy::SnvSubjectLookup).unwrap();
        assert_eq!(c.docs_fetched, 1);
        assert_eq!(c.index_probes, 2);
    }

    #[test]
    fn cnv_path_counters() {
        let store = &stores()[2];
        let q = parse_query(SO_QUERY).unwrap();
        let (r, c) = execute(store, &q, Strategy::CnvPathLookup).unwrap();
        assert_eq!(r, single("y", Term::iri("StatueOfLiberty").unwrap()));
        assert_eq!(c.index_probes, 1);
        assert_eq!(auto_strategy(store, &q), Strategy::CnvPathLookup);
    }

    #[test]
    fn strategy_mismatch_and_chain_limits() {
        let s = stores();
        let q = parse_query(SO_QUERY).unwrap();
        assert_eq!(
            execute(&s[0], &q, Strategy::CnvPathLookup).unwrap_err(),
            QueryError::StrategyMismatch { strategy: Strategy::CnvPathLookup, representation: Representation::Snv }
        );
        assert!(matches!(execute(&s[1], &q, Strategy::SnvSubjectLookup), Err(QueryError::StrategyMismatch { .. })));

        let cnv2 = Store::load_with_depth(build_cnv(&landmarks(), 2).unwrap(), 2).unwrap();
        let long = parse_query("SELECT ?a WHERE { ?a <located_in> ?b . ?b <located_in> ?c . ?c <known_as> ?d }").unwrap();
        assert_eq!(execute(&cnv2, &long, Strategy::CnvPathLookup), Err(QueryError::ChainTooLong { len: 3, max: 2 }));
        // Auto falls back rather than failing
        let (r, _) = execute(&cnv2, &long, Strategy::Auto).unwrap();
        assert_eq!(r, oracle_execute(&landmarks(), &long));
    }

    #[test]
    fn deadline_in_the_past_times_out() {
        let store = &stores()[1];
        let q = parse_query("SELECT * WHERE { ?a ?b ?c . ?c ?d ?e . ?x ?y ?z }").unwrap();
        let past = Instant::now();
        assert_eq!(execute_with_deadline(store, &q, Strategy::HashJoin, Some(past)), Err(QueryError::Timeout));
    }

    #[test]
    fn chain_decomposition() {
        let q = parse_query("SELECT * WHERE { ?b <q> ?c . ?a <p> ?b . ?c ?v ?d . ?c <r> \"x\" }").unwrap();
        let (chains, others) = decompose_chains(&q.patterns);
        assert_eq!(chains, vec![vec![1, 0, 3]]);
        assert_eq!(others, vec![2]);
    }
}
