use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kgdoc::bench::random::{random_kg, random_query, RandomKgConfig};
use kgdoc::json::{parse_ndjson, serialize_ndjson, Representation, DEFAULT_MAX_DOC_BYTES};
use kgdoc::ntriples::{parse_ntriples, write_ntriples, KnowledgeGraph, Term, Triple};
use kgdoc::query::{execute, oracle_execute, Strategy as Plan};
use kgdoc::repr::{build, extract_triples, BuildOptions};
use kgdoc::store::Store;

fn iri() -> impl Strategy<Value = Term> {
    "ex:[a-d]{1,2}".prop_map(|s| Term::iri(s).unwrap())
}

fn literal() -> impl Strategy<Value = Term> {
    let lex = "\\PC{0,8}|[\"\\\\\n\r\t]{1,3}";
    prop_oneof![
        lex.prop_map(Term::literal),
        (lex, "@[a-z]{2}").prop_map(|(l, t)| Term::tagged_literal(l, t)),
        (lex, "\\^\\^<xsd:[a-z]{3,7}>").prop_map(|(l, t)| Term::tagged_literal(l, t)),
    ]
}

fn graph() -> impl Strategy<Value = KnowledgeGraph> {
    let triple = (iri(), iri(), prop_oneof![iri(), literal()]).prop_map(|(s, p, o)| Triple::new(s, p, o));
    prop::collection::vec(triple, 0..40).prop_map(|ts| {
        let mut kg = KnowledgeGraph::new();
        for t in ts {
            kg.insert(t);
        }
        kg
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ntriples_round_trip(kg in graph()) {
        prop_assert_eq!(parse_ntriples(&write_ntriples(&kg)).unwrap(), kg);
    }

    #[test]
    fn representations_round_trip(kg in graph()) {
        for repr in Representation::ALL {
            let coll = build(&kg, repr, &BuildOptions::default()).unwrap();
            prop_assert_eq!(&extract_triples(&coll).unwrap(), &kg, "{}", repr);
        }
    }

    #[test]
    fn ndjson_round_trip(kg in graph()) {
        for repr in Representation::ALL {
            let coll = build(&kg, repr, &BuildOptions::default()).unwrap();
            let text = serialize_ndjson(&coll).unwrap();
            prop_assert_eq!(parse_ndjson(&text, repr, DEFAULT_MAX_DOC_BYTES).unwrap(), coll);
        }
    }

    #[test]
    fn strategies_agree_with_the_oracle(seed in any::<u64>(), patterns in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kg = random_kg(&mut rng, &RandomKgConfig { max_triples: 120, entities: 15, ..Default::default() });
        let q = random_query(&mut rng, &kg, patterns);
        let want = oracle_execute(&kg, &q);
        for repr in Representation::ALL {
            let store = Store::load(build(&kg, repr, &BuildOptions::default()).unwrap()).unwrap();
            for strategy in Plan::compatible(repr).into_iter().chain([Plan::Auto]) {
                let (got, _) = execute(&store, &q, strategy).unwrap();
                prop_assert_eq!(&got, &want, "{}/{} on {}", repr, strategy, q);
            }
        }
    }
}
