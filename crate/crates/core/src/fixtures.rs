//! The eight-triple Statue of Liberty graph and its three example queries.
//!
//! `NewYork` and `UnitedStates` are entities (IRIs); the remaining objects are
//! literals. The example queries use the graph's exact spellings, so the
//! statue type is `"Statue"` and the country is the entity `UnitedStates`.

use crate::ntriples::{parse_ntriples, KnowledgeGraph};

pub const LANDMARKS_NT: &str = "\
<StatueOfLiberty> <located_in> <NewYork> .
<StatueOfLiberty> <located_in> \"The US\" .
<StatueOfLiberty> <instance_of> \"Statue\" .
<NewYork> <instance_of> \"city\" .
<NewYork> <located_in> <UnitedStates> .
<NewYork> <instance_of> \"metropolis\" .
<UnitedStates> <known_as> \"The US\" .
<UnitedStates> <biggest_city_is> <NewYork> .
";

/// Type lookup: what is the Statue of Liberty an instance of?
pub const TYPE_QUERY: &str = "SELECT ?Ins WHERE {\n  StatueOfLiberty instance_of ?Ins .\n}\n";

/// Subject-subject join: things located in "The US" that are statues.
pub const SS_QUERY: &str = "SELECT ?x WHERE {\n  ?x located_in \"The US\" .\n  ?x instance_of \"Statue\" .\n}\n";

/// Subject-object join: things located in something located in UnitedStates.
pub const SO_QUERY: &str = "SELECT ?y WHERE {\n  ?x located_in UnitedStates .\n  ?y located_in ?x .\n}\n";

pub fn landmarks() -> KnowledgeGraph {
    parse_ntriples(LANDMARKS_NT).expect("fixture parses")
}
