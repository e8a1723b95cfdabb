//! An embedded document store for knowledge graphs.
//!
//! Triples ([`ntriples`]) are mapped into one of three JSON document layouts
//! ([`repr`]), loaded into an indexed [`store`], and queried with basic graph
//! patterns ([`query`]) under several join strategies. [`bench`] generates
//! synthetic e-commerce graphs and times the strategies against each other.

pub mod bench;
pub mod cli;
pub mod fixtures;
pub mod json;
pub mod ntriples;
pub mod query;
pub mod repr;
pub mod store;
