//! Deterministic e-commerce graph generator.
//!
//! Products have types, features and producers; vendors offer them through
//! offer entities; people review them. The vocabulary is fixed at
//! [`PREDICATES`]. Every entity kind has mandatory and optional predicates,
//! and the first entity of each kind carries all of its optional ones, so
//! every predicate occurs in every generated graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ntriples::{KnowledgeGraph, Term, Triple};

pub const RDF_TYPE: &str = "rdf:type";
pub const RDFS_LABEL: &str = "rdfs:label";
pub const RDFS_COMMENT: &str = "rdfs:comment";
pub const RDFS_SUBCLASS_OF: &str = "rdfs:subClassOf";
pub const PRODUCER: &str = "bsbm:producer";
pub const PRODUCT_FEATURE: &str = "bsbm:productFeature";
pub const PRODUCT: &str = "bsbm:product";
pub const OFFERS: &str = "bsbm:offers";
pub const PRICE: &str = "bsbm:price";
pub const VALID_FROM: &str = "bsbm:validFrom";
pub const VALID_TO: &str = "bsbm:validTo";
pub const DELIVERY_DAYS: &str = "bsbm:deliveryDays";
pub const OFFER_WEBPAGE: &str = "bsbm:offerWebpage";
pub const STOCK: &str = "bsbm:stock";
pub const REVIEW_FOR: &str = "bsbm:reviewFor";
pub const REVIEWER: &str = "rev:reviewer";
pub const REVIEW_DATE: &str = "bsbm:reviewDate";
pub const TITLE: &str = "dc:title";
pub const TEXT: &str = "rev:text";
pub const NAME: &str = "foaf:name";
pub const MBOX: &str = "foaf:mbox_sha1sum";
pub const COUNTRY: &str = "bsbm:country";
pub const HOMEPAGE: &str = "foaf:homepage";
pub const PUBLISHER: &str = "dc:publisher";
pub const DATE: &str = "dc:date";

pub const PRODUCT_CLASS: &str = "bsbm:Product";

const NUMERIC: [&str; 5] = [
    "bsbm:productPropertyNumeric1",
    "bsbm:productPropertyNumeric2",
    "bsbm:productPropertyNumeric3",
    "bsbm:productPropertyNumeric4",
    "bsbm:productPropertyNumeric5",
];
const TEXTUAL: [&str; 6] = [
    "bsbm:productPropertyTextual1",
    "bsbm:productPropertyTextual2",
    "bsbm:productPropertyTextual3",
    "bsbm:productPropertyTextual4",
    "bsbm:productPropertyTextual5",
    "bsbm:productPropertyTextual6",
];
const RATINGS: [&str; 4] = ["bsbm:rating1", "bsbm:rating2", "bsbm:rating3", "bsbm:rating4"];

/// The full predicate vocabulary, 40 entries.
pub const PREDICATES: [&str; 40] = [
    RDF_TYPE,
    RDFS_LABEL,
    RDFS_COMMENT,
    RDFS_SUBCLASS_OF,
    PRODUCER,
    PRODUCT_FEATURE,
    NUMERIC[0],
    NUMERIC[1],
    NUMERIC[2],
    NUMERIC[3],
    NUMERIC[4],
    TEXTUAL[0],
    TEXTUAL[1],
    TEXTUAL[2],
    TEXTUAL[3],
    TEXTUAL[4],
    TEXTUAL[5],
    PRODUCT,
    OFFERS,
    PRICE,
    VALID_FROM,
    VALID_TO,
    DELIVERY_DAYS,
    OFFER_WEBPAGE,
    STOCK,
    REVIEW_FOR,
    REVIEWER,
    REVIEW_DATE,
    TITLE,
    TEXT,
    RATINGS[0],
    RATINGS[1],
    RATINGS[2],
    RATINGS[3],
    NAME,
    MBOX,
    COUNTRY,
    HOMEPAGE,
    PUBLISHER,
    DATE,
];

const WORDS: [&str; 16] = [
    "alpha", "brisk", "copper", "dune", "ember", "fjord", "gale", "harbor", "ivory", "jade", "kelp", "lumen",
    "moss", "nickel", "onyx", "prism",
];

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    /// Scale factor.
    pub product_count: usize,
    pub seed: u64,
    /// Probability in `[0, 0.5]` of dropping each optional predicate of an
    /// entity (the first entity of each kind is exempt).
    pub heterogeneity: f64,
}

impl GeneratorConfig {
    pub fn new(product_count: usize, seed: u64) -> Self {
        GeneratorConfig { product_count, seed, heterogeneity: 0.0 }
    }

    pub fn with_heterogeneity(mut self, h: f64) -> Self {
        self.heterogeneity = h;
        self
    }

    pub fn product_types(&self) -> usize {
        (self.product_count / 40).max(1)
    }

    pub fn features(&self) -> usize {
        (self.product_count / 8).max(2)
    }

    pub fn producers(&self) -> usize {
        (self.product_count / 25).max(1)
    }

    pub fn vendors(&self) -> usize {
        (self.product_count / 60).max(1)
    }

    pub fn countries(&self) -> usize {
        10
    }

    pub fn people(&self) -> usize {
        (self.product_count / 10).max(1)
    }
}

pub fn product_iri(k: usize) -> String {
    format!("inst:Product{k}")
}

pub fn product_type_iri(k: usize) -> String {
    format!("inst:ProductType{k}")
}

pub fn feature_iri(k: usize) -> String {
    format!("inst:ProductFeature{k}")
}

pub fn producer_iri(k: usize) -> String {
    format!("inst:Producer{k}")
}

pub fn vendor_iri(k: usize) -> String {
    format!("inst:Vendor{k}")
}

pub fn offer_iri(k: usize) -> String {
    format!("inst:Offer{k}")
}

pub fn review_iri(k: usize) -> String {
    format!("inst:Review{k}")
}

pub fn person_iri(k: usize) -> String {
    format!("inst:Reviewer{k}")
}

pub fn country_iri(k: usize) -> String {
    format!("inst:Country{k}")
}

struct Emitter {
    rng: ChaCha8Rng,
    heterogeneity: f64,
    kg: KnowledgeGraph,
}

impl Emitter {
    fn iri(&mut self, s: &str, p: &str, o: &str) {
        let t = Triple::new(Term::iri(s).unwrap(), Term::iri(p).unwrap(), Term::iri(o).unwrap());
        self.kg.insert(t);
    }

    fn lit(&mut self, s: &str, p: &str, o: String) {
        let t = Triple::new(Term::iri(s).unwrap(), Term::iri(p).unwrap(), Term::literal(o));
        self.kg.insert(t);
    }

    fn typed(&mut self, s: &str, p: &str, o: String, datatype: &str) {
        let tag = format!("^^<{datatype}>");
        let t = Triple::new(Term::iri(s).unwrap(), Term::iri(p).unwrap(), Term::tagged_literal(o, tag));
        self.kg.insert(t);
    }

    /// Whether an optional predicate with base rate `rate` is emitted.
    fn optional(&mut self, first: bool, rate: f64) -> bool {
        if first {
            return true;
        }
        // both draws always happen so the stream does not depend on h
        let keep = self.rng.gen_bool(rate);
        let dropped = self.rng.gen_bool(self.heterogeneity);
        keep && !dropped
    }

    fn words(&mut self, n: usize) -> String {
        (0..n).map(|_| WORDS[self.rng.gen_range(0..WORDS.len())]).collect::<Vec<_>>().join(" ")
    }

    fn date(&mut self) -> String {
        format!("2008-{:02}-{:02}", self.rng.gen_range(1..=12), self.rng.gen_range(1..=28))
    }
}

/// Generates the graph for `cfg`. Same config, same graph.
///
/// # Panics
/// If `product_count` is 0 or `heterogeneity` lies outside `[0, 0.5]`.
pub fn generate_kg(cfg: &GeneratorConfig) -> KnowledgeGraph {
    assert!(cfg.product_count >= 1, "product_count must be at least 1");
    assert!((0.0..=0.5).contains(&cfg.heterogeneity), "heterogeneity must lie in [0, 0.5]");
    let mut e = Emitter {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        heterogeneity: cfg.heterogeneity,
        kg: KnowledgeGraph::new(),
    };
    let n = cfg.product_count;

    for k in 1..=cfg.product_types() {
        let s = product_type_iri(k);
        e.iri(&s, RDFS_SUBCLASS_OF, PRODUCT_CLASS);
        e.lit(&s, RDFS_LABEL, format!("type {k}"));
        if e.optional(k == 1, 0.3) {
            let c = e.words(4);
            e.lit(&s, RDFS_COMMENT, c);
        }
    }
    for k in 1..=cfg.features() {
        let s = feature_iri(k);
        e.lit(&s, RDFS_LABEL, format!("feature {k}"));
    }
    for k in 1..=cfg.producers() {
        let s = producer_iri(k);
        e.lit(&s, RDFS_LABEL, format!("producer {k}"));
        let c = e.rng.gen_range(1..=cfg.countries());
        e.iri(&s, COUNTRY, &country_iri(c));
        if e.optional(k == 1, 0.5) {
            e.iri(&s, HOMEPAGE, &format!("http://producer{k}.example"));
        }
        if e.optional(k == 1, 0.2) {
            let c = e.words(5);
            e.lit(&s, RDFS_COMMENT, c);
        }
    }
    for k in 1..=cfg.people() {
        let s = person_iri(k);
        e.lit(&s, NAME, format!("reviewer {k}"));
        let c = e.rng.gen_range(1..=cfg.countries());
        e.iri(&s, COUNTRY, &country_iri(c));
        if e.optional(k == 1, 0.3) {
            let h: u64 = e.rng.gen();
            e.lit(&s, MBOX, format!("{h:016x}"));
        }
    }

    for k in 1..=n {
        let first = k == 1;
        let s = product_iri(k);
        e.iri(&s, RDF_TYPE, PRODUCT_CLASS);
        let t = e.rng.gen_range(1..=cfg.product_types());
        e.iri(&s, RDF_TYPE, &product_type_iri(t));
        e.lit(&s, RDFS_LABEL, format!("product {k}"));
        let producer = if first { 1 } else { e.rng.gen_range(1..=cfg.producers()) };
        e.iri(&s, PRODUCER, &producer_iri(producer));
        let feature_count = e.rng.gen_range(1..=2);
        for _ in 0..feature_count {
            let f = e.rng.gen_range(1..=cfg.features());
            e.iri(&s, PRODUCT_FEATURE, &feature_iri(f));
        }
        let v = e.rng.gen_range(1..2000);
        e.typed(&s, NUMERIC[0], v.to_string(), "xsd:integer");
        for (i, p) in NUMERIC.iter().enumerate().skip(1) {
            if e.optional(first, 0.25 / i as f64) {
                let v = e.rng.gen_range(1..2000);
                e.typed(&s, p, v.to_string(), "xsd:integer");
            }
        }
        let w = e.words(2);
        e.lit(&s, TEXTUAL[0], w);
        for (i, p) in TEXTUAL.iter().enumerate().skip(1) {
            if e.optional(first, 0.2 / i as f64) {
                let w = e.words(3);
                e.lit(&s, p, w);
            }
        }
        if e.optional(first, 0.2) {
            let c = e.words(6);
            e.lit(&s, RDFS_COMMENT, c);
        }
        if e.optional(first, 0.1) {
            e.iri(&s, PUBLISHER, &producer_iri(producer));
        }
        if e.optional(first, 0.1) {
            let d = e.date();
            e.typed(&s, DATE, d, "xsd:date");
        }
    }

    // one offer per two products, products picked at random (offer 1 sells
    // product 1)
    let offers = n.div_ceil(2);
    for k in 1..=offers {
        let first = k == 1;
        let s = offer_iri(k);
        let product = if first { 1 } else { e.rng.gen_range(1..=n) };
        let vendor = if first { 1 } else { e.rng.gen_range(1..=cfg.vendors()) };
        e.iri(&vendor_iri(vendor), OFFERS, &s);
        e.iri(&s, PRODUCT, &product_iri(product));
        let cents = e.rng.gen_range(100..100_000);
        e.typed(&s, PRICE, format!("{}.{:02}", cents / 100, cents % 100), "xsd:decimal");
        let d = e.date();
        e.typed(&s, VALID_TO, d, "xsd:date");
        if e.optional(first, 0.2) {
            let d = e.date();
            e.typed(&s, VALID_FROM, d, "xsd:date");
        }
        if e.optional(first, 0.2) {
            let days = e.rng.gen_range(1..15);
            e.typed(&s, DELIVERY_DAYS, days.to_string(), "xsd:integer");
        }
        if e.optional(first, 0.1) {
            e.iri(&s, OFFER_WEBPAGE, &format!("http://vendor{vendor}.example/offer{k}"));
        }
        if e.optional(first, 0.1) {
            let n = e.rng.gen_range(0..500);
            e.typed(&s, STOCK, n.to_string(), "xsd:integer");
        }
    }
    for k in 1..=cfg.vendors() {
        let s = vendor_iri(k);
        e.lit(&s, RDFS_LABEL, format!("vendor {k}"));
        let c = e.rng.gen_range(1..=cfg.countries());
        e.iri(&s, COUNTRY, &country_iri(c));
        if e.optional(k == 1, 0.5) {
            e.iri(&s, HOMEPAGE, &format!("http://vendor{k}.example"));
        }
    }

    // one review per four products
    let reviews = n.div_ceil(4);
    for k in 1..=reviews {
        let first = k == 1;
        let s = review_iri(k);
        let product = if first { 1 } else { e.rng.gen_range(1..=n) };
        e.iri(&s, REVIEW_FOR, &product_iri(product));
        let person = e.rng.gen_range(1..=cfg.people());
        e.iri(&s, REVIEWER, &person_iri(person));
        let r = e.rng.gen_range(1..=10);
        e.typed(&s, RATINGS[0], r.to_string(), "xsd:integer");
        for p in &RATINGS[1..] {
            if e.optional(first, 0.1) {
                let r = e.rng.gen_range(1..=10);
                e.typed(&s, p, r.to_string(), "xsd:integer");
            }
        }
        if e.optional(first, 0.3) {
            let t = e.words(3);
            e.lit(&s, TITLE, t);
        }
        if e.optional(first, 0.1) {
            let t = e.words(8);
            e.lit(&s, TEXT, t);
        }
        if e.optional(first, 0.2) {
            let d = e.date();
            e.typed(&s, REVIEW_DATE, d, "xsd:date");
        }
    }
    e.kg
}
