//! The bundled ontology and example protocols.

use crate::ontology::Ontology;
use crate::protocol::Protocol;

pub const CATALOG_SOURCE: &str = include_str!("../data/catalog.ont");
pub const ASKTIME_SOURCE: &str = include_str!("../data/asktime.proto");
pub const P1_SOURCE: &str = include_str!("../data/p1.proto");
pub const P2_SOURCE: &str = include_str!("../data/p2.proto");

/// Built-in upper layer plus the time and vital-signs vocabulary.
pub fn default_ontology() -> Ontology {
    Ontology::load(&[("catalog.ont", CATALOG_SOURCE)]).expect("bundled catalog is valid")
}

fn bundled(file: &str, source: &str) -> Protocol {
    Protocol::load(file, source, &default_ontology()).expect("bundled protocol is valid")
}

/// One request, its acceptance and the reply.
pub fn asktime() -> Protocol {
    bundled("asktime.proto", ASKTIME_SOURCE)
}

/// Temperature then pulse, standard terms.
pub fn p1() -> Protocol {
    bundled("p1.proto", P1_SOURCE)
}

/// Pulse then temperature, specialized terms.
pub fn p2() -> Protocol {
    bundled("p2.proto", P2_SOURCE)
}

/// Source of a bundled protocol by protocol name (case-insensitive).
pub fn fixture(name: &str) -> Option<(&'static str, &'static str)> {
    match name.to_ascii_lowercase().as_str() {
        "asktime" => Some(("asktime.proto", ASKTIME_SOURCE)),
        "p1" => Some(("p1.proto", P1_SOURCE)),
        "p2" => Some(("p2.proto", P2_SOURCE)),
        _ => None,
    }
}
