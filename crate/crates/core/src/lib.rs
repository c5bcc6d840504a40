//! Communication-act ontologies, fluent-based act semantics, and effect-based
//! comparison of two-party protocols.
//!
//! ```
//! use commont::{catalog, compare, Relation, SemanticsRegistry};
//!
//! let ont = catalog::default_ontology();
//! let reg = SemanticsRegistry::standard();
//! let verdict = compare(&catalog::p1(), &catalog::p2(), &ont, &reg).unwrap();
//! assert!(verdict.holds(Relation::ShallowSpecializedEquivalent));
//! assert!(!verdict.holds(Relation::Equivalent));
//! ```

pub mod catalog;
pub mod cli;
pub mod dsl;
mod error;
pub mod ontology;
pub mod protocol;
pub mod relations;
pub mod semantics;
pub mod traces;

pub use error::Error;
pub use ontology::{load_ontology, ActClass, ContentClass, Hierarchy, Ontology};
pub use protocol::{load_protocol, Protocol, Run, Transition, ValidationReport, Violation};
pub use relations::{compare, Relation, RelationVerdict};
pub use semantics::{ActEvent, Fact, Fluent, FluentStore, Role, SemanticsRegistry, Tick};
pub use traces::{abstract_time, trace_set, AbstractTraceMultiset, ProtocolTrace, TraceSet};

pub type Result<T> = std::result::Result<T, Error>;
