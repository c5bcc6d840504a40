//! Line-oriented file formats for ontologies and protocols.
//!
//! Both grammars are keyword-led, one statement per line, `#` to end of line
//! is a comment. Parsing never stops at the first problem: each malformed
//! line produces a [`Diagnostic`] and the parser moves on.

mod diagnostic;
mod lexer;
mod ontology_file;
mod protocol_file;
mod serialize;

pub use diagnostic::{Diagnostic, DiagnosticCode, Parsed, Severity, SourceSpan};
pub(crate) use lexer::is_identifier;
pub use ontology_file::{parse_ontology_file, Declaration, DeclaredClass};
pub use protocol_file::{parse_protocol_file, ProtocolDecl, StateDecl, TransitionDecl};
pub use serialize::{serialize_ontology, serialize_protocol};
