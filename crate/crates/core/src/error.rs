use std::fmt;

use thiserror::Error;

use crate::dsl::{Diagnostic, SourceSpan};
use crate::protocol::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}", DisplayLines(.0))]
    Parse(Vec<Diagnostic>),

    #[error("invalid class name `{0}`")]
    InvalidName(String),
    #[error("{span}: class `{name}` is declared more than once")]
    DuplicateClass { name: String, span: SourceSpan },
    #[error("{span}: {class}: {attribute} `{target}` is {}, expected {expected}", found.map_or("undeclared".to_string(), |f| format!("a {f} class")))]
    BadReference {
        class: String,
        attribute: String,
        target: String,
        expected: &'static str,
        found: Option<&'static str>,
        span: Box<SourceSpan>,
    },
    #[error("inheritance cycle through `{0}`")]
    Cycle(String),
    #[error("{span}: {class} has content {content}, which is not subsumed by {required} as required by {ancestor}")]
    ContentRestriction {
        class: String,
        content: String,
        ancestor: String,
        required: String,
        span: Box<SourceSpan>,
    },
    #[error("{class} inherits conflicting {attribute} values: {}", .candidates.join(", "))]
    AmbiguousInheritance {
        class: String,
        attribute: &'static str,
        candidates: Vec<String>,
    },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown content class `{0}`")]
    UnknownContent(String),
    #[error("`{0}` is not a communication act")]
    NotAnAct(String),
    #[error("`{general}` and `{specific}` live in different hierarchies")]
    MixedHierarchies { general: String, specific: String },

    #[error("{class} inherits several unrelated semantics: {}", .candidates.join(", "))]
    AmbiguousSemantics {
        class: String,
        candidates: Vec<String>,
    },
    #[error("no semantics registered for `{0}` or any of its ancestors")]
    NoSemantics(String),
    #[error("act `{0}` has no content")]
    MissingContent(String),
    #[error("commissive act `{0}` has no condition")]
    MissingCondition(String),
    #[error("responsive act `{0}` does not name the request it replies to")]
    MissingReplyTo(String),
    #[error("act `{act}` is sent by {role} to itself")]
    SelfAddressed { act: String, role: String },

    #[error("protocol is incomplete: {0}")]
    IncompleteProtocol(String),
    #[error("{span}: unknown act class `{act}`")]
    UnknownActClass { act: String, span: SourceSpan },
    #[error("protocol {name} is invalid:\n{}", DisplayLines(.violations))]
    InvalidProtocol {
        name: String,
        violations: Vec<Violation>,
    },
    #[error("protocol {protocol} has a cycle through {state}")]
    CyclicProtocol { protocol: String, state: String },
    #[error("`{act}` is not allowed in state {state} (allowed: {})", .allowed.join(", "))]
    ActNotAllowed {
        state: String,
        act: String,
        allowed: Vec<String>,
    },
    #[error("protocol {protocol}: run {run} ends in {state} with active commitments {}", .commitments.join(", "))]
    FinalState {
        protocol: String,
        run: String,
        state: String,
        commitments: Vec<String>,
    },
    #[error("protocols {a} and {b} do not share the same roles")]
    RoleMismatch { a: String, b: String },

    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

struct DisplayLines<'a, T>(&'a [T]);

impl<T: fmt::Display> fmt::Display for DisplayLines<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}
