//! Commitment semantics of communication acts.
//!
//! Sending an act initiates and terminates fluents according to the effect
//! template of its nearest registered ancestor class. Commitments then
//! evolve by two rules: a fulfilled commitment is discharged, and a
//! conditional commitment whose condition holds is promoted to a base one.

use std::fmt;

use serde::Serialize;

mod fluent;
mod registry;
mod store;

pub use fluent::{fact_matches, matches, Fact, Fluent, FluentKind, Role, Tick};
pub use registry::{effect_template, Effect, EffectTemplate, SemanticsRegistry, Termination};
pub use store::{apply_event, FluentStore, StampedFluent};

/// One communication act being sent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ActEvent {
    pub act: String,
    pub sender: Role,
    pub receiver: Role,
}

impl ActEvent {
    pub fn new(act: impl Into<String>, sender: impl Into<Role>, receiver: impl Into<Role>) -> Self {
        ActEvent {
            act: act.into(),
            sender: sender.into(),
            receiver: receiver.into(),
        }
    }
}

impl fmt::Display for ActEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({} -> {})", self.act, self.sender, self.receiver)
    }
}
