//! Protocol traces: what holds at the end of each run, in initiation order.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::ontology::Ontology;
use crate::protocol::{Protocol, Run};
use crate::semantics::{Fact, SemanticsRegistry, Tick};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceEntry {
    pub fact: Fact,
    /// 1-based position after normalization.
    pub rank: usize,
}

/// Facts holding at a final state, sorted by initiation tick, with ticks
/// replaced by ranks so that traces from different runs compare by
/// relative order only.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProtocolTrace {
    entries: Vec<TraceEntry>,
}

impl ProtocolTrace {
    /// Builds a normalized trace from facts already in order.
    pub fn from_facts(facts: impl IntoIterator<Item = Fact>) -> Self {
        ProtocolTrace {
            entries: facts
                .into_iter()
                .enumerate()
                .map(|(i, fact)| TraceEntry { fact, rank: i + 1 })
                .collect(),
        }
    }

    /// Sorts by tick and normalizes.
    pub fn from_stamped(mut stamped: Vec<(Fact, Tick)>) -> Self {
        stamped.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        ProtocolTrace::from_facts(stamped.into_iter().map(|(f, _)| f))
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn facts(&self) -> impl Iterator<Item = &Fact> {
        self.entries.iter().map(|e| &e.fact)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    json!({
                        "kind": e.fact.kind(),
                        "roles": e.fact.roles(),
                        "content": e.fact.content(),
                        "rank": e.rank,
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for ProtocolTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({}, {})", e.fact, e.rank)?;
        }
        f.write_str("]")
    }
}

/// Simulates `run` and reads the trace off its final store.
pub fn trace_of_run(
    p: &Protocol,
    run: &Run,
    ont: &Ontology,
    registry: &SemanticsRegistry,
) -> Result<ProtocolTrace> {
    let store = run.final_store(ont, registry)?;
    if store.has_commitments() {
        return Err(Error::FinalState {
            protocol: p.name().to_string(),
            run: run.to_string(),
            state: run.last_state().to_string(),
            commitments: store
                .stamped()
                .into_iter()
                .filter(|s| s.fluent.is_commitment())
                .map(|s| s.to_string())
                .collect(),
        });
    }
    Ok(ProtocolTrace::from_stamped(
        store.facts().map(|(f, t)| (f.clone(), t)).collect(),
    ))
}

/// All traces a protocol generates, duplicates collapsed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceSet {
    traces: BTreeSet<ProtocolTrace>,
}

impl TraceSet {
    pub fn iter(&self) -> impl Iterator<Item = &ProtocolTrace> {
        self.traces.iter()
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn contains(&self, t: &ProtocolTrace) -> bool {
        self.traces.contains(t)
    }

    pub fn as_set(&self) -> &BTreeSet<ProtocolTrace> {
        &self.traces
    }

    /// The set of time-abstracted multisets of this trace set.
    pub fn abstracted(&self) -> BTreeSet<AbstractTraceMultiset> {
        self.traces.iter().map(abstract_time).collect()
    }
}

impl FromIterator<ProtocolTrace> for TraceSet {
    fn from_iter<I: IntoIterator<Item = ProtocolTrace>>(iter: I) -> Self {
        TraceSet {
            traces: iter.into_iter().collect(),
        }
    }
}

pub fn trace_set(p: &Protocol, ont: &Ontology, registry: &SemanticsRegistry) -> Result<TraceSet> {
    p.enumerate_runs()?
        .iter()
        .map(|r| trace_of_run(p, r, ont, registry))
        .collect()
}

/// A trace with its order forgotten. Stored sorted, so equal multisets are
/// equal values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractTraceMultiset {
    facts: Vec<Fact>,
}

impl AbstractTraceMultiset {
    pub fn new(mut facts: Vec<Fact>) -> Self {
        facts.sort();
        AbstractTraceMultiset { facts }
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn multiplicity(&self, fact: &Fact) -> usize {
        self.facts.iter().filter(|f| *f == fact).count()
    }
}

impl fmt::Display for AbstractTraceMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, fact) in self.facts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{fact}")?;
        }
        f.write_str("}")
    }
}

pub fn abstract_time(t: &ProtocolTrace) -> AbstractTraceMultiset {
    AbstractTraceMultiset::new(t.facts().cloned().collect())
}
