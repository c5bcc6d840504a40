use std::collections::BTreeMap;
use std::fmt;

use super::fluent::{fact_matches, Fact, Fluent, Tick};
use super::registry::{effect_template, SemanticsRegistry};
use super::ActEvent;
use crate::ontology::Ontology;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StampedFluent {
    pub fluent: Fluent,
    pub at: Tick,
}

impl fmt::Display for StampedFluent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.fluent, self.at)
    }
}

/// The fluents holding at one moment, each with the tick it was initiated at.
///
/// A store is a value: [`FluentStore::apply_event`] returns the successor
/// and leaves `self` untouched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FluentStore {
    active: BTreeMap<Fluent, Tick>,
    clock: Tick,
}

impl FluentStore {
    pub fn new() -> Self {
        FluentStore::default()
    }

    pub fn clock(&self) -> Tick {
        self.clock
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    /// Tick at which `fluent` was initiated, if it holds.
    pub fn holds(&self, fluent: &Fluent) -> Option<Tick> {
        self.active.get(fluent).copied()
    }

    /// Active fluents ordered by tick (ties by fluent order).
    pub fn stamped(&self) -> Vec<StampedFluent> {
        let mut out: Vec<StampedFluent> = self
            .active
            .iter()
            .map(|(f, t)| StampedFluent {
                fluent: f.clone(),
                at: *t,
            })
            .collect();
        out.sort_by(|a, b| a.at.cmp(&b.at).then_with(|| a.fluent.cmp(&b.fluent)));
        out
    }

    pub fn facts(&self) -> impl Iterator<Item = (&Fact, Tick)> {
        self.active
            .iter()
            .filter_map(|(f, t)| f.as_fact().map(|fact| (fact, *t)))
    }

    pub fn commitments(&self) -> impl Iterator<Item = (&Fluent, Tick)> {
        self.active
            .iter()
            .filter(|(f, _)| f.is_commitment())
            .map(|(f, t)| (f, *t))
    }

    pub fn has_commitments(&self) -> bool {
        self.commitments().next().is_some()
    }

    fn stamp(&mut self, fluent: Fluent, at: Tick) {
        // re-initiation refreshes the stamp
        self.active.insert(fluent, at);
    }

    /// Conditional commitments whose condition is matched by an active fact.
    /// Empty after every [`FluentStore::apply_event`].
    pub fn pending_conditionals(&self, ont: &Ontology) -> Result<Vec<StampedFluent>> {
        let mut out = Vec::new();
        for (fluent, at) in &self.active {
            if let Fluent::Conditional { condition, .. } = fluent {
                for (fact, _) in self.facts() {
                    if fact_matches(ont, fact, condition)? {
                        out.push(StampedFluent {
                            fluent: fluent.clone(),
                            at: *at,
                        });
                        break;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sends one communication act.
    ///
    /// The act's template effects all share one fresh tick. Afterwards the
    /// commitment rules run to a fixpoint:
    ///
    /// * a commitment whose debtor sent the act is discharged when a fact
    ///   initiated in this step matches its condition;
    /// * a conditional commitment whose condition is matched by an active
    ///   fact is replaced by the base commitment to its `conditioned_to`
    ///   fact, each replacement taking its own tick, oldest first.
    pub fn apply_event(
        &self,
        ont: &Ontology,
        registry: &SemanticsRegistry,
        event: &ActEvent,
    ) -> Result<FluentStore> {
        if event.sender == event.receiver {
            return Err(Error::SelfAddressed {
                act: event.act.clone(),
                role: event.sender.to_string(),
            });
        }
        let effect = effect_template(ont, registry, event)?;
        let mut next = self.clone();
        next.clock = next.clock.next();
        let now = next.clock;

        for termination in &effect.terminated {
            let mut doomed = Vec::new();
            for f in next.active.keys() {
                if termination.applies_to(ont, f)? {
                    doomed.push(f.clone());
                }
            }
            for f in doomed {
                next.active.remove(&f);
            }
        }
        let mut initiated: Vec<Fact> = Vec::new();
        for f in effect.initiated {
            if let Fluent::Fact(fact) = &f {
                initiated.push(fact.clone());
            }
            next.stamp(f, now);
        }

        loop {
            let mut changed = false;

            // discharge
            let mut discharged = Vec::new();
            for f in next.active.keys() {
                if let Fluent::Commitment {
                    debtor, condition, ..
                } = f
                {
                    if *debtor != event.sender {
                        continue;
                    }
                    for fact in &initiated {
                        if fact_matches(ont, fact, condition)? {
                            discharged.push(f.clone());
                            break;
                        }
                    }
                }
            }
            for f in discharged {
                next.active.remove(&f);
                changed = true;
            }

            // promotion
            let mut firing = next.pending_conditionals(ont)?;
            firing.sort_by(|a, b| a.at.cmp(&b.at).then_with(|| a.fluent.cmp(&b.fluent)));
            for StampedFluent { fluent, .. } in firing {
                next.active.remove(&fluent);
                if let Fluent::Conditional {
                    debtor,
                    creditor,
                    conditioned_to,
                    ..
                } = fluent
                {
                    next.clock = next.clock.next();
                    let at = next.clock;
                    next.stamp(
                        Fluent::Commitment {
                            debtor,
                            creditor,
                            condition: conditioned_to,
                        },
                        at,
                    );
                }
                changed = true;
            }

            if !changed {
                break;
            }
        }
        Ok(next)
    }
}

impl fmt::Display for FluentStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.stamped().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// Free-function form of [`FluentStore::apply_event`].
pub fn apply_event(
    store: &FluentStore,
    ont: &Ontology,
    registry: &SemanticsRegistry,
    event: &ActEvent,
) -> Result<FluentStore> {
    store.apply_event(ont, registry, event)
}
