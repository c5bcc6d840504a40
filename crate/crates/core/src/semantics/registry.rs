use std::collections::BTreeMap;

use super::fluent::{Fact, Fluent, Role};
use super::ActEvent;
use crate::ontology::{self, Ontology};
use crate::{Error, Result};

/// The effect predicates available for upper-level act classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EffectTemplate {
    /// Request(s,r,P) initiates CC(r, s, accept(r,s,P), P).
    Request,
    /// Accept(s,r,P) initiates accept(s,r,P).
    Accept,
    /// Assertive(s,r,P) initiates P.
    Assertive,
    /// Commissive(s,r,C,P) initiates CC(s,r,C,P).
    Commissive,
    /// Responsive(s,r,P,RA) initiates P and terminates C(s,r,RA).
    Responsive,
}

/// Maps act classes to the effect template they carry. Subclasses inherit
/// through [`Ontology::most_specific_semantic_ancestor`].
#[derive(Debug, Clone, Default)]
pub struct SemanticsRegistry {
    templates: BTreeMap<String, EffectTemplate>,
}

impl SemanticsRegistry {
    pub fn empty() -> Self {
        SemanticsRegistry::default()
    }

    /// The five templates on their upper-level classes.
    pub fn standard() -> Self {
        let mut reg = SemanticsRegistry::empty();
        reg.register(ontology::REQUEST, EffectTemplate::Request);
        reg.register(ontology::ACCEPT, EffectTemplate::Accept);
        reg.register(ontology::ASSERTIVE, EffectTemplate::Assertive);
        reg.register(ontology::COMMISSIVE, EffectTemplate::Commissive);
        reg.register(ontology::RESPONSIVE, EffectTemplate::Responsive);
        reg
    }

    pub fn register(&mut self, class: impl Into<String>, template: EffectTemplate) -> &mut Self {
        self.templates.insert(class.into(), template);
        self
    }

    pub fn template_for(&self, class: &str) -> Option<EffectTemplate> {
        self.templates.get(class).copied()
    }
}

/// Removes active `C(debtor, creditor, c)` whenever `discharged ⊑ c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Termination {
    pub debtor: Role,
    pub creditor: Role,
    pub discharged: Fact,
}

impl Termination {
    pub fn applies_to(&self, ont: &Ontology, active: &Fluent) -> Result<bool> {
        match active {
            Fluent::Commitment {
                debtor,
                creditor,
                condition,
            } if *debtor == self.debtor && *creditor == self.creditor => {
                super::fact_matches(ont, &self.discharged, condition)
            }
            _ => Ok(false),
        }
    }
}

/// Instantiated effects of one act.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Effect {
    pub initiated: Vec<Fluent>,
    pub terminated: Vec<Termination>,
}

fn required_content(ont: &Ontology, act: &str) -> Result<String> {
    ont.content_of(act)
        .map(str::to_string)
        .ok_or_else(|| Error::MissingContent(act.to_string()))
}

/// Instantiates the effect template inherited by the event's act class.
pub fn effect_template(
    ont: &Ontology,
    registry: &SemanticsRegistry,
    event: &ActEvent,
) -> Result<Effect> {
    let base = ont.most_specific_semantic_ancestor(&event.act, registry)?;
    let template = registry
        .template_for(&base)
        .expect("resolved ancestor is registered");
    let s = event.sender.clone();
    let r = event.receiver.clone();
    let content = required_content(ont, &event.act)?;
    let effect = match template {
        EffectTemplate::Request => Effect {
            initiated: vec![Fluent::Conditional {
                debtor: r.clone(),
                creditor: s.clone(),
                condition: Fact::Acceptance {
                    signatory: r,
                    addressee: s,
                    object: content.clone(),
                },
                conditioned_to: Fact::Proposition(content),
            }],
            terminated: Vec::new(),
        },
        EffectTemplate::Accept => Effect {
            initiated: vec![Fluent::Fact(Fact::Acceptance {
                signatory: s,
                addressee: r,
                object: content,
            })],
            terminated: Vec::new(),
        },
        EffectTemplate::Assertive => Effect {
            initiated: vec![Fluent::Fact(Fact::Proposition(content))],
            terminated: Vec::new(),
        },
        EffectTemplate::Commissive => {
            let condition = ont
                .condition_of(&event.act)
                .ok_or_else(|| Error::MissingCondition(event.act.clone()))?;
            Effect {
                initiated: vec![Fluent::Conditional {
                    debtor: s,
                    creditor: r,
                    condition: Fact::Proposition(condition.to_string()),
                    conditioned_to: Fact::Proposition(content),
                }],
                terminated: Vec::new(),
            }
        }
        EffectTemplate::Responsive => {
            let request = ont
                .reply_target_of(&event.act)
                .ok_or_else(|| Error::MissingReplyTo(event.act.clone()))?;
            let requested = required_content(ont, request)?;
            Effect {
                initiated: vec![Fluent::Fact(Fact::Proposition(content))],
                terminated: vec![Termination {
                    debtor: s,
                    creditor: r,
                    discharged: Fact::Proposition(requested),
                }],
            }
        }
    };
    Ok(effect)
}
