use std::fmt;

use serde::Serialize;

use crate::ontology::Ontology;
use crate::Result;

/// A participant role in a two-party protocol, e.g. `A` or `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Role(String);

impl Role {
    pub fn new(name: impl Into<String>) -> Self {
        Role(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Role {
    fn from(s: &str) -> Self {
        Role(s.to_string())
    }
}

/// Logical time. Tick 0 is "before anything happened".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Tick(pub u64);

impl Tick {
    pub fn next(self) -> Tick {
        Tick(self.0 + 1)
    }
}

impl fmt::Display for Tick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// A non-commitment fluent: what a commitment can be about, and what shows
/// up in protocol traces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fact {
    /// A content proposition such as `TimeInfo`.
    Proposition(String),
    /// `accept(signatory, addressee, object)`.
    Acceptance {
        signatory: Role,
        addressee: Role,
        object: String,
    },
}

impl Fact {
    pub fn proposition(content: impl Into<String>) -> Fact {
        Fact::Proposition(content.into())
    }

    pub fn acceptance(
        signatory: impl Into<Role>,
        addressee: impl Into<Role>,
        object: impl Into<String>,
    ) -> Fact {
        Fact::Acceptance {
            signatory: signatory.into(),
            addressee: addressee.into(),
            object: object.into(),
        }
    }

    pub fn kind(&self) -> FluentKind {
        match self {
            Fact::Proposition(_) => FluentKind::Proposition,
            Fact::Acceptance { .. } => FluentKind::Acceptance,
        }
    }

    /// The content class the fact talks about.
    pub fn content(&self) -> &str {
        match self {
            Fact::Proposition(c) => c,
            Fact::Acceptance { object, .. } => object,
        }
    }

    pub fn roles(&self) -> Vec<&Role> {
        match self {
            Fact::Proposition(_) => Vec::new(),
            Fact::Acceptance {
                signatory,
                addressee,
                ..
            } => vec![signatory, addressee],
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Proposition(c) => f.write_str(c),
            Fact::Acceptance {
                signatory,
                addressee,
                object,
            } => write!(f, "accept({signatory},{addressee},{object})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FluentKind {
    Proposition,
    Acceptance,
    Commitment,
    ConditionalCommitment,
}

/// Anything that can hold in a fluent store. Commitments nest only facts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fluent {
    Fact(Fact),
    /// `C(debtor, creditor, condition)`.
    Commitment {
        debtor: Role,
        creditor: Role,
        condition: Fact,
    },
    /// `CC(debtor, creditor, condition, conditioned_to)`.
    Conditional {
        debtor: Role,
        creditor: Role,
        condition: Fact,
        conditioned_to: Fact,
    },
}

impl Fluent {
    pub fn kind(&self) -> FluentKind {
        match self {
            Fluent::Fact(f) => f.kind(),
            Fluent::Commitment { .. } => FluentKind::Commitment,
            Fluent::Conditional { .. } => FluentKind::ConditionalCommitment,
        }
    }

    pub fn as_fact(&self) -> Option<&Fact> {
        match self {
            Fluent::Fact(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_commitment(&self) -> bool {
        !matches!(self, Fluent::Fact(_))
    }
}

impl From<Fact> for Fluent {
    fn from(f: Fact) -> Self {
        Fluent::Fact(f)
    }
}

impl fmt::Display for Fluent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fluent::Fact(fact) => fact.fmt(f),
            Fluent::Commitment {
                debtor,
                creditor,
                condition,
            } => write!(f, "C({debtor},{creditor},{condition})"),
            Fluent::Conditional {
                debtor,
                creditor,
                condition,
                conditioned_to,
            } => write!(f, "CC({debtor},{creditor},{condition},{conditioned_to})"),
        }
    }
}

/// Fact-level subsumption: same kind, same roles, content subsumed.
pub fn fact_matches(ont: &Ontology, concrete: &Fact, pattern: &Fact) -> Result<bool> {
    match (concrete, pattern) {
        (Fact::Proposition(c), Fact::Proposition(p)) => ont.content_subsumes(p, c),
        (
            Fact::Acceptance {
                signatory: cs,
                addressee: ca,
                object: co,
            },
            Fact::Acceptance {
                signatory: ps,
                addressee: pa,
                object: po,
            },
        ) => {
            if cs != ps || ca != pa {
                // still validate the contents
                ont.content_subsumes(po, co)?;
                return Ok(false);
            }
            ont.content_subsumes(po, co)
        }
        _ => {
            ont.content_subsumes(pattern.content(), concrete.content())?;
            Ok(false)
        }
    }
}

/// True iff `concrete ⊑ pattern` in the fluent ontology.
pub fn matches(ont: &Ontology, concrete: &Fluent, pattern: &Fluent) -> Result<bool> {
    use Fluent::*;
    match (concrete, pattern) {
        (Fact(c), Fact(p)) => fact_matches(ont, c, p),
        (
            Commitment {
                debtor: cd,
                creditor: cc,
                condition: cp,
            },
            Commitment {
                debtor: pd,
                creditor: pc,
                condition: pp,
            },
        ) => Ok(fact_matches(ont, cp, pp)? && cd == pd && cc == pc),
        (
            Conditional {
                debtor: cd,
                creditor: cc,
                condition: cp,
                conditioned_to: cq,
            },
            Conditional {
                debtor: pd,
                creditor: pc,
                condition: pp,
                conditioned_to: pq,
            },
        ) => {
            let conditions = fact_matches(ont, cp, pp)?;
            let targets = fact_matches(ont, cq, pq)?;
            Ok(conditions && targets && cd == pd && cc == pc)
        }
        _ => Ok(false),
    }
}
