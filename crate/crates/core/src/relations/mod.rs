//! Effect-based relations between protocols.
//!
//! Deep relations compare trace sets, where a trace keeps the relative
//! order of effects. Shallow relations compare the time-abstracted
//! multisets instead. Specialized variants allow each fact to be matched by
//! a more general one.
//!
//! Apart from the two equivalences, these relations are directional ("A is a
//! restriction of B"). [`compare`] evaluates each relation in both
//! orientations and records which ones hold.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

mod matching;

pub use matching::{shallow_trace_specializes, MatchedPair, MatchingMap};

use crate::ontology::Ontology;
use crate::protocol::Protocol;
use crate::semantics::{fact_matches, SemanticsRegistry};
use crate::traces::{trace_set, AbstractTraceMultiset, ProtocolTrace, TraceSet};
use crate::{Error, Result};

/// Positionwise specialization: same length, and each fact of `t` is
/// subsumed by the fact at the same rank in `s`.
pub fn trace_specializes(ont: &Ontology, t: &ProtocolTrace, s: &ProtocolTrace) -> Result<bool> {
    if t.len() != s.len() {
        return Ok(false);
    }
    for (x, y) in t.facts().zip(s.facts()) {
        if !fact_matches(ont, x, y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Equivalent,
    Restriction,
    SpecializedEquivalent,
    SpecializedRestriction,
    ShallowEquivalent,
    ShallowRestriction,
    ShallowSpecializedEquivalent,
    ShallowSpecializedRestriction,
}

impl Relation {
    /// In strength order; the first one that holds is the strongest.
    pub const ALL: [Relation; 8] = [
        Relation::Equivalent,
        Relation::Restriction,
        Relation::SpecializedEquivalent,
        Relation::SpecializedRestriction,
        Relation::ShallowEquivalent,
        Relation::ShallowRestriction,
        Relation::ShallowSpecializedEquivalent,
        Relation::ShallowSpecializedRestriction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Equivalent => "equivalent",
            Relation::Restriction => "restriction",
            Relation::SpecializedEquivalent => "specialized-equivalent",
            Relation::SpecializedRestriction => "specialized-restriction",
            Relation::ShallowEquivalent => "shallow-equivalent",
            Relation::ShallowRestriction => "shallow-restriction",
            Relation::ShallowSpecializedEquivalent => "shallow-specialized-equivalent",
            Relation::ShallowSpecializedRestriction => "shallow-specialized-restriction",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// First (`A`) or second (`B`) argument of a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// Why a relation fails in one orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A trace of `side` with no acceptable counterpart on the other side.
    Trace { side: Side, trace: ProtocolTrace },
    /// A multiset of `side` with no acceptable counterpart on the other side.
    Multiset {
        side: Side,
        multiset: AbstractTraceMultiset,
    },
    /// Strict inclusion fails because both sides are equal.
    EqualSets,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    /// Shallow-specialized relations carry the matchings found.
    Holds {
        matchings: Vec<MatchingMap>,
    },
    Fails(Witness),
}

impl Check {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds { .. })
    }

    fn plain() -> Check {
        Check::Holds {
            matchings: Vec::new(),
        }
    }
}

/// A relation checked as "A is R of B" (`forward`) and "B is R of A" (`reverse`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub forward: Check,
    pub reverse: Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Neither,
    /// A is R of B.
    AOfB,
    /// B is R of A.
    BOfA,
    Both,
}

impl Outcome {
    pub fn direction(&self) -> Direction {
        match (self.forward.holds(), self.reverse.holds()) {
            (true, true) => Direction::Both,
            (true, false) => Direction::AOfB,
            (false, true) => Direction::BOfA,
            (false, false) => Direction::Neither,
        }
    }

    pub fn holds(&self) -> bool {
        self.direction() != Direction::Neither
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationVerdict {
    pub a: String,
    pub b: String,
    outcomes: Vec<(Relation, Outcome)>,
}

impl RelationVerdict {
    pub fn outcome(&self, rel: Relation) -> &Outcome {
        &self
            .outcomes
            .iter()
            .find(|(r, _)| *r == rel)
            .expect("every relation is evaluated")
            .1
    }

    pub fn outcomes(&self) -> impl Iterator<Item = (Relation, &Outcome)> {
        self.outcomes.iter().map(|(r, o)| (*r, o))
    }

    /// Holds in at least one orientation.
    pub fn holds(&self, rel: Relation) -> bool {
        self.outcome(rel).holds()
    }

    /// "A is `rel` of B".
    pub fn forward(&self, rel: Relation) -> bool {
        self.outcome(rel).forward.holds()
    }

    /// "B is `rel` of A".
    pub fn reverse(&self, rel: Relation) -> bool {
        self.outcome(rel).reverse.holds()
    }

    pub fn direction(&self, rel: Relation) -> Direction {
        self.outcome(rel).direction()
    }

    pub fn strongest(&self) -> Option<(Relation, Direction)> {
        self.outcomes
            .iter()
            .find(|(_, o)| o.holds())
            .map(|(r, o)| (*r, o.direction()))
    }

    pub fn any_holds(&self) -> bool {
        self.strongest().is_some()
    }

    fn side_name(&self, side: Side) -> &str {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    fn direction_label(&self, d: Direction) -> String {
        match d {
            Direction::Neither => "none".into(),
            Direction::AOfB => format!("{} of {}", self.a, self.b),
            Direction::BOfA => format!("{} of {}", self.b, self.a),
            Direction::Both => "both ways".into(),
        }
    }

    fn describe_check(&self, check: &Check) -> String {
        match check {
            Check::Holds { matchings } if matchings.is_empty() => "holds".into(),
            Check::Holds { matchings } => {
                let maps: Vec<String> = matchings.iter().map(|m| m.to_string()).collect();
                format!("holds via {}", maps.join("; "))
            }
            Check::Fails(w) => self.describe_witness(w),
        }
    }

    fn describe_witness(&self, w: &Witness) -> String {
        match w {
            Witness::Trace { side, trace } => {
                format!("trace of {} unmatched: {trace}", self.side_name(*side))
            }
            Witness::Multiset { side, multiset } => {
                format!(
                    "multiset of {} unmatched: {multiset}",
                    self.side_name(*side)
                )
            }
            Witness::EqualSets => "sets are equal".into(),
        }
    }

    /// Fixed-width table, one row per relation.
    pub fn render_table(&self) -> String {
        let fwd = format!("{} of {}", self.a, self.b);
        let rev = format!("{} of {}", self.b, self.a);
        let w1 = fwd.len().max(5);
        let w2 = rev.len().max(5);
        let mut out = format!("{:<32} {:<w1$} {:<w2$} witness\n", "relation", fwd, rev);
        let mark = |c: &Check| if c.holds() { "holds" } else { "fails" };
        for (rel, o) in &self.outcomes {
            let witness = match o.direction() {
                Direction::Neither => format!(
                    "{} | {}",
                    self.describe_check(&o.forward),
                    self.describe_check(&o.reverse)
                ),
                Direction::AOfB | Direction::Both => self.describe_check(&o.forward),
                Direction::BOfA => self.describe_check(&o.reverse),
            };
            out.push_str(&format!(
                "{:<32} {:<w1$} {:<w2$} {}\n",
                rel.name(),
                mark(&o.forward),
                mark(&o.reverse),
                witness
            ));
        }
        match self.strongest() {
            Some((r, d)) => {
                out.push_str(&format!("strongest: {r} ({})\n", self.direction_label(d)))
            }
            None => out.push_str("strongest: none\n"),
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let side = |s: Side| match s {
            Side::A => "a",
            Side::B => "b",
        };
        let check = |c: &Check| -> Value {
            match c {
                Check::Holds { matchings } => json!({
                    "holds": true,
                    "matchings": matchings.iter().map(|m| {
                        m.pairs().iter().map(|p| json!({
                            "from": p.source.to_string(),
                            "to": p.target.to_string(),
                        })).collect::<Vec<_>>()
                    }).collect::<Vec<_>>(),
                }),
                Check::Fails(w) => {
                    let witness = match w {
                        Witness::Trace { side: s, trace } => json!({
                            "kind": "trace", "side": side(*s), "trace": trace.to_json(),
                            "text": trace.to_string(),
                        }),
                        Witness::Multiset { side: s, multiset } => json!({
                            "kind": "multiset", "side": side(*s),
                            "facts": multiset.facts().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                            "text": multiset.to_string(),
                        }),
                        Witness::EqualSets => json!({"kind": "equal-sets"}),
                    };
                    json!({"holds": false, "witness": witness})
                }
            }
        };
        let direction = |d: Direction| match d {
            Direction::Neither => "neither",
            Direction::AOfB => "a-of-b",
            Direction::BOfA => "b-of-a",
            Direction::Both => "both",
        };
        let relations: Vec<Value> = self
            .outcomes
            .iter()
            .map(|(r, o)| {
                json!({
                    "relation": r.name(),
                    "holds": o.holds(),
                    "direction": direction(o.direction()),
                    "a_of_b": check(&o.forward),
                    "b_of_a": check(&o.reverse),
                })
            })
            .collect();
        json!({
            "a": self.a,
            "b": self.b,
            "relations": relations,
            "strongest": self.strongest().map(|(r, d)| json!({
                "relation": r.name(),
                "direction": direction(d),
            })),
        })
    }
}

type Shallow = BTreeSet<AbstractTraceMultiset>;

fn equal_sets<T: Ord + Clone>(
    x: &BTreeSet<T>,
    y: &BTreeSet<T>,
    wrap: impl Fn(Side, T) -> Witness,
) -> Check {
    if let Some(t) = x.difference(y).next() {
        Check::Fails(wrap(Side::A, t.clone()))
    } else if let Some(t) = y.difference(x).next() {
        Check::Fails(wrap(Side::B, t.clone()))
    } else {
        Check::plain()
    }
}

fn strict_subset<T: Ord + Clone>(
    (xs, x): (Side, &BTreeSet<T>),
    y: &BTreeSet<T>,
    wrap: impl Fn(Side, T) -> Witness,
) -> Check {
    if let Some(t) = x.difference(y).next() {
        Check::Fails(wrap(xs, t.clone()))
    } else if x == y {
        Check::Fails(Witness::EqualSets)
    } else {
        Check::plain()
    }
}

fn deep_specialized(
    ont: &Ontology,
    (xs, x): (Side, &TraceSet),
    (ys, y): (Side, &TraceSet),
    both_ways: bool,
) -> Result<Check> {
    for t in x.iter() {
        let mut found = false;
        for s in y.iter() {
            if trace_specializes(ont, t, s)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(Check::Fails(Witness::Trace {
                side: xs,
                trace: t.clone(),
            }));
        }
    }
    if both_ways {
        for s in y.iter() {
            let mut found = false;
            for t in x.iter() {
                if trace_specializes(ont, t, s)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(Check::Fails(Witness::Trace {
                    side: ys,
                    trace: s.clone(),
                }));
            }
        }
    }
    Ok(Check::plain())
}

fn shallow_specialized(
    ont: &Ontology,
    (xs, x): (Side, &Shallow),
    (ys, y): (Side, &Shallow),
    both_ways: bool,
) -> Result<Check> {
    let mut matchings = Vec::new();
    for t in x {
        let mut found = None;
        for s in y {
            if let Some(m) = shallow_trace_specializes(ont, t, s)? {
                found = Some(m);
                break;
            }
        }
        match found {
            Some(m) => matchings.push(m),
            None => {
                return Ok(Check::Fails(Witness::Multiset {
                    side: xs,
                    multiset: t.clone(),
                }))
            }
        }
    }
    if both_ways {
        for s in y {
            let mut found = None;
            for t in x {
                if let Some(m) = shallow_trace_specializes(ont, t, s)? {
                    found = Some(m);
                    break;
                }
            }
            match found {
                Some(m) => {
                    if !matchings.contains(&m) {
                        matchings.push(m);
                    }
                }
                None => {
                    return Ok(Check::Fails(Witness::Multiset {
                        side: ys,
                        multiset: s.clone(),
                    }))
                }
            }
        }
    }
    Ok(Check::Holds { matchings })
}

fn evaluate(
    ont: &Ontology,
    rel: Relation,
    x: (Side, &TraceSet, &Shallow),
    y: (Side, &TraceSet, &Shallow),
) -> Result<Check> {
    let trace_w = |side, trace| Witness::Trace { side, trace };
    let multi_w = |side, multiset| Witness::Multiset { side, multiset };
    Ok(match rel {
        Relation::Equivalent => {
            let c = equal_sets(x.1.as_set(), y.1.as_set(), trace_w);
            orient(c, x.0)
        }
        Relation::Restriction => strict_subset((x.0, x.1.as_set()), y.1.as_set(), trace_w),
        Relation::SpecializedEquivalent => deep_specialized(ont, (x.0, x.1), (y.0, y.1), true)?,
        Relation::SpecializedRestriction => deep_specialized(ont, (x.0, x.1), (y.0, y.1), false)?,
        Relation::ShallowEquivalent => orient(equal_sets(x.2, y.2, multi_w), x.0),
        Relation::ShallowRestriction => strict_subset((x.0, x.2), y.2, multi_w),
        Relation::ShallowSpecializedEquivalent => {
            shallow_specialized(ont, (x.0, x.2), (y.0, y.2), true)?
        }
        Relation::ShallowSpecializedRestriction => {
            shallow_specialized(ont, (x.0, x.2), (y.0, y.2), false)?
        }
    })
}

/// `equal_sets` labels its first argument A; flip when evaluating from B.
fn orient(check: Check, first: Side) -> Check {
    if first == Side::A {
        return check;
    }
    let flip = |s: Side| if s == Side::A { Side::B } else { Side::A };
    match check {
        Check::Fails(Witness::Trace { side, trace }) => Check::Fails(Witness::Trace {
            side: flip(side),
            trace,
        }),
        Check::Fails(Witness::Multiset { side, multiset }) => Check::Fails(Witness::Multiset {
            side: flip(side),
            multiset,
        }),
        other => other,
    }
}

/// Evaluates all eight relations between two already computed trace sets.
pub fn compare_trace_sets(
    ont: &Ontology,
    a_name: &str,
    a: &TraceSet,
    b_name: &str,
    b: &TraceSet,
) -> Result<RelationVerdict> {
    let sa = a.abstracted();
    let sb = b.abstracted();
    let mut outcomes = Vec::with_capacity(Relation::ALL.len());
    for rel in Relation::ALL {
        let forward = evaluate(ont, rel, (Side::A, a, &sa), (Side::B, b, &sb))?;
        let reverse = evaluate(ont, rel, (Side::B, b, &sb), (Side::A, a, &sa))?;
        outcomes.push((rel, Outcome { forward, reverse }));
    }
    Ok(RelationVerdict {
        a: a_name.to_string(),
        b: b_name.to_string(),
        outcomes,
    })
}

/// Decides every relation between two protocols with the same roles.
pub fn compare(
    a: &Protocol,
    b: &Protocol,
    ont: &Ontology,
    registry: &SemanticsRegistry,
) -> Result<RelationVerdict> {
    let roles = |p: &Protocol| {
        let (x, y) = p.roles();
        BTreeSet::from([x.clone(), y.clone()])
    };
    if roles(a) != roles(b) {
        return Err(Error::RoleMismatch {
            a: a.name().to_string(),
            b: b.name().to_string(),
        });
    }
    let ta = trace_set(a, ont, registry)?;
    let tb = trace_set(b, ont, registry)?;
    let a_name = a.name();
    // same-named protocols would make the rendering ambiguous
    let b_name = if b.name() == a_name {
        format!("{}'", b.name())
    } else {
        b.name().to_string()
    };
    compare_trace_sets(ont, a_name, &ta, &b_name, &tb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, default_ontology};
    use crate::protocol::load_protocol;
    use crate::semantics::Fact;

    fn reg() -> SemanticsRegistry {
        SemanticsRegistry::standard()
    }

    #[test]
    fn positionwise_specialization() {
        let ont = default_ontology();
        let p2 = ProtocolTrace::from_facts([
            Fact::acceptance("B", "A", "A-PulseReq"),
            Fact::proposition("A-PulseInfo"),
            Fact::acceptance("B", "A", "A-TempReq"),
            Fact::proposition("A-TempInfo"),
        ]);
        let general = ProtocolTrace::from_facts([
            Fact::acceptance("B", "A", "PulseReq"),
            Fact::proposition("PulseInfo"),
            Fact::acceptance("B", "A", "TempReq"),
            Fact::proposition("TempInfo"),
        ]);
        let p1 = ProtocolTrace::from_facts([
            Fact::acceptance("B", "A", "TempReq"),
            Fact::proposition("TempInfo"),
            Fact::acceptance("B", "A", "PulseReq"),
            Fact::proposition("PulseInfo"),
        ]);
        assert!(trace_specializes(&ont, &p2, &general).unwrap());
        assert!(!trace_specializes(&ont, &general, &p2).unwrap());
        assert!(trace_specializes(&ont, &p2, &p2).unwrap());
        assert!(!trace_specializes(&ont, &p2, &p1).unwrap());
        let short = ProtocolTrace::from_facts([Fact::acceptance("B", "A", "PulseReq")]);
        assert!(!trace_specializes(&ont, &p2, &short).unwrap());
    }

    #[test]
    fn p1_p2() {
        let ont = default_ontology();
        let v = compare(&catalog::p1(), &catalog::p2(), &ont, &reg()).unwrap();
        assert!(v.holds(Relation::ShallowSpecializedEquivalent));
        assert_eq!(
            v.direction(Relation::ShallowSpecializedEquivalent),
            Direction::BOfA
        );
        for rel in [
            Relation::Equivalent,
            Relation::Restriction,
            Relation::SpecializedEquivalent,
        ] {
            assert!(!v.holds(rel), "{rel}");
        }
        assert_eq!(
            v.strongest(),
            Some((Relation::ShallowSpecializedEquivalent, Direction::BOfA))
        );
        match &v.outcome(Relation::ShallowSpecializedEquivalent).reverse {
            Check::Holds { matchings } => {
                assert_eq!(matchings.len(), 1);
                assert_eq!(matchings[0].len(), 4);
            }
            other => panic!("{other:?}"),
        }
        match &v.outcome(Relation::ShallowSpecializedEquivalent).forward {
            Check::Fails(Witness::Multiset { side: Side::A, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn self_comparison() {
        let ont = default_ontology();
        let a = catalog::asktime();
        let v = compare(&a, &a, &ont, &reg()).unwrap();
        assert_eq!(v.direction(Relation::Equivalent), Direction::Both);
        assert!(!v.holds(Relation::Restriction));
        assert_eq!(
            v.outcome(Relation::Restriction).forward,
            Check::Fails(Witness::EqualSets)
        );
        assert_eq!(v.strongest(), Some((Relation::Equivalent, Direction::Both)));
        assert_eq!(v.b, "AskTime'");
    }

    const ONE_ARM: &str = "protocol One\nroles A B\nstate S0 initial\nstate T1\nstate T2\nstate T3 final\n\
        transition S0 -> T1 on TimeRequest from A to B\ntransition T1 -> T2 on TimeAccept from B to A\ntransition T2 -> T3 on TimeInform from B to A\n";
    const TWO_ARMS: &str = "protocol Two\nroles A B\nstate S0 initial\nstate T1\nstate T2\nstate T3 final\nstate U1\nstate U2\nstate U3 final\n\
        transition S0 -> T1 on TimeRequest from A to B\ntransition T1 -> T2 on TimeAccept from B to A\ntransition T2 -> T3 on TimeInform from B to A\n\
        transition S0 -> U1 on RequestTemp from A to B\ntransition U1 -> U2 on AcceptTemp from B to A\ntransition U2 -> U3 on TempInform from B to A\n";

    #[test]
    fn arm_restriction() {
        let ont = default_ontology();
        let one = load_protocol(ONE_ARM, &ont).unwrap();
        let two = load_protocol(TWO_ARMS, &ont).unwrap();
        let v = compare(&one, &two, &ont, &reg()).unwrap();
        assert!(v.forward(Relation::Restriction));
        assert!(!v.reverse(Relation::Restriction));
        assert!(v.forward(Relation::SpecializedRestriction));
        assert!(v.forward(Relation::ShallowRestriction));
        assert!(!v.holds(Relation::Equivalent));
        assert_eq!(
            v.strongest(),
            Some((Relation::Restriction, Direction::AOfB))
        );
        match &v.outcome(Relation::Restriction).reverse {
            Check::Fails(Witness::Trace {
                side: Side::B,
                trace,
            }) => {
                assert_eq!(trace.facts().nth(1), Some(&Fact::proposition("TempInfo")));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn role_mismatch() {
        let ont = default_ontology();
        let other = load_protocol(
            &ONE_ARM
                .replace("roles A B", "roles A C")
                .replace("B to A", "C to A")
                .replace("to B", "to C"),
            &ont,
        )
        .unwrap();
        assert!(matches!(
            compare(&catalog::asktime(), &other, &ont, &reg()).unwrap_err(),
            Error::RoleMismatch { .. }
        ));
    }

    #[test]
    fn table_and_json() {
        let ont = default_ontology();
        let v = compare(&catalog::p1(), &catalog::p2(), &ont, &reg()).unwrap();
        let table = v.render_table();
        assert!(
            table.contains("strongest: shallow-specialized-equivalent (P2 of P1)"),
            "{table}"
        );
        assert_eq!(table.lines().count(), 10);
        let j = v.to_json();
        assert_eq!(j["strongest"]["relation"], "shallow-specialized-equivalent");
        assert_eq!(j["strongest"]["direction"], "b-of-a");
        assert_eq!(j["relations"].as_array().unwrap().len(), 8);
        assert_eq!(
            j["relations"][6]["b_of_a"]["matchings"][0]
                .as_array()
                .unwrap()
                .len(),
            4
        );
    }
}
