//! Protocols as deterministic state transition systems over act classes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::dsl::{self, ProtocolDecl};
use crate::ontology::{Hierarchy, Ontology};
use crate::semantics::{ActEvent, FluentStore, Role, SemanticsRegistry, StampedFluent};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: String,
    pub target: String,
    pub act: String,
    pub sender: Role,
    pub receiver: Role,
}

impl Transition {
    pub fn event(&self) -> ActEvent {
        ActEvent {
            act: self.act.clone(),
            sender: self.sender.clone(),
            receiver: self.receiver.clone(),
        }
    }
}

/// A two-party protocol: states, one initial state, final states, and
/// transitions labeled with act classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Protocol {
    name: String,
    roles: (Role, Role),
    states: Vec<String>,
    initial: String,
    finals: BTreeSet<String>,
    transitions: Vec<Transition>,
}

/// A path through a protocol: the states visited and the acts sent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Run {
    pub states: Vec<String>,
    pub events: Vec<ActEvent>,
}

impl Run {
    pub fn last_state(&self) -> &str {
        self.states.last().expect("a run visits at least one state")
    }

    pub fn acts(&self) -> Vec<&str> {
        self.events.iter().map(|e| e.act.as_str()).collect()
    }

    /// Fluent stores before the first act and after each act.
    pub fn simulate(
        &self,
        ont: &Ontology,
        registry: &SemanticsRegistry,
    ) -> Result<Vec<FluentStore>> {
        let mut stores = Vec::with_capacity(self.events.len() + 1);
        stores.push(FluentStore::new());
        for e in &self.events {
            let next = stores.last().unwrap().apply_event(ont, registry, e)?;
            stores.push(next);
        }
        Ok(stores)
    }

    pub fn final_store(&self, ont: &Ontology, registry: &SemanticsRegistry) -> Result<FluentStore> {
        Ok(self.simulate(ont, registry)?.pop().unwrap())
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.acts().join(", "))
    }
}

/// Parses and validates a protocol against an ontology.
pub fn load_protocol(source: &str, ont: &Ontology) -> Result<Protocol> {
    Protocol::load("<protocol>", source, ont)
}

impl Protocol {
    /// Parses, resolves act classes, and rejects structural violations.
    pub fn load(file: &str, source: &str, ont: &Ontology) -> Result<Protocol> {
        let p = Protocol::load_unchecked(file, source, ont)?;
        let violations = p.structural_violations();
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidProtocol {
                name: p.name,
                violations,
            })
        }
    }

    /// Like [`Protocol::load`] but keeps nondeterministic, unreachable or
    /// dead-end structure so that [`validate`] can report it.
    pub fn load_unchecked(file: &str, source: &str, ont: &Ontology) -> Result<Protocol> {
        let decl = dsl::parse_protocol_file(file, source).into_result()?;
        Protocol::from_decl(decl, ont)
    }

    pub fn from_decl(decl: ProtocolDecl, ont: &Ontology) -> Result<Protocol> {
        let incomplete = |what: &str| Error::IncompleteProtocol(what.to_string());
        let name = decl.name.ok_or_else(|| incomplete("protocol name"))?;
        let (a, b) = decl.roles.ok_or_else(|| incomplete("roles"))?;
        let initial = decl
            .states
            .iter()
            .find(|s| s.initial)
            .map(|s| s.id.clone())
            .ok_or_else(|| incomplete("initial state"))?;
        let finals: BTreeSet<String> = decl
            .states
            .iter()
            .filter(|s| s.is_final)
            .map(|s| s.id.clone())
            .collect();
        if finals.is_empty() {
            return Err(incomplete("final state"));
        }
        let states: Vec<String> = decl.states.iter().map(|s| s.id.clone()).collect();
        let mut transitions = Vec::with_capacity(decl.transitions.len());
        for t in decl.transitions {
            match ont.hierarchy_of(&t.act) {
                Some(Hierarchy::Act) => {}
                _ => {
                    return Err(Error::UnknownActClass {
                        act: t.act,
                        span: t.act_span,
                    })
                }
            }
            for s in [&t.source, &t.target] {
                if !states.contains(s) {
                    return Err(incomplete(&format!("declaration of state `{s}`")));
                }
            }
            for r in [&t.sender, &t.receiver] {
                if *r != a && *r != b {
                    return Err(incomplete(&format!("role `{r}`")));
                }
            }
            transitions.push(Transition {
                source: t.source,
                target: t.target,
                act: t.act,
                sender: Role::new(t.sender),
                receiver: Role::new(t.receiver),
            });
        }
        Ok(Protocol {
            name,
            roles: (Role::new(a), Role::new(b)),
            states,
            initial,
            finals,
            transitions,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn roles(&self) -> (&Role, &Role) {
        (&self.roles.0, &self.roles.1)
    }

    /// States in declaration order.
    pub fn states(&self) -> impl Iterator<Item = &str> {
        self.states.iter().map(String::as_str)
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<String> {
        &self.finals
    }

    pub fn is_final(&self, state: &str) -> bool {
        self.finals.contains(state)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Outgoing transitions ordered by act class name.
    pub fn outgoing(&self, state: &str) -> Vec<&Transition> {
        let mut out: Vec<&Transition> = self
            .transitions
            .iter()
            .filter(|t| t.source == state)
            .collect();
        out.sort_by(|x, y| x.act.cmp(&y.act).then_with(|| x.target.cmp(&y.target)));
        out
    }

    fn reachable_from<'a>(&'a self, start: &'a str, forward: bool) -> BTreeSet<&'a str> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for t in &self.transitions {
                let (from, to) = if forward {
                    (&t.source, &t.target)
                } else {
                    (&t.target, &t.source)
                };
                if from == s && seen.insert(to.as_str()) {
                    queue.push_back(to);
                }
            }
        }
        seen
    }

    /// Determinism, reachability and dead-end breaches.
    pub fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut labels: BTreeMap<(&str, &str), usize> = BTreeMap::new();
        for t in &self.transitions {
            *labels.entry((&t.source, &t.act)).or_default() += 1;
        }
        for ((state, act), n) in labels {
            if n > 1 {
                out.push(Violation::Nondeterministic {
                    state: state.to_string(),
                    act: act.to_string(),
                });
            }
        }
        let reachable = self.reachable_from(&self.initial, true);
        let mut can_finish: BTreeSet<&str> = BTreeSet::new();
        for f in &self.finals {
            can_finish.extend(self.reachable_from(f, false));
        }
        for s in &self.states {
            if !reachable.contains(s.as_str()) {
                out.push(Violation::Unreachable { state: s.clone() });
            } else if !can_finish.contains(s.as_str()) {
                out.push(Violation::DeadEnd { state: s.clone() });
            }
        }
        out
    }

    /// A state lying on a cycle reachable from the initial state, if any.
    pub fn find_cycle(&self) -> Option<String> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
        let mut stack: Vec<(&str, usize)> = vec![(&self.initial, 0)];
        marks.insert(&self.initial, Mark::Open);
        while let Some((state, idx)) = stack.last_mut() {
            let out = self.outgoing(state);
            if *idx < out.len() {
                let next = out[*idx].target.as_str();
                *idx += 1;
                match marks.get(next) {
                    Some(Mark::Open) => return Some(next.to_string()),
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(next, Mark::Open);
                        stack.push((next, 0));
                    }
                }
            } else {
                marks.insert(state, Mark::Done);
                stack.pop();
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Every path from the initial state that ends in a final state.
    ///
    /// At each branch, transitions are explored in act class name order, so
    /// the result is deterministic. A final state with outgoing transitions
    /// ends one run and continues into others.
    pub fn enumerate_runs(&self) -> Result<Vec<Run>> {
        if let Some(state) = self.find_cycle() {
            return Err(Error::CyclicProtocol {
                protocol: self.name.clone(),
                state,
            });
        }
        Ok(self.collect_runs(usize::MAX))
    }

    /// Runs of at most `max_steps` acts. Terminates on cyclic protocols.
    pub fn runs_up_to(&self, max_steps: usize) -> Vec<Run> {
        self.collect_runs(max_steps)
    }

    fn collect_runs(&self, max_steps: usize) -> Vec<Run> {
        let mut runs = Vec::new();
        let mut path = Run {
            states: vec![self.initial.clone()],
            events: Vec::new(),
        };
        self.extend_runs(&mut path, max_steps, &mut runs);
        runs
    }

    fn extend_runs(&self, path: &mut Run, max_steps: usize, runs: &mut Vec<Run>) {
        let here = path.last_state().to_string();
        if self.is_final(&here) {
            runs.push(path.clone());
        }
        if path.events.len() >= max_steps {
            return;
        }
        for t in self.outgoing(&here) {
            path.states.push(t.target.clone());
            path.events.push(t.event());
            self.extend_runs(path, max_steps, runs);
            path.states.pop();
            path.events.pop();
        }
    }

    /// Follows a scripted sequence of act class names from the initial state.
    /// The result need not end in a final state.
    pub fn follow<S: AsRef<str>>(&self, acts: &[S]) -> Result<Run> {
        let mut run = Run {
            states: vec![self.initial.clone()],
            events: Vec::new(),
        };
        for act in acts {
            let act = act.as_ref();
            let here = run.last_state().to_string();
            let out = self.outgoing(&here);
            let Some(t) = out.iter().find(|t| t.act == act) else {
                return Err(Error::ActNotAllowed {
                    state: here,
                    act: act.to_string(),
                    allowed: out.iter().map(|t| t.act.clone()).collect(),
                });
            };
            run.states.push(t.target.clone());
            run.events.push(t.event());
        }
        Ok(run)
    }
}

/// One finding of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Nondeterministic {
        state: String,
        act: String,
    },
    Unreachable {
        state: String,
    },
    DeadEnd {
        state: String,
    },
    Cycle {
        state: String,
    },
    /// A run ends in a final state where a commitment still holds.
    ActiveCommitment {
        run: Vec<String>,
        state: String,
        commitments: Vec<String>,
    },
    Semantics {
        run: Vec<String>,
        message: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Nondeterministic { state, act } => {
                write!(
                    f,
                    "nondeterministic: state {state} has several `{act}` transitions"
                )
            }
            Violation::Unreachable { state } => write!(f, "unreachable state {state}"),
            Violation::DeadEnd { state } => {
                write!(f, "dead-end state {state}: no final state is reachable")
            }
            Violation::Cycle { state } => {
                write!(
                    f,
                    "cycle through state {state}: trace sets need an acyclic protocol"
                )
            }
            Violation::ActiveCommitment {
                run,
                state,
                commitments,
            } => write!(
                f,
                "active commitment at final state {state} after [{}]: {}",
                run.join(", "),
                commitments.join(", ")
            ),
            Violation::Semantics { run, message } => {
                write!(f, "semantics error in run [{}]: {message}", run.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub protocol: String,
    pub runs_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(
                f,
                "{}: ok ({} runs checked)",
                self.protocol, self.runs_checked
            );
        }
        write!(
            f,
            "{}: {} violation(s) ({} runs checked)",
            self.protocol,
            self.violations.len(),
            self.runs_checked
        )?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Structural checks plus, for acyclic protocols, a simulation of every run
/// to check that no commitment is left open in a final state.
pub fn validate(p: &Protocol, ont: &Ontology, registry: &SemanticsRegistry) -> ValidationReport {
    let mut violations = p.structural_violations();
    let mut runs_checked = 0;
    match p.enumerate_runs() {
        Err(_) => violations.push(Violation::Cycle {
            state: p.find_cycle().unwrap_or_default(),
        }),
        Ok(runs) => {
            for run in runs {
                runs_checked += 1;
                let acts: Vec<String> = run.acts().into_iter().map(String::from).collect();
                match run.final_store(ont, registry) {
                    Err(e) => violations.push(Violation::Semantics {
                        run: acts,
                        message: e.to_string(),
                    }),
                    Ok(store) if store.has_commitments() => {
                        let commitments = store
                            .stamped()
                            .into_iter()
                            .filter(|s| s.fluent.is_commitment())
                            .map(|s: StampedFluent| s.to_string())
                            .collect();
                        violations.push(Violation::ActiveCommitment {
                            run: acts,
                            state: run.last_state().to_string(),
                            commitments,
                        });
                    }
                    Ok(_) => {}
                }
            }
        }
    }
    ValidationReport {
        protocol: p.name().to_string(),
        runs_checked,
        violations,
    }
}
