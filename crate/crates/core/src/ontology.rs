//! Class hierarchies for communication acts and their contents.
//!
//! Acts live under `CommunicationAct`; the nine upper classes are always
//! present. Content classes form a separate forest whose roots are any
//! classes declared without parents. Subsumption is reflexive-transitive
//! reachability over parent edges, so multiple inheritance is allowed.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::dsl::{self, Declaration, DeclaredClass, SourceSpan};
use crate::semantics::SemanticsRegistry;
use crate::{Error, Result};

pub const COMMUNICATION_ACT: &str = "CommunicationAct";
pub const ASSERTIVE: &str = "Assertive";
pub const DIRECTIVE: &str = "Directive";
pub const COMMISSIVE: &str = "Commissive";
pub const EXPRESSIVE: &str = "Expressive";
pub const DECLARATIVE: &str = "Declarative";
pub const REQUEST: &str = "Request";
pub const ACCEPT: &str = "Accept";
pub const RESPONSIVE: &str = "Responsive";

/// The built-in act classes and their single parent.
pub const BUILTIN_ACTS: [(&str, Option<&str>); 9] = [
    (COMMUNICATION_ACT, None),
    (ASSERTIVE, Some(COMMUNICATION_ACT)),
    (DIRECTIVE, Some(COMMUNICATION_ACT)),
    (COMMISSIVE, Some(COMMUNICATION_ACT)),
    (EXPRESSIVE, Some(COMMUNICATION_ACT)),
    (DECLARATIVE, Some(COMMUNICATION_ACT)),
    (REQUEST, Some(DIRECTIVE)),
    (ACCEPT, Some(DECLARATIVE)),
    (RESPONSIVE, Some(ASSERTIVE)),
];

pub fn is_builtin(name: &str) -> bool {
    BUILTIN_ACTS.iter().any(|(n, _)| *n == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActClass {
    pub name: String,
    pub parents: Vec<String>,
    /// Filler of the `=1 hasContent` restriction.
    pub content: Option<String>,
    /// Filler of the `inReplyTo` restriction.
    pub in_reply_to: Option<String>,
    /// Filler of the `theSystem` restriction, e.g. `Aingeru`.
    pub system: Option<String>,
    /// Condition proposition for classes that resolve to `Commissive`.
    pub condition: Option<String>,
}

impl ActClass {
    pub fn new(name: impl Into<String>, parents: Vec<String>) -> Self {
        ActClass {
            name: name.into(),
            parents,
            content: None,
            in_reply_to: None,
            system: None,
            condition: None,
        }
    }

    pub fn with_content(mut self, content: impl Into<String>) -> Self {
        self.content = Some(content.into());
        self
    }

    pub fn with_reply_to(mut self, request: impl Into<String>) -> Self {
        self.in_reply_to = Some(request.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentClass {
    pub name: String,
    pub parents: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hierarchy {
    Act,
    Content,
}

impl Hierarchy {
    fn noun(self) -> &'static str {
        match self {
            Hierarchy::Act => "act",
            Hierarchy::Content => "content",
        }
    }
}

/// Attribute values after inheritance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Resolved {
    content: Option<String>,
    in_reply_to: Option<String>,
    condition: Option<String>,
}

/// An immutable, validated pair of class hierarchies.
#[derive(Debug, Clone)]
pub struct Ontology {
    acts: BTreeMap<String, ActClass>,
    contents: BTreeMap<String, ContentClass>,
    declared: Vec<(Hierarchy, String)>,
    // reflexive ancestor sets, keyed by class name in either hierarchy
    ancestors: HashMap<String, BTreeSet<String>>,
    resolved: HashMap<String, Resolved>,
}

/// Parses and loads a single ontology source.
pub fn load_ontology(source: &str) -> Result<Ontology> {
    Ontology::load(&[("<ontology>", source)])
}

impl Ontology {
    /// The nine upper classes and nothing else.
    pub fn builtin() -> Ontology {
        Ontology::from_declarations(Vec::new()).expect("built-in hierarchy is valid")
    }

    /// Parses several named sources and merges them into one ontology.
    /// A class declared in more than one source is an error.
    pub fn load(sources: &[(&str, &str)]) -> Result<Ontology> {
        let mut decls = Vec::new();
        let mut diagnostics = Vec::new();
        for (name, text) in sources {
            let parsed = dsl::parse_ontology_file(name, text);
            diagnostics.extend(parsed.diagnostics.into_iter().filter(|d| d.is_error()));
            decls.extend(parsed.value);
        }
        if !diagnostics.is_empty() {
            return Err(Error::Parse(diagnostics));
        }
        Ontology::from_declarations(decls)
    }

    pub fn from_declarations(decls: Vec<Declaration>) -> Result<Ontology> {
        let mut acts = BTreeMap::new();
        let mut contents = BTreeMap::new();
        let mut declared = Vec::new();
        let mut spans: HashMap<String, SourceSpan> = HashMap::new();

        for (name, parent) in BUILTIN_ACTS {
            acts.insert(
                name.to_string(),
                ActClass::new(
                    name,
                    parent.map(|p| vec![p.to_string()]).unwrap_or_default(),
                ),
            );
        }
        for decl in decls {
            let name = decl.name().to_string();
            if !dsl::is_identifier(&name) {
                return Err(Error::InvalidName(name));
            }
            if acts.contains_key(&name) || contents.contains_key(&name) {
                return Err(Error::DuplicateClass {
                    name,
                    span: decl.span,
                });
            }
            spans.insert(name.clone(), decl.span);
            match decl.class {
                DeclaredClass::Act(a) => {
                    declared.push((Hierarchy::Act, name.clone()));
                    acts.insert(name, a);
                }
                DeclaredClass::Content(c) => {
                    declared.push((Hierarchy::Content, name.clone()));
                    contents.insert(name, c);
                }
            }
        }

        let mut ont = Ontology {
            acts,
            contents,
            declared,
            ancestors: HashMap::new(),
            resolved: HashMap::new(),
        };
        ont.check_references(&spans)?;
        ont.check_acyclic()?;
        ont.close_ancestors();
        ont.check_content_restrictions(&spans)?;
        ont.resolve_inherited()?;
        Ok(ont)
    }

    fn span_of(spans: &HashMap<String, SourceSpan>, name: &str) -> SourceSpan {
        spans
            .get(name)
            .cloned()
            .unwrap_or_else(|| SourceSpan::new("<builtin>", 0, 0))
    }

    fn check_references(&self, spans: &HashMap<String, SourceSpan>) -> Result<()> {
        let expect = |class: &str, target: &str, want: Hierarchy, attribute: &str| -> Result<()> {
            match self.hierarchy_of(target) {
                Some(h) if h == want => Ok(()),
                found => Err(Error::BadReference {
                    class: class.to_string(),
                    attribute: attribute.to_string(),
                    target: target.to_string(),
                    expected: want.noun(),
                    found: found.map(Hierarchy::noun),
                    span: Box::new(Self::span_of(spans, class)),
                }),
            }
        };
        for (name, class) in &self.contents {
            for p in &class.parents {
                expect(name, p, Hierarchy::Content, "parent")?;
            }
        }
        for (name, class) in &self.acts {
            if is_builtin(name) {
                continue;
            }
            if class.parents.is_empty() {
                return Err(Error::BadReference {
                    class: name.clone(),
                    attribute: "parent".into(),
                    target: String::new(),
                    expected: "act",
                    found: None,
                    span: Box::new(Self::span_of(spans, name)),
                });
            }
            for p in &class.parents {
                expect(name, p, Hierarchy::Act, "parent")?;
            }
            if let Some(c) = &class.content {
                expect(name, c, Hierarchy::Content, "content")?;
            }
            if let Some(c) = &class.condition {
                expect(name, c, Hierarchy::Content, "condition")?;
            }
            if let Some(r) = &class.in_reply_to {
                expect(name, r, Hierarchy::Act, "replyto")?;
            }
        }
        Ok(())
    }

    fn parents_of(&self, name: &str) -> &[String] {
        if let Some(a) = self.acts.get(name) {
            &a.parents
        } else if let Some(c) = self.contents.get(name) {
            &c.parents
        } else {
            &[]
        }
    }

    fn check_acyclic(&self) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        let mut marks: HashMap<&str, Mark> = HashMap::new();
        let names = self.acts.keys().chain(self.contents.keys());
        for root in names {
            if marks.contains_key(root.as_str()) {
                continue;
            }
            // explicit stack of (node, next parent index)
            let mut stack: Vec<(&str, usize)> = vec![(root.as_str(), 0)];
            marks.insert(root.as_str(), Mark::Open);
            while let Some((node, idx)) = stack.last_mut() {
                let parents = self.parents_of(node);
                if *idx < parents.len() {
                    let p = parents[*idx].as_str();
                    *idx += 1;
                    match marks.get(p) {
                        Some(Mark::Open) => return Err(Error::Cycle(p.to_string())),
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(p, Mark::Open);
                            stack.push((p, 0));
                        }
                    }
                } else {
                    marks.insert(node, Mark::Done);
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    fn close_ancestors(&mut self) {
        fn visit(ont: &Ontology, name: &str, memo: &mut HashMap<String, BTreeSet<String>>) {
            if memo.contains_key(name) {
                return;
            }
            let mut set = BTreeSet::new();
            set.insert(name.to_string());
            for p in ont.parents_of(name) {
                visit(ont, p, memo);
                set.extend(memo[p.as_str()].iter().cloned());
            }
            memo.insert(name.to_string(), set);
        }
        let mut memo = HashMap::new();
        let names: Vec<String> = self
            .acts
            .keys()
            .chain(self.contents.keys())
            .cloned()
            .collect();
        for n in &names {
            visit(self, n, &mut memo);
        }
        self.ancestors = memo;
    }

    fn check_content_restrictions(&self, spans: &HashMap<String, SourceSpan>) -> Result<()> {
        for (name, class) in &self.acts {
            let Some(own) = &class.content else { continue };
            for anc in &self.ancestors[name] {
                if anc == name {
                    continue;
                }
                if let Some(required) = &self.acts[anc].content {
                    if !self.ancestors[own].contains(required) {
                        return Err(Error::ContentRestriction {
                            class: name.clone(),
                            content: own.clone(),
                            ancestor: anc.clone(),
                            required: required.clone(),
                            span: Box::new(Self::span_of(spans, name)),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Picks, among the values declared on `class` or its ancestors, the
    /// one subsumed by all the others.
    fn inherit(
        &self,
        class: &str,
        attribute: &'static str,
        get: impl Fn(&ActClass) -> Option<&String>,
    ) -> Result<Option<String>> {
        if let Some(own) = get(&self.acts[class]) {
            return Ok(Some(own.clone()));
        }
        let candidates: BTreeSet<&String> = self.ancestors[class]
            .iter()
            .filter_map(|a| get(&self.acts[a]))
            .collect();
        if candidates.len() <= 1 {
            return Ok(candidates.into_iter().next().cloned());
        }
        let best: Vec<&String> = candidates
            .iter()
            .copied()
            .filter(|c| {
                candidates
                    .iter()
                    .all(|other| self.ancestors[c.as_str()].contains(*other))
            })
            .collect();
        match best.as_slice() {
            [one] => Ok(Some((*one).clone())),
            _ => Err(Error::AmbiguousInheritance {
                class: class.to_string(),
                attribute,
                candidates: candidates.into_iter().cloned().collect(),
            }),
        }
    }

    fn resolve_inherited(&mut self) -> Result<()> {
        let mut resolved = HashMap::new();
        for name in self.acts.keys() {
            let r = Resolved {
                content: self.inherit(name, "content", |a| a.content.as_ref())?,
                in_reply_to: self.inherit(name, "replyto", |a| a.in_reply_to.as_ref())?,
                condition: self.inherit(name, "condition", |a| a.condition.as_ref())?,
            };
            resolved.insert(name.clone(), r);
        }
        self.resolved = resolved;
        Ok(())
    }

    pub fn hierarchy_of(&self, name: &str) -> Option<Hierarchy> {
        if self.acts.contains_key(name) {
            Some(Hierarchy::Act)
        } else if self.contents.contains_key(name) {
            Some(Hierarchy::Content)
        } else {
            None
        }
    }

    pub fn act(&self, name: &str) -> Option<&ActClass> {
        self.acts.get(name)
    }

    pub fn content_class(&self, name: &str) -> Option<&ContentClass> {
        self.contents.get(name)
    }

    pub fn contains_act(&self, name: &str) -> bool {
        self.acts.contains_key(name)
    }

    /// All act classes, built-ins included, in name order.
    pub fn act_classes(&self) -> impl Iterator<Item = &ActClass> {
        self.acts.values()
    }

    pub fn content_classes(&self) -> impl Iterator<Item = &ContentClass> {
        self.contents.values()
    }

    /// User-declared classes in declaration order.
    pub fn declarations(&self) -> impl Iterator<Item = DeclaredRef<'_>> {
        self.declared.iter().map(move |(h, n)| match h {
            Hierarchy::Act => DeclaredRef::Act(&self.acts[n]),
            Hierarchy::Content => DeclaredRef::Content(&self.contents[n]),
        })
    }

    /// True iff `specific ⊑ general`.
    pub fn subsumes(&self, general: &str, specific: &str) -> Result<bool> {
        let g = self
            .hierarchy_of(general)
            .ok_or_else(|| Error::UnknownClass(general.to_string()))?;
        let s = self
            .hierarchy_of(specific)
            .ok_or_else(|| Error::UnknownClass(specific.to_string()))?;
        if g != s {
            return Err(Error::MixedHierarchies {
                general: general.to_string(),
                specific: specific.to_string(),
            });
        }
        Ok(self.ancestors[specific].contains(general))
    }

    /// Subsumption restricted to content classes.
    pub fn content_subsumes(&self, general: &str, specific: &str) -> Result<bool> {
        for n in [general, specific] {
            if !self.contents.contains_key(n) {
                return Err(Error::UnknownContent(n.to_string()));
            }
        }
        Ok(self.ancestors[specific].contains(general))
    }

    /// Reflexive ancestors of a class, in name order.
    pub fn ancestors(&self, name: &str) -> Option<&BTreeSet<String>> {
        self.ancestors.get(name)
    }

    /// Content filler after inheritance.
    pub fn content_of(&self, act: &str) -> Option<&str> {
        self.resolved.get(act)?.content.as_deref()
    }

    pub fn reply_target_of(&self, act: &str) -> Option<&str> {
        self.resolved.get(act)?.in_reply_to.as_deref()
    }

    pub fn condition_of(&self, act: &str) -> Option<&str> {
        self.resolved.get(act)?.condition.as_deref()
    }

    /// The closest reflexive ancestor of `act` that has an effect template.
    ///
    /// Ancestors are visited breadth-first by distance. When several
    /// registered classes sit at the nearest distance, one of them must be
    /// subsumed by all the others.
    pub fn most_specific_semantic_ancestor(
        &self,
        act: &str,
        registry: &SemanticsRegistry,
    ) -> Result<String> {
        if !self.acts.contains_key(act) {
            return Err(match self.hierarchy_of(act) {
                Some(_) => Error::NotAnAct(act.to_string()),
                None => Error::UnknownClass(act.to_string()),
            });
        }
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut frontier: BTreeSet<&str> = BTreeSet::from([act]);
        while !frontier.is_empty() {
            seen.extend(frontier.iter().copied());
            let found: Vec<&str> = frontier
                .iter()
                .copied()
                .filter(|c| registry.template_for(c).is_some())
                .collect();
            if !found.is_empty() {
                let best: Vec<&str> = found
                    .iter()
                    .copied()
                    .filter(|c| found.iter().all(|o| self.ancestors[*c].contains(*o)))
                    .collect();
                return match best.as_slice() {
                    [one] => Ok(one.to_string()),
                    _ => Err(Error::AmbiguousSemantics {
                        class: act.to_string(),
                        candidates: found.iter().map(|s| s.to_string()).collect(),
                    }),
                };
            }
            frontier = frontier
                .iter()
                .flat_map(|c| self.acts[*c].parents.iter().map(String::as_str))
                .filter(|p| !seen.contains(p))
                .collect();
        }
        Err(Error::NoSemantics(act.to_string()))
    }
}

/// Borrowed view of one user declaration.
#[derive(Debug, Clone, Copy)]
pub enum DeclaredRef<'a> {
    Act(&'a ActClass),
    Content(&'a ContentClass),
}
