//! Random fixtures shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use commont::{load_ontology, Fact, Ontology};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn rng(seed: u64) -> StdRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Parent lists of a generated content hierarchy, in declaration order.
#[derive(Debug, Clone, Default)]
pub struct ContentDag {
    pub names: Vec<String>,
    pub parents: BTreeMap<String, Vec<String>>,
}

impl ContentDag {
    pub fn random(rng: &mut StdRng, n: usize, prefix: &str) -> ContentDag {
        let mut dag = ContentDag::default();
        for k in 0..n {
            let name = format!("{prefix}{k}");
            let mut parents = Vec::new();
            if k > 0 {
                let wanted = rng.gen_range(0..=2.min(k));
                let mut pool = dag.names.clone();
                pool.shuffle(rng);
                parents.extend(pool.into_iter().take(wanted));
            }
            dag.names.push(name.clone());
            dag.parents.insert(name, parents);
        }
        dag
    }

    /// Reflexive-transitive reachability by plain DFS over parent edges.
    pub fn below(&self, specific: &str, general: &str) -> bool {
        let mut stack = vec![specific.to_string()];
        let mut seen = BTreeSet::new();
        while let Some(c) = stack.pop() {
            if c == general {
                return true;
            }
            if seen.insert(c.clone()) {
                stack.extend(self.parents[&c].iter().cloned());
            }
        }
        false
    }

    pub fn descendants(&self, of: &str) -> Vec<String> {
        self.names
            .iter()
            .filter(|n| self.below(n, of))
            .cloned()
            .collect()
    }

    pub fn source(&self) -> String {
        let mut out = String::new();
        for n in &self.names {
            let ps = &self.parents[n];
            if ps.is_empty() {
                writeln!(out, "content {n}").unwrap();
            } else {
                writeln!(out, "content {n} : {}", ps.join(", ")).unwrap();
            }
        }
        out
    }
}

pub struct GenOntology {
    pub source: String,
    pub ontology: Ontology,
    pub contents: ContentDag,
    /// Declared act classes usable in transitions.
    pub acts: Vec<String>,
}

/// A random content hierarchy plus acts of every semantic kind, at most
/// `max_classes` declarations in total.
pub fn random_ontology(rng: &mut StdRng, max_classes: usize) -> GenOntology {
    assert!(max_classes >= 6);
    let budget = rng.gen_range(6..=max_classes);
    let n_contents = rng.gen_range(2..=(budget / 2).max(2));
    let dag = ContentDag::random(rng, n_contents, "K");
    let mut src = dag.source();
    let mut acts: Vec<String> = Vec::new();
    let mut contents_of: BTreeMap<String, String> = BTreeMap::new();
    let mut requests: Vec<String> = Vec::new();
    let mut left = budget - n_contents;
    let pick = |rng: &mut StdRng| dag.names.choose(rng).unwrap().clone();
    let mut next_id = 0;
    while left > 0 {
        next_id += 1;
        let roll = rng.gen_range(0..5);
        if roll == 0 && left >= 3 {
            let c = pick(rng);
            let i = pick(rng);
            let (req, acc, inf) = (
                format!("Req{next_id}"),
                format!("Acc{next_id}"),
                format!("Inf{next_id}"),
            );
            writeln!(src, "act {req} : Request content={c}").unwrap();
            writeln!(src, "act {acc} : Accept content={c}").unwrap();
            writeln!(src, "act {inf} : Responsive content={i} replyto={req}").unwrap();
            for (a, x) in [(&req, &c), (&acc, &c), (&inf, &i)] {
                contents_of.insert(a.clone(), x.clone());
                acts.push(a.clone());
            }
            requests.push(req);
            left -= 3;
        } else if roll == 1 {
            let (c, q) = (pick(rng), pick(rng));
            let name = format!("Promise{next_id}");
            writeln!(src, "act {name} : Commissive content={c} condition={q}").unwrap();
            contents_of.insert(name.clone(), c);
            acts.push(name);
            left -= 1;
        } else if roll == 2 && !acts.is_empty() {
            // specialize an existing act with a narrower (or equal) content
            let parent = acts.choose(rng).unwrap().clone();
            let narrower = dag.descendants(&contents_of[&parent]);
            let c = narrower.choose(rng).unwrap().clone();
            let name = format!("Sub{next_id}");
            writeln!(src, "act {name} : {parent} content={c}").unwrap();
            contents_of.insert(name.clone(), c);
            acts.push(name);
            left -= 1;
        } else if roll == 3 && !requests.is_empty() {
            let req = requests.choose(rng).unwrap().clone();
            let name = format!("Reply{next_id}");
            let i = pick(rng);
            writeln!(src, "act {name} : Responsive content={i} replyto={req}").unwrap();
            contents_of.insert(name.clone(), i);
            acts.push(name);
            left -= 1;
        } else {
            let c = pick(rng);
            let name = format!("Tell{next_id}");
            writeln!(src, "act {name} : Assertive content={c}").unwrap();
            contents_of.insert(name.clone(), c);
            acts.push(name);
            left -= 1;
        }
    }
    let ontology =
        load_ontology(&src).unwrap_or_else(|e| panic!("generated ontology rejected: {e}\n{src}"));
    GenOntology {
        source: src,
        ontology,
        contents: dag,
        acts,
    }
}

/// A deterministic acyclic protocol over `acts` in which every state is
/// reachable and can finish. Returned as source text.
pub fn random_protocol(rng: &mut StdRng, name: &str, acts: &[String], max_states: usize) -> String {
    let n = rng.gen_range(1..=max_states);
    let mut edges: Vec<(usize, usize, String, bool)> = Vec::new();
    let mut used: BTreeSet<(usize, String)> = BTreeSet::new();
    let mut add = |rng: &mut StdRng, from: usize, to: usize, edges: &mut Vec<_>| {
        let act = acts.choose(rng).unwrap().clone();
        if used.insert((from, act.clone())) {
            edges.push((from, to, act, rng.gen_bool(0.5)));
        }
    };
    for j in 1..n {
        let i = rng.gen_range(0..j);
        add(rng, i, j, &mut edges);
    }
    for _ in 0..rng.gen_range(0..=n) {
        let i = rng.gen_range(0..n);
        if i + 1 < n {
            let j = rng.gen_range(i + 1..n);
            add(rng, i, j, &mut edges);
        }
    }
    // a spanning edge may have been dropped as a duplicate label; keep only reachable states
    let mut reachable = BTreeSet::from([0]);
    loop {
        let before = reachable.len();
        for (from, to, _, _) in &edges {
            if reachable.contains(from) {
                reachable.insert(*to);
            }
        }
        if reachable.len() == before {
            break;
        }
    }
    edges.retain(|(from, _, _, _)| reachable.contains(from));
    let mut out = format!("protocol {name}\nroles A B\n");
    for s in &reachable {
        let leaf = !edges.iter().any(|(f, _, _, _)| f == s);
        let mut line = format!("state S{s}");
        if *s == 0 {
            line.push_str(" initial");
        }
        if leaf || rng.gen_bool(0.2) {
            line.push_str(" final");
        }
        writeln!(out, "{line}").unwrap();
    }
    for (from, to, act, ab) in &edges {
        let (x, y) = if *ab { ("A", "B") } else { ("B", "A") };
        writeln!(out, "transition S{from} -> S{to} on {act} from {x} to {y}").unwrap();
    }
    out
}

/// One protocol step: act, sender, receiver.
pub type Step = (String, &'static str, &'static str);

/// Topic-structured vocabulary where every arm ends without open commitments.
pub struct Families {
    pub ontology: Ontology,
    pub topics: usize,
}

impl Families {
    pub fn new(topics: usize) -> Families {
        let mut src = String::new();
        for k in 0..topics {
            write!(
                src,
                "content T{k}\ncontent I{k}\ncontent A-T{k} : T{k}\ncontent A-I{k} : I{k}\n\
                 act Req{k} : Request content=T{k}\nact Acc{k} : Accept content=T{k}\n\
                 act Inf{k} : Responsive content=I{k} replyto=Req{k}\n\
                 act A-Req{k} : Req{k} content=A-T{k}\nact A-Acc{k} : Acc{k} content=A-T{k}\n\
                 act A-Inf{k} : Inf{k} content=A-I{k} replyto=A-Req{k}\n\
                 act Tell{k} : Assertive content=I{k}\nact A-Tell{k} : Tell{k} content=A-I{k}\n"
            )
            .unwrap();
        }
        Families {
            ontology: load_ontology(&src).expect("family ontology loads"),
            topics,
        }
    }

    /// A request/accept/reply exchange or a single statement.
    pub fn unit(&self, rng: &mut StdRng) -> Vec<Step> {
        let k = rng.gen_range(0..self.topics);
        let pre = if rng.gen_bool(0.4) { "A-" } else { "" };
        let (x, y) = if rng.gen_bool(0.7) {
            ("A", "B")
        } else {
            ("B", "A")
        };
        if rng.gen_bool(0.75) {
            vec![
                (format!("{pre}Req{k}"), x, y),
                (format!("{pre}Acc{k}"), y, x),
                (format!("{pre}Inf{k}"), y, x),
            ]
        } else {
            vec![(format!("{pre}Tell{k}"), x, y)]
        }
    }

    /// One or two units, kept apart so variants can reorder them.
    pub fn arm(&self, rng: &mut StdRng) -> Vec<Vec<Step>> {
        let n = rng.gen_range(1..=2);
        (0..n).map(|_| self.unit(rng)).collect()
    }

    /// The same arm with every act replaced by its `A-` specialization.
    pub fn specialize(arm: &[Vec<Step>]) -> Vec<Vec<Step>> {
        arm.iter()
            .map(|unit| {
                unit.iter()
                    .map(|(a, x, y)| {
                        let a = if a.starts_with("A-") {
                            a.clone()
                        } else {
                            format!("A-{a}")
                        };
                        (a, *x, *y)
                    })
                    .collect()
            })
            .collect()
    }

    /// Pool of arms; some are specializations or reorderings of others.
    pub fn pool(&self, rng: &mut StdRng, size: usize) -> Vec<Vec<Step>> {
        let mut pool: Vec<Vec<Vec<Step>>> = Vec::new();
        while pool.len() < size {
            let arm = match (pool.choose(rng), rng.gen_range(0..10)) {
                (Some(base), 0..=2) => Families::specialize(base),
                (Some(base), 3..=4) => base.iter().rev().cloned().collect(),
                _ => self.arm(rng),
            };
            pool.push(arm);
        }
        pool.into_iter().map(|units| units.concat()).collect()
    }
}

/// Builds the prefix-tree protocol whose runs are exactly `arms`.
pub fn arm_protocol(name: &str, arms: &[Vec<Step>]) -> String {
    let mut next = 1;
    let mut children: BTreeMap<(usize, String), (usize, &'static str, &'static str)> =
        BTreeMap::new();
    let mut finals = BTreeSet::new();
    for arm in arms {
        let mut at = 0;
        for (act, x, y) in arm {
            at = match children.get(&(at, act.clone())) {
                Some((to, _, _)) => *to,
                None => {
                    children.insert((at, act.clone()), (next, x, y));
                    next += 1;
                    next - 1
                }
            };
        }
        finals.insert(at);
    }
    let mut out = format!("protocol {name}\nroles A B\n");
    for s in 0..next {
        let mut line = format!("state Q{s}");
        if s == 0 {
            line.push_str(" initial");
        }
        if finals.contains(&s) {
            line.push_str(" final");
        }
        writeln!(out, "{line}").unwrap();
    }
    for ((from, act), (to, x, y)) in &children {
        writeln!(out, "transition Q{from} -> Q{to} on {act} from {x} to {y}").unwrap();
    }
    out
}

/// Propositions and acceptances over a content hierarchy.
pub fn random_fact(rng: &mut StdRng, dag: &ContentDag) -> Fact {
    let c = dag.names.choose(rng).unwrap().clone();
    match rng.gen_range(0..3) {
        0 => Fact::acceptance("B", "A", c),
        1 => Fact::acceptance("A", "B", c),
        _ => Fact::proposition(c),
    }
}

/// Fact subsumption decided directly on the generated parent lists.
pub fn oracle_fact_below(dag: &ContentDag, f: &Fact, g: &Fact) -> bool {
    match (f, g) {
        (Fact::Proposition(a), Fact::Proposition(b)) => dag.below(a, b),
        (
            Fact::Acceptance {
                signatory: s1,
                addressee: a1,
                object: o1,
            },
            Fact::Acceptance {
                signatory: s2,
                addressee: a2,
                object: o2,
            },
        ) => s1 == s2 && a1 == a2 && dag.below(o1, o2),
        _ => false,
    }
}

/// Tries every injective assignment of `t` into `s`.
pub fn brute_force_injective(dag: &ContentDag, t: &[Fact], s: &[Fact]) -> bool {
    fn go(dag: &ContentDag, t: &[Fact], s: &[Fact], used: &mut Vec<bool>) -> bool {
        let Some((first, rest)) = t.split_first() else {
            return true;
        };
        for j in 0..s.len() {
            if !used[j] && oracle_fact_below(dag, first, &s[j]) {
                used[j] = true;
                if go(dag, rest, s, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    t.len() <= s.len() && go(dag, t, s, &mut vec![false; s.len()])
}

/// Number of initial-to-final paths, counted on the raw transition list.
pub fn count_paths_oracle(
    initial: &str,
    finals: &BTreeSet<String>,
    edges: &[(String, String)],
) -> usize {
    fn go(at: &str, finals: &BTreeSet<String>, edges: &[(String, String)]) -> usize {
        let here = usize::from(finals.contains(at));
        here + edges
            .iter()
            .filter(|(f, _)| f == at)
            .map(|(_, t)| go(t, finals, edges))
            .sum::<usize>()
    }
    go(initial, finals, edges)
}
