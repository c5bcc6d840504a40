use std::fmt;

use crate::ontology::Ontology;
use crate::semantics::{fact_matches, Fact};
use crate::traces::AbstractTraceMultiset;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedPair {
    /// Index into the specialized multiset.
    pub from: usize,
    /// Index into the general multiset.
    pub to: usize,
    pub source: Fact,
    pub target: Fact,
}

/// An injective, subsumption-respecting assignment of the elements of one
/// multiset to elements of another.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchingMap {
    pairs: Vec<MatchedPair>,
}

impl MatchingMap {
    pub fn pairs(&self) -> &[MatchedPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Target fact assigned to the `from`-th source element.
    pub fn image(&self, from: usize) -> Option<&Fact> {
        self.pairs
            .iter()
            .find(|p| p.from == from)
            .map(|p| &p.target)
    }
}

impl fmt::Display for MatchingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} -> {}", p.source, p.target)?;
        }
        f.write_str("}")
    }
}

/// Kuhn's augmenting-path search for a left-saturating matching.
struct Bipartite<'a> {
    adj: &'a [Vec<usize>],
    owner: Vec<Option<usize>>,
    seen: Vec<bool>,
}

impl Bipartite<'_> {
    fn augment(&mut self, left: usize) -> bool {
        for &right in &self.adj[left] {
            if self.seen[right] {
                continue;
            }
            self.seen[right] = true;
            let free = match self.owner[right] {
                None => true,
                Some(other) => self.augment(other),
            };
            if free {
                self.owner[right] = Some(left);
                return true;
            }
        }
        false
    }
}

/// Finds an injective map from `specific` into `general` sending every fact
/// to one that subsumes it, or `None` if there is none.
pub fn shallow_trace_specializes(
    ont: &Ontology,
    specific: &AbstractTraceMultiset,
    general: &AbstractTraceMultiset,
) -> Result<Option<MatchingMap>> {
    let t = specific.facts();
    let s = general.facts();
    let mut adj = vec![Vec::new(); t.len()];
    for (i, f) in t.iter().enumerate() {
        for (j, g) in s.iter().enumerate() {
            if fact_matches(ont, f, g)? {
                adj[i].push(j);
            }
        }
    }
    if t.len() > s.len() {
        return Ok(None);
    }
    let mut graph = Bipartite {
        adj: &adj,
        owner: vec![None; s.len()],
        seen: vec![false; s.len()],
    };
    for left in 0..t.len() {
        graph.seen.iter_mut().for_each(|v| *v = false);
        if !graph.augment(left) {
            return Ok(None);
        }
    }
    let mut pairs: Vec<MatchedPair> = graph
        .owner
        .iter()
        .enumerate()
        .filter_map(|(to, from)| {
            from.map(|from| MatchedPair {
                from,
                to,
                source: t[from].clone(),
                target: s[to].clone(),
            })
        })
        .collect();
    pairs.sort_by_key(|p| p.from);
    Ok(Some(MatchingMap { pairs }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::default_ontology;

    fn ms(facts: &[Fact]) -> AbstractTraceMultiset {
        AbstractTraceMultiset::new(facts.to_vec())
    }

    #[test]
    fn p2_into_p1() {
        let ont = default_ontology();
        let p2 = ms(&[
            Fact::acceptance("B", "A", "A-PulseReq"),
            Fact::proposition("A-PulseInfo"),
            Fact::acceptance("B", "A", "A-TempReq"),
            Fact::proposition("A-TempInfo"),
        ]);
        let p1 = ms(&[
            Fact::acceptance("B", "A", "TempReq"),
            Fact::proposition("TempInfo"),
            Fact::acceptance("B", "A", "PulseReq"),
            Fact::proposition("PulseInfo"),
        ]);
        let map = shallow_trace_specializes(&ont, &p2, &p1).unwrap().unwrap();
        assert_eq!(map.len(), 4);
        let image = |f: Fact| {
            let i = p2.facts().iter().position(|x| *x == f).unwrap();
            map.image(i).unwrap().clone()
        };
        assert_eq!(
            image(Fact::acceptance("B", "A", "A-PulseReq")),
            Fact::acceptance("B", "A", "PulseReq")
        );
        assert_eq!(
            image(Fact::proposition("A-PulseInfo")),
            Fact::proposition("PulseInfo")
        );
        assert_eq!(
            image(Fact::acceptance("B", "A", "A-TempReq")),
            Fact::acceptance("B", "A", "TempReq")
        );
        assert_eq!(
            image(Fact::proposition("A-TempInfo")),
            Fact::proposition("TempInfo")
        );
        assert!(shallow_trace_specializes(&ont, &p1, &p2).unwrap().is_none());
    }

    #[test]
    fn empty_maps_to_empty() {
        let ont = default_ontology();
        let map = shallow_trace_specializes(&ont, &ms(&[]), &ms(&[]))
            .unwrap()
            .unwrap();
        assert!(map.is_empty());
    }

    #[test]
    fn multiplicity_is_respected() {
        let ont = default_ontology();
        let two = ms(&[Fact::proposition("TimeInfo"), Fact::proposition("TimeInfo")]);
        let one = ms(&[Fact::proposition("TimeInfo")]);
        assert!(shallow_trace_specializes(&ont, &two, &one)
            .unwrap()
            .is_none());
        assert!(shallow_trace_specializes(&ont, &one, &two)
            .unwrap()
            .is_some());
    }

    #[test]
    fn augmenting_path_needed() {
        // A-TempInfo fits both targets; TempInfo only the general one.
        let ont = default_ontology();
        let t = ms(&[
            Fact::proposition("A-TempInfo"),
            Fact::proposition("TempInfo"),
        ]);
        let s = ms(&[
            Fact::proposition("TempInfo"),
            Fact::proposition("A-TempInfo"),
        ]);
        let map = shallow_trace_specializes(&ont, &t, &s).unwrap().unwrap();
        assert_eq!(map.len(), 2);
        let targets: std::collections::BTreeSet<usize> = map.pairs().iter().map(|p| p.to).collect();
        assert_eq!(targets.len(), 2);
    }
}
