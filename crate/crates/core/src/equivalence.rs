//! Triplexes, Markov equivalence, and brute-force equivalence classes.
//!
//! Two chain graphs are Markov equivalent iff they share adjacencies and
//! triplexes. [`enumerate_class`] lists a whole class by trying every
//! orientation of the skeleton; it and the helpers built on it
//! ([`essential_from_class`], [`strong_oracle`]) serve as reference answers
//! for the constructive algorithms elsewhere in the crate.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{ChainGraph, EdgeKind, EntryMark};
use crate::nodeset::NodeSet;

/// Default cap on the number of skeleton edges for brute-force enumeration.
pub const DEFAULT_MAX_EDGES: usize = 16;

/// A triplex `(flanks.0, middle, flanks.1)` with `flanks.0 < flanks.1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triplex {
    pub middle: usize,
    pub flanks: (usize, usize),
}

impl Triplex {
    pub fn new(a: usize, middle: usize, c: usize) -> Self {
        Triplex { middle, flanks: (a.min(c), a.max(c)) }
    }
}

pub fn is_triplex(g: &ChainGraph, a: usize, b: usize, c: usize) -> bool {
    if a == c || g.is_adjacent(a, c) {
        return false;
    }
    match (g.mark_at(b, a), g.mark_at(b, c)) {
        (Some(l), Some(r)) => l.is_triplex_pair(r),
        _ => false,
    }
}

/// All triplexes, ordered by middle node then flanks.
pub fn triplexes(g: &ChainGraph) -> BTreeSet<Triplex> {
    let mut out = BTreeSet::new();
    for b in 0..g.n() {
        let adj = g.adjacent(b);
        for a in adj {
            // only flanks with an arrowhead at b can take part
            if g.mark_at(b, a) == Some(EntryMark::Tail) {
                continue;
            }
            for c in adj.iter().filter(|&c| c > a) {
                if is_triplex(g, a, b, c) {
                    out.insert(Triplex::new(a, b, c));
                }
            }
        }
    }
    out
}

pub fn same_skeleton(g: &ChainGraph, h: &ChainGraph) -> bool {
    (0..g.n()).all(|v| g.adjacent(v) == h.adjacent(v))
}

pub fn equivalent(g: &ChainGraph, h: &ChainGraph) -> Result<bool> {
    if g.names() != h.names() {
        return Err(Error::NodeSetMismatch);
    }
    Ok(same_skeleton(g, h) && triplexes(g) == triplexes(h))
}

/// Members of one Markov equivalence class, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub members: Vec<ChainGraph>,
}

impl EquivalenceClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: &ChainGraph) -> bool {
        self.members.binary_search(g).is_ok()
    }

    pub fn from_members(members: impl IntoIterator<Item = ChainGraph>) -> Self {
        let set: BTreeSet<ChainGraph> = members.into_iter().collect();
        EquivalenceClass { members: set.into_iter().collect() }
    }
}

/// Every chain graph equivalent to `g`, found by trying each of the three
/// orientations (`->`, `<-`, `--`) of each skeleton edge.
///
/// Edges are assigned one at a time; a partial assignment is abandoned as
/// soon as it fixes a triplex status that disagrees with `g` or already
/// contains a semidirected cycle. Both conditions are permanent, so this
/// prunes without changing the result of the plain filter.
pub fn enumerate_class(g: &ChainGraph, max_edges: usize) -> Result<EquivalenceClass> {
    let pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| e.pair()).collect();
    if pairs.len() > max_edges {
        return Err(Error::TooLarge { what: "edge count", size: pairs.len(), cap: max_edges });
    }
    let target = triplexes(g);
    let mut search = ClassSearch { pairs: &pairs, target: &target, skeleton: g.skeleton(), members: Vec::new() };
    let mut partial = ChainGraph::bare(g.names().clone());
    search.assign(0, &mut partial);
    Ok(EquivalenceClass::from_members(search.members))
}

struct ClassSearch<'a> {
    pairs: &'a [(usize, usize)],
    target: &'a BTreeSet<Triplex>,
    skeleton: Vec<NodeSet>,
    members: Vec<ChainGraph>,
}

impl ClassSearch<'_> {
    fn assign(&mut self, i: usize, partial: &mut ChainGraph) {
        if i == self.pairs.len() {
            if partial.find_semidirected_cycle().is_none() {
                self.members.push(partial.clone());
            }
            return;
        }
        let (u, v) = self.pairs[i];
        for (a, b, kind) in [(u, v, EdgeKind::Directed), (v, u, EdgeKind::Directed), (u, v, EdgeKind::Undirected)] {
            partial.put(a, b, Some(kind));
            if self.consistent_around(partial, u, v) && partial.find_semidirected_cycle().is_none() {
                self.assign(i + 1, partial);
            }
            partial.put(a, b, None);
        }
    }

    /// Checks every triple centred at `u` or `v` whose two edges are both
    /// assigned and whose flanks are non-adjacent in the skeleton.
    fn consistent_around(&self, partial: &ChainGraph, u: usize, v: usize) -> bool {
        for (mid, other) in [(u, v), (v, u)] {
            for w in partial.adjacent(mid) {
                if w == other || self.skeleton[other].contains(w) {
                    continue;
                }
                let has = is_triplex(partial, other, mid, w);
                if has != self.target.contains(&Triplex::new(other, mid, w)) {
                    return false;
                }
            }
        }
        true
    }
}

/// The essential graph of a class: `a -> b` iff some member has `a -> b`
/// and no member has `b -> a`; every other skeleton edge is undirected.
pub fn essential_from_class(class: &EquivalenceClass) -> Result<ChainGraph> {
    let first = class.members.first().ok_or(Error::EmptyClass)?;
    let mut eg = ChainGraph::bare(first.names().clone());
    for (u, v) in first.edges().iter().map(|e| e.pair()) {
        let fwd = class.members.iter().any(|m| m.has_directed(u, v));
        let back = class.members.iter().any(|m| m.has_directed(v, u));
        let kind = match (fwd, back) {
            (true, false) => (u, v, EdgeKind::Directed),
            (false, true) => (v, u, EdgeKind::Directed),
            _ => (u, v, EdgeKind::Undirected),
        };
        eg.put(kind.0, kind.1, Some(kind.2));
    }
    eg.validated()
}

/// Edges shared, with the same orientation status, by every class member.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrongEdgeSet {
    /// `(from, to)` pairs.
    pub directed: BTreeSet<(usize, usize)>,
    /// `(min, max)` pairs.
    pub undirected: BTreeSet<(usize, usize)>,
}

impl StrongEdgeSet {
    pub fn is_empty(&self) -> bool {
        self.directed.is_empty() && self.undirected.is_empty()
    }

    pub fn describe(&self, names: &Arc<[String]>) -> Vec<String> {
        let mut out: Vec<String> = self.directed.iter().map(|&(a, b)| format!("{}->{}", names[a], names[b])).collect();
        out.extend(self.undirected.iter().map(|&(a, b)| format!("{}--{}", names[a], names[b])));
        out
    }
}

pub fn strong_oracle(class: &EquivalenceClass) -> Result<StrongEdgeSet> {
    let first = class.members.first().ok_or(Error::EmptyClass)?;
    let mut out = StrongEdgeSet::default();
    for (u, v) in first.edges().iter().map(|e| e.pair()) {
        if class.members.iter().all(|m| m.has_directed(u, v)) {
            out.directed.insert((u, v));
        } else if class.members.iter().all(|m| m.has_directed(v, u)) {
            out.directed.insert((v, u));
        } else if class.members.iter().all(|m| m.has_undirected(u, v)) {
            out.undirected.insert((u, v));
        }
    }
    Ok(out)
}
