//! Essential-graph construction by block propagation.
//!
//! The working state is a [`MarkedGraph`]: the skeleton of the input with a
//! block flag on each edge end. A block at `a` on `a ~ b` means the edge may
//! never carry an arrowhead at `a`. Rules R1-R4 only ever add blocks, so any
//! application order reaches the same fixpoint. Once propagation is done an
//! edge blocked at `a` only becomes `a -> b`; every other edge stays
//! undirected.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{ChainGraph, EdgeKind};
use crate::nodeset::NodeSet;
use crate::separation::{separated, SeparationQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndMark {
    Blocked,
    Plain,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MarkedGraph {
    names: Arc<[String]>,
    adj: Vec<NodeSet>,
    /// `b ∈ blocked[a]` iff the edge `a ~ b` is blocked at `a`.
    blocked: Vec<NodeSet>,
}

impl MarkedGraph {
    /// Skeleton of `g` with no blocks.
    pub fn unmarked(g: &ChainGraph) -> Self {
        MarkedGraph { names: g.names().clone(), adj: g.skeleton(), blocked: vec![NodeSet::EMPTY; g.n()] }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    pub fn adjacent(&self, v: usize) -> NodeSet {
        self.adj[v]
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Skeleton edges as `(min, max)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n()).flat_map(|u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    pub fn mark(&self, at: usize, other: usize) -> EndMark {
        if self.blocked[at].contains(other) {
            EndMark::Blocked
        } else {
            EndMark::Plain
        }
    }

    pub fn is_blocked(&self, at: usize, other: usize) -> bool {
        self.blocked[at].contains(other)
    }

    /// Blocked at `a`, plain at `b`: finalises to `a -> b`.
    pub fn blocked_only_at(&self, a: usize, b: usize) -> bool {
        self.is_blocked(a, b) && !self.is_blocked(b, a)
    }

    pub fn double_blocked(&self, a: usize, b: usize) -> bool {
        self.is_blocked(a, b) && self.is_blocked(b, a)
    }

    pub fn unblocked(&self, a: usize, b: usize) -> bool {
        !self.is_blocked(a, b) && !self.is_blocked(b, a)
    }

    /// Nodes `b` such that `a ~ b` is blocked at `a`.
    pub fn blocked_ends(&self, a: usize) -> NodeSet {
        self.blocked[a]
    }

    /// Adds a block at `at` on `at ~ other`; returns whether it was new.
    pub fn block(&mut self, at: usize, other: usize) -> bool {
        debug_assert!(self.is_adjacent(at, other));
        let fresh = !self.blocked[at].contains(other);
        self.blocked[at].insert(other);
        fresh
    }

    pub fn block_count(&self) -> usize {
        self.blocked.iter().map(|s| s.len()).sum()
    }

    /// Whether every block of `self` is also present in `other`.
    pub fn is_refined_by(&self, other: &MarkedGraph) -> bool {
        self.adj == other.adj && self.blocked.iter().zip(&other.blocked).all(|(a, b)| a.is_subset(*b))
    }

    /// Orients edges blocked at one end only; no validity check.
    pub(crate) fn orient_unchecked(&self) -> ChainGraph {
        let mut g = ChainGraph::bare(self.names.clone());
        for (u, v) in self.edges() {
            match (self.is_blocked(u, v), self.is_blocked(v, u)) {
                (true, false) => g.put(u, v, Some(EdgeKind::Directed)),
                (false, true) => g.put(v, u, Some(EdgeKind::Directed)),
                _ => g.put(u, v, Some(EdgeKind::Undirected)),
            }
        }
        g
    }

    /// Blocked at `a` only becomes `a -> b`; everything else stays undirected.
    pub fn finalize(&self) -> Result<ChainGraph> {
        self.orient_unchecked().validated()
    }
}

impl fmt::Debug for MarkedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges()
            .into_iter()
            .map(|(u, v)| {
                let l = if self.is_blocked(u, v) { "|" } else { "" };
                let r = if self.is_blocked(v, u) { "|" } else { "" };
                format!("{}{l}-{r}{}", self.names[u], self.names[v])
            })
            .collect();
        write!(f, "MarkedGraph({})", parts.join(" "))
    }
}

/// Separating sets for every non-adjacent pair of the input graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeparatorTable {
    entries: BTreeMap<(usize, usize), NodeSet>,
}

impl SeparatorTable {
    pub fn get(&self, a: usize, b: usize) -> Option<NodeSet> {
        self.entries.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn insert(&mut self, a: usize, b: usize, set: NodeSet) {
        self.entries.insert((a.min(b), a.max(b)), set);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), NodeSet)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    fn contains(&self, a: usize, b: usize, v: usize) -> bool {
        self.get(a, b).expect("separator table covers every non-adjacent pair").contains(v)
    }

    pub fn covers(&self, m: &MarkedGraph) -> bool {
        (0..m.n()).all(|a| ((a + 1)..m.n()).all(|b| m.is_adjacent(a, b) || self.get(a, b).is_some()))
    }
}

/// Largest number of candidate nodes searched exhaustively for a separator.
pub const MAX_SEPARATOR_SEARCH: usize = 22;

/// A separating set for every non-adjacent pair `{a, b}`.
///
/// The first choice is the boundary `Ne(v) ∪ Pa(v ∪ Ne(v))` of an endpoint
/// `v` such that the other endpoint is neither a descendant of `v` nor inside
/// that boundary. When that fails the non-descendants of an endpoint are
/// tried, and finally every subset in order of size. Every entry is checked
/// with [`separated`].
pub fn separator_table(g: &ChainGraph) -> Result<SeparatorTable> {
    let mut table = SeparatorTable::default();
    for a in 0..g.n() {
        for b in (a + 1)..g.n() {
            if !g.is_adjacent(a, b) {
                table.insert(a, b, find_separator(g, a, b)?);
            }
        }
    }
    Ok(table)
}

fn find_separator(g: &ChainGraph, a: usize, b: usize) -> Result<NodeSet> {
    let pair = NodeSet::singleton(a).with(b);
    let separates = |s: NodeSet| separated(g, &SeparationQuery::singletons(a, b, s));
    let mut tried = Vec::new();
    for (v, other) in [(a, b), (b, a)] {
        let ne = g.neighbors(v);
        let boundary = ne | g.parents_of(ne.with(v));
        let de = g.descendants_of(NodeSet::singleton(v));
        if !de.contains(other) && !boundary.contains(other) {
            tried.push(boundary - pair);
        }
    }
    for v in [a, b] {
        let de = g.descendants_of(NodeSet::singleton(v));
        if de.is_disjoint(pair) {
            tried.push(g.nodes() - de - pair);
        }
    }
    for s in tried {
        if separates(s)? {
            return Ok(s);
        }
    }
    let pool = g.nodes() - pair;
    if pool.len() > MAX_SEPARATOR_SEARCH {
        return Err(Error::TooLarge { what: "separator search", size: pool.len(), cap: MAX_SEPARATOR_SEARCH });
    }
    let mut subsets: Vec<NodeSet> = pool.subsets().collect();
    subsets.sort_by_key(|s| (s.len(), s.bits()));
    for s in subsets {
        if separates(s)? {
            return Ok(s);
        }
    }
    Err(Error::SeparationWitnessFailed { a: g.name(a).to_string(), b: g.name(b).to_string(), set: Vec::new() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
}

pub const ALL_RULES: [Rule; 4] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4];

/// One rule instance: the blocks its consequent adds, as `(at, other)` ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Firing {
    pub rule: Rule,
    pub blocks: Vec<(usize, usize)>,
}

/// Whether a chordless cycle `a ~ v1 ~ .. ~ vk ~ b ~ a` exists with at least
/// `min_internal` internal nodes and every path step accepted by `step`.
/// "Chordless" is judged against the full skeleton.
pub(crate) fn chordless_cycle_through(
    m: &MarkedGraph,
    a: usize,
    b: usize,
    min_internal: usize,
    step: &dyn Fn(usize, usize) -> bool,
) -> bool {
    fn dfs(
        m: &MarkedGraph,
        b: usize,
        min_internal: usize,
        step: &dyn Fn(usize, usize) -> bool,
        path: &mut Vec<usize>,
        on_path: NodeSet,
    ) -> bool {
        let cur = *path.last().unwrap();
        let internal = path.len() - 1;
        if internal >= 1 && m.is_adjacent(cur, b) {
            // the only way to stay chordless is to close the cycle now
            return internal >= min_internal && step(cur, b);
        }
        for w in m.adjacent(cur) - on_path {
            if w == b || !step(cur, w) {
                continue;
            }
            // w may touch the path only through cur
            if !(m.adjacent(w) & on_path).is_subset(NodeSet::singleton(cur)) {
                continue;
            }
            path.push(w);
            let found = dfs(m, b, min_internal, step, path, on_path.with(w));
            path.pop();
            if found {
                return true;
            }
        }
        false
    }
    let mut path = vec![a];
    dfs(m, b, min_internal, step, &mut path, NodeSet::singleton(a))
}

fn r1_firings(m: &MarkedGraph, t: &SeparatorTable, out: &mut Vec<Firing>) {
    for b in 0..m.n() {
        let adj = m.adjacent(b);
        for a in adj {
            for c in adj.iter().filter(|&c| c > a) {
                if m.is_adjacent(a, c) || t.contains(a, c, b) {
                    continue;
                }
                if !m.is_blocked(a, b) || !m.is_blocked(c, b) {
                    out.push(Firing { rule: Rule::R1, blocks: vec![(a, b), (c, b)] });
                }
            }
        }
    }
}

fn r2_firings(m: &MarkedGraph, t: &SeparatorTable, out: &mut Vec<Firing>) {
    for b in 0..m.n() {
        let adj = m.adjacent(b);
        for a in adj {
            if !m.is_blocked(a, b) {
                continue;
            }
            for c in adj {
                if c == a || m.is_adjacent(a, c) || m.is_blocked(b, c) {
                    continue;
                }
                if t.contains(a, c, b) {
                    out.push(Firing { rule: Rule::R2, blocks: vec![(b, c)] });
                }
            }
        }
    }
}

fn r3_firings(m: &MarkedGraph, out: &mut Vec<Firing>) {
    for a in 0..m.n() {
        for b in m.adjacent(a) {
            if m.is_blocked(a, b) {
                continue;
            }
            let step = |from: usize, to: usize| m.is_blocked(from, to);
            if chordless_cycle_through(m, a, b, 1, &step) {
                out.push(Firing { rule: Rule::R3, blocks: vec![(a, b)] });
            }
        }
    }
}

fn r4_firings(m: &MarkedGraph, t: &SeparatorTable, out: &mut Vec<Firing>) {
    for a in 0..m.n() {
        for b in m.adjacent(a) {
            if m.is_blocked(a, b) {
                continue;
            }
            let common = m.adjacent(a) & m.adjacent(b);
            let feeders = common
                & m.blocked.iter().enumerate().filter(|(_, s)| s.contains(b)).map(|(v, _)| v).collect::<NodeSet>();
            let fires = feeders
                .iter()
                .any(|c| feeders.iter().filter(|&d| d > c).any(|d| !m.is_adjacent(c, d) && t.contains(c, d, a)));
            if fires {
                out.push(Firing { rule: Rule::R4, blocks: vec![(a, b)] });
            }
        }
    }
}

/// Every instance of the selected rules that would add at least one block.
pub fn firings(m: &MarkedGraph, t: &SeparatorTable, rules: &[Rule]) -> Vec<Firing> {
    let mut out = Vec::new();
    for rule in rules {
        match rule {
            Rule::R1 => r1_firings(m, t, &mut out),
            Rule::R2 => r2_firings(m, t, &mut out),
            Rule::R3 => r3_firings(m, &mut out),
            Rule::R4 => r4_firings(m, t, &mut out),
        }
    }
    out
}

/// Applies the selected rules until none adds a block. Returns whether
/// anything changed.
pub fn propagate(m: &mut MarkedGraph, t: &SeparatorTable, rules: &[Rule]) -> bool {
    let mut changed = false;
    loop {
        let fs = firings(m, t, rules);
        let mut progress = false;
        for f in fs {
            for (at, other) in f.blocks {
                progress |= m.block(at, other);
            }
        }
        if !progress {
            return changed;
        }
        changed = true;
    }
}

/// Least fixpoint of the selected rules starting from `m`.
pub fn apply_rules(m: &MarkedGraph, t: &SeparatorTable, rules: &[Rule]) -> MarkedGraph {
    let mut out = m.clone();
    propagate(&mut out, t, rules);
    out
}

/// Same fixpoint, reached by firing one randomly chosen rule instance at a
/// time.
pub fn apply_rules_randomly<R: Rng>(m: &MarkedGraph, t: &SeparatorTable, rules: &[Rule], rng: &mut R) -> MarkedGraph {
    let mut out = m.clone();
    loop {
        let fs = firings(&out, t, rules);
        let Some(f) = fs.choose(rng) else {
            return out;
        };
        for &(at, other) in &f.blocks {
            out.block(at, other);
        }
    }
}

/// Double-blocks every edge lying on a chordless cycle of length at least
/// four whose edges carry no blocks. Cycles are found on the input state and
/// all of them are marked at once.
pub fn double_block_chordless_cycles(m: &MarkedGraph) -> MarkedGraph {
    let plain = |u: usize, v: usize| m.unblocked(u, v);
    let hits: Vec<(usize, usize)> =
        m.edges().into_iter().filter(|&(u, v)| plain(u, v) && chordless_cycle_through(m, u, v, 2, &plain)).collect();
    let mut out = m.clone();
    for (u, v) in hits {
        out.block(u, v);
        out.block(v, u);
    }
    out
}

/// Output of [`essential_graph`].
#[derive(Debug, Clone)]
pub struct EssentialGraph {
    pub graph: ChainGraph,
    /// Block state before the final orientation step.
    pub marks: MarkedGraph,
    pub separators: SeparatorTable,
}

/// Builds the essential graph of `g`'s equivalence class.
pub fn essential_graph(g: &ChainGraph) -> Result<EssentialGraph> {
    let separators = separator_table(g)?;
    let mut marks = MarkedGraph::unmarked(g);
    propagate(&mut marks, &separators, &ALL_RULES);
    let mut marks = double_block_chordless_cycles(&marks);
    propagate(&mut marks, &separators, &[Rule::R2, Rule::R3, Rule::R4]);
    let graph = marks.finalize()?;
    Ok(EssentialGraph { graph, marks, separators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_compact;

    fn g(s: &str) -> ChainGraph {
        parse_compact(s).unwrap()
    }

    fn sep(gr: &ChainGraph, t: &SeparatorTable, a: &str, b: &str) -> Vec<String> {
        gr.set_names(t.get(gr.node(a).unwrap(), gr.node(b).unwrap()).unwrap())
    }

    #[test]
    fn separator_recipe() {
        let gr = g("A->B C->B");
        assert!(sep(&gr, &separator_table(&gr).unwrap(), "A", "C").is_empty());
        let gr = g("A->B B->C");
        assert_eq!(sep(&gr, &separator_table(&gr).unwrap(), "A", "C"), ["B"]);
        let gr = g("A--B B--C");
        assert_eq!(sep(&gr, &separator_table(&gr).unwrap(), "A", "C"), ["B"]);
        // from B's side the boundary would contain C itself
        let gr = g("A--B C->A");
        assert!(sep(&gr, &separator_table(&gr).unwrap(), "B", "C").is_empty());
    }

    #[test]
    fn separator_fallback_when_both_boundaries_fail() {
        // A's boundary contains B and A is a descendant of B
        let gr = g("A--C D->A B->C B->D");
        let t = separator_table(&gr).unwrap();
        let (a, b) = (gr.node("A").unwrap(), gr.node("B").unwrap());
        let s = t.get(a, b).unwrap();
        assert!(separated(&gr, &SeparationQuery::singletons(a, b, s)).unwrap());
    }

    #[test]
    fn r1_builds_a_collider() {
        let gr = g("A->B C->B");
        let t = separator_table(&gr).unwrap();
        let m = apply_rules(&MarkedGraph::unmarked(&gr), &t, &ALL_RULES);
        assert!(m.blocked_only_at(0, 1));
        assert!(m.blocked_only_at(2, 1));
        assert_eq!(m.finalize().unwrap(), gr);
    }

    #[test]
    fn no_rule_fires_on_a_chain() {
        let gr = g("A->B B->C");
        let t = separator_table(&gr).unwrap();
        let m = apply_rules(&MarkedGraph::unmarked(&gr), &t, &ALL_RULES);
        assert_eq!(m.block_count(), 0);
    }

    #[test]
    fn line_five_snapshot() {
        let sq = g("A--B B--C C--D A--D");
        let m = double_block_chordless_cycles(&MarkedGraph::unmarked(&sq));
        for (u, v) in m.edges() {
            assert!(m.double_blocked(u, v));
        }
        let tri = g("A--B B--C A--C");
        let m = double_block_chordless_cycles(&MarkedGraph::unmarked(&tri));
        assert_eq!(m.block_count(), 0);
        let mut pre = MarkedGraph::unmarked(&sq);
        pre.block(0, 1);
        let m = double_block_chordless_cycles(&pre);
        assert_eq!(m.block_count(), 1);
    }

    #[test]
    fn r3_needs_a_chordless_blocked_path() {
        // A |- C |- B closes with A ~ B: block A's end.
        let gr = g("A--B A--C B--C");
        let t = separator_table(&gr).unwrap();
        let mut m = MarkedGraph::unmarked(&gr);
        m.block(0, 2);
        m.block(2, 1);
        let out = apply_rules(&m, &t, &[Rule::R3]);
        assert!(out.is_blocked(0, 1));
    }

    #[test]
    fn r4_instance() {
        // A adjacent to B, C, D; C ~ B blocked at C, D ~ B blocked at D; C, D apart.
        let gr = g("A--B A--C A--D C--B D--B");
        let mut t = SeparatorTable::default();
        t.insert(2, 3, NodeSet::from_iter([0, 1]));
        let mut m = MarkedGraph::unmarked(&gr);
        m.block(2, 1);
        m.block(3, 1);
        let out = apply_rules(&m, &t, &[Rule::R4]);
        assert!(out.is_blocked(0, 1));
        let mut t2 = SeparatorTable::default();
        t2.insert(2, 3, NodeSet::singleton(1));
        assert!(!apply_rules(&m, &t2, &[Rule::R4]).is_blocked(0, 1));
    }

    #[test]
    fn essential_graph_examples() {
        assert_eq!(essential_graph(&g("A->B B--C")).unwrap().graph, g("A->B C->B"));
        assert_eq!(essential_graph(&g("A--B")).unwrap().graph, g("A--B"));
        let eg = g("A->B C->B C--D");
        assert_eq!(essential_graph(&eg).unwrap().graph, eg);
        let sq = g("A--B B--C C--D A--D");
        assert_eq!(essential_graph(&sq).unwrap().graph, sq);
    }
}
