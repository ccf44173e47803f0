//! Strong-edge labeling of an essential graph without enumerating its class.
//!
//! Starting from the block state left by [`essential_graph`], an edge blocked
//! at both ends is a strong undirected edge and an unblocked edge is never
//! strong. For each edge `x -> y` (blocked at `x` only) we block its `y` end
//! in a copy `H`, close `H` under R2 and R3, and call `x -> y` strong iff some
//! triplex of the essential graph is destroyed in `H`.
//!
//! [`essential_graph`]: crate::essential::essential_graph

use std::collections::BTreeSet;

use crate::equivalence::{triplexes, StrongEdgeSet};
use crate::error::{Error, Result};
use crate::essential::{
    chordless_cycle_through, essential_graph, firings, propagate, MarkedGraph, Rule, SeparatorTable,
};
use crate::graph::ChainGraph;
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongLabeling {
    /// The essential graph.
    pub graph: ChainGraph,
    pub strong: StrongEdgeSet,
}

impl StrongLabeling {
    pub fn is_strong_directed(&self, from: usize, to: usize) -> bool {
        self.strong.directed.contains(&(from, to))
    }

    pub fn is_strong_undirected(&self, u: usize, v: usize) -> bool {
        self.strong.undirected.contains(&(u.min(v), u.max(v)))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LabelOptions {
    /// Seed and propagate labels with rules S1-S6 and skip the `H` test for
    /// edges they already settle.
    pub accelerate: bool,
}

/// The copy `H` built while testing one candidate edge.
#[derive(Debug, Clone)]
pub struct CandidateTrace<'a> {
    /// Candidate `x -> y`.
    pub edge: (usize, usize),
    /// Block state after forcing `y`'s end and closing under R2-R3.
    pub h: &'a MarkedGraph,
    pub strong: bool,
}

pub fn label_strong(m: &MarkedGraph, t: &SeparatorTable) -> Result<StrongLabeling> {
    label_strong_with(m, t, LabelOptions::default(), &mut |_| {})
}

/// Essential graph of `g` with its strong edges labelled.
pub fn label_graph(g: &ChainGraph) -> Result<StrongLabeling> {
    let eg = essential_graph(g)?;
    label_strong(&eg.marks, &eg.separators)
}

/// As [`label_strong`], reporting every candidate copy `H` to `probe`.
pub fn label_strong_with(
    m: &MarkedGraph,
    t: &SeparatorTable,
    options: LabelOptions,
    probe: &mut dyn FnMut(&CandidateTrace<'_>),
) -> Result<StrongLabeling> {
    if !t.covers(m) {
        return Err(Error::InvalidState("separator table misses a non-adjacent pair".into()));
    }
    if !firings(m, t, &[Rule::R2, Rule::R3, Rule::R4]).is_empty() {
        return Err(Error::InvalidState("block state is not closed under R2-R4".into()));
    }
    let graph = m.finalize()?;
    let mut strong = StrongEdgeSet::default();
    for (u, v) in m.edges() {
        if m.double_blocked(u, v) {
            strong.undirected.insert((u, v));
        }
    }

    let candidates: Vec<(usize, usize)> = m
        .edges()
        .into_iter()
        .filter_map(|(u, v)| {
            if m.blocked_only_at(u, v) {
                Some((u, v))
            } else if m.blocked_only_at(v, u) {
                Some((v, u))
            } else {
                None
            }
        })
        .collect();

    if options.accelerate {
        strong.directed = accelerator_labels(m, &BTreeSet::new());
    }
    for (x, y) in candidates {
        if strong.directed.contains(&(x, y)) {
            continue;
        }
        let mut h = m.clone();
        h.block(y, x);
        propagate(&mut h, t, &[Rule::R2, Rule::R3]);
        let is_strong = destroys_triplex(m, &h);
        probe(&CandidateTrace { edge: (x, y), h: &h, strong: is_strong });
        if is_strong {
            strong.directed.insert((x, y));
            if options.accelerate {
                strong.directed = accelerator_labels(m, &strong.directed);
            }
        }
    }
    Ok(StrongLabeling { graph, strong })
}

/// Whether some pretriplex `a |- b ~| c` of `m` (an induced path with `a ~ b`
/// blocked at `a` only and `b ~ c` blocked at `c`) has both edges
/// double-blocked in `h`. Both flank orders are scanned.
fn destroys_triplex(m: &MarkedGraph, h: &MarkedGraph) -> bool {
    for b in 0..m.n() {
        let adj = m.adjacent(b);
        for a in adj {
            if !m.blocked_only_at(a, b) {
                continue;
            }
            for c in adj {
                if c == a || m.is_adjacent(a, c) || !m.is_blocked(c, b) {
                    continue;
                }
                if h.double_blocked(a, b) && h.double_blocked(b, c) {
                    return true;
                }
            }
        }
    }
    false
}

/// Strong directed edges derived by rules S1-S6 from the block state `m`,
/// starting from `known`. Sound but incomplete. The result includes `known`.
pub fn accelerator_labels(m: &MarkedGraph, known: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut strong = known.clone();
    let n = m.n();
    let directed = |a: usize, b: usize| m.blocked_only_at(a, b);
    let blocked = |a: usize, b: usize| m.is_blocked(a, b);
    // edges `a -> b` of the essential graph
    let arrows: Vec<(usize, usize)> =
        (0..n).flat_map(|a| m.adjacent(a).iter().filter(move |&b| directed(a, b)).map(move |b| (a, b))).collect();

    loop {
        let before = strong.len();
        for &(a, b) in &arrows {
            if strong.contains(&(a, b)) {
                continue;
            }
            if s1(m, a, b) || s2(m, a, b) || s3(m, a, b) {
                strong.insert((a, b));
                continue;
            }
            // S4: p -> a -> b, p and b apart, p -> a strong
            let s4 = (0..n).any(|p| {
                m.is_adjacent(p, a) && directed(p, a) && p != b && !m.is_adjacent(p, b) && strong.contains(&(p, a))
            });
            // S5: triangle a ~ c ~ b with a ~ c blocked at a, c -> b strong
            let common = m.adjacent(a) & m.adjacent(b);
            let s5 = common.iter().any(|c| blocked(a, c) && directed(c, b) && strong.contains(&(c, b)));
            // S6: triangle with a -> c strong, c ~ b blocked at c
            let s6 = common.iter().any(|c| directed(a, c) && blocked(c, b) && strong.contains(&(a, c)));
            if s4 || s5 || s6 {
                strong.insert((a, b));
            }
        }
        if strong.len() == before {
            return strong;
        }
    }
}

/// S1 for the consequent `c -> d`: two non-adjacent arrows into `c` from
/// nodes that are also non-adjacent to `d`.
fn s1(m: &MarkedGraph, c: usize, d: usize) -> bool {
    let feeders: NodeSet =
        m.adjacent(c).iter().filter(|&a| a != d && m.blocked_only_at(a, c) && !m.is_adjacent(a, d)).collect();
    feeders.iter().any(|a| feeders.iter().filter(|&b| b > a).any(|b| !m.is_adjacent(a, b)))
}

/// S2 for `a -> b`: `b ~ c` double-blocked with `a`, `c` non-adjacent.
fn s2(m: &MarkedGraph, a: usize, b: usize) -> bool {
    m.adjacent(b).iter().any(|c| c != a && !m.is_adjacent(a, c) && m.double_blocked(b, c))
}

/// S3 for `a -> b`: a chordless cycle `a ~ c ~ .. ~ d -> b` (at least two
/// internal nodes), each path edge blocked at its end nearer `a`, the last
/// one directed into `b`.
fn s3(m: &MarkedGraph, a: usize, b: usize) -> bool {
    let step = |from: usize, to: usize| {
        if to == b {
            m.blocked_only_at(from, b)
        } else {
            m.is_blocked(from, to)
        }
    };
    chordless_cycle_through(m, a, b, 2, &step)
}

/// A broken internal invariant of one candidate copy `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditViolation {
    /// Triangle `a |-o b`, `b - c`, `a - c` with both of the latter unblocked.
    BlockedTriangle {
        a: usize,
        b: usize,
        c: usize,
    },
    /// Chordless cycle with an edge blocked at its rear end only but no edge
    /// blocked at its front end only.
    OneWayCycle(Vec<usize>),
    SemidirectedCycle(Vec<usize>),
    SpuriousTriplex {
        a: usize,
        b: usize,
        c: usize,
    },
}

/// Checks `h` (a candidate copy) against the invariants every copy must
/// satisfy after R2-R3 closure.
pub fn audit_candidate(h: &MarkedGraph, essential: &ChainGraph) -> Vec<AuditViolation> {
    let mut out = Vec::new();
    let n = h.n();
    for a in 0..n {
        for b in h.adjacent(a) {
            if !h.is_blocked(a, b) {
                continue;
            }
            for c in h.adjacent(a) & h.adjacent(b) {
                if h.unblocked(b, c) && h.unblocked(a, c) {
                    out.push(AuditViolation::BlockedTriangle { a, b, c });
                }
            }
        }
    }

    for cycle in chordless_cycles(h) {
        let k = cycle.len();
        let steps = || (0..k).map(|i| (cycle[i], cycle[(i + 1) % k]));
        let forward = steps().any(|(u, v)| h.blocked_only_at(u, v));
        let backward = steps().any(|(u, v)| h.blocked_only_at(v, u));
        if forward && !backward {
            out.push(AuditViolation::OneWayCycle(cycle.clone()));
        }
    }

    let oriented = h.orient_unchecked();
    if let Some(c) = oriented.find_semidirected_cycle() {
        out.push(AuditViolation::SemidirectedCycle(c));
    }
    let allowed = triplexes(essential);
    for t in triplexes(&oriented) {
        if !allowed.contains(&t) {
            out.push(AuditViolation::SpuriousTriplex { a: t.flanks.0, b: t.middle, c: t.flanks.1 });
        }
    }
    out
}

/// Every chordless cycle of length at least three, each listed once per
/// traversal direction, starting at its least node.
pub fn chordless_cycles(m: &MarkedGraph) -> Vec<Vec<usize>> {
    fn dfs(m: &MarkedGraph, s: usize, path: &mut Vec<usize>, on_path: NodeSet, out: &mut Vec<Vec<usize>>) {
        let cur = *path.last().unwrap();
        if path.len() >= 3 && m.is_adjacent(cur, s) {
            out.push(path.clone());
            return;
        }
        for w in m.adjacent(cur) - on_path {
            if w < s {
                continue;
            }
            let touching = m.adjacent(w) & on_path;
            let allowed = if path.len() == 1 { NodeSet::singleton(cur) } else { NodeSet::singleton(cur).with(s) };
            if !touching.is_subset(allowed) {
                continue;
            }
            path.push(w);
            dfs(m, s, path, on_path.with(w), out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..m.n() {
        let mut path = vec![s];
        dfs(m, s, &mut path, NodeSet::singleton(s), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::essential::essential_graph;
    use crate::io::parse_compact;

    fn labels(s: &str) -> (ChainGraph, StrongLabeling) {
        let g = parse_compact(s).unwrap();
        let eg = essential_graph(&g).unwrap();
        let l = label_strong(&eg.marks, &eg.separators).unwrap();
        (eg.graph, l)
    }

    #[test]
    fn no_strong_edges_in_collider_with_tail() {
        let (_, l) = labels("A->B C->B C--D");
        assert!(l.strong.is_empty());
    }

    #[test]
    fn s1_instance() {
        let (eg, l) = labels("A->C B->C C->D");
        assert_eq!(l.strong.describe(eg.names()), ["C->D"]);
        let eg2 = essential_graph(&eg).unwrap();
        let acc = accelerator_labels(&eg2.marks, &BTreeSet::new());
        assert_eq!(acc.into_iter().collect::<Vec<_>>(), vec![(2, 3)]);
    }

    #[test]
    fn chain_continuation_is_strong() {
        let (eg, l) = labels("A->C B->C C->D D->E");
        assert!(l.is_strong_directed(eg.node("D").unwrap(), eg.node("E").unwrap()));
    }

    #[test]
    fn disjunctive_label_escapes_the_rules() {
        // B -> C is forced whether the member has B -> A or B - A
        let (eg, l) = labels("B->A D->A A->C B->C");
        let (b, c) = (eg.node("B").unwrap(), eg.node("C").unwrap());
        assert_eq!(l.strong.directed, BTreeSet::from([(b, c)]));
        let m = essential_graph(&eg).unwrap().marks;
        assert!(accelerator_labels(&m, &BTreeSet::new()).is_empty());
    }

    #[test]
    fn four_cycle_is_strong_undirected() {
        let (_, l) = labels("A--B B--C C--D A--D");
        assert_eq!(l.strong.undirected.len(), 4);
        assert!(l.strong.directed.is_empty());
    }

    #[test]
    fn accelerator_on_unmarked_graph_is_empty() {
        let g = parse_compact("A--B B--C").unwrap();
        assert!(accelerator_labels(&MarkedGraph::unmarked(&g), &BTreeSet::new()).is_empty());
    }

    #[test]
    fn rejects_states_not_closed_under_rules() {
        let g = parse_compact("A->B B->C").unwrap();
        let eg = essential_graph(&g).unwrap();
        let mut m = MarkedGraph::unmarked(&g);
        m.block(0, 1);
        assert!(matches!(label_strong(&m, &eg.separators), Err(Error::InvalidState(_))));
    }

    #[test]
    fn accelerated_labeling_agrees() {
        for s in ["A->C B->C C->D D->E", "A->B C->B C--D", "A->C B->C C->D C->E D--E"] {
            let g = parse_compact(s).unwrap();
            let eg = essential_graph(&g).unwrap();
            let plain = label_strong(&eg.marks, &eg.separators).unwrap();
            let fast =
                label_strong_with(&eg.marks, &eg.separators, LabelOptions { accelerate: true }, &mut |_| {}).unwrap();
            assert_eq!(plain, fast, "{s}");
        }
    }

    #[test]
    fn chordless_cycle_listing() {
        let sq = parse_compact("A--B B--C C--D A--D").unwrap();
        let cycles = chordless_cycles(&MarkedGraph::unmarked(&sq));
        assert_eq!(cycles.len(), 2);
        let k4 = parse_compact("A--B A--C A--D B--C B--D C--D").unwrap();
        // four triangles, two directions each
        assert_eq!(chordless_cycles(&MarkedGraph::unmarked(&k4)).len(), 8);
    }
}
