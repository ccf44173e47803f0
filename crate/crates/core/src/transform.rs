//! Feasible merges and splits of chain components.
//!
//! Merging components `U` and `L` turns every edge `u -> l` (`u ∈ U`,
//! `l ∈ L`) into `u - l`; the four feasibility conditions guarantee the result
//! is equivalent to the input. Splitting is the inverse: orient every
//! undirected edge between two halves of one component from the first half to
//! the second, and accept the result when it is a chain graph equivalent to
//! the input.

use std::collections::{BTreeSet, VecDeque};

use crate::equivalence::{equivalent, EquivalenceClass};
use crate::error::{Error, Result};
use crate::graph::{ChainGraph, EdgeKind};
use crate::nodeset::NodeSet;

/// Largest component whose bipartitions are tried when splitting.
pub const MAX_SPLIT_COMPONENT: usize = 20;
/// Default cap on the size of a class built by closure.
pub const DEFAULT_MAX_CLASS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MergeCandidate {
    pub upper: NodeSet,
    pub lower: NodeSet,
}

/// Evaluates the four merge conditions for components `upper` and `lower`.
/// Returns `false` when no edge runs from `upper` to `lower`.
pub fn feasible_merge_check(g: &ChainGraph, upper: NodeSet, lower: NodeSet) -> Result<bool> {
    let parts = g.chain_components();
    if upper == lower || !parts.is_component(upper) || !parts.is_component(lower) {
        return Err(Error::NotComponents);
    }
    let pa_lower = g.parents_of(lower);
    let links = pa_lower & upper;
    if links.is_empty() {
        return Ok(false);
    }
    // 1. every parent in U points to all of L
    let c1 = links.iter().all(|x| lower.is_subset(g.children(x)));
    // 2. those parents form a complete set
    let c2 = g.is_complete(links);
    // 3. their parents are parents of every node of L
    let outer = g.parents_of(links);
    let c3 = lower.iter().all(|y| outer.is_subset(g.parents(y)));
    // 4. no parent of L is reachable from U along a semidirected path
    let c4 = g.semidirected_descendants_of(upper).is_disjoint(pa_lower);
    Ok(c1 && c2 && c3 && c4)
}

pub fn merge(g: &ChainGraph, upper: NodeSet, lower: NodeSet) -> Result<ChainGraph> {
    if !feasible_merge_check(g, upper, lower)? {
        return Err(Error::InfeasibleMerge);
    }
    let mut out = g.clone();
    for u in upper {
        for l in g.children(u) & lower {
            out.put(u, l, Some(EdgeKind::Undirected));
        }
    }
    out.validated()
}

/// Orients every undirected edge between `upper` and `lower` (a partition of
/// component `component`) as `upper -> lower`; feasible iff the result is a
/// chain graph equivalent to `g`.
pub fn split(g: &ChainGraph, component: NodeSet, upper: NodeSet, lower: NodeSet) -> Result<ChainGraph> {
    let parts = g.chain_components();
    if !parts.is_component(component)
        || upper.is_empty()
        || lower.is_empty()
        || !upper.is_disjoint(lower)
        || (upper | lower) != component
    {
        return Err(Error::NotComponents);
    }
    try_split(g, upper, lower).ok_or(Error::InfeasibleSplit)
}

fn try_split(g: &ChainGraph, upper: NodeSet, lower: NodeSet) -> Option<ChainGraph> {
    let mut out = g.clone();
    let mut crossing = false;
    for u in upper {
        for l in g.neighbors(u) & lower {
            out.put(u, l, Some(EdgeKind::Directed));
            crossing = true;
        }
    }
    if !crossing {
        return None;
    }
    let out = out.validated().ok()?;
    equivalent(g, &out).ok()?.then_some(out)
}

/// Every `(upper, lower)` component pair joined by at least one edge.
pub fn merge_candidates(g: &ChainGraph) -> Vec<MergeCandidate> {
    let parts = g.chain_components();
    let mut out = BTreeSet::new();
    for (u, v) in g.directed_edges() {
        out.insert(MergeCandidate { upper: parts.component_containing(u), lower: parts.component_containing(v) });
    }
    out.into_iter().collect()
}

pub fn feasible_merges(g: &ChainGraph) -> Result<Vec<ChainGraph>> {
    let mut out = Vec::new();
    for c in merge_candidates(g) {
        if feasible_merge_check(g, c.upper, c.lower)? {
            out.push(merge(g, c.upper, c.lower)?);
        }
    }
    Ok(out)
}

/// Bipartitions `(upper, lower)` of each component, in increasing bit order
/// of `upper`.
fn split_candidates(g: &ChainGraph) -> Result<Vec<(NodeSet, NodeSet)>> {
    let mut out = Vec::new();
    for comp in g.chain_components().components {
        if comp.len() < 2 {
            continue;
        }
        if comp.len() > MAX_SPLIT_COMPONENT {
            return Err(Error::TooLarge { what: "chain component", size: comp.len(), cap: MAX_SPLIT_COMPONENT });
        }
        for upper in comp.subsets() {
            if upper.is_empty() || upper == comp {
                continue;
            }
            out.push((upper, comp - upper));
        }
    }
    Ok(out)
}

pub fn feasible_splits(g: &ChainGraph) -> Result<Vec<ChainGraph>> {
    Ok(split_candidates(g)?.into_iter().filter_map(|(u, l)| try_split(g, u, l)).collect())
}

pub fn admits_feasible_merge(g: &ChainGraph) -> Result<bool> {
    for c in merge_candidates(g) {
        if feasible_merge_check(g, c.upper, c.lower)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn admits_feasible_split(g: &ChainGraph) -> Result<bool> {
    Ok(split_candidates(g)?.into_iter().any(|(u, l)| try_split(g, u, l).is_some()))
}

/// Closure of `{g}` under feasible merges and splits.
pub fn class_by_merge_split(g: &ChainGraph, max_class: usize) -> Result<EquivalenceClass> {
    let mut seen: BTreeSet<ChainGraph> = BTreeSet::from([g.clone()]);
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(cur) = queue.pop_front() {
        let mut next = feasible_merges(&cur)?;
        next.extend(feasible_splits(&cur)?);
        for h in next {
            if seen.insert(h.clone()) {
                if seen.len() > max_class {
                    return Err(Error::TooLarge { what: "equivalence class", size: seen.len(), cap: max_class });
                }
                queue.push_back(h);
            }
        }
    }
    Ok(EquivalenceClass::from_members(seen))
}

/// Class members admitting no feasible merge.
pub fn minimally_oriented(g: &ChainGraph, max_class: usize) -> Result<Vec<ChainGraph>> {
    let class = class_by_merge_split(g, max_class)?;
    let mut out = Vec::new();
    for m in class.members {
        if !admits_feasible_merge(&m)? {
            out.push(m);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitOrder {
    Forward,
    Reverse,
}

/// One equivalent chain graph admitting no feasible split, reached by
/// greedily applying the first feasible split in `order`.
pub fn maximally_oriented_with(g: &ChainGraph, order: SplitOrder) -> Result<ChainGraph> {
    let mut cur = g.clone();
    loop {
        let mut cands = split_candidates(&cur)?;
        if order == SplitOrder::Reverse {
            cands.reverse();
        }
        match cands.into_iter().find_map(|(u, l)| try_split(&cur, u, l)) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
}

pub fn maximally_oriented(g: &ChainGraph) -> Result<ChainGraph> {
    maximally_oriented_with(g, SplitOrder::Forward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::{enumerate_class, DEFAULT_MAX_EDGES};
    use crate::io::parse_compact;

    fn g(s: &str) -> ChainGraph {
        parse_compact(s).unwrap()
    }

    fn set(gr: &ChainGraph, names: &[&str]) -> NodeSet {
        gr.node_set(names).unwrap()
    }

    #[test]
    fn merge_feasibility() {
        let gr = g("A->B C->B");
        assert!(feasible_merge_check(&gr, set(&gr, &["A"]), set(&gr, &["B"])).unwrap());
        assert_eq!(merge(&gr, set(&gr, &["A"]), set(&gr, &["B"])).unwrap(), g("A--B C->B"));

        let gr = g("X->Y Y--Z");
        assert!(!feasible_merge_check(&gr, set(&gr, &["X"]), set(&gr, &["Y", "Z"])).unwrap());
        assert_eq!(merge(&gr, set(&gr, &["X"]), set(&gr, &["Y", "Z"])), Err(Error::InfeasibleMerge));
        assert_eq!(feasible_merge_check(&gr, set(&gr, &["X"]), set(&gr, &["Y"])), Err(Error::NotComponents));

        let gr = g("X->Y Z->Y");
        assert!(feasible_merge_check(&gr, set(&gr, &["X"]), set(&gr, &["Y"])).unwrap());
        let merged = merge(&gr, set(&gr, &["X"]), set(&gr, &["Y"])).unwrap();
        assert!(equivalent(&gr, &merged).unwrap());

        // D is a directed descendant of A and B a semidirected one; merging
        // would close the cycle A -> D - B -> C - A
        let gr = g("A->C A->D B->C B--D");
        assert!(!feasible_merge_check(&gr, set(&gr, &["A"]), set(&gr, &["C"])).unwrap());
    }

    #[test]
    fn split_examples() {
        let gr = g("A--B");
        let all = set(&gr, &["A", "B"]);
        assert_eq!(split(&gr, all, set(&gr, &["A"]), set(&gr, &["B"])).unwrap(), g("A->B"));

        let gr = g("A->B C->B C--D");
        let cd = set(&gr, &["C", "D"]);
        let out = split(&gr, cd, set(&gr, &["D"]), set(&gr, &["C"])).unwrap();
        assert_eq!(out, g("A->B C->B D->C"));
        assert!(enumerate_class(&gr, DEFAULT_MAX_EDGES).unwrap().contains(&out));

        let sq = g("A--B B--C C--D A--D");
        let all = sq.nodes();
        assert_eq!(split(&sq, all, set(&sq, &["A"]), set(&sq, &["B", "C", "D"])), Err(Error::InfeasibleSplit));
    }

    #[test]
    fn minimally_and_maximally_oriented() {
        let gr = g("A->B C->B");
        let mins: Vec<String> =
            minimally_oriented(&gr, DEFAULT_MAX_CLASS).unwrap().iter().map(|m| m.to_string()).collect();
        assert_eq!(mins, ["A->B B--C", "A--B C->B"]);

        let ab = g("A--B");
        let max = maximally_oriented(&ab).unwrap();
        assert!(max == g("A->B") || max == g("B->A"));
        assert_ne!(max, maximally_oriented_with(&ab, SplitOrder::Reverse).unwrap());

        let sq = g("A--B B--C C--D A--D");
        assert_eq!(maximally_oriented(&sq).unwrap(), sq);
    }

    #[test]
    fn closure_matches_brute_force() {
        for s in ["A--B", "A->B C->B", "A->B C->B C--D", "A--B B--C A--C"] {
            let gr = g(s);
            let closure = class_by_merge_split(&gr, DEFAULT_MAX_CLASS).unwrap();
            let brute = enumerate_class(&gr, DEFAULT_MAX_EDGES).unwrap();
            assert_eq!(closure, brute, "{s}");
        }
        assert_eq!(class_by_merge_split(&g("A--B"), DEFAULT_MAX_CLASS).unwrap().len(), 3);
        assert_eq!(class_by_merge_split(&g("A->B C->B C--D"), DEFAULT_MAX_CLASS).unwrap().len(), 8);
    }

    #[test]
    fn closure_cap() {
        assert!(matches!(class_by_merge_split(&g("A--B"), 2), Err(Error::TooLarge { .. })));
    }
}
