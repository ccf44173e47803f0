//! Adjusting sets for the effect of a single node `X`.
//!
//! When the true chain graph `G` is known, `Z = Ne(X) ∪ Pa(X ∪ Ne(X))`
//! identifies the effect of `X`. When only the essential graph is known the
//! candidate sets are collected in one of three ways, see [`AdjustMode`].

use std::collections::BTreeMap;

use crate::equivalence::{enumerate_class, is_triplex, triplexes};
use crate::error::{Error, Result};
use crate::graph::{ChainGraph, EdgeKind};
use crate::nodeset::NodeSet;
use crate::strong::StrongLabeling;

/// Largest `|Ad(X) ∪ Ad(Ad(X))|` accepted by [`AdjustMode::Superset`].
pub const DEFAULT_MAX_SUPERSET: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    TrueGraph,
    ClassMember,
    /// Built from the locally valid set `S`.
    MaxOriented(NodeSet),
    Superset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdjustingSet {
    pub target: usize,
    pub set: NodeSet,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjustMode {
    /// Adjusting sets of every member of the class.
    ClassEnum,
    /// Adjusting sets of the maximally oriented members, via locally valid sets.
    MaxOriented,
    /// Every subset of `Ad(X) ∪ Ad(Ad(X))`.
    Superset,
}

#[derive(Debug, Clone, Copy)]
pub struct AdjustLimits {
    pub max_edges: usize,
    pub max_superset: usize,
}

impl Default for AdjustLimits {
    fn default() -> Self {
        AdjustLimits { max_edges: crate::equivalence::DEFAULT_MAX_EDGES, max_superset: DEFAULT_MAX_SUPERSET }
    }
}

fn check_node(g: &ChainGraph, x: usize) -> Result<()> {
    if x < g.n() {
        Ok(())
    } else {
        Err(Error::UnknownNode(format!("#{x}")))
    }
}

/// `Ne(X) ∪ Pa(X ∪ Ne(X))` without `X`.
pub fn adjusting_set(g: &ChainGraph, x: usize) -> Result<NodeSet> {
    check_node(g, x)?;
    let ne = g.neighbors(x);
    Ok((ne | g.parents_of(ne.with(x))).without(x))
}

/// Undirected essential-graph neighbours of `X`, split by strong label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StNstPartition {
    pub st: NodeSet,
    pub nst: NodeSet,
}

pub fn st_nst(l: &StrongLabeling, x: usize) -> Result<StNstPartition> {
    check_node(&l.graph, x)?;
    let (st, nst): (Vec<usize>, Vec<usize>) = l.graph.neighbors(x).iter().partition(|&a| l.is_strong_undirected(a, x));
    let part = StNstPartition { st: st.into_iter().collect(), nst: nst.into_iter().collect() };
    if !part.st.is_empty() && !part.nst.is_empty() {
        return Err(Error::CorollaryViolation(format!(
            "{} has strong neighbours {:?} and non-strong neighbours {:?}",
            l.graph.name(x),
            l.graph.set_names(part.st),
            l.graph.set_names(part.nst)
        )));
    }
    Ok(part)
}

/// Whether orienting `S -> X` and `X -> Nst(X) \ S` in the essential graph
/// creates no triplex at `X` that the essential graph lacks.
pub fn locally_valid(l: &StrongLabeling, x: usize, s: NodeSet) -> Result<bool> {
    let part = st_nst(l, x)?;
    if !s.is_subset(part.nst) {
        return Err(Error::SNotInNst(l.graph.name(x).to_string()));
    }
    Ok(locally_valid_in(l, x, s, part.nst))
}

fn locally_valid_in(l: &StrongLabeling, x: usize, s: NodeSet, nst: NodeSet) -> bool {
    let eg = &l.graph;
    let mut g = eg.clone();
    for a in nst {
        if s.contains(a) {
            g.put(a, x, Some(EdgeKind::Directed));
        } else {
            g.put(x, a, Some(EdgeKind::Directed));
        }
    }
    let existing = triplexes(eg);
    let adj = g.adjacent(x);
    for a in adj {
        for c in adj.iter().filter(|&c| c > a) {
            if is_triplex(&g, a, x, c) && !existing.contains(&crate::equivalence::Triplex::new(a, x, c)) {
                return false;
            }
        }
    }
    true
}

pub fn enumerate_adjusting_sets(l: &StrongLabeling, x: usize, mode: AdjustMode) -> Result<Vec<AdjustingSet>> {
    enumerate_adjusting_sets_with(l, x, mode, AdjustLimits::default())
}

/// Distinct adjusting sets for `X`, sorted by set.
pub fn enumerate_adjusting_sets_with(
    l: &StrongLabeling,
    x: usize,
    mode: AdjustMode,
    limits: AdjustLimits,
) -> Result<Vec<AdjustingSet>> {
    let eg = &l.graph;
    check_node(eg, x)?;
    let mut found: BTreeMap<NodeSet, Provenance> = BTreeMap::new();
    match mode {
        AdjustMode::ClassEnum => {
            for member in enumerate_class(eg, limits.max_edges)?.members {
                found.entry(adjusting_set(&member, x)?).or_insert(Provenance::ClassMember);
            }
        }
        AdjustMode::MaxOriented => {
            let StNstPartition { st, nst } = st_nst(l, x)?;
            let base = st | eg.parents_of(st.with(x));
            for s in nst.subsets() {
                if locally_valid_in(l, x, s, nst) {
                    found.entry((base | s).without(x)).or_insert(Provenance::MaxOriented(s));
                }
            }
        }
        AdjustMode::Superset => {
            let ad = eg.adjacent(x);
            let pool = (ad | eg.adjacent_of(ad)).without(x);
            if pool.len() > limits.max_superset {
                return Err(Error::TooLarge { what: "adjustment pool", size: pool.len(), cap: limits.max_superset });
            }
            for z in pool.subsets() {
                found.insert(z, Provenance::Superset);
            }
        }
    }
    Ok(found.into_iter().map(|(set, provenance)| AdjustingSet { target: x, set, provenance }).collect())
}
