//! Chain graphs and the primitive queries every other module builds on.
//!
//! A [`ChainGraph`] has at most one edge per node pair, directed (`a -> b`) or
//! undirected (`a -- b`), and no semidirected cycle. Nodes are stored by index
//! into a lexicographically sorted name table; index order is name order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Directed,
    Undirected,
}

/// An edge between node indices. Directed edges read `a -> b`; undirected
/// edges are canonical with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn directed(from: usize, to: usize) -> Self {
        Edge { a: from, b: to, kind: EdgeKind::Directed }
    }

    pub fn undirected(u: usize, v: usize) -> Self {
        Edge { a: u.min(v), b: u.max(v), kind: EdgeKind::Undirected }
    }

    /// Unordered endpoint pair `(min, max)`.
    pub fn pair(&self) -> (usize, usize) {
        (self.a.min(self.b), self.a.max(self.b))
    }
}

/// How an edge meets one of its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntryMark {
    /// Arrowhead at the node (`c -> b` seen from `b`).
    Head,
    /// Tail at the node (`b -> c` seen from `b`).
    Tail,
    /// Undirected edge.
    Und,
}

impl EntryMark {
    /// Whether a node met by edges with these two marks is a triplex node:
    /// at least one arrowhead and no tail.
    pub fn is_triplex_pair(self, other: EntryMark) -> bool {
        use EntryMark::*;
        matches!((self, other), (Head, Head) | (Head, Und) | (Und, Head))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Pa,
    Ch,
    Ne,
    Ad,
    /// Strict descendants: endpoints of directed paths with at least one edge.
    De,
}

/// Chain components listed in a topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub components: Vec<NodeSet>,
    /// `component_of[v]` is the position of `v`'s component in `components`.
    pub component_of: Vec<usize>,
}

impl ComponentPartition {
    pub fn component_containing(&self, v: usize) -> NodeSet {
        self.components[self.component_of[v]]
    }

    pub fn is_component(&self, set: NodeSet) -> bool {
        self.components.contains(&set)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainGraph {
    names: Arc<[String]>,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
    neighbors: Vec<NodeSet>,
}

pub(crate) fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::InvalidName(name.to_string()));
    }
    Ok(())
}

/// Collects named nodes and edges, then validates them into a [`ChainGraph`].
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    nodes: Vec<String>,
    edges: Vec<(String, String, EdgeKind)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, name: &str) -> Self {
        self.add_node(name);
        self
    }

    pub fn directed(mut self, from: &str, to: &str) -> Self {
        self.add_edge(from, to, EdgeKind::Directed);
        self
    }

    pub fn undirected(mut self, u: &str, v: &str) -> Self {
        self.add_edge(u, v, EdgeKind::Undirected);
        self
    }

    pub fn add_node(&mut self, name: &str) {
        self.nodes.push(name.to_string());
    }

    /// Edges implicitly declare their endpoints.
    pub fn add_edge(&mut self, a: &str, b: &str, kind: EdgeKind) {
        self.edges.push((a.to_string(), b.to_string(), kind));
    }

    pub fn build(self) -> Result<ChainGraph> {
        let mut names: Vec<String> = self.nodes;
        names.extend(self.edges.iter().flat_map(|(a, b, _)| [a.clone(), b.clone()]));
        for n in &names {
            check_name(n)?;
        }
        names.sort();
        names.dedup();
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|(a, b, kind)| Edge { a: index[a.as_str()], b: index[b.as_str()], kind: *kind })
            .collect();
        let names: Arc<[String]> = names.into();
        ChainGraph::from_edges(names, &edges)
    }
}

impl ChainGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// Graph with the given nodes and no edges.
    pub fn empty(names: Arc<[String]>) -> Result<Self> {
        Self::from_edges(names, &[])
    }

    /// Validates `edges` over a sorted, duplicate-free name table.
    pub fn from_edges(names: Arc<[String]>, edges: &[Edge]) -> Result<Self> {
        let n = names.len();
        if n > MAX_NODES {
            return Err(Error::TooManyNodes(n));
        }
        for w in names.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::DuplicateNode(w[1].clone()));
            }
        }
        let mut g = ChainGraph::bare(names);
        for e in edges {
            if e.a >= n || e.b >= n {
                return Err(Error::UnknownNode(format!("#{}", e.a.max(e.b))));
            }
            if e.a == e.b {
                return Err(Error::SelfLoop(g.names[e.a].clone()));
            }
            if g.is_adjacent(e.a, e.b) {
                let (u, v) = e.pair();
                return Err(Error::DuplicateEdge(g.names[u].clone(), g.names[v].clone()));
            }
            g.put(e.a, e.b, Some(e.kind));
        }
        g.validated()
    }

    pub(crate) fn bare(names: Arc<[String]>) -> Self {
        let n = names.len();
        ChainGraph {
            names,
            parents: vec![NodeSet::EMPTY; n],
            children: vec![NodeSet::EMPTY; n],
            neighbors: vec![NodeSet::EMPTY; n],
        }
    }

    /// Checks the semidirected-cycle condition; structural checks are the
    /// caller's business.
    pub(crate) fn validated(self) -> Result<Self> {
        match self.find_semidirected_cycle() {
            Some(cycle) => Err(Error::SemidirectedCycle(cycle.into_iter().map(|v| self.names[v].clone()).collect())),
            None => Ok(self),
        }
    }

    /// Sets (or clears, with `None`) the edge between `a` and `b`. A directed
    /// kind means `a -> b`. No validity checks.
    pub(crate) fn put(&mut self, a: usize, b: usize, kind: Option<EdgeKind>) {
        for (x, y) in [(a, b), (b, a)] {
            self.parents[x].remove(y);
            self.children[x].remove(y);
            self.neighbors[x].remove(y);
        }
        match kind {
            Some(EdgeKind::Directed) => {
                self.children[a].insert(b);
                self.parents[b].insert(a);
            }
            Some(EdgeKind::Undirected) => {
                self.neighbors[a].insert(b);
                self.neighbors[b].insert(a);
            }
            None => {}
        }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn node(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Resolves a list of names into a node set.
    pub fn node_set<S: AsRef<str>>(&self, names: &[S]) -> Result<NodeSet> {
        names.iter().map(|n| self.node(n.as_ref())).collect()
    }

    pub fn set_names(&self, set: NodeSet) -> Vec<String> {
        set.iter().map(|v| self.names[v].clone()).collect()
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n())
    }

    pub fn parents(&self, v: usize) -> NodeSet {
        self.parents[v]
    }

    pub fn children(&self, v: usize) -> NodeSet {
        self.children[v]
    }

    pub fn neighbors(&self, v: usize) -> NodeSet {
        self.neighbors[v]
    }

    pub fn adjacent(&self, v: usize) -> NodeSet {
        self.parents[v] | self.children[v] | self.neighbors[v]
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacent(u).contains(v)
    }

    pub fn has_directed(&self, from: usize, to: usize) -> bool {
        self.children[from].contains(to)
    }

    pub fn has_undirected(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].contains(v)
    }

    /// The mark the edge `b ~ c` carries at `b`.
    pub fn mark_at(&self, b: usize, c: usize) -> Option<EntryMark> {
        if self.parents[b].contains(c) {
            Some(EntryMark::Head)
        } else if self.children[b].contains(c) {
            Some(EntryMark::Tail)
        } else if self.neighbors[b].contains(c) {
            Some(EntryMark::Und)
        } else {
            None
        }
    }

    /// Edges sorted by endpoint pair.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in self.children[u].iter() {
                out.push(Edge::directed(u, v));
            }
            for v in self.neighbors[u].iter().filter(|&v| v > u) {
                out.push(Edge::undirected(u, v));
            }
        }
        out.sort_by_key(|e| (e.pair(), e.a));
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|v| self.adjacent(v).len()).sum::<usize>() / 2
    }

    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n()).flat_map(|u| self.children[u].iter().map(move |v| (u, v))).collect()
    }

    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n()).flat_map(|u| self.neighbors[u].iter().filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    /// Adjacency lists of the skeleton.
    pub fn skeleton(&self) -> Vec<NodeSet> {
        (0..self.n()).map(|v| self.adjacent(v)).collect()
    }

    pub fn parents_of(&self, x: NodeSet) -> NodeSet {
        x.iter().fold(NodeSet::EMPTY, |acc, v| acc | self.parents[v])
    }

    pub fn children_of(&self, x: NodeSet) -> NodeSet {
        x.iter().fold(NodeSet::EMPTY, |acc, v| acc | self.children[v])
    }

    pub fn neighbors_of(&self, x: NodeSet) -> NodeSet {
        x.iter().fold(NodeSet::EMPTY, |acc, v| acc | self.neighbors[v])
    }

    pub fn adjacent_of(&self, x: NodeSet) -> NodeSet {
        x.iter().fold(NodeSet::EMPTY, |acc, v| acc | self.adjacent(v))
    }

    /// Strict descendants of `x`.
    pub fn descendants_of(&self, x: NodeSet) -> NodeSet {
        let mut seen = NodeSet::EMPTY;
        let mut frontier = self.children_of(x);
        while !frontier.is_empty() {
            seen |= frontier;
            frontier = self.children_of(frontier) - seen;
        }
        seen
    }

    /// Nodes reached from `x` by a path of `->` and `--` edges containing at
    /// least one `->`, followed in its direction.
    pub fn semidirected_descendants_of(&self, x: NodeSet) -> NodeSet {
        let mut start = x;
        let mut frontier = x;
        while !frontier.is_empty() {
            frontier = self.neighbors_of(frontier) - start;
            start |= frontier;
        }
        let mut seen = NodeSet::EMPTY;
        let mut frontier = self.children_of(start);
        while !frontier.is_empty() {
            seen |= frontier;
            frontier = (self.children_of(frontier) | self.neighbors_of(frontier)) - seen;
        }
        seen
    }

    pub fn family(&self, x: NodeSet, relation: Relation) -> Result<NodeSet> {
        if !x.is_subset(self.nodes()) {
            return Err(Error::UnknownNode(format!("#{}", (x - self.nodes()).first().unwrap())));
        }
        Ok(match relation {
            Relation::Pa => self.parents_of(x),
            Relation::Ch => self.children_of(x),
            Relation::Ne => self.neighbors_of(x),
            Relation::Ad => self.adjacent_of(x),
            Relation::De => self.descendants_of(x),
        })
    }

    /// Whether every pair in `s` is joined by an undirected edge.
    pub fn is_complete(&self, s: NodeSet) -> bool {
        s.iter().all(|v| (s.without(v)).is_subset(self.neighbors[v]))
    }

    pub fn is_simplicial(&self, v: usize) -> bool {
        self.is_complete(self.neighbors[v])
    }

    pub fn chain_components(&self) -> ComponentPartition {
        let n = self.n();
        let mut raw: Vec<NodeSet> = Vec::new();
        let mut raw_of = vec![usize::MAX; n];
        for v in 0..n {
            if raw_of[v] != usize::MAX {
                continue;
            }
            let mut comp = NodeSet::singleton(v);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let next = self.neighbors_of(frontier) - comp;
                comp |= next;
                frontier = next;
            }
            for u in comp {
                raw_of[u] = raw.len();
            }
            raw.push(comp);
        }

        // Kahn's algorithm over components, least member first.
        let k = raw.len();
        let mut indegree = vec![0usize; k];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (c, comp) in raw.iter().enumerate() {
            let mut targets: Vec<usize> = self.children_of(*comp).iter().map(|v| raw_of[v]).collect();
            targets.sort_unstable();
            targets.dedup();
            for t in targets {
                succ[c].push(t);
                indegree[t] += 1;
            }
        }
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            (0..k).filter(|&c| indegree[c] == 0).map(|c| Reverse((raw[c].first().unwrap(), c))).collect();
        let mut components = Vec::with_capacity(k);
        let mut component_of = vec![0; n];
        while let Some(Reverse((_, c))) = heap.pop() {
            for v in raw[c] {
                component_of[v] = components.len();
            }
            components.push(raw[c]);
            for &t in &succ[c] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    heap.push(Reverse((raw[t].first().unwrap(), t)));
                }
            }
        }
        debug_assert_eq!(components.len(), k, "components must be acyclic in a chain graph");
        ComponentPartition { components, component_of }
    }

    /// A semidirected cycle `v0 -> v1 ~ .. ~ v0` if one exists, listed with
    /// the start node repeated at the end.
    pub fn find_semidirected_cycle(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let step = |v: usize| self.children[v] | self.neighbors[v];
        let scc = strongly_connected(n, step);
        for u in 0..n {
            for v in self.children[u] {
                if scc[u] == scc[v] {
                    // walk back from v to u inside the component
                    let mut prev = vec![usize::MAX; n];
                    let mut queue = VecDeque::from([v]);
                    prev[v] = v;
                    while let Some(w) = queue.pop_front() {
                        if w == u {
                            break;
                        }
                        for x in step(w) {
                            if scc[x] == scc[u] && prev[x] == usize::MAX {
                                prev[x] = w;
                                queue.push_back(x);
                            }
                        }
                    }
                    let mut back = vec![u];
                    let mut w = u;
                    while w != v {
                        w = prev[w];
                        back.push(w);
                    }
                    back.reverse();
                    let mut cycle = vec![u];
                    cycle.extend(back);
                    return Some(cycle);
                }
            }
        }
        None
    }

    /// The undirected part of the graph (directed edges dropped).
    pub fn undirected_part(&self) -> UndirectedGraph {
        UndirectedGraph { names: self.names.clone(), adj: self.neighbors.clone() }
    }
}

/// Tarjan's strongly connected components over a successor function.
fn strongly_connected(n: usize, succ: impl Fn(usize) -> NodeSet) -> Vec<usize> {
    struct State {
        index: Vec<usize>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next_index: usize,
        next_comp: usize,
    }
    fn visit(v: usize, st: &mut State, succ: &dyn Fn(usize) -> NodeSet) {
        st.index[v] = st.next_index;
        st.low[v] = st.next_index;
        st.next_index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for w in succ(v) {
            if st.index[w] == usize::MAX {
                visit(w, st, succ);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.index[w]);
            }
        }
        if st.low[v] == st.index[v] {
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                st.comp[w] = st.next_comp;
                if w == v {
                    break;
                }
            }
            st.next_comp += 1;
        }
    }
    let mut st = State {
        index: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comp: vec![0; n],
        next_index: 0,
        next_comp: 0,
    };
    for v in 0..n {
        if st.index[v] == usize::MAX {
            visit(v, &mut st, &succ);
        }
    }
    st.comp
}

impl fmt::Debug for ChainGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainGraph({self})")
    }
}

impl fmt::Display for ChainGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .edges()
            .iter()
            .map(|e| match e.kind {
                EdgeKind::Directed => format!("{}->{}", self.names[e.a], self.names[e.b]),
                EdgeKind::Undirected => format!("{}--{}", self.names[e.a], self.names[e.b]),
            })
            .collect();
        for v in 0..self.n() {
            if self.adjacent(v).is_empty() {
                parts.push(self.names[v].clone());
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// A purely undirected graph over a chain graph's name table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    names: Arc<[String]>,
    adj: Vec<NodeSet>,
}

impl UndirectedGraph {
    /// Fails with [`Error::NotUndirected`] if `g` has directed edges.
    pub fn from_chain_graph(g: &ChainGraph) -> Result<Self> {
        if (0..g.n()).any(|v| !g.children(v).is_empty()) {
            return Err(Error::NotUndirected);
        }
        Ok(g.undirected_part())
    }

    pub fn from_adjacency(names: Arc<[String]>, adj: Vec<NodeSet>) -> Self {
        debug_assert_eq!(names.len(), adj.len());
        UndirectedGraph { names, adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    pub fn neighbors(&self, v: usize) -> NodeSet {
        self.adj[v]
    }

    /// Whether `s` is a clique.
    pub fn is_complete(&self, s: NodeSet) -> bool {
        s.iter().all(|v| s.without(v).is_subset(self.adj[v]))
    }

    /// Whether the neighbours of `v` inside `within` form a clique.
    pub fn is_simplicial_in(&self, v: usize, within: NodeSet) -> bool {
        self.is_complete(self.adj[v] & within)
    }

    pub fn as_chain_graph(&self) -> ChainGraph {
        let mut g = ChainGraph::bare(self.names.clone());
        for u in 0..self.n() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                g.put(u, v, Some(EdgeKind::Undirected));
            }
        }
        g
    }
}

/// Chordality test by repeated simplicial-node elimination.
pub fn is_chordal(u: &UndirectedGraph) -> bool {
    let mut remaining = NodeSet::full(u.n());
    while let Some(v) = remaining.iter().find(|&v| u.is_simplicial_in(v, remaining)) {
        remaining.remove(v);
    }
    remaining.is_empty()
}

/// A perfect elimination ordering whose last elements are `tail`, in order.
///
/// Every node at position `i` is simplicial in the subgraph induced by the
/// nodes at positions `i..`. Nodes outside the tail are eliminated least-first.
pub fn perfect_elimination_ending_with(u: &UndirectedGraph, tail: &[usize]) -> Result<Vec<usize>> {
    let tail_set: NodeSet = tail.iter().copied().collect();
    if tail_set.len() != tail.len() || !tail_set.is_subset(NodeSet::full(u.n())) {
        return Err(Error::InvalidQuery("elimination tail has repeated or unknown nodes".into()));
    }
    if !u.is_complete(tail_set) {
        return Err(Error::TailNotComplete);
    }
    let mut remaining = NodeSet::full(u.n());
    let mut order = Vec::with_capacity(u.n());
    while remaining != tail_set {
        let v = (remaining - tail_set).iter().find(|&v| u.is_simplicial_in(v, remaining)).ok_or(Error::NotChordal)?;
        order.push(v);
        remaining.remove(v);
    }
    order.extend_from_slice(tail);
    Ok(order)
}

/// Orients every edge from the later to the earlier node of an elimination
/// ordering, so each node's parents are its not-yet-eliminated neighbours.
pub fn orient_by_elimination(u: &UndirectedGraph, order: &[usize]) -> ChainGraph {
    let mut pos = vec![0; u.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut g = ChainGraph::bare(u.names.clone());
    for a in 0..u.n() {
        for b in u.adj[a].iter().filter(|&b| b > a) {
            if pos[a] > pos[b] {
                g.put(a, b, Some(EdgeKind::Directed));
            } else {
                g.put(b, a, Some(EdgeKind::Directed));
            }
        }
    }
    g
}

/// Maximum cardinality search starting at `start`; ties go to the least node.
/// Returns the marking order.
pub fn mcs_order(u: &UndirectedGraph, start: usize) -> Vec<usize> {
    let n = u.n();
    let mut marked = NodeSet::EMPTY;
    let mut order = Vec::with_capacity(n);
    let mut weight = vec![0usize; n];
    let mut next = Some(start);
    while let Some(v) = next {
        marked.insert(v);
        order.push(v);
        for w in u.adj[v] - marked {
            weight[w] += 1;
        }
        next = (NodeSet::full(n) - marked).iter().max_by_key(|&w| (weight[w], Reverse(w)));
    }
    order
}

/// Orients a chordal graph acyclically without triplexes: MCS from the least
/// node, every edge pointing away from the node marked earlier.
pub fn orient_by_mcs(u: &UndirectedGraph) -> Result<ChainGraph> {
    orient_by_mcs_from(u, 0)
}

/// As [`orient_by_mcs`] but starting the search at `start`.
pub fn orient_by_mcs_from(u: &UndirectedGraph, start: usize) -> Result<ChainGraph> {
    if !is_chordal(u) {
        return Err(Error::NotChordal);
    }
    if u.n() == 0 {
        return Ok(ChainGraph::bare(u.names.clone()));
    }
    let order = mcs_order(u, start);
    let mut pos = vec![0; u.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut g = ChainGraph::bare(u.names.clone());
    for a in 0..u.n() {
        for b in u.adj[a].iter().filter(|&b| b > a) {
            if pos[a] < pos[b] {
                g.put(a, b, Some(EdgeKind::Directed));
            } else {
                g.put(b, a, Some(EdgeKind::Directed));
            }
        }
    }
    Ok(g)
}

/// As [`orient_by_mcs`] with a seeded random first node.
pub fn orient_by_mcs_seeded(u: &UndirectedGraph, seed: u64) -> Result<ChainGraph> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let start = if u.n() == 0 { 0 } else { rng.random_range(0..u.n()) };
    orient_by_mcs_from(u, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_compact;

    fn g(s: &str) -> ChainGraph {
        parse_compact(s).unwrap()
    }

    #[test]
    fn detects_semidirected_cycles() {
        let err = ChainGraph::builder().directed("A", "B").undirected("B", "C").directed("C", "A").build().unwrap_err();
        match err {
            Error::SemidirectedCycle(c) => {
                assert_eq!(c.first(), c.last());
                assert_eq!(c.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(ChainGraph::builder().directed("A", "B").directed("C", "B").build().is_ok());
        let err = parse_compact("A->B B--C C--D D->A").unwrap_err();
        assert!(matches!(err, Error::SemidirectedCycle(_)));
    }

    #[test]
    fn witness_cycle_is_semidirected() {
        let graph = {
            let mut g = ChainGraph::bare(["A", "B", "C", "D"].map(String::from).to_vec().into());
            g.put(0, 1, Some(EdgeKind::Directed));
            g.put(1, 2, Some(EdgeKind::Undirected));
            g.put(2, 3, Some(EdgeKind::Undirected));
            g.put(3, 0, Some(EdgeKind::Directed));
            g
        };
        let cycle = graph.find_semidirected_cycle().unwrap();
        assert_eq!(cycle.first(), cycle.last());
        let mut arrows = 0;
        for w in cycle.windows(2) {
            if graph.has_directed(w[0], w[1]) {
                arrows += 1;
            } else {
                assert!(graph.has_undirected(w[0], w[1]), "step {w:?} goes against an arrow");
            }
        }
        assert!(arrows >= 1);
    }

    #[test]
    fn rejects_structural_errors() {
        assert!(matches!(ChainGraph::builder().directed("A", "A").build(), Err(Error::SelfLoop(_))));
        assert!(matches!(
            ChainGraph::builder().directed("A", "B").directed("B", "A").build(),
            Err(Error::DuplicateEdge(..))
        ));
        assert!(matches!(ChainGraph::builder().node("A-1").build(), Err(Error::InvalidName(_))));
    }

    #[test]
    fn family_queries() {
        let gr = g("A->B C->B");
        let b = gr.node("B").unwrap();
        assert_eq!(gr.set_names(gr.family(NodeSet::singleton(b), Relation::Pa).unwrap()), ["A", "C"]);

        let gr = g("A->B B--C");
        let a = gr.node("A").unwrap();
        assert_eq!(gr.set_names(gr.family(NodeSet::singleton(a), Relation::De).unwrap()), ["B"]);

        let gr = g("A->B C->B C--D");
        let c = gr.node("C").unwrap();
        assert_eq!(gr.set_names(gr.family(NodeSet::singleton(c), Relation::Ad).unwrap()), ["B", "D"]);
        assert!(gr.family(NodeSet::singleton(7), Relation::Pa).is_err());
    }

    #[test]
    fn components_in_topological_order() {
        let gr = g("A->B B--C");
        let p = gr.chain_components();
        let names: Vec<_> = p.components.iter().map(|c| gr.set_names(*c)).collect();
        assert_eq!(names, vec![vec!["A"], vec!["B", "C"]]);

        let gr = g("A--B C");
        let p = gr.chain_components();
        let names: Vec<_> = p.components.iter().map(|c| gr.set_names(*c)).collect();
        assert_eq!(names, vec![vec!["A", "B"], vec!["C"]]);

        let gr = g("A->B C->B C--D");
        let p = gr.chain_components();
        let names: Vec<_> = p.components.iter().map(|c| gr.set_names(*c)).collect();
        assert_eq!(names, vec![vec!["A"], vec!["C", "D"], vec!["B"]]);
        for (u, v) in gr.directed_edges() {
            assert!(p.component_of[u] < p.component_of[v]);
        }
    }

    #[test]
    fn completeness_and_simplicial_nodes() {
        let tri = g("A--B B--C A--C");
        assert!(tri.is_complete(tri.nodes()));
        let path = g("A--B B--C");
        assert!(!path.is_simplicial(path.node("B").unwrap()));
        assert!(path.is_simplicial(path.node("A").unwrap()));
    }

    #[test]
    fn chordality() {
        let square = g("A--B B--C C--D D--A").undirected_part();
        assert!(!is_chordal(&square));
        assert_eq!(orient_by_mcs(&square), Err(Error::NotChordal));
        assert!(is_chordal(&g("A--B B--C A--C").undirected_part()));
    }

    #[test]
    fn elimination_with_fixed_tail() {
        let tri = g("A--B B--C A--C").undirected_part();
        let order = perfect_elimination_ending_with(&tri, &[2]).unwrap();
        assert_eq!(order, vec![0, 1, 2]);
        let edge = g("A--B").undirected_part();
        assert_eq!(perfect_elimination_ending_with(&edge, &[1]).unwrap(), vec![0, 1]);
        let path = g("A--B B--C").undirected_part();
        assert_eq!(perfect_elimination_ending_with(&path, &[0, 2]), Err(Error::TailNotComplete));
    }

    #[test]
    fn mcs_orientations() {
        let edge = g("A--B").undirected_part();
        assert_eq!(orient_by_mcs(&edge).unwrap().to_string(), "A->B");
        let path = g("A--B B--C").undirected_part();
        let o = orient_by_mcs_from(&path, 1).unwrap();
        assert_eq!(o.to_string(), "B->A B->C");
        let tri = g("A--B B--C A--C").undirected_part();
        assert_eq!(orient_by_mcs(&tri).unwrap().to_string(), "A->B A->C B->C");
        assert_eq!(UndirectedGraph::from_chain_graph(&g("A->B")), Err(Error::NotUndirected));
    }
}
