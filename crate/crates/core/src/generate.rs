//! Graph corpora for tests and benchmarks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{ChainGraph, Edge};

/// `A`, `B`, ... for up to 26 nodes, `V0`, `V1`, ... beyond.
pub fn default_names(n: usize) -> Arc<[String]> {
    if n <= 26 {
        (0..n).map(|i| char::from(b'A' + i as u8).to_string()).collect()
    } else {
        let mut names: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
        names.sort();
        names.into()
    }
}

/// Random chain graph: nodes are shuffled into ordered blocks; each pair is
/// joined with probability `p`, undirected inside a block and directed from
/// the earlier block to the later one otherwise.
pub fn random_chain_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> ChainGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut block = vec![0usize; n];
    let mut current = 0;
    for (k, &v) in order.iter().enumerate() {
        if k > 0 && rng.random_bool(0.5) {
            current += 1;
        }
        block[v] = current;
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !rng.random_bool(p) {
                continue;
            }
            edges.push(match block[u].cmp(&block[v]) {
                std::cmp::Ordering::Equal => Edge::undirected(u, v),
                std::cmp::Ordering::Less => Edge::directed(u, v),
                std::cmp::Ordering::Greater => Edge::directed(v, u),
            });
        }
    }
    ChainGraph::from_edges(default_names(n), &edges).expect("block construction yields a chain graph")
}

/// Every chain graph on `n` labelled nodes: each pair is absent, `->`, `<-`
/// or `--`, and assignments with a semidirected cycle are dropped.
pub fn all_chain_graphs(n: usize) -> Vec<ChainGraph> {
    let names = default_names(n);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 4u64.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut edges = Vec::new();
        for &(u, v) in &pairs {
            match c % 4 {
                1 => edges.push(Edge::directed(u, v)),
                2 => edges.push(Edge::directed(v, u)),
                3 => edges.push(Edge::undirected(u, v)),
                _ => {}
            }
            c /= 4;
        }
        if let Ok(g) = ChainGraph::from_edges(names.clone(), &edges) {
            out.push(g);
        }
    }
    out
}
