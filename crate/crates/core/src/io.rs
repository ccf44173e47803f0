//! Text, DOT and JSON formats.
//!
//! The line format has one statement per line:
//!
//! ```text
//! # comment
//! node E
//! edge A -> B
//! edge C -- B
//! ```
//!
//! Edges declare their endpoints implicitly. [`serialize_graph`] writes the
//! canonical form, which [`parse_graph`] reads back unchanged.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::equivalence::StrongEdgeSet;
use crate::error::{Error, Result};
use crate::essential::{EndMark, MarkedGraph};
use crate::graph::{ChainGraph, EdgeKind, GraphBuilder};
use crate::strong::StrongLabeling;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_graph(text: &str) -> Result<ChainGraph> {
    let mut b = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["node", name] => b.add_node(name),
            ["edge", a, "->", c] => b.add_edge(a, c, EdgeKind::Directed),
            ["edge", a, "--", c] => b.add_edge(a, c, EdgeKind::Undirected),
            ["edge", _, op, _] => return Err(parse_error(line, format!("unknown edge operator {op:?}"))),
            [kw, ..] if *kw == "node" || *kw == "edge" => {
                return Err(parse_error(line, format!("malformed {kw} statement")))
            }
            [kw, ..] => return Err(parse_error(line, format!("unknown statement {kw:?}"))),
            [] => unreachable!(),
        }
    }
    b.build()
}

/// Whitespace-separated `A->B`, `A--B` and bare node tokens.
pub fn parse_compact(text: &str) -> Result<ChainGraph> {
    let mut b = GraphBuilder::new();
    for (i, tok) in text.split_whitespace().enumerate() {
        if let Some((a, c)) = tok.split_once("->") {
            b.add_edge(a, c, EdgeKind::Directed);
        } else if let Some((a, c)) = tok.split_once("--") {
            b.add_edge(a, c, EdgeKind::Undirected);
        } else if tok.contains('-') {
            return Err(parse_error(1, format!("token {} ({tok:?}) is not an edge", i + 1)));
        } else {
            b.add_node(tok);
        }
    }
    b.build()
}

/// Canonical text form: every node, then every edge in sorted order.
pub fn serialize_graph(g: &ChainGraph) -> String {
    let mut out = String::new();
    for name in g.names().iter() {
        writeln!(out, "node {name}").unwrap();
    }
    for e in g.edges() {
        let op = match e.kind {
            EdgeKind::Directed => "->",
            EdgeKind::Undirected => "--",
        };
        writeln!(out, "edge {} {op} {}", g.name(e.a), g.name(e.b)).unwrap();
    }
    out
}

const STRONG_STYLE: &str = "style=bold, color=red";

/// Graphviz document; edges in `strong` get a bold red style.
pub fn to_dot(g: &ChainGraph, strong: Option<&StrongEdgeSet>) -> String {
    let mut out = String::from("digraph G {\n");
    for name in g.names().iter() {
        writeln!(out, "  \"{name}\";").unwrap();
    }
    for e in g.edges() {
        let (a, b) = (g.name(e.a), g.name(e.b));
        let mut attrs = Vec::new();
        let is_strong = match e.kind {
            EdgeKind::Directed => strong.is_some_and(|s| s.directed.contains(&(e.a, e.b))),
            EdgeKind::Undirected => {
                attrs.push("dir=none");
                strong.is_some_and(|s| s.undirected.contains(&e.pair()))
            }
        };
        if is_strong {
            attrs.push(STRONG_STYLE);
        }
        if attrs.is_empty() {
            writeln!(out, "  \"{a}\" -> \"{b}\";").unwrap();
        } else {
            writeln!(out, "  \"{a}\" -> \"{b}\" [{}];", attrs.join(", ")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn labeling_to_dot(l: &StrongLabeling) -> String {
    to_dot(&l.graph, Some(&l.strong))
}

fn edge_json(g: &ChainGraph, a: usize, b: usize, kind: EdgeKind) -> Value {
    json!({
        "from": g.name(a),
        "to": g.name(b),
        "kind": match kind { EdgeKind::Directed => "directed", EdgeKind::Undirected => "undirected" },
    })
}

pub fn graph_to_json(g: &ChainGraph) -> Value {
    json!({
        "nodes": g.names().to_vec(),
        "edges": g.edges().iter().map(|e| edge_json(g, e.a, e.b, e.kind)).collect::<Vec<_>>(),
    })
}

/// Nodes, edges with their `strong` flag, and the strong edges in text form.
pub fn labeling_to_json(l: &StrongLabeling) -> Value {
    let g = &l.graph;
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| {
            let mut v = edge_json(g, e.a, e.b, e.kind);
            let strong = match e.kind {
                EdgeKind::Directed => l.is_strong_directed(e.a, e.b),
                EdgeKind::Undirected => l.is_strong_undirected(e.a, e.b),
            };
            v["strong"] = json!(strong);
            v
        })
        .collect();
    json!({
        "nodes": g.names().to_vec(),
        "edges": edges,
        "strong": l.strong.describe(g.names()),
    })
}

/// Block state: one entry per edge with the mark at each end.
pub fn marks_to_json(m: &MarkedGraph) -> Value {
    let names = m.names();
    let mark = |at: usize, other: usize| match m.mark(at, other) {
        EndMark::Blocked => "blocked",
        EndMark::Plain => "plain",
    };
    let edges: Vec<Value> = m
        .edges()
        .into_iter()
        .map(|(u, v)| {
            json!({
                "u": names[u],
                "v": names[v],
                "mark_u": mark(u, v),
                "mark_v": mark(v, u),
            })
        })
        .collect();
    json!({ "nodes": names.to_vec(), "edges": edges })
}
