use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{fire, Configuration, GameSpec};
use crate::error::{Error, Result};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub vertex: usize,
    pub to: usize,
}

/// All configurations reachable from the start(s) by legal fires.
///
/// The starts come first (node 0 is the game's start); nodes and edges are in
/// breadth-first order with vertices tried in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigGraph {
    pub nodes: Vec<Configuration>,
    pub edges: Vec<GraphEdge>,
    index: HashMap<Configuration, usize>,
}

pub fn reachable_graph(g: &GameSpec, cap: usize) -> Result<ConfigGraph> {
    reachable_graph_from(g, &[g.start()], cap)
}

/// The union of the games started at each of `starts`. With the standard
/// basis vectors of a classical diagram this is the whole root poset.
pub fn reachable_graph_from(g: &GameSpec, starts: &[Configuration], cap: usize) -> Result<ConfigGraph> {
    let mut nodes: Vec<Configuration> = Vec::new();
    let mut index = HashMap::new();
    for c in starts {
        if c.len() != g.rank() {
            return Err(Error::InvalidSpec(format!("start {c} has the wrong length")));
        }
        if !index.contains_key(c) {
            index.insert(c.clone(), nodes.len());
            nodes.push(c.clone());
        }
    }
    let mut edges = Vec::new();
    let mut head = 0;
    while head < nodes.len() {
        let current = nodes[head].clone();
        for v in g.sad_vertices(&current) {
            let next = fire(&current, g, v)?;
            let to = match index.get(&next) {
                Some(&i) => i,
                None => {
                    if nodes.len() >= cap {
                        return Err(Error::GraphTooLarge { cap });
                    }
                    let i = nodes.len();
                    index.insert(next.clone(), i);
                    nodes.push(next);
                    i
                }
            };
            edges.push(GraphEdge { from: head, vertex: v, to });
        }
        head += 1;
    }
    Ok(ConfigGraph { nodes, edges, index })
}

impl ConfigGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_of(&self, c: &Configuration) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn sinks(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.nodes.len()];
        for e in &self.edges {
            has_out[e.from] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_out[i]).collect()
    }

    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.from == node)
    }

    pub fn in_edges_by_node(&self) -> Vec<Vec<GraphEdge>> {
        let mut ins = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            ins[e.to].push(*e);
        }
        ins
    }

    /// Nodes ordered so that every edge points forward. Every fire strictly
    /// increases the chip total, so sorting by total suffices.
    pub fn topological_order(&self) -> Vec<usize> {
        let totals: Vec<_> = self.nodes.iter().map(Configuration::total).collect();
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|&a, &b| totals[a].cmp(&totals[b]).then(a.cmp(&b)));
        order
    }

    /// Nodes without incoming edges.
    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.nodes.len()];
        for e in &self.edges {
            has_in[e.to] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_in[i]).collect()
    }

    /// Number of distinct move sequences from a source to each node.
    pub fn path_counts(&self) -> Vec<u128> {
        let ins = self.in_edges_by_node();
        let mut counts = vec![0u128; self.nodes.len()];
        for node in self.topological_order() {
            counts[node] = if ins[node].is_empty() {
                1
            } else {
                ins[node].iter().map(|e| counts[e.from]).sum()
            };
        }
        counts
    }

    /// Every move sequence from a source to `node`, sorted. Exponential in general.
    pub fn paths_to(&self, node: usize) -> Vec<Vec<usize>> {
        let ins = self.in_edges_by_node();
        let mut memo: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
        fn go(
            node: usize,
            ins: &[Vec<GraphEdge>],
            memo: &mut HashMap<usize, Vec<Vec<usize>>>,
        ) -> Vec<Vec<usize>> {
            if ins[node].is_empty() {
                return vec![Vec::new()];
            }
            if let Some(p) = memo.get(&node) {
                return p.clone();
            }
            let mut out = Vec::new();
            for e in &ins[node] {
                for mut prefix in go(e.from, ins, memo) {
                    prefix.push(e.vertex);
                    out.push(prefix);
                }
            }
            memo.insert(node, out.clone());
            out
        }
        let mut paths = go(node, &ins, &mut memo);
        paths.sort();
        paths
    }

    /// DOT with nodes labelled by chip vectors and edges by the fired vertex (1-based).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph configurations {\n  rankdir=TB;\n");
        let sinks = self.sinks();
        for (i, c) in self.nodes.iter().enumerate() {
            let shape = if sinks.contains(&i) { "doubleoctagon" } else { "box" };
            let _ = writeln!(out, "  n{i} [label=\"{c}\", shape={shape}];");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.vertex + 1);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nodes": self.nodes,
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "from": e.from,
                "to": e.to,
                "vertex": e.vertex + 1,
            })).collect::<Vec<_>>(),
            "starts": self.sources(),
            "sinks": self.sinks(),
        })
    }
}
