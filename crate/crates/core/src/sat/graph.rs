use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::analysis::NodeSource;
use super::watch::SatEngine;
use super::ImpNode;

/// The part of an implication graph that leads to one conflict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationGraph {
    nodes: BTreeMap<u32, ImpNode>,
    /// Antecedents of the conflict node.
    conflict: Vec<u32>,
}

impl ImplicationGraph {
    pub fn new(nodes: Vec<ImpNode>, conflict: Vec<u32>) -> ImplicationGraph {
        ImplicationGraph {
            nodes: nodes.into_iter().map(|n| (n.var, n)).collect(),
            conflict,
        }
    }

    /// Copies every node reachable from the conflict's antecedents.
    pub fn capture(engine: &SatEngine, whys: &[u32]) -> ImplicationGraph {
        let mut nodes = BTreeMap::new();
        let mut stack = whys.to_vec();
        while let Some(v) = stack.pop() {
            if nodes.contains_key(&v) {
                continue;
            }
            let n = engine.node(v).clone();
            stack.extend(&n.reasons);
            nodes.insert(v, n);
        }
        ImplicationGraph {
            nodes,
            conflict: whys.to_vec(),
        }
    }

    pub fn conflict(&self) -> &[u32] {
        &self.conflict
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes ordered by (level, variable).
    pub fn ordered_nodes(&self) -> Vec<&ImpNode> {
        let mut v: Vec<&ImpNode> = self.nodes.values().collect();
        v.sort_by_key(|n| (n.level, n.var));
        v
    }

    /// Reason-to-consequent edges, then the edges into the conflict node
    /// (as `None`).
    pub fn edges(&self) -> Vec<(u32, Option<u32>)> {
        let mut out = Vec::new();
        for n in self.ordered_nodes() {
            for &r in &n.reasons {
                out.push((r, Some(n.var)));
            }
        }
        for &v in &self.conflict {
            out.push((v, None));
        }
        out
    }
}

impl NodeSource for ImplicationGraph {
    fn node(&self, var: u32) -> &ImpNode {
        &self.nodes[&var]
    }
}

/// Graphviz rendering. Leaves (decisions and unexplained level-0 facts)
/// are drawn circled.
pub fn export_dot(graph: &ImplicationGraph) -> String {
    let mut out = String::from("digraph implication {\n  rankdir=LR;\n");
    for n in graph.ordered_nodes() {
        let shape = if n.reasons.is_empty() { "ellipse" } else { "plaintext" };
        writeln!(
            out,
            "  x{} [label=\"({}-{}, x{}, {})\", shape={}];",
            n.var, n.level.major, n.level.sub, n.var, n.value, shape
        )
        .unwrap();
    }
    out.push_str("  kappa [label=\"κ\", shape=plaintext];\n");
    for (from, to) in graph.edges() {
        match to {
            Some(t) => writeln!(out, "  x{from} -> x{t};").unwrap(),
            None => writeln!(out, "  x{from} -> kappa;").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}
