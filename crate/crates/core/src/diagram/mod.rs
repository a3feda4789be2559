//! Layered weighted decision diagrams.
//!
//! Layer `i` holds the nodes reached after `i` choices, so a diagram over `n`
//! jobs has `n + 1` layers: the root alone in layer 0 and the terminus alone
//! in layer `n`. Node ids are assigned layer by layer, so ids increase along
//! every arc and reverse id order is a topological order.

use std::io::{self, Write};
use std::ops::Range;

mod build;
mod path;

pub use build::{compile_exact, compile_relaxed, merge_nodes, BuildOptions, DEFAULT_NODE_BUDGET};
pub use path::{shortest_path, PathSolver, ShortestPath};

use crate::model::DpModel;

pub type NodeId = usize;

/// An arc with the cost it carries before any Lagrangian terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: u32,
    pub head: u32,
    pub label: u32,
    pub cost: i64,
}

#[derive(Debug, Clone)]
pub struct LayeredDiagram<S> {
    n: usize,
    states: Vec<S>,
    layer_start: Vec<usize>,
    arcs: Vec<Arc>,
    out_start: Vec<usize>,
    keys_exact: bool,
}

impl<S> LayeredDiagram<S> {
    pub fn num_jobs(&self) -> usize {
        self.n
    }

    pub fn num_layers(&self) -> usize {
        self.layer_start.len() - 1
    }

    pub fn num_nodes(&self) -> usize {
        self.states.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn terminus(&self) -> NodeId {
        self.states.len() - 1
    }

    pub fn layer(&self, i: usize) -> Range<NodeId> {
        self.layer_start[i]..self.layer_start[i + 1]
    }

    pub fn layer_of(&self, node: NodeId) -> usize {
        self.layer_start.partition_point(|&s| s <= node) - 1
    }

    pub fn width(&self, i: usize) -> usize {
        self.layer(i).len()
    }

    /// Largest node count over all layers.
    pub fn max_width(&self) -> usize {
        (0..self.num_layers()).map(|i| self.width(i)).max().unwrap_or(0)
    }

    pub fn state(&self, node: NodeId) -> &S {
        &self.states[node]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Arcs leaving `node`, ordered by label.
    pub fn out_arcs(&self, node: NodeId) -> &[Arc] {
        &self.arcs[self.out_start[node]..self.out_start[node + 1]]
    }

    /// True when every merge happened between nodes with equal exact keys,
    /// so that arc costs along any path equal the true objective of its
    /// label sequence.
    pub fn keys_exact(&self) -> bool {
        self.keys_exact
    }

    /// Base length of the path that follows `labels` from the root, if the
    /// diagram has one. Labels determine the path since the arcs leaving a
    /// node carry distinct labels.
    pub fn follow(&self, labels: &[usize]) -> Option<i64> {
        let mut node = self.root();
        let mut length = 0;
        for &x in labels {
            let arc = self.out_arcs(node).iter().find(|a| a.label as usize == x)?;
            length += arc.cost;
            node = arc.head as usize;
        }
        (node == self.terminus()).then_some(length)
    }

    /// Writes the diagram in the line-oriented debug format: a `# nodes`
    /// section with `layer id key state` lines, then a `# arcs` section with
    /// `tail head label cost` lines.
    pub fn dump<M, W>(&self, model: &M, mut out: W) -> io::Result<()>
    where
        M: DpModel<State = S>,
        W: Write,
    {
        writeln!(out, "# nodes: layer id key state")?;
        for layer in 0..self.num_layers() {
            for id in self.layer(layer) {
                let key = format!("{:?}", model.exact_key(&self.states[id])).replace(' ', "");
                writeln!(out, "{layer} {id} {key} {}", model.describe_state(&self.states[id]))?;
            }
        }
        writeln!(out, "# arcs: tail head label cost")?;
        for a in &self.arcs {
            writeln!(out, "{} {} {} {}", a.tail, a.head, a.label, a.cost)?;
        }
        Ok(())
    }
}
