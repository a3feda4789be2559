use crate::diagram::{Arc, LayeredDiagram, NodeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPath {
    pub length: f64,
    pub nodes: Vec<NodeId>,
    pub labels: Vec<usize>,
}

/// Reusable buffers for repeated shortest-path sweeps over one diagram.
///
/// The sweep runs backward from the terminus, computing the cost-to-go of
/// every node. At each node the chosen arc minimizes cost plus cost-to-go;
/// ties go to the smallest head id, then the smallest label.
#[derive(Debug, Clone, Default)]
pub struct PathSolver {
    to_go: Vec<f64>,
    choice: Vec<u32>,
}

impl PathSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the shortest root-to-terminus length under `cost`.
    pub fn solve<S, F>(&mut self, d: &LayeredDiagram<S>, cost: F) -> Result<f64>
    where
        F: Fn(&Arc) -> f64,
    {
        let nodes = d.num_nodes();
        self.to_go.clear();
        self.to_go.resize(nodes, f64::INFINITY);
        self.choice.clear();
        self.choice.resize(nodes, u32::MAX);
        self.to_go[d.terminus()] = 0.0;

        for u in (0..d.terminus()).rev() {
            let arcs = d.out_arcs(u);
            let mut best = f64::INFINITY;
            let mut best_k = u32::MAX;
            let mut best_head = u32::MAX;
            for (k, a) in arcs.iter().enumerate() {
                let v = cost(a) + self.to_go[a.head as usize];
                // Arcs are sorted by label, so on a tie with the same head
                // the earlier arc already has the smaller label.
                if v < best || (v == best && a.head < best_head) {
                    best = v;
                    best_k = k as u32;
                    best_head = a.head;
                }
            }
            self.to_go[u] = best;
            self.choice[u] = best_k;
        }

        let length = self.to_go[d.root()];
        if !length.is_finite() {
            return Err(Error::Structural("terminus is not reachable from the root".into()));
        }
        Ok(length)
    }

    /// Label sequence of the path chosen by the last [`solve`](Self::solve).
    pub fn labels<S>(&self, d: &LayeredDiagram<S>, out: &mut Vec<usize>) {
        out.clear();
        let mut u = d.root();
        while u != d.terminus() {
            let a = &d.out_arcs(u)[self.choice[u] as usize];
            out.push(a.label as usize);
            u = a.head as usize;
        }
    }

    pub fn path<S>(&self, d: &LayeredDiagram<S>) -> (Vec<NodeId>, Vec<usize>) {
        let mut nodes = vec![d.root()];
        let mut labels = Vec::new();
        let mut u = d.root();
        while u != d.terminus() {
            let a = &d.out_arcs(u)[self.choice[u] as usize];
            labels.push(a.label as usize);
            u = a.head as usize;
            nodes.push(u);
        }
        (nodes, labels)
    }

    /// Cost-to-go of each node from the last sweep.
    pub fn cost_to_go(&self) -> &[f64] {
        &self.to_go
    }
}

/// One-shot shortest path under an arbitrary arc cost.
pub fn shortest_path<S, F>(d: &LayeredDiagram<S>, cost: F) -> Result<ShortestPath>
where
    F: Fn(&Arc) -> f64,
{
    let mut solver = PathSolver::new();
    let length = solver.solve(d, cost)?;
    let (nodes, labels) = solver.path(d);
    Ok(ShortestPath {
        length,
        nodes,
        labels,
    })
}
