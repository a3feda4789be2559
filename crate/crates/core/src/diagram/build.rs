use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};

use crate::diagram::{Arc, LayeredDiagram, NodeId};
use crate::error::{Error, Result};
use crate::model::{DpModel, FullStateKey};

pub const DEFAULT_NODE_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Maximum total node count before the build fails.
    pub node_budget: usize,
    /// When set, exact keys are coarsened into buckets of this size before
    /// merging. The diagram stays a relaxation but its arc costs are no
    /// longer exact, so zero-subgradient paths no longer certify optimality.
    pub bucket: Option<i64>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            bucket: None,
        }
    }
}

/// Arc between layer-local node indices.
#[derive(Debug, Clone, Copy)]
struct LocalArc {
    layer: usize,
    tail: usize,
    head: usize,
    label: usize,
    cost: i64,
}

/// Mutable diagram under construction, addressed by (layer, index).
struct Draft<S> {
    n: usize,
    layers: Vec<Vec<S>>,
    arcs: Vec<LocalArc>,
}

impl<S: Clone> Draft<S> {
    fn from_diagram(d: &LayeredDiagram<S>) -> Self {
        let layers = (0..d.num_layers())
            .map(|i| d.layer(i).map(|id| d.states[id].clone()).collect())
            .collect();
        let arcs = d
            .arcs
            .iter()
            .map(|a| {
                let layer = d.layer_of(a.tail as usize);
                LocalArc {
                    layer,
                    tail: a.tail as usize - d.layer_start[layer],
                    head: a.head as usize - d.layer_start[layer + 1],
                    label: a.label as usize,
                    cost: a.cost,
                }
            })
            .collect();
        Draft { n: d.n, layers, arcs }
    }

    fn finish(self, keys_exact: bool) -> LayeredDiagram<S> {
        let mut layer_start = Vec::with_capacity(self.layers.len() + 1);
        let mut states = Vec::new();
        for layer in self.layers {
            layer_start.push(states.len());
            states.extend(layer);
        }
        layer_start.push(states.len());

        let mut arcs: Vec<Arc> = self
            .arcs
            .iter()
            .map(|a| Arc {
                tail: (layer_start[a.layer] + a.tail) as u32,
                head: (layer_start[a.layer + 1] + a.head) as u32,
                label: a.label as u32,
                cost: a.cost,
            })
            .collect();
        arcs.sort_unstable_by_key(|a| (a.tail, a.label));

        let mut out_start = vec![0; states.len() + 1];
        for a in &arcs {
            out_start[a.tail as usize + 1] += 1;
        }
        for i in 0..states.len() {
            out_start[i + 1] += out_start[i];
        }

        LayeredDiagram {
            n: self.n,
            states,
            layer_start,
            arcs,
            out_start,
            keys_exact,
        }
    }
}

/// Builds the diagram layer by layer. Each successor state is folded into
/// the node holding the same (possibly bucketed) exact key the moment it is
/// generated; the last layer collapses into the terminus.
pub fn compile_relaxed<M: DpModel>(model: &M, opts: &BuildOptions) -> Result<LayeredDiagram<M::State>> {
    let n = model.num_jobs();
    if n == 0 {
        return Err(Error::MalformedInstance("no jobs".into()));
    }
    let mut draft = Draft {
        n,
        layers: vec![vec![model.initial_state()]],
        arcs: Vec::new(),
    };
    let mut total = 1;

    for stage in 0..n {
        let last = stage + 1 == n;
        let mut next: Vec<M::State> = Vec::new();
        let mut index: HashMap<M::Key, usize> = HashMap::new();
        let current = &draft.layers[stage];

        for (tail, state) in current.iter().enumerate() {
            for job in model.controls(state, stage) {
                let cost = model.immediate_cost(state, job, stage)?;
                let succ = model.transition(state, job, stage)?;
                let head = if last {
                    match next.first_mut() {
                        Some(t) => *t = model.merge(t, &succ),
                        None => next.push(succ),
                    }
                    0
                } else {
                    let mut key = model.exact_key(&succ);
                    if let Some(b) = opts.bucket {
                        key = model.bucket_key(&key, b);
                    }
                    match index.entry(key) {
                        Entry::Occupied(e) => {
                            let h = *e.get();
                            next[h] = model.merge(&next[h], &succ);
                            h
                        }
                        Entry::Vacant(e) => {
                            e.insert(next.len());
                            next.push(succ);
                            next.len() - 1
                        }
                    }
                };
                draft.arcs.push(LocalArc {
                    layer: stage,
                    tail,
                    head,
                    label: job,
                    cost,
                });
            }
        }
        total += next.len();
        if total > opts.node_budget {
            return Err(Error::BudgetExceeded {
                layer: stage + 1,
                budget: opts.node_budget,
            });
        }
        if next.is_empty() {
            return Err(Error::Structural(format!("layer {} is empty", stage + 1)));
        }
        draft.layers.push(next);
    }
    Ok(draft.finish(opts.bucket.is_none()))
}

/// Builds the exact diagram: nodes are identified only when their states
/// are identical.
pub fn compile_exact<M: DpModel>(model: &M, opts: &BuildOptions) -> Result<LayeredDiagram<M::State>> {
    let opts = BuildOptions { bucket: None, ..*opts };
    compile_relaxed(&FullStateKey(model), &opts)
}

/// Merges two nodes of one layer into a node holding `model.merge` of their
/// states. Arcs into either node are redirected to the merged node and its
/// out-arcs are regenerated from the merged state; successors that do not
/// exist yet are created (identified by identical state) and expanded in
/// turn. Nodes left unreachable are dropped.
pub fn merge_nodes<M: DpModel>(
    diagram: &LayeredDiagram<M::State>,
    a: NodeId,
    b: NodeId,
    model: &M,
) -> Result<LayeredDiagram<M::State>> {
    if a >= diagram.num_nodes() || b >= diagram.num_nodes() {
        return Err(Error::Structural("node id out of range".into()));
    }
    let layer = diagram.layer_of(a);
    if diagram.layer_of(b) != layer {
        return Err(Error::Structural(format!(
            "cannot merge node {a} (layer {layer}) with node {b} (layer {})",
            diagram.layer_of(b)
        )));
    }
    if a == b {
        return Ok(diagram.clone());
    }
    let (keep, drop) = (a.min(b), a.max(b));
    let (keep_i, drop_i) = (
        keep - diagram.layer_start[layer],
        drop - diagram.layer_start[layer],
    );
    let keys_exact = diagram.keys_exact()
        && model.exact_key(diagram.state(a)) == model.exact_key(diagram.state(b));

    let mut draft = Draft::from_diagram(diagram);
    let merged = model.merge(&draft.layers[layer][keep_i], &draft.layers[layer][drop_i]);
    draft.layers[layer][keep_i] = merged;
    draft.layers[layer].remove(drop_i);
    let shift = |i: usize| if i > drop_i { i - 1 } else if i == drop_i { keep_i } else { i };

    draft.arcs.retain(|arc| !(arc.layer == layer && (arc.tail == keep_i || arc.tail == drop_i)));
    for arc in &mut draft.arcs {
        if arc.layer + 1 == layer {
            arc.head = shift(arc.head);
        } else if arc.layer == layer {
            arc.tail = shift(arc.tail);
        }
    }

    let n = draft.n;
    let mut pending = vec![(layer, keep_i)];
    while let Some((l, idx)) = pending.pop() {
        let state = draft.layers[l][idx].clone();
        for job in model.controls(&state, l) {
            let cost = model.immediate_cost(&state, job, l)?;
            let succ = model.transition(&state, job, l)?;
            let next = &mut draft.layers[l + 1];
            let head = if l + 1 == n {
                next[0] = model.merge(&next[0], &succ);
                0
            } else if let Some(h) = next.iter().position(|s| *s == succ) {
                h
            } else {
                next.push(succ);
                pending.push((l + 1, next.len() - 1));
                next.len() - 1
            };
            draft.arcs.push(LocalArc {
                layer: l,
                tail: idx,
                head,
                label: job,
                cost,
            });
        }
    }

    prune_unreachable(&mut draft);
    Ok(draft.finish(keys_exact))
}

fn prune_unreachable<S>(draft: &mut Draft<S>) {
    let depth = draft.layers.len();
    let mut reach: Vec<HashSet<usize>> = vec![HashSet::new(); depth];
    reach[0].insert(0);
    let mut by_layer: Vec<Vec<LocalArc>> = vec![Vec::new(); depth];
    for a in &draft.arcs {
        by_layer[a.layer].push(*a);
    }
    for l in 0..depth - 1 {
        for a in &by_layer[l] {
            if reach[l].contains(&a.tail) {
                reach[l + 1].insert(a.head);
            }
        }
    }
    let mut remap: Vec<Vec<Option<usize>>> = Vec::with_capacity(depth);
    for (l, nodes) in draft.layers.iter_mut().enumerate() {
        let mut map = Vec::with_capacity(nodes.len());
        let mut kept = 0;
        for i in 0..nodes.len() {
            if reach[l].contains(&i) {
                map.push(Some(kept));
                kept += 1;
            } else {
                map.push(None);
            }
        }
        let mut i = 0;
        nodes.retain(|_| {
            let keep = map[i].is_some();
            i += 1;
            keep
        });
        remap.push(map);
    }
    draft.arcs.retain_mut(|a| match (remap[a.layer][a.tail], remap[a.layer + 1][a.head]) {
        (Some(t), Some(h)) => {
            a.tail = t;
            a.head = h;
            true
        }
        _ => false,
    });
}
