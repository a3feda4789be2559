//! Dynamic-programming models for each problem class.
//!
//! A model fixes the state space, the transition and immediate cost of each
//! control, the merge operator used to relax the diagram, and the exact key:
//! the state variables two nodes must agree on before they may be merged.
//!
//! Stages are numbered from 0: stage `i` is the choice of the job in
//! sequence position `i`, made at the nodes of layer `i` (the root is in
//! layer 0).

use std::fmt::Debug;
use std::hash::Hash;

use crate::error::Result;

mod et;
mod tardiness;
mod tsp;

pub use et::{EtModel, EtState};
pub use tardiness::{DurationRule, TardinessModel, TardinessState};
pub use tsp::{Last, TspModel, TspState};

pub trait DpModel {
    type State: Clone + Eq + Hash + Debug;
    type Key: Clone + Eq + Hash + Debug;

    fn num_jobs(&self) -> usize;

    fn initial_state(&self) -> Self::State;

    /// Feasible controls, ascending.
    fn controls(&self, state: &Self::State, stage: usize) -> Vec<usize>;

    fn transition(&self, state: &Self::State, job: usize, stage: usize) -> Result<Self::State>;

    fn immediate_cost(&self, state: &Self::State, job: usize, stage: usize) -> Result<i64>;

    /// Relaxes both arguments.
    fn merge(&self, a: &Self::State, b: &Self::State) -> Self::State;

    fn exact_key(&self, state: &Self::State) -> Self::Key;

    /// Coarser key for width-capped builds; nodes in one bucket get merged.
    /// Models whose key has no natural ordering ignore the bucket size.
    fn bucket_key(&self, key: &Self::Key, _bucket: i64) -> Self::Key {
        key.clone()
    }

    /// Renders a state for diagram dumps.
    fn describe_state(&self, state: &Self::State) -> String {
        format!("{state:?}")
    }
}

/// Immediate penalty of the all-different constraint: the contribution of
/// choosing `job` at `stage` to `g(x)`, where `g_j(x)` is the number of
/// occurrences of `j` minus one.
pub fn alldiff_penalty(job: usize, stage: usize, n: usize) -> Vec<i64> {
    let base = if stage == 0 { -1 } else { 0 };
    let mut gamma = vec![base; n];
    gamma[job] += 1;
    gamma
}

/// Wraps a model so that its exact key is the whole state: the keyed builder
/// then merges only identical states, which yields the exact diagram.
#[derive(Debug, Clone, Copy)]
pub struct FullStateKey<'a, M>(pub &'a M);

impl<M: DpModel> DpModel for FullStateKey<'_, M> {
    type State = M::State;
    type Key = M::State;

    fn num_jobs(&self) -> usize {
        self.0.num_jobs()
    }
    fn initial_state(&self) -> Self::State {
        self.0.initial_state()
    }
    fn controls(&self, state: &Self::State, stage: usize) -> Vec<usize> {
        self.0.controls(state, stage)
    }
    fn transition(&self, state: &Self::State, job: usize, stage: usize) -> Result<Self::State> {
        self.0.transition(state, job, stage)
    }
    fn immediate_cost(&self, state: &Self::State, job: usize, stage: usize) -> Result<i64> {
        self.0.immediate_cost(state, job, stage)
    }
    fn merge(&self, a: &Self::State, b: &Self::State) -> Self::State {
        self.0.merge(a, b)
    }
    fn exact_key(&self, state: &Self::State) -> Self::Key {
        state.clone()
    }
    fn describe_state(&self, state: &Self::State) -> String {
        self.0.describe_state(state)
    }
}
