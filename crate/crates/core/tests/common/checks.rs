//! Property checks shared by the integration tests and the acceptance run.
//! Each returns a description of the first violation it finds.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use seqbound_core::diagram::{compile_exact, compile_relaxed, merge_nodes, shortest_path, BuildOptions};
use seqbound_core::lagrangian::{dualized_cost, solve_dual, subgradient, theta, DualVector, SubgradientConfig};
use seqbound_core::model::{DpModel, EtState, FullStateKey, Last, TardinessState, TspState};
use seqbound_core::oracle::{brute_force, check_relaxation};
use seqbound_core::prelude::*;

use super::{incoming, random_path_to, random_walk};

pub type Check<T = ()> = std::result::Result<T, String>;

fn opts() -> BuildOptions {
    BuildOptions::default()
}

/// Shortest path of the exact diagram equals the enumerated optimum.
pub fn exact_matches_oracle<M: DpModel>(m: &M, inst: &JobInstance, dues: Option<CommonDueDates>) -> Check<i64> {
    let oracle = brute_force(inst, dues).map_err(|e| e.to_string())?;
    let d = compile_exact(m, &opts()).map_err(|e| e.to_string())?;
    let sp = shortest_path(&d, |a| a.cost as f64).map_err(|e| e.to_string())?;
    if sp.length != oracle.optimum as f64 {
        return Err(format!(
            "exact diagram gives {} but enumeration gives {} ({:?})",
            sp.length, oracle.optimum, oracle.permutation
        ));
    }
    let mut sorted = sp.labels.clone();
    sorted.sort_unstable();
    if sorted != (0..inst.n).collect::<Vec<_>>() {
        return Err(format!("exact shortest path {:?} is not a permutation", sp.labels));
    }
    Ok(oracle.optimum)
}

/// Every θ(λ^k) of a subgradient run stays at or below `optimum`, the best
/// bound never decreases, and a certificate names a permutation whose cost is
/// the bound. Returns the number of θ values checked.
pub fn bound_validity<M: DpModel>(m: &M, optimum: i64, max_iters: usize) -> Check<usize> {
    let d = compile_relaxed(m, &opts()).map_err(|e| e.to_string())?;
    let config = SubgradientConfig {
        max_iters,
        record_trace: true,
        ..SubgradientConfig::new(optimum as f64)
    };
    let res = solve_dual(&d, &config).map_err(|e| format!("solve_dual: {e}"))?;
    let trace = res.trace.as_ref().expect("trace requested");
    let tol = 1e-9 * (optimum.abs() as f64).max(1.0);
    let mut prev = f64::NEG_INFINITY;
    for p in trace {
        if p.theta > optimum as f64 + tol {
            return Err(format!("θ = {} at iteration {} exceeds the optimum {optimum}", p.theta, p.iter));
        }
        if p.best_bound < prev {
            return Err(format!("best bound fell from {prev} to {} at iteration {}", p.best_bound, p.iter));
        }
        prev = p.best_bound;
    }
    if res.best_bound > optimum as f64 + tol {
        return Err(format!("bound {} exceeds the optimum {optimum}", res.best_bound));
    }
    if res.certificate == Certificate::FeasiblePathOptimal {
        let seq = res.certified_sequence.as_ref().ok_or("certificate without a sequence")?;
        let mut sorted = seq.clone();
        sorted.sort_unstable();
        if sorted != (0..d.num_jobs()).collect::<Vec<_>>() {
            return Err(format!("certified sequence {seq:?} is not a permutation"));
        }
        if d.follow(seq).map(|c| c as f64) != Some(res.best_bound) {
            return Err(format!("certified sequence {seq:?} does not cost the bound {}", res.best_bound));
        }
        if res.best_bound != optimum as f64 {
            return Err(format!("certified bound {} differs from the optimum {optimum}", res.best_bound));
        }
    }
    Ok(trace.len())
}

/// The keyed relaxed diagram, and the exact diagram after merging a random
/// pair of nodes in one layer, both contain every exact path at no greater
/// length.
pub fn relaxation_holds<M: DpModel>(m: &M, rng: &mut ChaCha8Rng) -> Check {
    let exact = compile_exact(m, &opts()).map_err(|e| e.to_string())?;
    let relaxed = compile_relaxed(m, &opts()).map_err(|e| e.to_string())?;
    check_relaxation(&exact, &relaxed).map_err(|c| format!("keyed diagram: {c}"))?;

    let candidates: Vec<usize> = (1..exact.num_layers() - 1).filter(|&i| exact.width(i) >= 2).collect();
    if candidates.is_empty() {
        return Ok(());
    }
    let layer = exact.layer(candidates[rng.gen_range(0..candidates.len())]);
    let a = rng.gen_range(layer.clone());
    let mut b = rng.gen_range(layer.clone());
    while b == a {
        b = rng.gen_range(layer.clone());
    }
    let merged = merge_nodes(&exact, a, b, m).map_err(|e| e.to_string())?;
    check_relaxation(&exact, &merged).map_err(|c| format!("after merging nodes {a} and {b}: {c}"))
}

/// Merging only identical states reproduces the exact bound.
pub fn identity_relaxation<M: DpModel>(m: &M) -> Check {
    let exact = compile_exact(m, &opts()).map_err(|e| e.to_string())?;
    let identity = compile_relaxed(&FullStateKey(m), &opts()).map_err(|e| e.to_string())?;
    let zero = DualVector::zeros(m.num_jobs());
    let (a, _) = theta(&exact, &zero).map_err(|e| e.to_string())?;
    let (b, _) = theta(&identity, &zero).map_err(|e| e.to_string())?;
    if a != b {
        return Err(format!("exact bound {a} but full-state-key bound {b}"));
    }
    Ok(())
}

/// Exact state variables, recomputed from the instance along a label
/// sequence without the diagram.
pub trait KeyView {
    fn key_values(&self) -> Vec<i64>;
    fn resimulate(inst: &JobInstance, labels: &[usize]) -> Vec<i64>;
}

fn finish_time(inst: &JobInstance, labels: &[usize]) -> i64 {
    let mut t = 0;
    for (pos, &j) in labels.iter().enumerate() {
        let start = t.max(inst.release(j));
        let p = match inst.kind {
            ProblemKind::PositionDependent => inst.p_pos.as_ref().unwrap()[pos][j],
            ProblemKind::StartTimeDependent => inst.p_of_start.as_ref().unwrap()[j].at(start).unwrap(),
            _ => inst.p[j],
        };
        t = start + p;
    }
    t
}

impl KeyView for TardinessState {
    fn key_values(&self) -> Vec<i64> {
        vec![self.finish]
    }
    fn resimulate(inst: &JobInstance, labels: &[usize]) -> Vec<i64> {
        vec![finish_time(inst, labels)]
    }
}

impl KeyView for EtState {
    fn key_values(&self) -> Vec<i64> {
        vec![self.latest, self.earliest]
    }
    fn resimulate(inst: &JobInstance, labels: &[usize]) -> Vec<i64> {
        let t: i64 = labels.iter().map(|&j| inst.p[j]).sum();
        vec![t, t]
    }
}

impl KeyView for TspState {
    fn key_values(&self) -> Vec<i64> {
        match self.last {
            Last::Start => vec![-1],
            Last::Job(j) => vec![j as i64],
            Last::Any => vec![-2],
        }
    }
    fn resimulate(_inst: &JobInstance, labels: &[usize]) -> Vec<i64> {
        vec![labels.last().map_or(-1, |&j| j as i64)]
    }
}

/// For every node below the terminus, a random path into it reproduces the
/// node's exact state variables. The terminus is skipped: it folds all final
/// states and carries no cost of its own. Returns the number of nodes checked.
pub fn keys_resimulate<M>(m: &M, inst: &JobInstance, rng: &mut ChaCha8Rng, paths_per_node: usize) -> Check<usize>
where
    M: DpModel,
    M::State: KeyView,
{
    let d = compile_relaxed(m, &opts()).map_err(|e| e.to_string())?;
    let inc = incoming(&d);
    let mut checked = 0;
    for v in 0..d.terminus() {
        for _ in 0..paths_per_node.max(1) {
            let labels = if v == d.root() { vec![] } else { random_path_to(&d, &inc, v, rng) };
            let want = <M::State as KeyView>::resimulate(inst, &labels);
            let got = d.state(v).key_values();
            if want != got {
                return Err(format!("node {v}: path {labels:?} resimulates to {want:?}, node holds {got:?}"));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

/// The dualized length of a random path equals its base length plus λᵀg.
/// Returns the worst relative error over `samples` random (path, λ) pairs.
pub fn path_identity<M: DpModel>(m: &M, rng: &mut ChaCha8Rng, samples: usize) -> Check<f64> {
    let d = compile_relaxed(m, &opts()).map_err(|e| e.to_string())?;
    let n = d.num_jobs();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let lambda = DualVector((0..n).map(|_| rng.gen_range(-50.0..50.0)).collect());
        let (nodes, labels) = random_walk(&d, rng);
        let mut dualized = 0.0;
        let mut base = 0i64;
        for (k, w) in nodes.windows(2).enumerate() {
            let arc = d
                .out_arcs(w[0])
                .iter()
                .find(|a| a.head as usize == w[1] && a.label as usize == labels[k])
                .expect("walk follows arcs");
            dualized += dualized_cost(arc, k == 0, &lambda);
            base += arc.cost;
        }
        let g = subgradient(&labels, n);
        let expected = base as f64 + lambda.0.iter().zip(&g).map(|(l, &gj)| l * gj as f64).sum::<f64>();
        let scale = expected.abs().max(base as f64).max(1.0);
        let rel = (dualized - expected).abs() / scale;
        if rel > 1e-9 {
            return Err(format!("path {labels:?}: dualized {dualized} vs base + λᵀg {expected}"));
        }
        worst = worst.max(rel);
    }
    Ok(worst)
}

/// θ is concave along random segments between multiplier vectors.
pub fn concavity<M: DpModel>(m: &M, rng: &mut ChaCha8Rng, samples: usize) -> Check {
    let d = compile_relaxed(m, &opts()).map_err(|e| e.to_string())?;
    let n = d.num_jobs();
    let random = |rng: &mut ChaCha8Rng| DualVector((0..n).map(|_| rng.gen_range(-20.0..20.0)).collect());
    for _ in 0..samples {
        let (l1, l2) = (random(rng), random(rng));
        let mu: f64 = rng.gen();
        let mix = DualVector(l1.0.iter().zip(&l2.0).map(|(a, b)| mu * a + (1.0 - mu) * b).collect());
        let t1 = theta(&d, &l1).map_err(|e| e.to_string())?.0;
        let t2 = theta(&d, &l2).map_err(|e| e.to_string())?.0;
        let tm = theta(&d, &mix).map_err(|e| e.to_string())?.0;
        let chord = mu * t1 + (1.0 - mu) * t2;
        if tm < chord - 1e-7 * chord.abs().max(1.0) {
            return Err(format!("θ(mix) = {tm} below the chord {chord} at μ = {mu}"));
        }
    }
    Ok(())
}

/// Every node of a keyed common-due-date diagram has equal start and finish
/// variables. The terminus is skipped since it folds every final state.
pub fn et_times_agree(m: &seqbound_core::model::EtModel<'_>) -> Check {
    let d = compile_relaxed(m, &opts()).map_err(|e| e.to_string())?;
    for v in 0..d.terminus() {
        let s = d.state(v);
        if s.latest != s.earliest {
            return Err(format!("node {v} has s = {} and t = {}", s.latest, s.earliest));
        }
    }
    Ok(())
}
