//! Seeded random instances and property checks shared by the integration
//! suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqbound_core::prelude::*;

pub const KINDS: [ProblemKind; 5] = [
    ProblemKind::TardinessTW,
    ProblemKind::CommonDueET,
    ProblemKind::PositionDependent,
    ProblemKind::StartTimeDependent,
    ProblemKind::TspSeqDep,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Release and due dates tight enough that some jobs end up late.
fn windows(rng: &mut ChaCha8Rng, p: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let total: i64 = p.iter().sum();
    let r: Vec<i64> = p.iter().map(|_| rng.gen_range(0..=total / 2)).collect();
    let d = p
        .iter()
        .zip(&r)
        .map(|(&pj, &rj)| rj + pj + rng.gen_range(0..=total / 2))
        .collect();
    (r, d)
}

/// Piecewise-constant durations whose finish time never decreases in the
/// start time.
fn duration_table(rng: &mut ChaCha8Rng, horizon: i64) -> DurationTable {
    let pieces = rng.gen_range(1..=3);
    let mut breaks = vec![(0, rng.gen_range(1..=8))];
    let mut from = 0;
    for _ in 1..pieces {
        from += rng.gen_range(1..=horizon / 2 + 1);
        let prev = breaks.last().unwrap().1;
        let dur = rng.gen_range((prev - 1).max(1)..=prev + 4);
        breaks.push((from, dur));
    }
    DurationTable { breaks, until: 0 }
}

/// A random instance of `kind` with `n` jobs; common-due-date instances come
/// with their due window.
pub fn random_instance(kind: ProblemKind, n: usize, seed: u64) -> (JobInstance, Option<CommonDueDates>) {
    let mut rng = rng(seed);
    match kind {
        ProblemKind::TardinessTW => {
            let p: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
            let (r, d) = windows(&mut rng, &p);
            let w = (0..n).map(|_| rng.gen_range(1..=4)).collect();
            (JobInstance::tardiness(p, r, d, w), None)
        }
        ProblemKind::CommonDueET => {
            let p = (0..n).map(|_| rng.gen_range(1..=20)).collect();
            let alpha = (0..n).map(|_| rng.gen_range(1..=10)).collect();
            let beta = (0..n).map(|_| rng.gen_range(1..=15)).collect();
            let inst = JobInstance::common_due(p, alpha, beta);
            let h1 = rng.gen_range(0..=6) as f64 / 10.0;
            let h2 = h1 + rng.gen_range(0..=3) as f64 / 10.0;
            let dues = CommonDueDates::new(&inst, h1, h2).unwrap();
            (inst, Some(dues))
        }
        ProblemKind::PositionDependent => {
            let p_pos: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(1..=10)).collect())
                .collect();
            let (r, d) = windows(&mut rng, &p_pos[0]);
            (JobInstance::position_dependent(p_pos, r, d), None)
        }
        ProblemKind::StartTimeDependent => {
            let horizon = 6 * n as i64;
            let mut tables: Vec<DurationTable> = (0..n).map(|_| duration_table(&mut rng, horizon)).collect();
            let first: Vec<i64> = tables.iter().map(|t| t.breaks[0].1).collect();
            let (r, d) = windows(&mut rng, &first);
            // Relaxed diagrams may repeat the longest job in every position,
            // so the tables must cover starts up to this horizon.
            let longest = tables
                .iter()
                .flat_map(|t| t.breaks.iter().map(|b| b.1))
                .max()
                .unwrap();
            let until = r.iter().max().unwrap() + n as i64 * longest + 1;
            for t in &mut tables {
                t.until = until.max(t.breaks.last().unwrap().0 + 1);
            }
            (JobInstance::start_dependent(tables, r, d), None)
        }
        ProblemKind::TspSeqDep => {
            let travel = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0..=20)).collect())
                .collect();
            (JobInstance::sequence_dependent(travel), None)
        }
    }
}

/// `count` instances of `kind` with sizes drawn from `sizes`.
pub fn sample(
    kind: ProblemKind,
    sizes: std::ops::RangeInclusive<usize>,
    count: usize,
    seed: u64,
) -> Vec<(JobInstance, Option<CommonDueDates>)> {
    let mut rng = rng(seed ^ ((kind as u64) << 32));
    (0..count)
        .map(|_| {
            let n = rng.gen_range(sizes.clone());
            random_instance(kind, n, rng.gen())
        })
        .collect()
}

/// A uniformly random root-to-terminus walk, returned as node ids and labels.
pub fn random_walk<S>(d: &LayeredDiagram<S>, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    let mut nodes = vec![d.root()];
    let mut labels = Vec::new();
    let mut u = d.root();
    while u != d.terminus() {
        let arcs = d.out_arcs(u);
        let a = arcs[rng.gen_range(0..arcs.len())];
        labels.push(a.label as usize);
        u = a.head as usize;
        nodes.push(u);
    }
    (nodes, labels)
}

/// A random path from the root to `target`, found by walking in-arcs back.
pub fn random_path_to<S>(d: &LayeredDiagram<S>, incoming: &[Vec<(usize, usize)>], target: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut labels = Vec::new();
    let mut v = target;
    while v != d.root() {
        let (tail, label) = incoming[v][rng.gen_range(0..incoming[v].len())];
        labels.push(label);
        v = tail;
    }
    labels.reverse();
    labels
}

/// `(tail, label)` of the arcs entering each node.
pub fn incoming<S>(d: &LayeredDiagram<S>) -> Vec<Vec<(usize, usize)>> {
    let mut inc = vec![Vec::new(); d.num_nodes()];
    for a in d.arcs() {
        inc[a.head as usize].push((a.tail as usize, a.label as usize));
    }
    inc
}

/// Runs `$body` with `$m` bound to the model that fits the instance.
#[macro_export]
macro_rules! with_each_model {
    ($inst:expr, $dues:expr, |$m:ident| $body:expr) => {
        match $inst.kind {
            ProblemKind::CommonDueET => {
                let $m = seqbound_core::model::EtModel::new(&$inst, $dues.unwrap()).unwrap();
                $body
            }
            ProblemKind::TspSeqDep => {
                let $m = seqbound_core::model::TspModel::new(&$inst).unwrap();
                $body
            }
            _ => {
                let $m = seqbound_core::model::TardinessModel::new(&$inst).unwrap();
                $body
            }
        }
    };
}
pub mod checks;
