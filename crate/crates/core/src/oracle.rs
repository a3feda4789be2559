//! Brute-force reference solvers.
//!
//! Everything here evaluates schedules straight from the instance data and
//! never touches the models or the diagram builder, so it can check them.

use std::fmt;

use rayon::prelude::*;

use crate::diagram::LayeredDiagram;
use crate::error::{Error, Result};
use crate::instance::{CommonDueDates, JobInstance, ProblemKind};

pub const DEFAULT_CAP: usize = 12;

/// Best (cost, sequence) of one subtree and the number of leaves visited.
type Subtree = (Option<(i64, Vec<usize>)>, u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: i64,
    /// Lexicographically smallest optimal sequence.
    pub permutation: Vec<usize>,
    pub enumerated: u64,
}

/// Simulates one schedule step by step.
struct Clock<'a> {
    inst: &'a JobInstance,
    dues: Option<CommonDueDates>,
}

impl Clock<'_> {
    /// Returns the new clock time and the cost of appending `job`.
    fn step(&self, prev: Option<usize>, time: i64, pos: usize, job: usize) -> Result<(i64, i64)> {
        let inst = self.inst;
        let due = |j: usize| inst.d.as_ref().expect("validated")[j];
        Ok(match inst.kind {
            ProblemKind::TardinessTW => {
                let finish = time.max(inst.release(job)) + inst.p[job];
                (finish, inst.weight(job) * (finish - due(job)).max(0))
            }
            ProblemKind::PositionDependent => {
                let p = inst.p_pos.as_ref().expect("validated")[pos][job];
                let finish = time.max(inst.release(job)) + p;
                (finish, inst.weight(job) * (finish - due(job)).max(0))
            }
            ProblemKind::StartTimeDependent => {
                let start = time.max(inst.release(job));
                let p = inst.p_of_start.as_ref().expect("validated")[job]
                    .at(start)
                    .ok_or(Error::Domain { job, start })?;
                let finish = start + p;
                (finish, inst.weight(job) * (finish - due(job)).max(0))
            }
            ProblemKind::CommonDueET => {
                let dues = self
                    .dues
                    .ok_or_else(|| Error::MalformedInstance("common due dates are missing".into()))?;
                let finish = time + inst.p[job];
                let alpha = inst.alpha.as_ref().expect("validated")[job];
                let beta = inst.beta.as_ref().expect("validated")[job];
                let cost = alpha * (dues.d1 - finish).max(0) + beta * (finish - dues.d2).max(0);
                (finish, cost)
            }
            ProblemKind::TspSeqDep => {
                let travel = inst.travel.as_ref().expect("validated");
                (time, travel[prev.unwrap_or(job)][job])
            }
        })
    }
}

/// Objective value of a complete sequence.
pub fn objective(inst: &JobInstance, dues: Option<CommonDueDates>, sequence: &[usize]) -> Result<i64> {
    inst.check()?;
    let clock = Clock { inst, dues };
    let mut time = 0;
    let mut total = 0;
    let mut prev = None;
    for (pos, &job) in sequence.iter().enumerate() {
        let (t, c) = clock.step(prev, time, pos, job)?;
        time = t;
        total += c;
        prev = Some(job);
    }
    Ok(total)
}

struct Search<'a> {
    clock: Clock<'a>,
    n: usize,
    used: Vec<bool>,
    seq: Vec<usize>,
    best: Option<(i64, Vec<usize>)>,
    count: u64,
}

impl Search<'_> {
    fn run(&mut self, prev: Option<usize>, time: i64, cost: i64) -> Result<()> {
        let pos = self.seq.len();
        if pos == self.n {
            self.count += 1;
            // Jobs are tried in ascending order, so the first optimum found
            // is the lexicographically smallest.
            if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                self.best = Some((cost, self.seq.clone()));
            }
            return Ok(());
        }
        for job in 0..self.n {
            if self.used[job] {
                continue;
            }
            let (t, c) = self.clock.step(prev, time, pos, job)?;
            self.used[job] = true;
            self.seq.push(job);
            self.run(Some(job), t, cost + c)?;
            self.seq.pop();
            self.used[job] = false;
        }
        Ok(())
    }
}

/// Minimum objective over all `n!` sequences. Refuses instances above `cap`.
pub fn brute_force_capped(
    inst: &JobInstance,
    dues: Option<CommonDueDates>,
    cap: usize,
) -> Result<OracleResult> {
    inst.check()?;
    let n = inst.n;
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let subtrees: Vec<Result<Subtree>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let clock = Clock { inst, dues };
            let (t, c) = clock.step(None, 0, 0, first)?;
            let mut s = Search {
                clock,
                n,
                used: vec![false; n],
                seq: vec![first],
                best: None,
                count: 0,
            };
            s.used[first] = true;
            s.run(Some(first), t, c)?;
            Ok((s.best, s.count))
        })
        .collect();

    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut enumerated = 0;
    for sub in subtrees {
        let (b, count) = sub?;
        enumerated += count;
        if let Some((v, seq)) = b {
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, seq));
            }
        }
    }
    let (optimum, permutation) = best.expect("n >= 1");
    Ok(OracleResult {
        optimum,
        permutation,
        enumerated,
    })
}

pub fn brute_force(inst: &JobInstance, dues: Option<CommonDueDates>) -> Result<OracleResult> {
    brute_force_capped(inst, dues, DEFAULT_CAP)
}

/// A label sequence the exact diagram has but the relaxed one lacks or
/// makes longer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub labels: Vec<usize>,
    pub exact_length: i64,
    pub relaxed_length: Option<i64>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relaxed_length {
            Some(r) => write!(
                f,
                "path {:?} has length {} in the relaxed diagram but {} in the exact one",
                self.labels, r, self.exact_length
            ),
            None => write!(
                f,
                "path {:?} (length {}) is missing from the relaxed diagram",
                self.labels, self.exact_length
            ),
        }
    }
}

/// Checks that every root-to-terminus path of `exact` appears in `relaxed`
/// with the same labels and no greater length.
pub fn check_relaxation<S, T>(
    exact: &LayeredDiagram<S>,
    relaxed: &LayeredDiagram<T>,
) -> Result<(), Counterexample> {
    fn walk<S, T>(
        exact: &LayeredDiagram<S>,
        relaxed: &LayeredDiagram<T>,
        node: usize,
        labels: &mut Vec<usize>,
        length: i64,
    ) -> Result<(), Counterexample> {
        if node == exact.terminus() {
            let r = relaxed.follow(labels);
            return match r {
                Some(r) if r <= length => Ok(()),
                _ => Err(Counterexample {
                    labels: labels.clone(),
                    exact_length: length,
                    relaxed_length: r,
                }),
            };
        }
        for a in exact.out_arcs(node) {
            labels.push(a.label as usize);
            walk(exact, relaxed, a.head as usize, labels, length + a.cost)?;
            labels.pop();
        }
        Ok(())
    }
    walk(exact, relaxed, exact.root(), &mut Vec::new(), 0)
}
