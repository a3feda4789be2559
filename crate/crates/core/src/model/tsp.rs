use crate::error::{Error, Result};
use crate::instance::{JobInstance, ProblemKind};
use crate::jobset::JobSet;
use crate::model::DpModel;

/// The job processed last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Last {
    /// Root sentinel: nothing has run yet.
    Start,
    Job(usize),
    /// Merged from states with different predecessors; the cost of the next
    /// job is then the cheapest entry of its column.
    Any,
}

/// `(V, y)`: visited jobs and the job processed last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TspState {
    pub visited: JobSet,
    pub last: Last,
}

/// Sequence-dependent durations without time windows. The objective is the
/// total travel time; the first job costs its diagonal entry.
#[derive(Debug, Clone)]
pub struct TspModel<'a> {
    inst: &'a JobInstance,
    travel: &'a [Vec<i64>],
    cheapest_into: Vec<i64>,
}

impl<'a> TspModel<'a> {
    pub fn new(inst: &'a JobInstance) -> Result<Self> {
        if inst.kind != ProblemKind::TspSeqDep {
            return Err(Error::MalformedInstance(format!(
                "{} instance given to the sequence-dependent model",
                inst.kind
            )));
        }
        inst.check()?;
        let travel = inst.travel.as_deref().expect("validated");
        let cheapest_into = (0..inst.n)
            .map(|j| travel.iter().map(|row| row[j]).min().unwrap_or(0))
            .collect();
        Ok(TspModel {
            inst,
            travel,
            cheapest_into,
        })
    }
}

impl DpModel for TspModel<'_> {
    type State = TspState;
    type Key = Last;

    fn num_jobs(&self) -> usize {
        self.inst.n
    }

    fn initial_state(&self) -> TspState {
        TspState {
            visited: JobSet::empty(self.inst.n),
            last: Last::Start,
        }
    }

    fn controls(&self, state: &TspState, _stage: usize) -> Vec<usize> {
        state.visited.complement(self.inst.n).collect()
    }

    fn transition(&self, state: &TspState, job: usize, _stage: usize) -> Result<TspState> {
        if job >= self.inst.n || state.visited.contains(job) {
            return Err(Error::InfeasibleControl { job });
        }
        Ok(TspState {
            visited: state.visited.with(job),
            last: Last::Job(job),
        })
    }

    fn immediate_cost(&self, state: &TspState, job: usize, _stage: usize) -> Result<i64> {
        if job >= self.inst.n || state.visited.contains(job) {
            return Err(Error::InfeasibleControl { job });
        }
        Ok(match state.last {
            Last::Start => self.travel[job][job],
            Last::Job(from) => self.travel[from][job],
            Last::Any => self.cheapest_into[job],
        })
    }

    fn merge(&self, a: &TspState, b: &TspState) -> TspState {
        TspState {
            visited: a.visited.intersection(&b.visited),
            last: if a.last == b.last { a.last } else { Last::Any },
        }
    }

    fn exact_key(&self, state: &TspState) -> Last {
        state.last
    }

    fn describe_state(&self, state: &TspState) -> String {
        match state.last {
            Last::Start => format!("{} start", state.visited),
            Last::Job(y) => format!("{} {}", state.visited, y),
            Last::Any => format!("{} any", state.visited),
        }
    }
}
