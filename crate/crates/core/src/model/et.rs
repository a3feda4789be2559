use crate::error::{Error, Result};
use crate::instance::{CommonDueDates, JobInstance, ProblemKind};
use crate::jobset::JobSet;
use crate::model::DpModel;

/// `(V, s, t)`: scheduled jobs, latest start of the next job and earliest
/// finish of the last job. Under keyed merging `s == t` at every node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtState {
    pub scheduled: JobSet,
    pub latest: i64,
    pub earliest: i64,
}

/// Weighted earliness/tardiness against a common due window `[d1, d2]`.
/// Jobs run back to back from time 0.
#[derive(Debug, Clone)]
pub struct EtModel<'a> {
    inst: &'a JobInstance,
    alpha: &'a [i64],
    beta: &'a [i64],
    dues: CommonDueDates,
}

impl<'a> EtModel<'a> {
    pub fn new(inst: &'a JobInstance, dues: CommonDueDates) -> Result<Self> {
        if inst.kind != ProblemKind::CommonDueET {
            return Err(Error::MalformedInstance(format!(
                "{} instance given to the earliness-tardiness model",
                inst.kind
            )));
        }
        inst.check()?;
        Ok(EtModel {
            inst,
            alpha: inst.alpha.as_deref().expect("validated"),
            beta: inst.beta.as_deref().expect("validated"),
            dues,
        })
    }

    pub fn dues(&self) -> CommonDueDates {
        self.dues
    }

    fn feasible(&self, state: &EtState, job: usize) -> Result<()> {
        if job >= self.inst.n || state.scheduled.contains(job) {
            Err(Error::InfeasibleControl { job })
        } else {
            Ok(())
        }
    }
}

impl DpModel for EtModel<'_> {
    type State = EtState;
    type Key = (i64, i64);

    fn num_jobs(&self) -> usize {
        self.inst.n
    }

    fn initial_state(&self) -> EtState {
        EtState {
            scheduled: JobSet::empty(self.inst.n),
            latest: 0,
            earliest: 0,
        }
    }

    fn controls(&self, state: &EtState, _stage: usize) -> Vec<usize> {
        state.scheduled.complement(self.inst.n).collect()
    }

    fn transition(&self, state: &EtState, job: usize, _stage: usize) -> Result<EtState> {
        self.feasible(state, job)?;
        let p = self.inst.p[job];
        Ok(EtState {
            scheduled: state.scheduled.with(job),
            latest: state.latest + p,
            earliest: state.earliest + p,
        })
    }

    /// Earliness is charged against the latest possible completion and
    /// tardiness against the earliest, so the cost never overstates the
    /// true cost of any merged path.
    fn immediate_cost(&self, state: &EtState, job: usize, _stage: usize) -> Result<i64> {
        self.feasible(state, job)?;
        let p = self.inst.p[job];
        let early = (self.dues.d1 - (state.latest + p)).max(0);
        let tardy = (state.earliest + p - self.dues.d2).max(0);
        Ok(self.alpha[job] * early + self.beta[job] * tardy)
    }

    fn merge(&self, a: &EtState, b: &EtState) -> EtState {
        EtState {
            scheduled: a.scheduled.intersection(&b.scheduled),
            latest: a.latest.max(b.latest),
            earliest: a.earliest.min(b.earliest),
        }
    }

    fn exact_key(&self, state: &EtState) -> (i64, i64) {
        (state.latest, state.earliest)
    }

    fn bucket_key(&self, key: &(i64, i64), bucket: i64) -> (i64, i64) {
        let b = bucket.max(1);
        (key.0.div_euclid(b), key.1.div_euclid(b))
    }

    fn describe_state(&self, state: &EtState) -> String {
        format!("{} {} {}", state.scheduled, state.latest, state.earliest)
    }
}
