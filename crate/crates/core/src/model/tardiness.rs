use crate::error::{Error, Result};
use crate::instance::{JobInstance, ProblemKind};
use crate::jobset::JobSet;
use crate::model::DpModel;

/// `(V, t)`: jobs scheduled on every path to the node, and the earliest
/// finish time of the last scheduled job.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TardinessState {
    pub scheduled: JobSet,
    pub finish: i64,
}

/// Where a job's duration comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DurationRule {
    Fixed,
    ByPosition,
    ByStartTime,
}

/// Weighted tardiness with release times. Also covers position- and
/// start-time-dependent durations, which keep the same state and key.
#[derive(Debug, Clone)]
pub struct TardinessModel<'a> {
    inst: &'a JobInstance,
    due: &'a [i64],
    rule: DurationRule,
}

impl<'a> TardinessModel<'a> {
    pub fn new(inst: &'a JobInstance) -> Result<Self> {
        let rule = match inst.kind {
            ProblemKind::TardinessTW => DurationRule::Fixed,
            ProblemKind::PositionDependent => DurationRule::ByPosition,
            ProblemKind::StartTimeDependent => DurationRule::ByStartTime,
            other => {
                return Err(Error::MalformedInstance(format!(
                    "{other} instance given to the tardiness model"
                )))
            }
        };
        inst.check()?;
        let due = inst.d.as_deref().expect("validated");
        Ok(TardinessModel { inst, due, rule })
    }

    pub fn rule(&self) -> DurationRule {
        self.rule
    }

    /// Duration of `job` when it starts at `start` in position `stage`.
    pub fn duration(&self, job: usize, stage: usize, start: i64) -> Result<i64> {
        match self.rule {
            DurationRule::Fixed => Ok(self.inst.p[job]),
            DurationRule::ByPosition => Ok(self.inst.p_pos.as_ref().expect("validated")[stage][job]),
            DurationRule::ByStartTime => self.inst.p_of_start.as_ref().expect("validated")[job]
                .at(start)
                .ok_or(Error::Domain { job, start }),
        }
    }

    fn completion(&self, state: &TardinessState, job: usize, stage: usize) -> Result<i64> {
        if job >= self.inst.n || state.scheduled.contains(job) {
            return Err(Error::InfeasibleControl { job });
        }
        let start = state.finish.max(self.inst.release(job));
        Ok(start + self.duration(job, stage, start)?)
    }
}

impl DpModel for TardinessModel<'_> {
    type State = TardinessState;
    type Key = i64;

    fn num_jobs(&self) -> usize {
        self.inst.n
    }

    fn initial_state(&self) -> TardinessState {
        TardinessState {
            scheduled: JobSet::empty(self.inst.n),
            finish: 0,
        }
    }

    fn controls(&self, state: &TardinessState, _stage: usize) -> Vec<usize> {
        state.scheduled.complement(self.inst.n).collect()
    }

    fn transition(&self, state: &TardinessState, job: usize, stage: usize) -> Result<TardinessState> {
        let finish = self.completion(state, job, stage)?;
        Ok(TardinessState {
            scheduled: state.scheduled.with(job),
            finish,
        })
    }

    fn immediate_cost(&self, state: &TardinessState, job: usize, stage: usize) -> Result<i64> {
        let finish = self.completion(state, job, stage)?;
        Ok(self.inst.weight(job) * (finish - self.due[job]).max(0))
    }

    fn merge(&self, a: &TardinessState, b: &TardinessState) -> TardinessState {
        TardinessState {
            scheduled: a.scheduled.intersection(&b.scheduled),
            finish: a.finish.min(b.finish),
        }
    }

    fn exact_key(&self, state: &TardinessState) -> i64 {
        state.finish
    }

    fn bucket_key(&self, key: &i64, bucket: i64) -> i64 {
        key.div_euclid(bucket.max(1))
    }

    fn describe_state(&self, state: &TardinessState) -> String {
        format!("{} {}", state.scheduled, state.finish)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::DurationTable;

    fn three_jobs() -> JobInstance {
        JobInstance::tardiness(vec![3, 2, 2], vec![0, 1, 1], vec![5, 3, 5], vec![1, 1, 1])
    }

    fn st(jobs: &[usize], finish: i64) -> TardinessState {
        TardinessState {
            scheduled: JobSet::from_jobs(3, jobs.iter().copied()),
            finish,
        }
    }

    #[test]
    fn transition_matches_three_job_example_states() {
        let inst = three_jobs();
        let m = TardinessModel::new(&inst).unwrap();
        assert_eq!(m.transition(&m.initial_state(), 0, 0).unwrap(), st(&[0], 3));
        assert_eq!(m.transition(&st(&[1], 3), 2, 1).unwrap(), st(&[1, 2], 5));
        // r_1 = 0 for job 0, so an empty history finishes at p_0.
        assert_eq!(m.transition(&m.initial_state(), 0, 0).unwrap().finish, inst.p[0]);
    }

    #[test]
    fn scheduled_job_is_infeasible() {
        let inst = three_jobs();
        let m = TardinessModel::new(&inst).unwrap();
        assert!(matches!(
            m.transition(&st(&[1], 3), 1, 1),
            Err(Error::InfeasibleControl { job: 1 })
        ));
        assert!(m.immediate_cost(&st(&[1], 3), 1, 1).is_err());
    }

    #[test]
    fn cost_matches_three_job_example_arcs() {
        let inst = three_jobs();
        let m = TardinessModel::new(&inst).unwrap();
        assert_eq!(m.immediate_cost(&st(&[1, 2], 5), 0, 2).unwrap(), 3);
        assert_eq!(m.immediate_cost(&m.initial_state(), 0, 0).unwrap(), 0);

        let mut lax = three_jobs();
        lax.d = Some(vec![1_000_000; 3]);
        let m = TardinessModel::new(&lax).unwrap();
        assert_eq!(m.immediate_cost(&st(&[1, 2], 5), 0, 2).unwrap(), 0);
    }

    #[test]
    fn weights_scale_tardiness() {
        let mut inst = three_jobs();
        inst.w = Some(vec![4, 1, 1]);
        let m = TardinessModel::new(&inst).unwrap();
        assert_eq!(m.immediate_cost(&st(&[1, 2], 5), 0, 2).unwrap(), 12);
    }

    #[test]
    fn merge_intersects_and_takes_earliest_finish() {
        let inst = three_jobs();
        let m = TardinessModel::new(&inst).unwrap();
        assert_eq!(m.merge(&st(&[0, 1], 6), &st(&[1, 2], 5)), st(&[1], 5));
        let s = st(&[0, 2], 5);
        assert_eq!(m.merge(&s, &s), s);
        assert_eq!(m.merge(&st(&[0], 3), &st(&[1], 3)), st(&[], 3));
    }

    #[test]
    fn position_dependent_durations() {
        let base = three_jobs();
        let flat = JobInstance::position_dependent(
            vec![base.p.clone(); 3],
            base.r.clone().unwrap(),
            base.d.clone().unwrap(),
        );
        let a = TardinessModel::new(&base).unwrap();
        let b = TardinessModel::new(&flat).unwrap();
        for stage in 0..3 {
            for job in 0..3 {
                let s = st(&[], 2);
                assert_eq!(
                    a.immediate_cost(&s, job, stage).unwrap(),
                    b.immediate_cost(&s, job, stage).unwrap()
                );
            }
        }

        let mut rows = vec![vec![1, 1, 1]; 3];
        rows[0][2] = 5;
        let inst = JobInstance::position_dependent(rows, vec![0; 3], vec![9, 9, 3]);
        let m = TardinessModel::new(&inst).unwrap();
        assert_eq!(m.immediate_cost(&m.initial_state(), 2, 0).unwrap(), 2);
        assert_eq!(m.transition(&m.initial_state(), 2, 0).unwrap().finish, 5);

        let mut lax = inst.clone();
        lax.d = Some(vec![1_000_000; 3]);
        let m = TardinessModel::new(&lax).unwrap();
        assert_eq!(m.immediate_cost(&m.initial_state(), 2, 0).unwrap(), 0);
    }

    #[test]
    fn start_dependent_durations() {
        let base = three_jobs();
        let constant = JobInstance::start_dependent(
            base.p.iter().map(|&p| DurationTable::constant(p, 100)).collect(),
            base.r.clone().unwrap(),
            base.d.clone().unwrap(),
        );
        let a = TardinessModel::new(&base).unwrap();
        let b = TardinessModel::new(&constant).unwrap();
        assert_eq!(
            a.immediate_cost(&st(&[1, 2], 5), 0, 2).unwrap(),
            b.immediate_cost(&st(&[1, 2], 5), 0, 2).unwrap()
        );

        let table = DurationTable {
            breaks: vec![(0, 1), (4, 3)],
            until: 50,
        };
        let inst = JobInstance::start_dependent(vec![table.clone(), table], vec![0, 6], vec![5, 0]);
        let m = TardinessModel::new(&inst).unwrap();
        let at4 = TardinessState {
            scheduled: JobSet::empty(2),
            finish: 4,
        };
        assert_eq!(m.immediate_cost(&at4, 0, 1).unwrap(), 2);
        // Job 1 cannot start before its release at 6: duration read at 6.
        assert_eq!(m.transition(&at4, 1, 1).unwrap().finish, 9);

        let late = TardinessState {
            scheduled: JobSet::empty(2),
            finish: 50,
        };
        assert!(matches!(
            m.immediate_cost(&late, 0, 1),
            Err(Error::Domain { job: 0, start: 50 })
        ));
    }

    #[test]
    fn rejects_other_kinds() {
        let inst = JobInstance::common_due(vec![1], vec![1], vec![1]);
        assert!(TardinessModel::new(&inst).is_err());
    }
}
