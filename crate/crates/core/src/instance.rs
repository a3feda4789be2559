//! Problem instances and the quantities derived from them.
//!
//! Jobs are indexed `0..n` throughout the crate. All times and weights are
//! integers so that node keys compare exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Problem class of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    /// Weighted tardiness with release times.
    TardinessTW,
    /// Weighted earliness and tardiness against a common due window.
    CommonDueET,
    /// Tardiness with durations that depend on sequence position.
    PositionDependent,
    /// Tardiness with durations that depend on the start time.
    StartTimeDependent,
    /// Sequence-dependent durations; minimizes total travel time.
    TspSeqDep,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] = [
        ProblemKind::TardinessTW,
        ProblemKind::CommonDueET,
        ProblemKind::PositionDependent,
        ProblemKind::StartTimeDependent,
        ProblemKind::TspSeqDep,
    ];

    /// Short name used on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            ProblemKind::TardinessTW => "tw",
            ProblemKind::CommonDueET => "et",
            ProblemKind::PositionDependent => "pos",
            ProblemKind::StartTimeDependent => "start",
            ProblemKind::TspSeqDep => "tsp",
        }
    }

    pub fn from_short_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.short_name() == name)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Piecewise-constant duration as a function of start time.
///
/// `breaks` holds `(from, duration)` pairs with strictly increasing `from`,
/// the first at time 0. The table is defined on `[0, until)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DurationTable {
    pub breaks: Vec<(i64, i64)>,
    pub until: i64,
}

impl DurationTable {
    pub fn constant(duration: i64, until: i64) -> Self {
        DurationTable {
            breaks: vec![(0, duration)],
            until,
        }
    }

    /// Duration of a job started at `start`, or `None` outside the domain.
    pub fn at(&self, start: i64) -> Option<i64> {
        if start < 0 || start >= self.until {
            return None;
        }
        let idx = self.breaks.partition_point(|&(from, _)| from <= start);
        idx.checked_sub(1).map(|i| self.breaks[i].1)
    }

    fn violations(&self, path: &str, out: &mut Vec<Violation>) {
        if self.breaks.is_empty() {
            out.push(Violation::new(path, "duration table has no breakpoints"));
            return;
        }
        if self.breaks[0].0 != 0 {
            out.push(Violation::new(path, "first breakpoint must start at 0"));
        }
        for (k, &(from, dur)) in self.breaks.iter().enumerate() {
            if dur < 0 {
                out.push(Violation::new(
                    format!("{path}.breaks[{k}]"),
                    "duration must be nonnegative",
                ));
            }
            if k > 0 {
                let (prev_from, prev_dur) = self.breaks[k - 1];
                if from <= prev_from {
                    out.push(Violation::new(
                        format!("{path}.breaks[{k}]"),
                        "breakpoints must strictly increase",
                    ));
                }
                // Finish time s + p(s) must not decrease across a breakpoint,
                // otherwise merging on the earliest finish time is not a
                // relaxation.
                if dur < prev_dur - 1 {
                    out.push(Violation::new(
                        format!("{path}.breaks[{k}]"),
                        "finish time s + p(s) decreases here",
                    ));
                }
            }
        }
        if let Some(&(last_from, _)) = self.breaks.last() {
            if self.until <= last_from {
                out.push(Violation::new(
                    format!("{path}.until"),
                    "domain end must follow the last breakpoint",
                ));
            }
        }
    }
}

/// A single-machine sequencing instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobInstance {
    pub n: usize,
    pub kind: ProblemKind,
    /// Nominal duration per job.
    pub p: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<i64>>,
    /// `p_pos[i][j]`: duration of job `j` in sequence position `i`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_pos: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_of_start: Option<Vec<DurationTable>>,
    /// `travel[a][b]`: duration of `b` when it directly follows `a`. The
    /// diagonal entry `travel[b][b]` is the duration of `b` when it runs first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub travel: Option<Vec<Vec<i64>>>,
}

impl JobInstance {
    fn bare(kind: ProblemKind, p: Vec<i64>) -> Self {
        JobInstance {
            n: p.len(),
            kind,
            p,
            r: None,
            d: None,
            w: None,
            alpha: None,
            beta: None,
            p_pos: None,
            p_of_start: None,
            travel: None,
        }
    }

    pub fn tardiness(p: Vec<i64>, r: Vec<i64>, d: Vec<i64>, w: Vec<i64>) -> Self {
        JobInstance {
            r: Some(r),
            d: Some(d),
            w: Some(w),
            ..Self::bare(ProblemKind::TardinessTW, p)
        }
    }

    pub fn common_due(p: Vec<i64>, alpha: Vec<i64>, beta: Vec<i64>) -> Self {
        JobInstance {
            alpha: Some(alpha),
            beta: Some(beta),
            ..Self::bare(ProblemKind::CommonDueET, p)
        }
    }

    pub fn position_dependent(p_pos: Vec<Vec<i64>>, r: Vec<i64>, d: Vec<i64>) -> Self {
        let p = p_pos.first().cloned().unwrap_or_default();
        JobInstance {
            r: Some(r),
            d: Some(d),
            p_pos: Some(p_pos),
            ..Self::bare(ProblemKind::PositionDependent, p)
        }
    }

    pub fn start_dependent(tables: Vec<DurationTable>, r: Vec<i64>, d: Vec<i64>) -> Self {
        let p = tables
            .iter()
            .map(|t| t.breaks.first().map_or(0, |b| b.1))
            .collect();
        JobInstance {
            r: Some(r),
            d: Some(d),
            p_of_start: Some(tables),
            ..Self::bare(ProblemKind::StartTimeDependent, p)
        }
    }

    pub fn sequence_dependent(travel: Vec<Vec<i64>>) -> Self {
        let p = (0..travel.len()).map(|j| travel[j][j]).collect();
        JobInstance {
            travel: Some(travel),
            ..Self::bare(ProblemKind::TspSeqDep, p)
        }
    }

    #[inline]
    pub fn release(&self, job: usize) -> i64 {
        self.r.as_ref().map_or(0, |r| r[job])
    }

    #[inline]
    pub fn weight(&self, job: usize) -> i64 {
        self.w.as_ref().map_or(1, |w| w[job])
    }

    pub fn total_duration(&self) -> i64 {
        self.p.iter().sum()
    }

    /// Checks every invariant and reports all violations found.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let n = self.n;
        if n == 0 {
            out.push(Violation::new("n", "n must be at least 1"));
        }

        check_vec(&mut out, "p", Some(&self.p), n, true);
        check_vec(&mut out, "r", self.r.as_ref(), n, false);
        check_vec(&mut out, "w", self.w.as_ref(), n, false);

        use ProblemKind::*;
        let needs_due = matches!(self.kind, TardinessTW | PositionDependent | StartTimeDependent);
        check_vec(&mut out, "d", self.d.as_ref(), n, needs_due);
        let is_et = self.kind == CommonDueET;
        check_vec(&mut out, "alpha", self.alpha.as_ref(), n, is_et);
        check_vec(&mut out, "beta", self.beta.as_ref(), n, is_et);
        if is_et && self.d.is_some() {
            out.push(Violation::new(
                "d",
                "common due dates are derived from h1, h2 and must not be given",
            ));
        }

        check_matrix(&mut out, "p_pos", self.p_pos.as_ref(), n, self.kind == PositionDependent);
        check_matrix(&mut out, "travel", self.travel.as_ref(), n, self.kind == TspSeqDep);

        match &self.p_of_start {
            Some(tables) => {
                if tables.len() != n {
                    out.push(Violation::new("p_of_start", "p_of_start length mismatch"));
                }
                for (j, t) in tables.iter().enumerate() {
                    t.violations(&format!("p_of_start[{j}]"), &mut out);
                }
            }
            None if self.kind == StartTimeDependent => {
                out.push(Violation::new("p_of_start", "p_of_start is required"));
            }
            None => {}
        }

        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Like [`validate`](Self::validate) but folds the violations into one error.
    pub fn check(&self) -> Result<()> {
        self.validate().map_err(|v| {
            let joined = v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
            Error::MalformedInstance(joined)
        })
    }
}

fn check_vec(out: &mut Vec<Violation>, name: &str, v: Option<&Vec<i64>>, n: usize, required: bool) {
    match v {
        None if required => out.push(Violation::new(name, format!("{name} is required"))),
        None => {}
        Some(v) => {
            if v.len() != n {
                out.push(Violation::new(name, format!("{name} length mismatch")));
            }
            if let Some(j) = v.iter().position(|&x| x < 0) {
                out.push(Violation::new(
                    format!("{name}[{j}]"),
                    format!("{name} must be nonnegative"),
                ));
            }
        }
    }
}

fn check_matrix(
    out: &mut Vec<Violation>,
    name: &str,
    m: Option<&Vec<Vec<i64>>>,
    n: usize,
    required: bool,
) {
    match m {
        None if required => out.push(Violation::new(name, format!("{name} is required"))),
        None => {}
        Some(m) => {
            if m.len() != n {
                out.push(Violation::new(name, format!("{name} must have {n} rows")));
            }
            for (i, row) in m.iter().enumerate() {
                if row.len() != n {
                    out.push(Violation::new(
                        format!("{name}[{i}]"),
                        format!("{name} row length mismatch"),
                    ));
                }
                if let Some(j) = row.iter().position(|&x| x < 0) {
                    out.push(Violation::new(
                        format!("{name}[{i}][{j}]"),
                        format!("{name} must be nonnegative"),
                    ));
                }
            }
        }
    }
}

/// One failed invariant, located by field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// `⌊h · Σ p⌋`, the conventional common due date for a fraction `h`.
pub fn d_of_h(instance: &JobInstance, h: f64) -> Result<i64> {
    if instance.p.is_empty() {
        return Err(Error::MalformedInstance("durations are missing".into()));
    }
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::Config(format!("due-date fraction {h} is outside [0, 1]")));
    }
    let total = instance.total_duration() as f64;
    // The nudge keeps products like 0.29 * 100 from flooring to 28.
    Ok((h * total + 1e-9).floor() as i64)
}

/// Earliness due date `d1` and tardiness due date `d2` of a common due window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonDueDates {
    pub h1: f64,
    pub h2: f64,
    pub d1: i64,
    pub d2: i64,
}

impl CommonDueDates {
    pub fn new(instance: &JobInstance, h1: f64, h2: f64) -> Result<Self> {
        if h1 > h2 {
            return Err(Error::Config(format!("h1 = {h1} must not exceed h2 = {h2}")));
        }
        Ok(CommonDueDates {
            h1,
            h2,
            d1: d_of_h(instance, h1)?,
            d2: d_of_h(instance, h2)?,
        })
    }

    /// Due dates given directly, for hand-built examples.
    pub fn fixed(d1: i64, d2: i64) -> Self {
        CommonDueDates {
            h1: f64::NAN,
            h2: f64::NAN,
            d1,
            d2,
        }
    }
}
