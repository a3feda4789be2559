//! Benchmark harness: bound every instance of a set against its target and
//! report the gaps.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::diagram::BuildOptions;
use crate::error::{Error, Result};
use crate::instance::CommonDueDates;
use crate::io::{InstanceSet, Targets};
use crate::lagrangian::{Certificate, SubgradientConfig};
use crate::solve::compute_bound;

pub const REPORT_HEADER: &str = "instance,target,bound,gap,percent_gap,max_width,build_s,subgr_s";

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// `(h1, h2)` for common-due-date sets.
    pub due_fractions: Option<(f64, f64)>,
    pub build: BuildOptions,
    pub max_iters: usize,
    pub epsilon: f64,
    pub step_scale: f64,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        let sub = SubgradientConfig::new(0.0);
        BenchConfig {
            due_fractions: None,
            build: BuildOptions::default(),
            max_iters: sub.max_iters,
            epsilon: sub.epsilon,
            step_scale: sub.step_scale,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub instance: usize,
    pub target: Option<i64>,
    pub bound: Option<i64>,
    pub max_width: Option<usize>,
    pub build_s: f64,
    pub subgr_s: f64,
    pub iterations: usize,
    pub certified: bool,
    pub reference_bound: Option<i64>,
    pub reference_width: Option<usize>,
    pub error: Option<String>,
}

impl ReportRow {
    pub fn gap(&self) -> Option<i64> {
        Some(self.target? - self.bound?)
    }

    /// Gap as a percentage of the target.
    pub fn percent_gap(&self) -> Option<f64> {
        let target = self.target?;
        let gap = self.gap()?;
        Some(if target == 0 {
            0.0
        } else {
            100.0 * gap as f64 / target as f64
        })
    }

    fn failed(instance: usize, target: Option<i64>, message: String) -> Self {
        ReportRow {
            instance,
            target,
            bound: None,
            max_width: None,
            build_s: 0.0,
            subgr_s: 0.0,
            iterations: 0,
            certified: false,
            reference_bound: None,
            reference_width: None,
            error: Some(message),
        }
    }
}

/// Bounds every instance in `set` that has a target. Instances that fail
/// produce a row carrying the error; the run continues.
pub fn run_benchmark(set: &InstanceSet, targets: &Targets, config: &BenchConfig) -> Result<Vec<ReportRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start workers: {e}")))?;

    let rows = pool.install(|| {
        set.instances
            .par_iter()
            .map(|(id, inst)| {
                let Some(target) = targets.get(id) else {
                    return ReportRow::failed(*id, None, "no target for this instance".into());
                };
                let run = || -> Result<ReportRow> {
                    let dues = match config.due_fractions {
                        Some((h1, h2)) => Some(CommonDueDates::new(inst, h1, h2)?),
                        None => None,
                    };
                    let sub = SubgradientConfig {
                        theta_star: target.value as f64,
                        max_iters: config.max_iters,
                        epsilon: config.epsilon,
                        step_scale: config.step_scale,
                        record_trace: false,
                    };
                    let res = compute_bound(inst, dues, &config.build, &sub)?;
                    Ok(ReportRow {
                        instance: *id,
                        target: Some(target.value),
                        bound: Some(res.integral_bound()),
                        max_width: Some(res.max_width),
                        build_s: res.build_time.as_secs_f64(),
                        subgr_s: res.subgradient_time.as_secs_f64(),
                        iterations: res.iterations_run,
                        certified: res.certificate == Certificate::FeasiblePathOptimal,
                        reference_bound: target.reference_bound,
                        reference_width: target.reference_width,
                        error: None,
                    })
                };
                run().unwrap_or_else(|e| ReportRow::failed(*id, Some(target.value), e.to_string()))
            })
            .collect::<Vec<_>>()
    });
    Ok(rows)
}

/// Writes the report CSV. With `timings` off the time columns are left empty
/// so that repeated runs produce identical files.
pub fn write_report<W: Write>(rows: &[ReportRow], timings: bool, mut out: W) -> io::Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in rows {
        let (build, subgr) = if timings && r.error.is_none() {
            (format!("{:.3}", r.build_s), format!("{:.3}", r.subgr_s))
        } else {
            (String::new(), String::new())
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.instance,
            opt(r.target.map(|v| v.to_string())),
            opt(r.bound.map(|v| v.to_string())),
            opt(r.gap().map(|v| v.to_string())),
            opt(r.percent_gap().map(|v| format!("{v:.3}"))),
            opt(r.max_width.map(|v| v.to_string())),
            build,
            subgr,
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub rows: usize,
    pub failures: usize,
    pub certified: usize,
    pub mean_percent_gap: f64,
    pub max_percent_gap: f64,
    /// `(instance, reference, observed)` where the width differs from the
    /// reference width.
    pub width_deviations: Vec<(usize, usize, usize)>,
}

pub fn summarize(rows: &[ReportRow]) -> Summary {
    let gaps: Vec<f64> = rows.iter().filter_map(ReportRow::percent_gap).collect();
    Summary {
        rows: rows.len(),
        failures: rows.iter().filter(|r| r.error.is_some()).count(),
        certified: rows.iter().filter(|r| r.certified).count(),
        mean_percent_gap: if gaps.is_empty() {
            0.0
        } else {
            gaps.iter().sum::<f64>() / gaps.len() as f64
        },
        max_percent_gap: gaps.iter().copied().fold(0.0, f64::max),
        width_deviations: rows
            .iter()
            .filter_map(|r| match (r.reference_width, r.max_width) {
                (Some(want), Some(got)) if want != got => Some((r.instance, want, got)),
                _ => None,
            })
            .collect(),
    }
}
