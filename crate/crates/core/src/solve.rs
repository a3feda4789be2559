//! End-to-end pipelines that pick the model for an instance's problem class.

use std::time::Instant;

use crate::diagram::{compile_exact, compile_relaxed, shortest_path, BuildOptions};
use crate::error::{Error, Result};
use crate::instance::{CommonDueDates, JobInstance, ProblemKind};
use crate::lagrangian::{self, BoundResult, DualVector, SubgradientConfig};
use crate::model::{DpModel, EtModel, TardinessModel, TspModel};

/// Operation to run against whichever model fits the instance.
pub trait ModelVisitor {
    type Output;
    fn visit<M: DpModel>(self, model: &M) -> Result<Self::Output>;
}

/// Builds the model for `inst` and hands it to `visitor`. Common-due-date
/// instances need `dues`.
pub fn with_model<V: ModelVisitor>(
    inst: &JobInstance,
    dues: Option<CommonDueDates>,
    visitor: V,
) -> Result<V::Output> {
    match inst.kind {
        ProblemKind::TardinessTW | ProblemKind::PositionDependent | ProblemKind::StartTimeDependent => {
            visitor.visit(&TardinessModel::new(inst)?)
        }
        ProblemKind::CommonDueET => {
            let dues = dues.ok_or_else(|| {
                Error::Config("common-due-date instances need h1 and h2".into())
            })?;
            visitor.visit(&EtModel::new(inst, dues)?)
        }
        ProblemKind::TspSeqDep => visitor.visit(&TspModel::new(inst)?),
    }
}

struct Bound<'a> {
    build: &'a BuildOptions,
    config: &'a SubgradientConfig,
}

impl ModelVisitor for Bound<'_> {
    type Output = BoundResult;
    fn visit<M: DpModel>(self, model: &M) -> Result<BoundResult> {
        let started = Instant::now();
        let diagram = compile_relaxed(model, self.build)?;
        let build_time = started.elapsed();
        let mut result = lagrangian::solve_dual(&diagram, self.config)?;
        result.build_time = build_time;
        Ok(result)
    }
}

/// Builds the relaxed diagram and solves the Lagrangian dual over it.
pub fn compute_bound(
    inst: &JobInstance,
    dues: Option<CommonDueDates>,
    build: &BuildOptions,
    config: &SubgradientConfig,
) -> Result<BoundResult> {
    with_model(inst, dues, Bound { build, config })
}

/// θ(0) on the relaxed diagram, with its label sequence and width.
#[derive(Debug, Clone)]
pub struct PlainBound {
    pub value: f64,
    pub labels: Vec<usize>,
    pub max_width: usize,
}

struct Plain<'a>(&'a BuildOptions);

impl ModelVisitor for Plain<'_> {
    type Output = PlainBound;
    fn visit<M: DpModel>(self, model: &M) -> Result<PlainBound> {
        let d = compile_relaxed(model, self.0)?;
        let (value, labels) = lagrangian::theta(&d, &DualVector::zeros(d.num_jobs()))?;
        Ok(PlainBound {
            value,
            labels,
            max_width: d.max_width(),
        })
    }
}

pub fn plain_bound(
    inst: &JobInstance,
    dues: Option<CommonDueDates>,
    build: &BuildOptions,
) -> Result<PlainBound> {
    with_model(inst, dues, Plain(build))
}

/// Optimum of the exact diagram.
#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub optimum: i64,
    pub sequence: Vec<usize>,
    pub max_width: usize,
    pub nodes: usize,
}

struct Exact<'a>(&'a BuildOptions);

impl ModelVisitor for Exact<'_> {
    type Output = ExactSolution;
    fn visit<M: DpModel>(self, model: &M) -> Result<ExactSolution> {
        let d = compile_exact(model, self.0)?;
        let sp = shortest_path(&d, |a| a.cost as f64)?;
        Ok(ExactSolution {
            optimum: sp.length as i64,
            sequence: sp.labels,
            max_width: d.max_width(),
            nodes: d.num_nodes(),
        })
    }
}

pub fn exact_optimum(
    inst: &JobInstance,
    dues: Option<CommonDueDates>,
    build: &BuildOptions,
) -> Result<ExactSolution> {
    with_model(inst, dues, Exact(build))
}
