//! Lagrangian dual of the all-different constraint over a relaxed diagram.
//!
//! Dualizing adds `λ_j` to every arc labeled `j` and subtracts `Σ λ` from the
//! arcs leaving the root, so every root-to-terminus path with labels `x` has
//! length `f(x) + λᵀg(x)` where `g_j(x)` counts the occurrences of `j` in `x`
//! minus one. The shortest such path gives `θ(λ)`, a lower bound for every
//! `λ`; subgradient ascent with Polyak steps pushes it up.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use crate::diagram::{Arc, LayeredDiagram, PathSolver};
use crate::error::{Error, Result};

/// Lagrange multipliers, one per job.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector(pub Vec<f64>);

impl DualVector {
    pub fn zeros(n: usize) -> Self {
        DualVector(vec![0.0; n])
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubgradientConfig {
    /// Upper bound on the dual optimum, usually a known solution value.
    pub theta_star: f64,
    pub max_iters: usize,
    /// Stop once `theta_star - best_bound` is at most this.
    pub epsilon: f64,
    /// Multiplier on the Polyak step.
    pub step_scale: f64,
    pub record_trace: bool,
}

impl SubgradientConfig {
    pub fn new(theta_star: f64) -> Self {
        SubgradientConfig {
            theta_star,
            max_iters: 50_000,
            epsilon: 1e-6,
            step_scale: 1.0,
            record_trace: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::Config("epsilon must be nonnegative".into()));
        }
        if self.step_scale.is_nan() || self.step_scale <= 0.0 {
            return Err(Error::Config("step_scale must be positive".into()));
        }
        if !self.theta_star.is_finite() {
            return Err(Error::Config("theta* must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    None,
    /// Some θ(λ) was attained by a permutation, whose cost is therefore optimal.
    FeasiblePathOptimal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iter: usize,
    pub theta: f64,
    pub best_bound: f64,
}

#[derive(Debug, Clone)]
pub struct BoundResult {
    pub best_bound: f64,
    pub best_lambda: DualVector,
    /// θ evaluations performed.
    pub iterations_run: usize,
    pub certificate: Certificate,
    /// The optimal sequence when certified.
    pub certified_sequence: Option<Vec<usize>>,
    pub max_width: usize,
    pub build_time: Duration,
    pub subgradient_time: Duration,
    pub trace: Option<Vec<TracePoint>>,
}

impl BoundResult {
    /// Integral lower bound for integral data.
    pub fn integral_bound(&self) -> i64 {
        integral_bound(self.best_bound)
    }
}

/// `⌈bound − 10⁻⁶⌉`.
pub fn integral_bound(bound: f64) -> i64 {
    (bound - 1e-6).ceil() as i64
}

/// Cost of `arc` under multipliers `lambda`.
#[inline]
pub fn dualized_cost(arc: &Arc, from_root: bool, lambda: &DualVector) -> f64 {
    let c = arc.cost as f64 + lambda.0[arc.label as usize];
    if from_root {
        c - lambda.total()
    } else {
        c
    }
}

/// `g_j(x)` = occurrences of `j` in `x`, minus one.
pub fn subgradient(labels: &[usize], n: usize) -> Vec<i64> {
    let mut g = vec![-1; n];
    for &x in labels {
        g[x] += 1;
    }
    g
}

/// Polyak step `(θ* − θ_k) / ‖g‖²`, scaled. `g` must be nonzero; a zero
/// subgradient means the path is a permutation and the caller should stop.
pub fn polyak_step(theta_star: f64, theta: f64, g: &[i64], step_scale: f64) -> Result<f64> {
    let norm2: i64 = g.iter().map(|v| v * v).sum();
    assert!(norm2 > 0, "Polyak step needs a nonzero subgradient");
    let gap = theta_star - theta;
    if gap < -1e-9 * theta_star.abs().max(1.0) {
        return Err(Error::InvalidBound {
            theta_star,
            theta,
        });
    }
    Ok(gap.max(0.0) / norm2 as f64 * step_scale)
}

/// Evaluates θ(λ) repeatedly on one diagram without reallocating.
pub struct ThetaEvaluator<'d, S> {
    diagram: &'d LayeredDiagram<S>,
    solver: PathSolver,
}

impl<'d, S> ThetaEvaluator<'d, S> {
    pub fn new(diagram: &'d LayeredDiagram<S>) -> Self {
        ThetaEvaluator {
            diagram,
            solver: PathSolver::new(),
        }
    }

    /// θ(λ), writing the minimizing label sequence into `labels`.
    pub fn eval(&mut self, lambda: &DualVector, labels: &mut Vec<usize>) -> Result<f64> {
        let lam = &lambda.0;
        let to_go = self
            .solver
            .solve(self.diagram, |a| a.cost as f64 + lam[a.label as usize])?;
        self.solver.labels(self.diagram, labels);
        // The root offset is common to every path.
        Ok(to_go - lambda.total())
    }
}

/// θ(λ) and the label sequence of a minimizing path.
pub fn theta<S>(diagram: &LayeredDiagram<S>, lambda: &DualVector) -> Result<(f64, Vec<usize>)> {
    let mut labels = Vec::new();
    let v = ThetaEvaluator::new(diagram).eval(lambda, &mut labels)?;
    Ok((v, labels))
}

/// Subgradient ascent from `λ = 0` with Polyak steps.
///
/// Stops after `max_iters` evaluations, when a minimizing path is a
/// permutation (zero subgradient), or when `θ* − best ≤ ε`. A permutation
/// path certifies optimality only on diagrams whose keys are exact.
pub fn solve_dual<S>(diagram: &LayeredDiagram<S>, config: &SubgradientConfig) -> Result<BoundResult> {
    config.validate()?;
    let started = Instant::now();
    let n = diagram.num_jobs();
    let mut eval = ThetaEvaluator::new(diagram);
    let mut lambda = DualVector::zeros(n);
    let mut best_lambda = lambda.clone();
    let mut best = f64::NEG_INFINITY;
    let mut labels = Vec::with_capacity(n);
    let mut trace = config.record_trace.then(Vec::new);
    let mut certificate = Certificate::None;
    let mut certified_sequence = None;
    let mut iterations_run = 0;

    for k in 0..config.max_iters {
        let theta = eval.eval(&lambda, &mut labels)?;
        iterations_run = k + 1;
        if theta - config.theta_star > 1e-9 * config.theta_star.abs().max(1.0) {
            return Err(Error::InvalidBound {
                theta_star: config.theta_star,
                theta,
            });
        }
        if theta > best {
            best = theta;
            best_lambda.clone_from(&lambda);
        }
        let g = subgradient(&labels, n);
        let feasible = g.iter().all(|&v| v == 0);
        if feasible && diagram.keys_exact() {
            // The path is a permutation whose arc costs are exact, so its
            // length is a feasible objective value that meets the bound.
            let cost = diagram
                .follow(&labels)
                .ok_or_else(|| Error::Structural("minimizing path cannot be replayed".into()))?;
            best = cost as f64;
            best_lambda.clone_from(&lambda);
            certificate = Certificate::FeasiblePathOptimal;
            certified_sequence = Some(labels.clone());
        }
        if let Some(t) = trace.as_mut() {
            t.push(TracePoint {
                iter: k,
                theta,
                best_bound: best,
            });
        }
        if feasible || config.theta_star - best <= config.epsilon {
            break;
        }
        let sigma = polyak_step(config.theta_star, theta, &g, config.step_scale)?;
        for (l, gj) in lambda.0.iter_mut().zip(&g) {
            *l += sigma * *gj as f64;
        }
    }

    Ok(BoundResult {
        best_bound: best,
        best_lambda,
        iterations_run,
        certificate,
        certified_sequence,
        max_width: diagram.max_width(),
        build_time: Duration::ZERO,
        subgradient_time: started.elapsed(),
        trace,
    })
}

/// Writes a trace as CSV with header `iter,theta,best_bound`.
pub fn write_trace<W: Write>(trace: &[TracePoint], mut out: W) -> io::Result<()> {
    writeln!(out, "iter,theta,best_bound")?;
    for p in trace {
        writeln!(out, "{},{},{}", p.iter, p.theta, p.best_bound)?;
    }
    Ok(())
}
