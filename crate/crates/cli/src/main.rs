//! `seqbound`: lower bounds for single-machine sequencing problems.
//!
//! Exit codes: 0 success, 1 benchmark run with failed instances, 2 usage,
//! 3 unreadable or malformed input, 4 node budget or enumeration cap
//! exceeded, 5 internal failure, 6 the supplied theta* is not an upper bound.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use seqbound_core::diagram::{compile_exact, compile_relaxed, BuildOptions, DEFAULT_NODE_BUDGET};
use seqbound_core::harness::{run_benchmark, summarize, write_report, BenchConfig};
use seqbound_core::instance::{CommonDueDates, JobInstance, ProblemKind};
use seqbound_core::io::{parse_bf, parse_cpw, read_canonical, read_targets, to_json, InstanceSet};
use seqbound_core::lagrangian::{write_trace, Certificate, SubgradientConfig};
use seqbound_core::model::DpModel;
use seqbound_core::oracle::brute_force_capped;
use seqbound_core::solve::{compute_bound, exact_optimum, plain_bound, with_model, ModelVisitor};
use seqbound_core::Error;

#[derive(Parser)]
#[command(name = "seqbound", version, about = "Decision-diagram Lagrangian bounds for job sequencing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower bound from the relaxed diagram and the Lagrangian dual.
    Bound(BoundArgs),
    /// Optimum from the exact diagram.
    Exact(ExactArgs),
    /// Optimum by enumerating every sequence.
    Oracle(OracleArgs),
    /// Bound every instance of a benchmark set and write a CSV report.
    Bench(BenchArgs),
    /// Write one instance in the canonical JSON format.
    Convert(ConvertArgs),
    /// Write a diagram in the line-oriented debug format.
    Dump(DumpArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Canonical JSON, one instance.
    Json,
    /// OR-Library common-due-date file (sch*.txt).
    Bf,
    /// OR-Library weighted tardiness file (wt*.txt).
    Cpw,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file; relative paths that do not exist are looked up in the
    /// data directory.
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// 1-based instance number inside a multi-instance file.
    #[arg(long)]
    index: Option<usize>,
    /// Jobs per instance; required for CPW files.
    #[arg(long)]
    jobs: Option<usize>,
    /// Expected problem class; the run stops if the instance differs.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<ProblemKind>,
    #[command(flatten)]
    due: DueArgs,
    #[arg(long, env = "SEQBOUND_DATA_DIR", hide_env_values = true)]
    data_dir: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct DueArgs {
    /// Fraction of the total duration giving the due window start.
    #[arg(long)]
    h1: Option<f64>,
    /// Fraction of the total duration giving the due window end.
    #[arg(long)]
    h2: Option<f64>,
}

#[derive(Args, Clone, Copy)]
struct BuildArgs {
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: usize,
    /// Merge nodes whose keys fall in the same bucket of this size. Keeps
    /// the bound valid but disables optimality certificates.
    #[arg(long)]
    bucket: Option<i64>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Known upper bound used by the Polyak step; required unless --iters 0.
    #[arg(long)]
    theta_star: Option<f64>,
    /// Subgradient iterations; 0 reports the plain relaxed bound.
    #[arg(long, default_value_t = 50_000)]
    iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    step_scale: f64,
    #[command(flatten)]
    build: BuildArgs,
    /// Write the iteration trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Largest job count to enumerate.
    #[arg(long, default_value_t = seqbound_core::oracle::DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark file in OR-Library format.
    #[arg(long)]
    set: PathBuf,
    #[arg(long, value_enum)]
    format: Format,
    /// Jobs per instance; required for CPW files.
    #[arg(long)]
    jobs: Option<usize>,
    /// Target file: `id target [reference_bound reference_width]` per line.
    #[arg(long)]
    targets: PathBuf,
    #[command(flatten)]
    due: DueArgs,
    #[arg(long, default_value_t = 50_000)]
    iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    step_scale: f64,
    #[command(flatten)]
    build: BuildArgs,
    /// Report path; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parallel workers; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Leave the timing columns empty so reports are reproducible.
    #[arg(long)]
    no_timings: bool,
    /// Allow sets with 100 or more jobs per instance.
    #[arg(long)]
    long: bool,
    #[arg(long, env = "SEQBOUND_DATA_DIR", hide_env_values = true)]
    data_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Output path; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Dump the exact diagram instead of the relaxed one.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    build: BuildArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<ProblemKind, String> {
    ProblemKind::from_short_name(s).ok_or_else(|| format!("unknown kind `{s}`; expected tw, et, pos, start or tsp"))
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config(_) => 2,
            Error::MalformedInstance(_) | Error::Parse { .. } | Error::Json(_) | Error::Io(_) | Error::Domain { .. } => 3,
            Error::BudgetExceeded { .. } | Error::CapExceeded { .. } => 4,
            Error::InvalidBound { .. } => 6,
            Error::Structural(_) | Error::InfeasibleControl { .. } => 5,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn resolve(path: &Path, data_dir: Option<&Path>) -> PathBuf {
    match data_dir {
        Some(dir) if path.is_relative() && !path.exists() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn read_input(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: 3,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn load_set(path: &Path, format: Format, jobs: Option<usize>) -> Outcome<InstanceSet> {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("set").to_string();
    let set = match format {
        Format::Bf => parse_bf(&read_input(path)?, &name)?,
        Format::Cpw => {
            let n = jobs.ok_or_else(|| Failure::usage("--jobs is required for CPW files"))?;
            parse_cpw(&read_input(path)?, n, &name)?
        }
        Format::Json => {
            let inst = read_canonical(path)?;
            InstanceSet {
                name,
                instances: vec![(1, inst)],
                provenance: path.display().to_string(),
            }
        }
    };
    Ok(set)
}

fn load_instance(args: &InstanceArgs) -> Outcome<JobInstance> {
    let path = resolve(&args.instance, args.data_dir.as_deref());
    let inst = if args.format == Format::Json {
        if !path.exists() {
            return Err(Failure {
                code: 3,
                message: format!("cannot read {}: no such file", path.display()),
            });
        }
        read_canonical(&path)?
    } else {
        let set = load_set(&path, args.format, args.jobs)?;
        let index = match (args.index, set.len()) {
            (Some(i), _) => i,
            (None, 1) => set.instances[0].0,
            (None, k) => return Err(Failure::usage(format!("the file holds {k} instances; pick one with --index"))),
        };
        set.get(index)
            .cloned()
            .ok_or_else(|| Failure::usage(format!("no instance {index} in {}", path.display())))?
    };
    if let Some(kind) = args.kind {
        if kind != inst.kind {
            return Err(Failure::usage(format!(
                "--kind {} but the instance is {}",
                kind.short_name(),
                inst.kind.short_name()
            )));
        }
    }
    Ok(inst)
}

fn due_dates(inst: &JobInstance, due: DueArgs) -> Outcome<Option<CommonDueDates>> {
    match (inst.kind, due.h1, due.h2) {
        (ProblemKind::CommonDueET, Some(h1), Some(h2)) => Ok(Some(CommonDueDates::new(inst, h1, h2)?)),
        (ProblemKind::CommonDueET, _, _) => Err(Failure::usage("common-due-date instances need --h1 and --h2")),
        (_, None, None) => Ok(None),
        _ => Err(Failure::usage("--h1 and --h2 apply only to common-due-date instances")),
    }
}

fn build_options(b: BuildArgs) -> Outcome<BuildOptions> {
    if matches!(b.bucket, Some(s) if s < 1) {
        return Err(Failure::usage("--bucket must be at least 1"));
    }
    Ok(BuildOptions {
        node_budget: b.node_budget,
        bucket: b.bucket,
    })
}

fn output(path: Option<&Path>) -> Outcome<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn one_based(seq: &[usize]) -> String {
    seq.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_bound(args: BoundArgs) -> Outcome {
    if args.iters > 0 && args.theta_star.is_none() {
        return Err(Failure::usage("--theta-star is required unless --iters 0"));
    }
    let build = build_options(args.build)?;
    let inst = load_instance(&args.input)?;
    let dues = due_dates(&inst, args.input.due)?;
    let mut out = io::stdout().lock();

    if args.iters == 0 {
        let plain = plain_bound(&inst, dues, &build)?;
        writeln!(out, "theta(0): {}", plain.value)?;
        writeln!(out, "bound: {}", seqbound_core::lagrangian::integral_bound(plain.value))?;
        writeln!(out, "max_width: {}", plain.max_width)?;
        writeln!(out, "path: {}", one_based(&plain.labels))?;
        return Ok(());
    }

    let theta_star = args.theta_star.expect("checked above");
    let config = SubgradientConfig {
        theta_star,
        max_iters: args.iters,
        epsilon: args.epsilon,
        step_scale: args.step_scale,
        record_trace: args.trace.is_some(),
    };
    config.validate()?;
    let res = compute_bound(&inst, dues, &build, &config)?;
    let bound = res.integral_bound();
    let gap = theta_star - bound as f64;
    writeln!(out, "bound: {bound}")?;
    writeln!(out, "theta: {}", res.best_bound)?;
    writeln!(out, "theta_star: {theta_star}")?;
    writeln!(
        out,
        "gap: {gap} ({:.3}%)",
        if theta_star == 0.0 { 0.0 } else { 100.0 * gap / theta_star }
    )?;
    writeln!(out, "max_width: {}", res.max_width)?;
    writeln!(out, "iterations: {}", res.iterations_run)?;
    if res.certificate == Certificate::FeasiblePathOptimal {
        let seq = res.certified_sequence.as_deref().unwrap_or_default();
        writeln!(out, "certificate: optimal sequence {}", one_based(seq))?;
    }
    writeln!(out, "build_s: {:.3}", res.build_time.as_secs_f64())?;
    writeln!(out, "subgr_s: {:.3}", res.subgradient_time.as_secs_f64())?;
    if let (Some(path), Some(trace)) = (&args.trace, &res.trace) {
        write_trace(trace, BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn cmd_exact(args: ExactArgs) -> Outcome {
    let build = BuildOptions {
        node_budget: args.node_budget,
        bucket: None,
    };
    let inst = load_instance(&args.input)?;
    let dues = due_dates(&inst, args.input.due)?;
    let sol = exact_optimum(&inst, dues, &build)?;
    let mut out = io::stdout().lock();
    writeln!(out, "optimum: {}", sol.optimum)?;
    writeln!(out, "sequence: {}", one_based(&sol.sequence))?;
    writeln!(out, "max_width: {}", sol.max_width)?;
    writeln!(out, "nodes: {}", sol.nodes)?;
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Outcome {
    let inst = load_instance(&args.input)?;
    let dues = due_dates(&inst, args.input.due)?;
    let res = brute_force_capped(&inst, dues, args.cap)?;
    let mut out = io::stdout().lock();
    writeln!(out, "optimum: {}", res.optimum)?;
    writeln!(out, "sequence: {}", one_based(&res.permutation))?;
    writeln!(out, "enumerated: {}", res.enumerated)?;
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Outcome {
    if args.format == Format::Cpw && args.jobs.is_none() {
        return Err(Failure::usage("--jobs is required for CPW files"));
    }
    let due_fractions = match (args.due.h1, args.due.h2) {
        (Some(h1), Some(h2)) => Some((h1, h2)),
        (None, None) => None,
        _ => return Err(Failure::usage("give both --h1 and --h2")),
    };
    if args.format == Format::Bf && due_fractions.is_none() {
        return Err(Failure::usage("common-due-date sets need --h1 and --h2"));
    }
    let build = build_options(args.build)?;
    let data_dir = args.data_dir.as_deref();
    let set = load_set(&resolve(&args.set, data_dir), args.format, args.jobs)?;
    let targets = read_targets(&resolve(&args.targets, data_dir))?;
    if !args.long && set.instances.iter().any(|(_, i)| i.n >= 100) {
        return Err(Failure::usage("sets with 100 or more jobs run for hours; pass --long to proceed"));
    }
    let config = BenchConfig {
        due_fractions,
        build,
        max_iters: args.iters,
        epsilon: args.epsilon,
        step_scale: args.step_scale,
        workers: args.workers,
    };
    let rows = run_benchmark(&set, &targets, &config)?;
    let mut report = output(args.out.as_deref())?;
    write_report(&rows, !args.no_timings, &mut report)?;
    report.flush()?;
    drop(report);

    let s = summarize(&rows);
    let mut lines = vec![
        format!("instances: {}", s.rows),
        format!("failures: {}", s.failures),
        format!("certified: {}", s.certified),
        format!("mean_percent_gap: {:.3}", s.mean_percent_gap),
        format!("max_percent_gap: {:.3}", s.max_percent_gap),
    ];
    for (id, want, got) in &s.width_deviations {
        lines.push(format!("width: instance {id} has {got}, reference {want}"));
    }
    for r in rows.iter().filter(|r| r.error.is_some()) {
        lines.push(format!("failed: instance {}: {}", r.instance, r.error.as_deref().unwrap_or_default()));
    }
    // The summary goes to stdout only when the report does not.
    let text = lines.join("\n") + "\n";
    if args.out.is_some() {
        io::stdout().lock().write_all(text.as_bytes())?;
    } else {
        io::stderr().lock().write_all(text.as_bytes())?;
    }
    if s.failures > 0 {
        return Err(Failure {
            code: 1,
            message: format!("{} instance(s) failed", s.failures),
        });
    }
    Ok(())
}

fn cmd_convert(args: ConvertArgs) -> Outcome {
    let inst = load_instance(&args.input)?;
    let mut out = output(args.out.as_deref())?;
    writeln!(out, "{}", to_json(&inst)?)?;
    out.flush()?;
    Ok(())
}

struct Dump {
    exact: bool,
    build: BuildOptions,
    out: Box<dyn Write>,
}

impl ModelVisitor for Dump {
    type Output = ();
    fn visit<M: DpModel>(mut self, model: &M) -> seqbound_core::Result<()> {
        let d = if self.exact {
            compile_exact(model, &self.build)?
        } else {
            compile_relaxed(model, &self.build)?
        };
        d.dump(model, &mut self.out)?;
        self.out.flush()?;
        Ok(())
    }
}

fn cmd_dump(args: DumpArgs) -> Outcome {
    let build = build_options(args.build)?;
    let inst = load_instance(&args.input)?;
    let dues = due_dates(&inst, args.input.due)?;
    let out = output(args.out.as_deref())?;
    with_model(
        &inst,
        dues,
        Dump {
            exact: args.exact,
            build,
            out,
        },
    )?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound(a) => cmd_bound(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Dump(a) => cmd_dump(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("seqbound: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
