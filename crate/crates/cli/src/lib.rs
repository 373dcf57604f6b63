//! Command-line front end: problem files, solver runs, bisection and comparisons.

pub mod compare;
pub mod manifest;
pub mod problem;

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use geneig::feasible::ConvexSet;
use geneig::solvers::{bisect, estimate_alpha0, Algorithm, BisectConfig, BisectStatus, EarlyStop, SolverConfig};
use geneig::truss::{parse_grid_masses, Scale, Supports};
use geneig::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compare::{gaps_csv, run_all, table_csv, table_rows, RunSpec};
use crate::manifest::{RunManifest, RunRecord};
use crate::problem::{write_json, Problem};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "geneig", version, about = "Maximum generalized eigenvalue minimization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a grid ground-structure truss problem.
    GenTruss(GenTrussArgs),
    /// Run one first-order method.
    Solve(SolveArgs),
    /// Bracket the global optimum by bisection.
    Bisect(BisectArgs),
    /// Run several methods and tabulate gaps to a reference optimum.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct GenTrussArgs {
    /// Preset to start from: desk, desk-symmetric or large.
    #[arg(long, default_value = "desk")]
    pub instance: String,
    #[arg(long)]
    pub gx: Option<usize>,
    #[arg(long)]
    pub gy: Option<usize>,
    #[arg(long)]
    pub spacing: Option<f64>,
    /// `left`, `corners` or `i,j;i,j;...` (fully fixed grid nodes).
    #[arg(long)]
    pub supports: Option<String>,
    /// `i,j:kg;...`.
    #[arg(long)]
    pub masses: Option<String>,
    #[arg(long = "E")]
    pub young: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long = "V0")]
    pub v0: Option<f64>,
    #[arg(long)]
    pub xmin: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub problem: PathBuf,
    #[arg(long, default_value = "sapg")]
    pub algorithm: String,
    #[arg(long, default_value_t = 10.0)]
    pub mu0: f64,
    /// Defaults to a per-method estimate (see README).
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long, default_value_t = 3000)]
    pub iters: usize,
    /// `full` or the number of leading eigenpairs in the gradient.
    #[arg(long, default_value = "full")]
    pub inexact_l: String,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Design export; `.svg` renders the truss, anything else writes CSV.
    #[arg(long)]
    pub design: Vec<PathBuf>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Record wall-clock time in the trace (makes traces non-reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Stop when the best value stalls for 500 iterations.
    #[arg(long)]
    pub early_stop: bool,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BisectArgs {
    pub problem: PathBuf,
    #[arg(long, num_args = 2, value_names = ["LOWER", "UPPER"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 5000)]
    pub inner_iters: usize,
    #[arg(long, default_value_t = 200)]
    pub max_outer: usize,
    /// Stop with a report instead of treating an exhausted inner budget as infeasible.
    #[arg(long)]
    pub require_certificate: bool,
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Full result including every outer step.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub problem: PathBuf,
    /// Comma-separated `name` or `name:l` entries.
    #[arg(long, default_value = "sapg,spg,subgrad")]
    pub algorithms: String,
    #[arg(long, default_value_t = 3000)]
    pub iters: usize,
    #[arg(long, default_value_t = 10.0)]
    pub mu0: f64,
    /// `value` for every method or `name=value`; repeatable.
    #[arg(long)]
    pub alpha0: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
    /// Reference optimum; bisection is run when absent.
    #[arg(long, allow_negative_numbers = true)]
    pub f_star: Option<f64>,
    #[arg(long, default_value_t = 20000)]
    pub inner_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub bisect_tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn flag(flag: &str, e: Error) -> Self {
        Self::input(format!("invalid {flag}: {e}"))
    }

    fn io(path: &Path, e: impl fmt::Display) -> Self {
        Self::input(format!("{}: {e}", path.display()))
    }

    /// Configuration problems surface as input errors, numerical failures as solver errors.
    fn solver(e: Error) -> Self {
        let code = match e.root() {
            Error::InvalidConfig(_)
            | Error::InvalidL { .. }
            | Error::BracketInvalid(_)
            | Error::DimensionMismatch { .. } => EXIT_INPUT,
            _ => EXIT_SOLVER,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` and runs the command, printing results to stdout and
/// errors to stderr. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::GenTruss(a) => gen_truss(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Bisect(a) => cmd_bisect(&a),
        Command::Compare(a) => cmd_compare(&a),
    };
    match result {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn load(path: &Path) -> CliResult<Problem> {
    Problem::load(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn gen_truss(a: &GenTrussArgs) -> CliResult<Vec<String>> {
    let scale: Scale = a.instance.parse().map_err(|e| CliError::flag("--instance", e))?;
    let mut spec = scale.spec();
    if let Some(v) = a.gx {
        spec.gx = v;
    }
    if let Some(v) = a.gy {
        spec.gy = v;
    }
    if let Some(v) = a.spacing {
        spec.spacing = v;
    }
    if let Some(s) = &a.supports {
        spec.supports = s.parse::<Supports>().map_err(|e| CliError::flag("--supports", e))?;
    }
    if let Some(s) = &a.masses {
        let masses = parse_grid_masses(s, spec.gx, spec.gy).map_err(|e| CliError::flag("--masses", e))?;
        spec.masses = masses
            .iter()
            .map(|m| ((m.node % spec.gx, m.node / spec.gx), m.mass))
            .collect();
    }
    if let Some(v) = a.young {
        spec.young = v;
    }
    if let Some(v) = a.rho {
        spec.density = v;
    }
    if let Some(v) = a.v0 {
        spec.volume = v;
    }
    if let Some(v) = a.xmin {
        spec.x_min = v;
    }
    if spec.gx == 0 || spec.gy == 0 {
        return Err(CliError::input("invalid --gx/--gy: grid dimensions must be positive"));
    }
    // Reject masses left outside a resized grid before assembling.
    for &((i, j), _) in &spec.masses {
        if i >= spec.gx || j >= spec.gy {
            return Err(CliError::input(format!(
                "invalid --masses: node ({i},{j}) lies outside the {}x{} grid",
                spec.gx, spec.gy
            )));
        }
    }
    let problem = spec.build().map_err(|e| {
        let flag = match &e {
            Error::UnderConstrained { .. } => "--supports",
            Error::DofOutOfRange { what, .. } if what.starts_with("grid") => "--supports",
            Error::DofOutOfRange { .. } => "--masses",
            Error::InfeasibleSet { .. } | Error::InvalidSet(_) => "--V0/--xmin",
            Error::InvalidTruss(m) if m.starts_with("E ") => "--E",
            Error::InvalidTruss(m) if m.starts_with("rho") => "--rho",
            Error::InvalidTruss(m) if m.starts_with("mass") => "--masses",
            Error::InvalidTruss(m) if m.starts_with("spacing") => "--spacing",
            _ => "--gx/--gy",
        };
        CliError::flag(flag, e)
    })?;
    let members = problem.pencil.vars();
    let dofs = problem.pencil.order();
    let file = Problem {
        pencil: problem.pencil.clone(),
        set: problem.set.clone(),
        truss: Some(problem),
    };
    file.save(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    Ok(vec![format!("members={members},free_dofs={dofs},path={}", a.out.display())])
}

/// Stepsize used when `--alpha0` is absent: `1/M̂` from seeded sampling for
/// the smoothing methods, the unit Armijo trial for `spg-zc`, and a
/// hundredth of the set diameter for the normalized subgradient steps.
pub fn default_alpha0(problem: &Problem, algorithm: Algorithm, mu0: f64, seed: u64) -> geneig::Result<f64> {
    match algorithm {
        Algorithm::Spg | Algorithm::Sapg => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(estimate_alpha0(&problem.pencil, &problem.set, mu0, 32, &mut rng)?.alpha0)
        }
        Algorithm::SpgZc => Ok(1.0),
        Algorithm::Subgrad => {
            let d = problem.set.diameter_sq().sqrt();
            Ok(if d > 0.0 { 0.01 * d } else { 1e-3 })
        }
    }
}

fn parse_l(s: &str) -> CliResult<Option<usize>> {
    if s == "full" {
        return Ok(None);
    }
    s.parse::<usize>()
        .map(Some)
        .map_err(|_| CliError::input(format!("invalid --inexact-l: expected 'full' or an integer, found '{s}'")))
}

fn write_design(problem: &Problem, x: &[f64], path: &Path) -> CliResult<()> {
    let Some(truss) = &problem.truss else {
        return Err(CliError::input("invalid --design: design export requires a truss problem"));
    };
    let text = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg")) {
        truss.design_svg(x)
    } else {
        truss.design_csv(x)
    };
    write_text(path, &text)
}

pub fn cmd_solve(a: &SolveArgs) -> CliResult<Vec<String>> {
    let problem = load(&a.problem)?;
    let algorithm: Algorithm = a.algorithm.parse().map_err(|e| CliError::flag("--algorithm", e))?;
    if !a.design.is_empty() && problem.truss.is_none() {
        return Err(CliError::input("invalid --design: design export requires a truss problem"));
    }
    let alpha0 = match a.alpha0 {
        Some(v) => v,
        None => default_alpha0(&problem, algorithm, a.mu0, a.seed).map_err(CliError::solver)?,
    };
    let mut config = SolverConfig::new(algorithm, alpha0, a.iters).with_mu0(a.mu0);
    config.inexact_l = parse_l(&a.inexact_l)?;
    config.gamma = a.gamma;
    config.sigma = a.sigma;
    config.timing = a.timing;
    if a.early_stop {
        config.early_stop = Some(EarlyStop::default());
    }
    config.validate().map_err(CliError::solver)?;

    let start = Instant::now();
    let trace = geneig::solvers::solve(&problem.pencil, &problem.set, &config).map_err(CliError::solver)?;
    let seconds = start.elapsed().as_secs_f64();

    let mut manifest = RunManifest::new("solve", &a.problem, a.seed);
    if let Some(path) = &a.trace {
        write_text(path, &trace.to_csv())?;
        manifest.output(path);
    }
    for path in &a.design {
        write_design(&problem, &trace.best_x, path)?;
        manifest.output(path);
    }
    if let Some(path) = &a.manifest {
        manifest.runs.push(RunRecord {
            label: algorithm.to_string(),
            config: config.clone(),
            seconds,
            error: None,
        });
        manifest.write(path).map_err(|e| CliError::io(path, e))?;
    }
    Ok(vec![format!(
        "{},{:.16e},{},{:.3}",
        algorithm,
        trace.best_value(),
        trace.iterations(),
        seconds
    )])
}

fn bisect_config(interval: Option<(f64, f64)>, tol: f64, inner_iters: usize) -> BisectConfig {
    let mut config = BisectConfig {
        interval,
        tol,
        ..BisectConfig::default()
    };
    config.inner.max_iters = inner_iters;
    config
}

fn witness_csv(problem: &Problem, x: &[f64]) -> String {
    match &problem.truss {
        Some(t) => t.design_csv(x),
        None => {
            let mut s = String::from("index,x\n");
            for (i, v) in x.iter().enumerate() {
                s.push_str(&format!("{i},{v:.16e}\n"));
            }
            s
        }
    }
}

pub fn cmd_bisect(a: &BisectArgs) -> CliResult<Vec<String>> {
    let problem = load(&a.problem)?;
    let interval = a.interval.as_ref().map(|v| (v[0], v[1]));
    if let Some((lo, hi)) = interval {
        if !(lo < hi) {
            return Err(CliError::input(format!(
                "invalid --interval: BracketInvalid: lower {lo} must be below upper {hi}"
            )));
        }
    }
    let mut config = bisect_config(interval, a.tol, a.inner_iters);
    config.max_outer = a.max_outer;
    config.require_certificate = a.require_certificate;
    let result = bisect(&problem.pencil, &problem.set, &config).map_err(CliError::solver)?;
    if let Some(path) = &a.witness {
        write_text(path, &witness_csv(&problem, &result.witness))?;
    }
    if let Some(path) = &a.json {
        write_json(path, &result).map_err(|e| CliError::io(path, e))?;
    }
    let status = match result.status {
        BisectStatus::Converged => "converged".to_string(),
        BisectStatus::MaxOuter => "max-outer".to_string(),
        BisectStatus::InnerInconclusive { lambda } => format!("inner-inconclusive lambda={lambda:.16e}"),
    };
    Ok(vec![
        format!("[{:.16e}, {:.16e}]", result.lower, result.upper),
        format!("width={:.6e}", result.width()),
        format!("certified_lower={:.16e}", result.certified_lower),
        format!("witness_f={:.16e}", result.witness_value),
        format!("outer_steps={}", result.steps.len()),
        format!("status={status}"),
    ])
}

fn parse_alpha_overrides(values: &[String]) -> CliResult<(Option<f64>, HashMap<Algorithm, f64>)> {
    let mut all = None;
    let mut per = HashMap::new();
    for v in values {
        let bad = || CliError::input(format!("invalid --alpha0: '{v}'"));
        match v.split_once('=') {
            Some((name, val)) => {
                let alg: Algorithm = name.parse().map_err(|e| CliError::flag("--alpha0", e))?;
                per.insert(alg, val.parse::<f64>().map_err(|_| bad())?);
            }
            None => all = Some(v.parse::<f64>().map_err(|_| bad())?),
        }
    }
    Ok((all, per))
}

pub fn cmd_compare(a: &CompareArgs) -> CliResult<Vec<String>> {
    let problem = load(&a.problem)?;
    let specs = a
        .algorithms
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<RunSpec>())
        .collect::<geneig::Result<Vec<_>>>()
        .map_err(|e| CliError::flag("--algorithms", e))?;
    if specs.is_empty() {
        return Err(CliError::input("invalid --algorithms: empty list"));
    }
    let (alpha_all, alpha_per) = parse_alpha_overrides(&a.alpha0)?;
    let mut runs = Vec::new();
    for spec in &specs {
        let alpha0 = match alpha_per.get(&spec.algorithm).copied().or(alpha_all) {
            Some(v) => v,
            None => default_alpha0(&problem, spec.algorithm, a.mu0, a.seed).map_err(CliError::solver)?,
        };
        let mut config = SolverConfig::new(spec.algorithm, alpha0, a.iters).with_mu0(a.mu0);
        config.inexact_l = spec.inexact_l;
        config.timing = a.timing;
        config.validate().map_err(CliError::solver)?;
        runs.push((spec.label(), config));
    }
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let mut manifest = RunManifest::new("compare", &a.problem, a.seed);

    let f_star = match a.f_star {
        Some(v) => v,
        None => {
            let result = bisect(&problem.pencil, &problem.set, &bisect_config(None, a.bisect_tol, a.inner_iters))
                .map_err(CliError::solver)?;
            let path = a.out.join("bisect.json");
            write_json(&path, &result).map_err(|e| CliError::io(&path, e))?;
            manifest.output(&path);
            result.lower
        }
    };

    let outcomes = run_all(&problem, runs);
    let mut lines = Vec::new();
    let mut failures = 0;
    for o in &outcomes {
        manifest.runs.push(RunRecord {
            label: o.label.clone(),
            config: o.config.clone(),
            seconds: o.seconds,
            error: o.trace.as_ref().err().map(|e| e.to_string()),
        });
        match &o.trace {
            Ok(trace) => {
                let path = a.out.join(format!("trace_{}.csv", o.label));
                write_text(&path, &trace.to_csv())?;
                manifest.output(&path);
            }
            Err(e) => {
                failures += 1;
                eprintln!("error: {}: {e}", o.label);
            }
        }
    }
    let rows = table_rows(&problem, &outcomes, f_star).map_err(CliError::solver)?;
    let table = table_csv(&rows);
    for (path, text) in [("table.csv", table.clone()), ("gaps.csv", gaps_csv(&outcomes, f_star))] {
        let path = a.out.join(path);
        write_text(&path, &text)?;
        manifest.output(&path);
    }
    let manifest_path = a.out.join("manifest.json");
    manifest.output(&manifest_path);
    manifest.write(&manifest_path).map_err(|e| CliError::io(&manifest_path, e))?;

    lines.push(format!("f_star={f_star:.16e}"));
    lines.extend(table.lines().map(str::to_string));
    if failures > 0 {
        for line in &lines {
            println!("{line}");
        }
        return Err(CliError {
            code: EXIT_SOLVER,
            message: format!("{failures} of {} runs failed", outcomes.len()),
        });
    }
    Ok(lines)
}
