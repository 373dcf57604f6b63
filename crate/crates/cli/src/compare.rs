use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use geneig::solvers::{solve, Algorithm, IterationTrace, SolverConfig};
use geneig::{Error, Result};

use crate::problem::Problem;

/// One entry of `--algorithms`: `name` or `name:l` for the `l`-term gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub inexact_l: Option<usize>,
}

impl RunSpec {
    pub fn label(&self) -> String {
        match self.inexact_l {
            Some(l) => format!("{}-l{l}", self.algorithm),
            None => self.algorithm.to_string(),
        }
    }
}

impl FromStr for RunSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, l) = match s.split_once(':') {
            Some((name, l)) => {
                let l = l
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad inexact l in '{s}'")))?;
                (name, Some(l))
            }
            None => (s, None),
        };
        Ok(Self {
            algorithm: name.trim().parse()?,
            inexact_l: l,
        })
    }
}

pub struct RunOutcome {
    pub label: String,
    pub config: SolverConfig,
    pub trace: Result<IterationTrace>,
    pub seconds: f64,
}

/// Worker count: `GENEIG_THREADS` if set, else the number of logical cores,
/// never more than the number of jobs.
pub fn worker_count(jobs: usize) -> usize {
    let cap = std::env::var("GENEIG_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    cap.min(jobs).max(1)
}

/// Runs independent solves on a small thread pool; results keep input order.
pub fn run_all(problem: &Problem, runs: Vec<(String, SolverConfig)>) -> Vec<RunOutcome> {
    let jobs = runs.len();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<RunOutcome>>> = Mutex::new((0..jobs).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..worker_count(jobs) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= jobs {
                    break;
                }
                let (label, config) = runs[i].clone();
                let start = Instant::now();
                let trace = solve(&problem.pencil, &problem.set, &config);
                let outcome = RunOutcome {
                    label,
                    config,
                    trace,
                    seconds: start.elapsed().as_secs_f64(),
                };
                slots.lock().expect("no worker panicked")[i] = Some(outcome);
            });
        }
    });
    slots
        .into_inner()
        .expect("no worker panicked")
        .into_iter()
        .map(|o| o.expect("every job ran"))
        .collect()
}

/// Table row: terminal top eigenvalues mirror a per-method eigenvalue table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub label: String,
    pub best_f: f64,
    pub gap: f64,
    pub top: Vec<f64>,
}

pub fn table_rows(problem: &Problem, outcomes: &[RunOutcome], f_star: f64) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for o in outcomes {
        let Ok(trace) = &o.trace else { continue };
        let spectrum = problem.pencil.spectrum_at(&trace.final_x)?;
        rows.push(TableRow {
            label: o.label.clone(),
            best_f: trace.best_value(),
            gap: trace.best_value() - f_star,
            top: spectrum.eigenvalues().iter().take(3).copied().collect(),
        });
    }
    Ok(rows)
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("algorithm,best_f,gap_to_bisect,lambda1,lambda2,lambda3\n");
    for r in rows {
        let top: Vec<String> = (0..3)
            .map(|i| r.top.get(i).map_or(String::new(), |v| format!("{v:.16e}")))
            .collect();
        writeln!(s, "{},{:.16e},{:.16e},{}", r.label, r.best_f, r.gap, top.join(",")).unwrap();
    }
    s
}

/// `k` followed by one best-so-far gap column per successful run.
pub fn gaps_csv(outcomes: &[RunOutcome], f_star: f64) -> String {
    let traces: Vec<(&str, Vec<f64>)> = outcomes
        .iter()
        .filter_map(|o| o.trace.as_ref().ok().map(|t| (o.label.as_str(), t.gaps(f_star))))
        .collect();
    let mut s = String::from("k");
    for (label, _) in &traces {
        write!(s, ",{label}").unwrap();
    }
    s.push('\n');
    let rows = traces.iter().map(|(_, g)| g.len()).max().unwrap_or(0);
    for k in 0..rows {
        write!(s, "{k}").unwrap();
        for (_, g) in &traces {
            match g.get(k) {
                Some(v) => write!(s, ",{v:.16e}").unwrap(),
                None => s.push(','),
            }
        }
        s.push('\n');
    }
    s
}
