use std::time::Instant;

use super::config::SolverConfig;
use super::trace::{IterationRecord, IterationTrace};
use crate::error::{Error, Result};
use crate::feasible::ConvexSet;
use crate::pencil::AffinePencil;

pub(crate) struct Run {
    start: Instant,
    timing: bool,
    pub keep: bool,
    pub l: usize,
}

impl Run {
    pub fn time_ms(&self) -> f64 {
        if self.timing {
            self.start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        }
    }
}

/// Validates the configuration against the problem and returns the start point.
pub(crate) fn prepare<S: ConvexSet>(
    pencil: &AffinePencil,
    set: &S,
    config: &SolverConfig,
) -> Result<(Vec<f64>, Run)> {
    config.validate()?;
    if set.dim() != pencil.vars() {
        return Err(Error::DimensionMismatch {
            what: "feasible set dimension vs pencil variables",
            expected: pencil.vars(),
            found: set.dim(),
        });
    }
    let n = pencil.order();
    let l = config.inexact_l.unwrap_or(n);
    if l > n {
        return Err(Error::InvalidL { l, n });
    }
    let x0 = match &config.x0 {
        Some(x0) => {
            if !set.contains(x0, 1e-9) {
                return Err(Error::InvalidConfig("x0 is not in the feasible set".into()));
            }
            x0.clone()
        }
        None => set.default_start(),
    };
    Ok((
        x0,
        Run {
            start: Instant::now(),
            timing: config.timing,
            keep: config.keep_iterates,
            l,
        },
    ))
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `x − t·d`.
pub(crate) fn step(x: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(xi, di)| xi - t * di).collect()
}

/// `(1 − w)a + w·b`.
pub(crate) fn blend(a: &[f64], b: &[f64], w: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(p, q)| (1.0 - w) * p + w * q).collect()
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn record(
    run: &Run,
    k: usize,
    x: &[f64],
    f: f64,
    ftilde: f64,
    mu: f64,
    alpha: f64,
    step_norm: f64,
) -> IterationRecord {
    IterationRecord {
        k,
        f,
        ftilde,
        mu,
        alpha,
        step_norm,
        time_ms: run.time_ms(),
        x: run.keep.then(|| x.to_vec()),
        y: None,
        z: None,
    }
}

pub(crate) fn should_stop(trace: &IterationTrace, config: &SolverConfig) -> bool {
    let Some(rule) = config.early_stop else {
        return false;
    };
    let k = trace.best.len();
    if rule.window == 0 || k <= rule.window {
        return false;
    }
    let now = trace.best[k - 1];
    let then = trace.best[k - 1 - rule.window];
    then - now < rule.min_improvement * now.abs().max(1.0)
}
