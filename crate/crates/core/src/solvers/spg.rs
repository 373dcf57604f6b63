use super::common::{distance, prepare, record, should_stop, step};
use super::config::SolverConfig;
use super::trace::{IterationTrace, Termination};
use crate::error::Result;
use crate::feasible::ConvexSet;
use crate::pencil::AffinePencil;
use crate::smoothing::smooth_eval_from;

/// Smoothing projected gradient with `μ_k = μ0/√(k+1)`, `α_k = α0/√(k+1)`.
pub fn spg<S: ConvexSet>(
    pencil: &AffinePencil,
    set: &S,
    config: &SolverConfig,
) -> Result<IterationTrace> {
    let (mut x, run) = prepare(pencil, set, config)?;
    let mut trace = IterationTrace::new(config.algorithm);
    let mut termination = Termination::MaxIters;
    for k in 0..config.max_iters {
        let root = ((k + 1) as f64).sqrt();
        let mu = config.mu0 / root;
        let alpha = config.alpha0 / root;
        let spectrum = pencil.spectrum_at(&x).map_err(|e| e.at(k))?;
        let eval = smooth_eval_from(pencil, &spectrum, mu, run.l).map_err(|e| e.at(k))?;
        let next = set.project(&step(&x, alpha, &eval.gradient));
        let rec = record(&run, k, &x, spectrum.lambda_max, eval.value, mu, alpha, distance(&next, &x));
        trace.push(rec, &x);
        x = next;
        if should_stop(&trace, config) {
            termination = Termination::EarlyStop;
            break;
        }
    }
    let f = pencil.lambda_max(&x).map_err(|e| e.at(trace.iterations()))?;
    trace.finish(x, f, termination);
    Ok(trace)
}
