use super::common::{distance, prepare, record, should_stop, step};
use super::config::SolverConfig;
use super::trace::{IterationTrace, Termination};
use crate::error::Result;
use crate::feasible::ConvexSet;
use crate::pencil::AffinePencil;
use crate::smoothing::{smooth_eval_from, smooth_value_of};

/// Zhang–Chen smoothing projected gradient: Armijo backtracking along the
/// projection arc starting from `α0`, and `μ_{k+1} = σμ_k` whenever
/// `‖x^{k+1} − x^k‖/α_k < γμ_k`.
pub fn spg_zc<S: ConvexSet>(
    pencil: &AffinePencil,
    set: &S,
    config: &SolverConfig,
) -> Result<IterationTrace> {
    let (mut x, run) = prepare(pencil, set, config)?;
    let armijo = config.armijo;
    let mut mu = config.mu0;
    let mut trace = IterationTrace::new(config.algorithm);
    let mut termination = Termination::MaxIters;
    for k in 0..config.max_iters {
        let spectrum = pencil.spectrum_at(&x).map_err(|e| e.at(k))?;
        let eval = smooth_eval_from(pencil, &spectrum, mu, run.l).map_err(|e| e.at(k))?;
        let grad = &eval.gradient;

        let mut alpha = config.alpha0;
        let mut next = set.project(&step(&x, alpha, grad));
        for _ in 0..armijo.max_backtracks {
            let decrease: f64 = grad.iter().zip(&next).zip(&x).map(|((g, p), q)| g * (p - q)).sum();
            let trial = pencil.spectrum_at(&next).map_err(|e| e.at(k))?;
            if smooth_value_of(trial.eigenvalues(), mu) <= eval.value + armijo.sufficient_decrease * decrease {
                break;
            }
            alpha *= armijo.shrink;
            next = set.project(&step(&x, alpha, grad));
        }

        let moved = distance(&next, &x);
        trace.push(record(&run, k, &x, spectrum.lambda_max, eval.value, mu, alpha, moved), &x);
        if moved / alpha < config.gamma * mu {
            mu *= config.sigma;
            trace.mu_reductions.push(k);
        }
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
