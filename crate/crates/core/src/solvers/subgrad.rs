use super::common::{distance, norm, prepare, record, should_stop};
use super::config::SolverConfig;
use super::trace::{IterationTrace, Termination};
use crate::error::Result;
use crate::feasible::ConvexSet;
use crate::pencil::AffinePencil;

/// Below this norm the subgradient direction is treated as undefined.
pub const ZERO_SUBGRADIENT: f64 = 1e-14;

/// `g/‖g‖`, or `None` when `‖g‖ < ZERO_SUBGRADIENT`.
pub fn normalized_direction(g: &[f64]) -> Option<Vec<f64>> {
    let n = norm(g);
    (n >= ZERO_SUBGRADIENT).then(|| g.iter().map(|v| v / n).collect())
}

/// `α_0 = α0`, `α_k = α0/√k` for `k ≥ 1`.
pub fn subgrad_step(alpha0: f64, k: usize) -> f64 {
    if k == 0 {
        alpha0
    } else {
        alpha0 / (k as f64).sqrt()
    }
}

/// Projected normalized subgradient method using the Clarke element built
/// from the leading eigenvector, `g_e = v_1ᵀ(A_e − λ_1 B_e)v_1`.
pub fn subgrad<S: ConvexSet>(
    pencil: &AffinePencil,
    set: &S,
    config: &SolverConfig,
) -> Result<IterationTrace> {
    let (mut x, run) = prepare(pencil, set, config)?;
    let mut trace = IterationTrace::new(config.algorithm);
    let mut termination = Termination::MaxIters;
    let mut g = vec![0.0; pencil.vars()];
    for k in 0..config.max_iters {
        let alpha = subgrad_step(config.alpha0, k);
        let spectrum = pencil.spectrum_at(&x).map_err(|e| e.at(k))?;
        let f = spectrum.lambda_max;
        let v1 = spectrum.decomposition.vector(0);
        pencil.directional_row(v1, v1, f, &mut g);
        let Some(d) = normalized_direction(&g) else {
            trace.push(record(&run, k, &x, f, f, 0.0, alpha, 0.0), &x);
            termination = Termination::ZeroSubgradient;
            break;
        };
        let next = set.project(&super::common::step(&x, alpha, &d));
        trace.push(record(&run, k, &x, f, f, 0.0, alpha, distance(&next, &x)), &x);
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
