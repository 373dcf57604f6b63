use super::common::{blend, distance, prepare, record, should_stop, step};
use super::config::SolverConfig;
use super::trace::{IterationTrace, Termination};
use crate::error::Result;
use crate::feasible::ConvexSet;
use crate::pencil::AffinePencil;
use crate::smoothing::{smooth_eval_from, smooth_value_of};

/// Smoothing accelerated projected gradient with `μ_k = μ0/(k+1)`,
/// `α_k = α0/(k+1)` and the momentum sequence `a_{k+1} = (1 + √(4a_k² + 1))/2`.
pub fn sapg<S: ConvexSet>(
    pencil: &AffinePencil,
    set: &S,
    config: &SolverConfig,
) -> Result<IterationTrace> {
    let (mut x, run) = prepare(pencil, set, config)?;
    let mut z = x.clone();
    let mut a = 1.0_f64;
    let mut trace = IterationTrace::new(config.algorithm);
    let mut termination = Termination::MaxIters;
    for k in 0..config.max_iters {
        let mu = config.mu0 / (k + 1) as f64;
        let alpha = config.alpha0 / (k + 1) as f64;
        let y = blend(&x, &z, 1.0 / a);
        let sy = pencil.spectrum_at(&y).map_err(|e| e.at(k))?;
        let grad = smooth_eval_from(pencil, &sy, mu, run.l).map_err(|e| e.at(k))?.gradient;
        let z_next = set.project(&step(&z, a * alpha, &grad));
        let x_next = blend(&x, &z_next, 1.0 / a);

        let sx = if k == 0 { sy.clone() } else { pencil.spectrum_at(&x).map_err(|e| e.at(k))? };
        let ftilde = smooth_value_of(sx.eigenvalues(), mu);
        let mut rec = record(&run, k, &x, sx.lambda_max, ftilde, mu, alpha, distance(&x_next, &x));
        if run.keep {
            rec.y = Some(y);
            rec.z = Some(z.clone());
        }
        trace.push(rec, &x);

        x = x_next;
        z = z_next;
        a = (1.0 + (4.0 * a * a + 1.0).sqrt()) / 2.0;
        if should_stop(&trace, config) {
            termination = Termination::EarlyStop;
            break;
        }
    }
    let f = pencil.lambda_max(&x).map_err(|e| e.at(trace.iterations()))?;
    trace.finish(x, f, termination);
    Ok(trace)
}
