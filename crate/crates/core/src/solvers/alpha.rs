use rand::Rng;

use super::common::norm;
use crate::error::{Error, Result};
use crate::feasible::ConvexSet;
use crate::pencil::AffinePencil;
use crate::smoothing::smooth_gradient;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEstimate {
    /// `M̂ = max ‖∇f̃(x; μ)‖` over the samples.
    pub gradient_bound: f64,
    /// `1/M̂`.
    pub alpha0: f64,
}

/// Samples `S` (uniform box points projected into the set) and returns
/// `α0 = 1/M̂`.
pub fn estimate_alpha0<S: ConvexSet, R: Rng + ?Sized>(
    pencil: &AffinePencil,
    set: &S,
    mu: f64,
    samples: usize,
    rng: &mut R,
) -> Result<AlphaEstimate> {
    if samples == 0 {
        return Err(Error::InvalidConfig("at least one sample is required".into()));
    }
    let mut bound = 0.0_f64;
    for _ in 0..samples {
        let x = set.sample(rng);
        bound = bound.max(norm(&smooth_gradient(pencil, &x, mu)?));
    }
    if !(bound > 0.0) {
        return Err(Error::InvalidInput("gradient vanishes on every sample".into()));
    }
    Ok(AlphaEstimate {
        gradient_bound: bound,
        alpha0: 1.0 / bound,
    })
}
