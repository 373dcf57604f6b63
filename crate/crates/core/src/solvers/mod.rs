//! First-order methods for `min_{x∈S} λ_1(A(x), B(x))` and the bisection oracle.

mod alpha;
mod bisect;
mod common;
mod config;
mod sapg;
mod spg;
mod spg_zc;
mod subgrad;
mod trace;

pub use alpha::{estimate_alpha0, AlphaEstimate};
pub use bisect::{
    bisect, feasibility, BisectConfig, BisectResult, BisectStatus, BisectStep, InnerConfig,
    InnerOutcome, Verdict,
};
pub use config::{Algorithm, Armijo, EarlyStop, SolverConfig};
pub use sapg::sapg;
pub use spg::spg;
pub use spg_zc::spg_zc;
pub use subgrad::{normalized_direction, subgrad, subgrad_step, ZERO_SUBGRADIENT};
pub use trace::{IterationRecord, IterationTrace, Termination, CSV_HEADER};

use crate::error::Result;
use crate::feasible::ConvexSet;
use crate::pencil::AffinePencil;

/// Runs the method selected by `config.algorithm`.
pub fn solve<S: ConvexSet>(
    pencil: &AffinePencil,
    set: &S,
    config: &SolverConfig,
) -> Result<IterationTrace> {
    match config.algorithm {
        Algorithm::Spg => spg(pencil, set, config),
        Algorithm::Sapg => sapg(pencil, set, config),
        Algorithm::Subgrad => subgrad(pencil, set, config),
        Algorithm::SpgZc => spg_zc(pencil, set, config),
    }
}
