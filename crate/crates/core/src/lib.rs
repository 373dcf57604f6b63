//! Minimization of the largest generalized eigenvalue of an affine symmetric
//! pencil over a volume-constrained box, with smoothing first-order methods,
//! a bisection oracle and a planar truss eigenfrequency model.

pub mod error;
pub mod feasible;
pub mod linalg;
pub mod pencil;
pub mod smoothing;
pub mod solvers;
pub mod truss;

pub use error::{Error, Result};
pub use feasible::{ConvexSet, FeasibleSet};
pub use linalg::{gen_eig, GenEigDecomposition, SymMatrix};
pub use pencil::AffinePencil;
pub use solvers::{Algorithm, IterationTrace, SolverConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
