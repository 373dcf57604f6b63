use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Smoothing projected gradient, `μ_k, α_k ∝ (k+1)^{-1/2}`.
    Spg,
    /// Smoothing accelerated projected gradient, `μ_k, α_k ∝ (k+1)^{-1}`.
    Sapg,
    /// Normalized Clarke subgradient steps with projection.
    Subgrad,
    /// Smoothing projected gradient with Armijo steps and adaptive `μ`.
    SpgZc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Spg,
        Algorithm::Sapg,
        Algorithm::Subgrad,
        Algorithm::SpgZc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Spg => "spg",
            Algorithm::Sapg => "sapg",
            Algorithm::Subgrad => "subgrad",
            Algorithm::SpgZc => "spg-zc",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.to_ascii_lowercase().replace('_', "-"))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Armijo {
    pub shrink: f64,
    pub sufficient_decrease: f64,
    pub max_backtracks: usize,
}

impl Default for Armijo {
    fn default() -> Self {
        Self {
            shrink: 0.5,
            sufficient_decrease: 1e-4,
            max_backtracks: 80,
        }
    }
}

/// Stop once the best objective improves by less than
/// `min_improvement · max(1, |best|)` over `window` iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EarlyStop {
    pub window: usize,
    pub min_improvement: f64,
}

impl Default for EarlyStop {
    fn default() -> Self {
        Self {
            window: 500,
            min_improvement: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub alpha0: f64,
    pub mu0: f64,
    pub max_iters: usize,
    /// Number of top eigenpairs in the gradient; `None` uses all of them.
    pub inexact_l: Option<usize>,
    /// Threshold factor of the adaptive `μ` rule (`spg-zc`).
    pub gamma: f64,
    /// Reduction factor of the adaptive `μ` rule (`spg-zc`).
    pub sigma: f64,
    pub armijo: Armijo,
    /// Starting design; defaults to the set's uniform-volume point.
    pub x0: Option<Vec<f64>>,
    /// Store every iterate in the trace.
    pub keep_iterates: bool,
    pub early_stop: Option<EarlyStop>,
    /// Record wall-clock time per iteration (otherwise zero, for reproducible traces).
    pub timing: bool,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm, alpha0: f64, max_iters: usize) -> Self {
        Self {
            algorithm,
            alpha0,
            mu0: 10.0,
            max_iters,
            inexact_l: None,
            gamma: 1.0,
            sigma: 0.5,
            armijo: Armijo::default(),
            x0: None,
            keep_iterates: false,
            early_stop: None,
            timing: false,
        }
    }

    pub fn with_mu0(mut self, mu0: f64) -> Self {
        self.mu0 = mu0;
        self
    }

    pub fn with_inexact(mut self, l: usize) -> Self {
        self.inexact_l = Some(l);
        self
    }

    pub fn with_x0(mut self, x0: Vec<f64>) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn keeping_iterates(mut self) -> Self {
        self.keep_iterates = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return bad(format!("alpha0 = {} must be > 0", self.alpha0));
        }
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return bad(format!("mu0 = {} must be > 0", self.mu0));
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return bad(format!("sigma = {} must lie in (0, 1)", self.sigma));
        }
        if !(self.gamma > 0.0) {
            return bad(format!("gamma = {} must be > 0", self.gamma));
        }
        if self.inexact_l == Some(0) {
            return bad("inexact l must be at least 1".into());
        }
        let a = &self.armijo;
        if !(a.shrink > 0.0 && a.shrink < 1.0) || !(a.sufficient_decrease > 0.0) {
            return bad("Armijo parameters must satisfy 0 < shrink < 1, c > 0".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("SPG_ZC".parse::<Algorithm>().unwrap(), Algorithm::SpgZc);
        assert!("newton".parse::<Algorithm>().is_err());
    }

    #[test]
    fn validation() {
        let ok = SolverConfig::new(Algorithm::Spg, 1e-3, 10);
        assert!(ok.validate().is_ok());
        let mut c = ok.clone();
        c.sigma = 1.0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.alpha0 = 0.0;
        assert!(c.validate().is_err());
        let mut c = ok;
        c.inexact_l = Some(0);
        assert!(c.validate().is_err());
    }
}
