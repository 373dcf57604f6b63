use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::Algorithm;
use crate::error::Result;

pub const CSV_HEADER: &str = "k,f,ftilde,mu,alpha,step_norm,time_ms";

/// One row of a run: the iterate `x^k`, `f(x^k) = λ_1(x^k)`, the smoothed
/// value at `(x^k, μ_k)`, the parameters used in step `k` and `‖x^{k+1} − x^k‖`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub f: f64,
    pub ftilde: f64,
    pub mu: f64,
    pub alpha: f64,
    pub step_norm: f64,
    pub time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    /// Extrapolated and auxiliary points of the accelerated method.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    MaxIters,
    EarlyStop,
    ZeroSubgradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub algorithm: Algorithm,
    pub records: Vec<IterationRecord>,
    /// `min_{j ≤ k} f(x^j)` for each row.
    pub best: Vec<f64>,
    pub best_x: Vec<f64>,
    /// The last computed iterate (one past the final row).
    pub final_x: Vec<f64>,
    pub final_f: f64,
    pub termination: Termination,
    /// Iterations at which the adaptive rule reduced `μ`.
    pub mu_reductions: Vec<usize>,
}

impl IterationTrace {
    pub(crate) fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            records: Vec::new(),
            best: Vec::new(),
            best_x: Vec::new(),
            final_x: Vec::new(),
            final_f: f64::NAN,
            termination: Termination::MaxIters,
            mu_reductions: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, record: IterationRecord, x: &[f64]) {
        let prev = self.best.last().copied().unwrap_or(f64::INFINITY);
        if record.f < prev || self.best_x.is_empty() {
            self.best_x = x.to_vec();
        }
        self.best.push(prev.min(record.f));
        self.records.push(record);
    }

    pub(crate) fn finish(&mut self, x: Vec<f64>, f: f64, termination: Termination) {
        if f < self.best_value() || self.best_x.is_empty() {
            self.best_x = x.clone();
        }
        self.final_x = x;
        self.final_f = f;
        self.termination = termination;
    }

    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// Best `λ_1` over all evaluated iterates, including the final one.
    pub fn best_value(&self) -> f64 {
        let rows = self.best.last().copied().unwrap_or(f64::INFINITY);
        if self.final_f.is_nan() {
            rows
        } else {
            rows.min(self.final_f)
        }
    }

    /// `best_k − f*` per row.
    pub fn gaps(&self, f_star: f64) -> Vec<f64> {
        self.best.iter().map(|b| b - f_star).collect()
    }

    /// Iterate history, if it was kept.
    pub fn iterates(&self) -> Option<Vec<&[f64]>> {
        self.records.iter().map(|r| r.x.as_deref()).collect()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.k, r.f, r.ftilde, r.mu, r.alpha, r.step_norm, r.time_ms
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}
