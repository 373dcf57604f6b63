//! The volume-capped box `S = {x : lᵀx ≤ V0, x_e ≥ x_min}` and its projection.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Compact convex design domain used by the solvers.
pub trait ConvexSet {
    fn dim(&self) -> usize;

    fn contains(&self, x: &[f64], tol: f64) -> bool;

    /// Euclidean projection.
    fn project(&self, y: &[f64]) -> Vec<f64>;

    /// Upper bound on `max_{x,y∈S} ‖x − y‖²`.
    fn diameter_sq(&self) -> f64;

    /// `min_{x∈S} ⟨c, x⟩`.
    fn linear_min(&self, c: &[f64]) -> f64;

    /// Random point of `S`.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64>;

    /// A deterministic interior-ish starting design.
    fn default_start(&self) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleSet {
    lengths: Vec<f64>,
    volume: f64,
    x_min: f64,
    total_length: f64,
}

impl FeasibleSet {
    pub fn new(lengths: Vec<f64>, volume: f64, x_min: f64) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidSet("at least one variable is required".into()));
        }
        if let Some(e) = lengths.iter().position(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidSet(format!(
                "weight l[{e}] = {} must be positive",
                lengths[e]
            )));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::InvalidSet(format!("V0 = {volume} must be positive")));
        }
        if !(x_min >= 0.0 && x_min.is_finite()) {
            return Err(Error::InvalidSet(format!("xmin = {x_min} must be nonnegative")));
        }
        let total_length: f64 = lengths.iter().sum();
        let lower_volume = x_min * total_length;
        if lower_volume > volume {
            return Err(Error::InfeasibleSet {
                lower_volume,
                volume,
            });
        }
        Ok(Self {
            lengths,
            volume,
            x_min,
            total_length,
        })
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// `lᵀx`.
    pub fn used_volume(&self, x: &[f64]) -> f64 {
        self.lengths.iter().zip(x).map(|(l, v)| l * v).sum()
    }

    /// Largest value coordinate `e` can take inside `S`.
    pub fn upper(&self, e: usize) -> f64 {
        (self.volume - self.x_min * (self.total_length - self.lengths[e])) / self.lengths[e]
    }

    fn clamped_volume(&self, y: &[f64], tau: f64) -> f64 {
        self.lengths
            .iter()
            .zip(y)
            .map(|(&l, &v)| l * (v - tau * l).max(self.x_min))
            .sum()
    }

    /// Serialized fragment `{"l", "V0", "xmin"}`.
    pub fn to_json(&self) -> FeasibleJson {
        FeasibleJson {
            l: self.lengths.clone(),
            v0: self.volume,
            xmin: self.x_min,
        }
    }

    pub fn from_json(j: &FeasibleJson) -> Result<Self> {
        Self::new(j.l.clone(), j.v0, j.xmin)
    }
}

impl ConvexSet for FeasibleSet {
    fn dim(&self) -> usize {
        self.lengths.len()
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && self.used_volume(x) <= self.volume + tol
            && x.iter().all(|&v| v >= self.x_min - tol)
    }

    /// `x_e = max(x_min, y_e − τ l_e)` with the multiplier `τ ≥ 0` found by
    /// bisection on the piecewise-linear volume function, then snapped to the
    /// exact root of the identified linear piece.
    fn project(&self, y: &[f64]) -> Vec<f64> {
        let xmin = self.x_min;
        if self.clamped_volume(y, 0.0) <= self.volume {
            return y.iter().map(|&v| v.max(xmin)).collect();
        }
        let mut lo = 0.0_f64;
        let mut hi = self
            .lengths
            .iter()
            .zip(y)
            .map(|(&l, &v)| (v - xmin) / l)
            .fold(0.0_f64, f64::max);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.clamped_volume(y, mid) > self.volume {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut tau = hi;
        // Closed form on the active piece: free coordinates are those above xmin.
        let (mut num, mut den) = (-self.volume, 0.0);
        for (&l, &v) in self.lengths.iter().zip(y) {
            if v - tau * l > xmin {
                num += l * v;
                den += l * l;
            } else {
                num += l * xmin;
            }
        }
        if den > 0.0 {
            let exact = num / den;
            if exact >= lo && exact <= hi {
                tau = exact;
            }
        }
        self.lengths
            .iter()
            .zip(y)
            .map(|(&l, &v)| (v - tau * l).max(xmin))
            .collect()
    }

    /// `Σ_e (u_e − x_min)²` with `u_e` the largest feasible value of `x_e`.
    fn diameter_sq(&self) -> f64 {
        (0..self.dim()).map(|e| (self.upper(e) - self.x_min).powi(2)).sum()
    }

    fn linear_min(&self, c: &[f64]) -> f64 {
        // S is the simplex with vertices xmin·1 and xmin·1 + r_e·e_e.
        let spare = self.volume - self.x_min * self.total_length;
        let base: f64 = c.iter().map(|v| v * self.x_min).sum();
        let best_edge = c
            .iter()
            .zip(&self.lengths)
            .map(|(ce, le)| ce * spare / le)
            .fold(0.0_f64, f64::min);
        base + best_edge
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let y: Vec<f64> = (0..self.dim())
            .map(|e| {
                let hi = self.upper(e);
                if hi > self.x_min {
                    rng.gen_range(self.x_min..=hi)
                } else {
                    self.x_min
                }
            })
            .collect();
        self.project(&y)
    }

    /// Projection of the uniform volume distribution `V0/Σl · 1`.
    fn default_start(&self) -> Vec<f64> {
        let c = self.volume / self.total_length;
        self.project(&vec![c; self.dim()])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FeasibleJson {
    pub l: Vec<f64>,
    #[serde(rename = "V0")]
    pub v0: f64,
    pub xmin: f64,
}
