//! Bisection on the level `λ` using the convex feasibility function
//! `h_λ(x) = λ_1(A(x) − λB(x))/s`, whose minimum over `S` is nonpositive
//! exactly when some design attains `λ_1(A(x), B(x)) ≤ λ`.

use serde::{Deserialize, Serialize};

use super::common::{blend, norm, step};
use crate::error::{Error, Result};
use crate::feasible::ConvexSet;
use crate::linalg::sym_eig;
use crate::pencil::AffinePencil;
use crate::smoothing::smooth_eval_from;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerConfig {
    pub max_iters: usize,
    /// Initial smoothing parameter in units of `h`; defaults to
    /// `|h(x⁰)|/ln(n + 1)`.
    pub mu0: Option<f64>,
    /// Initial stepsize; defaults to `0.1·diam(S)/‖∇h(x⁰)‖`.
    pub alpha0: Option<f64>,
}

impl Default for InnerConfig {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            mu0: None,
            alpha0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectConfig {
    /// `[λ̲, λ̄]`; derived from the start point when absent.
    pub interval: Option<(f64, f64)>,
    /// Stop once `λ̄ − λ̲ ≤ tol`.
    pub tol: f64,
    pub max_outer: usize,
    /// Feasibility tolerance `feas_tol = feas_tol_rel·(1 + |λ|)`.
    pub feas_tol_rel: f64,
    /// Treat an exhausted inner budget as inconclusive instead of infeasible.
    pub require_certificate: bool,
    pub inner: InnerConfig,
    /// Reference design for the default bracket, scaling and warm start.
    pub x0: Option<Vec<f64>>,
}

impl Default for BisectConfig {
    fn default() -> Self {
        Self {
            interval: None,
            tol: 1e-6,
            max_outer: 200,
            feas_tol_rel: 1e-7,
            require_certificate: false,
            inner: InnerConfig::default(),
            x0: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Feasible,
    /// `min h_λ > 0` certified by a lower bound.
    Infeasible,
    /// Budget exhausted with `min h_λ` still above the tolerance.
    BudgetInfeasible,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerOutcome {
    pub verdict: Verdict,
    pub lambda: f64,
    /// Smallest `h_λ` found.
    pub best: f64,
    pub best_x: Vec<f64>,
    /// Certified lower bound on `min_S h_λ`.
    pub lower_bound: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectStep {
    pub k: usize,
    pub lambda: f64,
    pub verdict: Verdict,
    /// Interval after this step.
    pub lower: f64,
    pub upper: f64,
    pub inner_iterations: usize,
    pub inner_best: f64,
    pub inner_lower_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum BisectStatus {
    Converged,
    MaxOuter,
    /// The oracle could not decide `lambda`; the interval was left unchanged.
    InnerInconclusive { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectResult {
    pub lower: f64,
    pub upper: f64,
    /// Whether every infeasible verdict on the lower end carried a certificate.
    pub lower_certified: bool,
    /// Largest level proven infeasible; `λ* ≥ certified_lower` always holds.
    pub certified_lower: f64,
    /// Design with `h_λ̄ ≤ feas_tol`.
    pub witness: Vec<f64>,
    /// `λ_1(A, B)` at the witness.
    pub witness_value: f64,
    pub scale: f64,
    pub steps: Vec<BisectStep>,
    pub status: BisectStatus,
}

impl BisectResult {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Minimizes `h_λ` over `S` by smoothing accelerated projected gradient,
/// stopping as soon as the sign of `min h_λ` is settled.
///
/// Lower bound: every softmax weight matrix `W` is in the spectraplex, so
/// `h(x) ≥ ⟨W, C(x)⟩`, which is affine in `x`; minimizing it over `S`
/// gives a certificate. Both the per-iterate and the weighted-average
/// linearizations are used.
pub fn feasibility<S: ConvexSet>(
    pencil: &AffinePencil,
    set: &S,
    lambda: f64,
    scale: f64,
    config: &InnerConfig,
    feas_tol: f64,
    require_certificate: bool,
    warm: &[f64],
) -> Result<InnerOutcome> {
    let shifted = pencil.shifted_standard(lambda, scale);
    let n = shifted.order();
    let mut x = warm.to_vec();
    let mut z = x.clone();
    let mut a = 1.0_f64;
    let mut best = f64::INFINITY;
    let mut best_x = x.clone();
    let mut lower_bound = f64::NEG_INFINITY;
    let (mut agg_const, mut agg_w) = (0.0, 0.0);
    let mut agg_g = vec![0.0; set.dim()];
    let (mut mu0, mut alpha0) = (config.mu0.unwrap_or(0.0), config.alpha0.unwrap_or(0.0));
    let diameter = set.diameter_sq().sqrt();
    let mut verdict = None;
    let mut iterations = 0;

    for k in 0..config.max_iters {
        iterations = k + 1;
        let y = blend(&x, &z, 1.0 / a);
        let sy = shifted.spectrum_at(&y).map_err(|e| e.at(k))?;
        if sy.lambda_max < best {
            best = sy.lambda_max;
            best_x = y.clone();
        }
        if best <= feas_tol {
            verdict = Some(Verdict::Feasible);
            break;
        }
        if k == 0 && config.mu0.is_none() {
            mu0 = best.abs().max(10.0 * feas_tol) / ((n + 1) as f64).ln();
        }
        let mu = mu0 / (k + 1) as f64;
        let eval = smooth_eval_from(&shifted, &sy, mu, n).map_err(|e| e.at(k))?;
        let g = &eval.gradient;
        if k == 0 && config.alpha0.is_none() {
            let gn = norm(g);
            alpha0 = if gn > 0.0 && diameter > 0.0 { 0.1 * diameter / gn } else { 1.0 };
        }

        let weighted: f64 = eval.weights.iter().zip(sy.eigenvalues()).map(|(w, v)| w * v).sum();
        let constant = weighted - g.iter().zip(&y).map(|(gi, yi)| gi * yi).sum::<f64>();
        lower_bound = lower_bound.max(constant + set.linear_min(g));
        let w = (k + 1) as f64;
        agg_const += w * constant;
        agg_w += w;
        for (ag, gi) in agg_g.iter_mut().zip(g) {
            *ag += w * gi;
        }
        lower_bound = lower_bound.max((agg_const + set.linear_min(&agg_g)) / agg_w);
        if lower_bound > 0.0 {
            verdict = Some(Verdict::Infeasible);
            break;
        }

        let alpha = alpha0 / (k + 1) as f64;
        z = set.project(&step(&z, a * alpha, g));
        x = blend(&x, &z, 1.0 / a);
        a = (1.0 + (4.0 * a * a + 1.0).sqrt()) / 2.0;
    }

    let verdict = verdict.unwrap_or(if require_certificate {
        Verdict::Inconclusive
    } else {
        Verdict::BudgetInfeasible
    });
    Ok(InnerOutcome {
        verdict,
        lambda,
        best,
        best_x,
        lower_bound,
        iterations,
    })
}

/// Bisection for the global minimum of `λ_1(A(x), B(x))` over `S`.
pub fn bisect<S: ConvexSet>(
    pencil: &AffinePencil,
    set: &S,
    config: &BisectConfig,
) -> Result<BisectResult> {
    if set.dim() != pencil.vars() {
        return Err(Error::DimensionMismatch {
            what: "feasible set dimension vs pencil variables",
            expected: pencil.vars(),
            found: set.dim(),
        });
    }
    if !(config.tol >= 0.0) || !(config.feas_tol_rel >= 0.0) {
        return Err(Error::InvalidConfig("bisection tolerances must be nonnegative".into()));
    }
    let x_ref = match &config.x0 {
        Some(x) if set.contains(x, 1e-9) => x.clone(),
        Some(_) => return Err(Error::InvalidConfig("x0 is not in the feasible set".into())),
        None => set.default_start(),
    };
    let reference = pencil.spectrum_at(&x_ref)?;
    let (_, b_ref) = pencil.evaluate(&x_ref)?;
    let scale = {
        let s = sym_eig(&b_ref)?.lambda_max();
        if s > 0.0 { s } else { 1.0 }
    };

    let (mut lower, mut upper) = match config.interval {
        Some(interval) => interval,
        None => {
            let vals = reference.eigenvalues();
            let f = vals[0];
            let mut spread = (vals[0] - vals[vals.len() - 1]).max(f.abs());
            if spread == 0.0 {
                spread = 1.0;
            }
            (f - 10.0 * spread, f)
        }
    };
    if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
        return Err(Error::BracketInvalid(format!("interval [{lower}, {upper}] is not increasing")));
    }

    let feas_tol = |l: f64| config.feas_tol_rel * (1.0 + l.abs());
    let oracle = |lam: f64, warm: &[f64]| {
        feasibility(
            pencil,
            set,
            lam,
            scale,
            &config.inner,
            feas_tol(lam),
            config.require_certificate,
            warm,
        )
    };

    let top = oracle(upper, &x_ref)?;
    if top.verdict != Verdict::Feasible {
        return Err(Error::BracketInvalid(format!(
            "upper end {upper} is not feasible (min h ≥ {:e})",
            top.lower_bound.max(0.0)
        )));
    }
    let mut witness = top.best_x.clone();
    let bottom = oracle(lower, &witness)?;
    let mut certified_lower = f64::NEG_INFINITY;
    let mut lower_certified = match bottom.verdict {
        Verdict::Infeasible => {
            certified_lower = lower;
            true
        }
        Verdict::BudgetInfeasible => false,
        Verdict::Feasible => {
            return Err(Error::BracketInvalid(format!("lower end {lower} is already feasible")));
        }
        Verdict::Inconclusive => {
            return Err(Error::BracketInvalid(format!("lower end {lower} could not be certified")));
        }
    };

    let mut steps = Vec::new();
    let mut warm = witness.clone();
    let mut status = BisectStatus::MaxOuter;
    for k in 0..config.max_outer {
        if upper - lower <= config.tol {
            status = BisectStatus::Converged;
            break;
        }
        let mid = 0.5 * (lower + upper);
        let out = oracle(mid, &warm)?;
        match out.verdict {
            Verdict::Feasible => {
                upper = mid;
                witness = out.best_x.clone();
            }
            Verdict::Infeasible => {
                lower = mid;
                certified_lower = mid;
            }
            Verdict::BudgetInfeasible => {
                lower = mid;
                lower_certified = false;
            }
            Verdict::Inconclusive => {}
        }
        warm = out.best_x.clone();
        steps.push(BisectStep {
            k,
            lambda: mid,
            verdict: out.verdict,
            lower,
            upper,
            inner_iterations: out.iterations,
            inner_best: out.best,
            inner_lower_bound: out.lower_bound,
        });
        if out.verdict == Verdict::Inconclusive {
            status = BisectStatus::InnerInconclusive { lambda: mid };
            break;
        }
    }
    if status == BisectStatus::MaxOuter && upper - lower <= config.tol {
        status = BisectStatus::Converged;
    }
    let witness_value = pencil.lambda_max(&witness)?;
    Ok(BisectResult {
        lower,
        upper,
        lower_certified,
        certified_lower,
        witness,
        witness_value,
        scale,
        steps,
        status,
    })
}
