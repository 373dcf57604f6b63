//! Log-sum-exp smoothing of the maximum generalized eigenvalue.
//!
//! `f̃(x; μ) = μ log Σ_i exp(λ_i(x)/μ)` is evaluated in the shifted form
//! `λ_1 + μ log Σ_i exp((λ_i − λ_1)/μ)`, and its gradient is the softmax-weighted
//! combination of the per-eigenpair rows `[v_iᵀ(A_e − λ_i B_e)v_i]_e`.
//! Truncating the softmax to the top `l` terms gives the inexact gradient; the
//! Clarke subdifferential of `λ_1` itself is parameterized by spectraplex
//! matrices over the top eigenspace.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::linalg::{self, multiplicity};
use crate::pencil::{AffinePencil, PointSpectrum};

/// Smoothed value and gradient at one point.
#[derive(Debug, Clone)]
pub struct SmoothEval {
    pub x: Vec<f64>,
    pub mu: f64,
    /// `f̃(x; μ)` over the full spectrum.
    pub value: f64,
    /// Gradient (or the inexact `l`-term direction when `terms < n`).
    pub gradient: Vec<f64>,
    /// Softmax weights over the terms used for the gradient.
    pub weights: Vec<f64>,
    /// `λ_1(x)`.
    pub lambda_max: f64,
}

/// Shifted softmax weights over the first `l` entries of a descending list.
/// Returns the weights and `log Σ_{i<l} exp((λ_i − λ_1)/μ)`.
pub fn softmax_weights(values: &[f64], mu: f64, l: usize) -> (Vec<f64>, f64) {
    let top = values[0];
    let mut w: Vec<f64> = values[..l].iter().map(|&v| ((v - top) / mu).exp()).collect();
    let z: f64 = w.iter().sum();
    for wi in &mut w {
        *wi /= z;
    }
    (w, z.ln())
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidInput(format!("smoothing parameter mu = {mu} must be > 0")));
    }
    Ok(())
}

/// `f̃(x; μ)` from precomputed eigenvalues.
pub fn smooth_value_of(values: &[f64], mu: f64) -> f64 {
    let (_, log_z) = softmax_weights(values, mu, values.len());
    values[0] + mu * log_z
}

pub fn smooth_value(pencil: &AffinePencil, x: &[f64], mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let s = pencil.spectrum_at(x)?;
    Ok(smooth_value_of(s.eigenvalues(), mu))
}

/// Value and `l`-term gradient from an already computed spectrum.
pub fn smooth_eval_from(
    pencil: &AffinePencil,
    spectrum: &PointSpectrum,
    mu: f64,
    l: usize,
) -> Result<SmoothEval> {
    check_mu(mu)?;
    let n = pencil.order();
    if l == 0 || l > n {
        return Err(Error::InvalidL { l, n });
    }
    let values = spectrum.eigenvalues();
    let (weights, _) = softmax_weights(values, mu, l);
    let m = pencil.vars();
    let mut gradient = vec![0.0; m];
    let mut row = vec![0.0; m];
    for (i, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = spectrum.decomposition.vector(i);
        pencil.directional_row(v, v, values[i], &mut row);
        for (g, r) in gradient.iter_mut().zip(&row) {
            *g += w * r;
        }
    }
    Ok(SmoothEval {
        x: spectrum.x.clone(),
        mu,
        value: smooth_value_of(values, mu),
        gradient,
        weights,
        lambda_max: spectrum.lambda_max,
    })
}

pub fn smooth_eval(pencil: &AffinePencil, x: &[f64], mu: f64) -> Result<SmoothEval> {
    let s = pencil.spectrum_at(x)?;
    smooth_eval_from(pencil, &s, mu, pencil.order())
}

/// `∇f̃(x; μ)`.
pub fn smooth_gradient(pencil: &AffinePencil, x: &[f64], mu: f64) -> Result<Vec<f64>> {
    Ok(smooth_eval(pencil, x, mu)?.gradient)
}

/// Gradient formula restricted to the `l` largest generalized eigenvalues,
/// with the softmax renormalized over those terms.
pub fn inexact_gradient(pencil: &AffinePencil, x: &[f64], mu: f64, l: usize) -> Result<Vec<f64>> {
    let n = pencil.order();
    if l == 0 || l > n {
        return Err(Error::InvalidL { l, n });
    }
    let s = pencil.spectrum_at(x)?;
    Ok(smooth_eval_from(pencil, &s, mu, l)?.gradient)
}

/// Choice of `U ∈ Υ_t` for a Clarke subgradient.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectraplex {
    /// `U = I/t`.
    Uniform,
    /// `U = e_1 e_1ᵀ`, the gradient formula applied to the first top eigenvector.
    Leading,
    /// Explicit `t × t` matrix; must be PSD with unit trace.
    Matrix(Vec<Vec<f64>>),
}

/// Element of the Clarke subdifferential of `λ_1` at `x`.
#[derive(Debug, Clone)]
pub struct ClarkeElement {
    pub x: Vec<f64>,
    pub lambda_max: f64,
    /// Numerical multiplicity of `λ_1`.
    pub t: usize,
    /// The `t` top eigenvectors, `B(x)`-orthonormal.
    pub vectors: Vec<Vec<f64>>,
    pub u: Vec<Vec<f64>>,
    pub g: Vec<f64>,
}

const SPECTRAPLEX_TOL: f64 = 1e-10;

fn validate_spectraplex(u: &[Vec<f64>], t: usize) -> Result<()> {
    if u.len() != t || u.iter().any(|r| r.len() != t) {
        return Err(Error::SpectraplexViolation(format!(
            "U must be {t}x{t} to match the multiplicity of lambda_1"
        )));
    }
    for i in 0..t {
        for j in 0..t {
            if (u[i][j] - u[j][i]).abs() > SPECTRAPLEX_TOL {
                return Err(Error::SpectraplexViolation(format!("U is not symmetric at ({i},{j})")));
            }
        }
    }
    let trace: f64 = (0..t).map(|i| u[i][i]).sum();
    if (trace - 1.0).abs() > SPECTRAPLEX_TOL {
        return Err(Error::SpectraplexViolation(format!("tr U = {trace} != 1")));
    }
    let sym = linalg::SymMatrix::from_rows(u, SPECTRAPLEX_TOL)
        .map_err(|e| Error::SpectraplexViolation(e.to_string()))?;
    let min = linalg::sym_eig(&sym)?.lambda_min();
    if min < -SPECTRAPLEX_TOL {
        return Err(Error::SpectraplexViolation(format!("U has eigenvalue {min} < 0")));
    }
    Ok(())
}

/// `g_e = ⟨U, Vᵀ(A_e − λ_1 B_e)V⟩` over the top eigenspace of multiplicity
/// `t`, detected with `gap_tol`.
pub fn clarke_element(
    pencil: &AffinePencil,
    x: &[f64],
    gap_tol: f64,
    choice: &Spectraplex,
) -> Result<ClarkeElement> {
    let s = pencil.spectrum_at(x)?;
    clarke_element_from(pencil, &s, gap_tol, choice)
}

pub fn clarke_element_from(
    pencil: &AffinePencil,
    spectrum: &PointSpectrum,
    gap_tol: f64,
    choice: &Spectraplex,
) -> Result<ClarkeElement> {
    let t = multiplicity(spectrum.eigenvalues(), gap_tol);
    let u = match choice {
        Spectraplex::Uniform => (0..t)
            .map(|i| (0..t).map(|j| if i == j { 1.0 / t as f64 } else { 0.0 }).collect())
            .collect(),
        Spectraplex::Leading => (0..t)
            .map(|i| (0..t).map(|j| if i == 0 && j == 0 { 1.0 } else { 0.0 }).collect())
            .collect(),
        Spectraplex::Matrix(u) => {
            validate_spectraplex(u, t)?;
            u.clone()
        }
    };
    let lambda = spectrum.lambda_max;
    let vectors: Vec<Vec<f64>> = (0..t)
        .map(|i| spectrum.decomposition.vector(i).to_vec())
        .collect();
    let m = pencil.vars();
    let mut g = vec![0.0; m];
    let mut row = vec![0.0; m];
    for a in 0..t {
        for b in a..t {
            let w = if a == b { u[a][a] } else { u[a][b] + u[b][a] };
            if w == 0.0 {
                continue;
            }
            if a == b {
                pencil.directional_row(&vectors[a], &vectors[a], lambda, &mut row);
            } else {
                // Symmetric bilinear form, so (a,b) and (b,a) share one row.
                pencil.directional_row(&vectors[a], &vectors[b], lambda, &mut row);
            }
            for (ge, r) in g.iter_mut().zip(&row) {
                *ge += w * r;
            }
        }
    }
    Ok(ClarkeElement {
        x: spectrum.x.clone(),
        lambda_max: lambda,
        t,
        vectors,
        u,
        g,
    })
}

/// Slack of `⟨∇f̃(x;μ), y − x⟩ ≤ c1(λ_1(y) − λ_1(x)) + c2·μ`, nonnegative
/// whenever `λ_1(x) > λ_1(y)`.
///
/// The eigenvectors are `B(x)`-normalized, so `vᵀB(y)v` lies in
/// `[λ_n(B(y))/λ_1(B(x)), λ_1(B(y))/λ_n(B(x))]`; hence
/// `c1 = λ_n(B(y))/λ_1(B(x))` and `c2 = λ_1(B(y))(n − 1)/(e·λ_n(B(x)))`.
/// With `B(x) = I` these reduce to `λ_n(B(y))` and `λ_1(B(y))(n − 1)/e`.
pub fn pseudoconvexity_gap(pencil: &AffinePencil, x: &[f64], y: &[f64], mu: f64) -> Result<f64> {
    pseudoconvexity_gap_inexact(pencil, x, y, mu, pencil.order())
}

/// The same inequality for the `l`-term direction, with `n − 1` replaced by
/// `l − 1` in `c2`.
pub fn pseudoconvexity_gap_inexact(
    pencil: &AffinePencil,
    x: &[f64],
    y: &[f64],
    mu: f64,
    l: usize,
) -> Result<f64> {
    let sx = pencil.spectrum_at(x)?;
    let sy = pencil.spectrum_at(y)?;
    if sx.lambda_max <= sy.lambda_max {
        return Err(Error::OrderViolation {
            fx: sx.lambda_max,
            fy: sy.lambda_max,
        });
    }
    let grad = smooth_eval_from(pencil, &sx, mu, l)?.gradient;
    let b_spectrum = |z: &[f64]| -> Result<(f64, f64)> {
        let s = linalg::sym_eig(&pencil.evaluate(z)?.1)?;
        Ok((s.lambda_min(), s.lambda_max()))
    };
    let (bx_min, bx_max) = b_spectrum(x)?;
    let (by_min, by_max) = b_spectrum(y)?;
    let c1 = by_min / bx_max;
    let c2 = by_max / bx_min * (l as f64 - 1.0) / E;
    let inner: f64 = grad.iter().zip(y.iter().zip(x)).map(|(g, (yi, xi))| g * (yi - xi)).sum();
    Ok(c1 * (sy.lambda_max - sx.lambda_max) + c2 * mu - inner)
}
