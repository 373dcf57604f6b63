#![allow(dead_code)]

use geneig::linalg::SymMatrix;
use geneig::AffinePencil;
use nalgebra::DMatrix;
use rand::Rng;

pub fn to_na(m: &SymMatrix) -> DMatrix<f64> {
    let n = m.order();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

/// Generalized eigenvalues (descending) via nalgebra: Cholesky of `y`,
/// explicit inverse factor, then a symmetric eigen-solve.
pub fn oracle_gen_eigs(x: &SymMatrix, y: &SymMatrix) -> Vec<f64> {
    let l = to_na(y).cholesky().expect("oracle needs Y ≻ 0").l();
    let linv = l.try_inverse().expect("triangular factor is invertible");
    let c = &linv * to_na(x) * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut vals: Vec<f64> = c.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

pub fn oracle_spectrum(p: &AffinePencil, x: &[f64]) -> Vec<f64> {
    let (a, b) = p.evaluate(x).unwrap();
    oracle_gen_eigs(&a, &b)
}

/// Log-sum-exp smoothing evaluated from oracle eigenvalues.
pub fn oracle_smooth(p: &AffinePencil, x: &[f64], mu: f64) -> f64 {
    let v = oracle_spectrum(p, x);
    let top = v[0];
    top + mu * v.iter().map(|l| ((l - top) / mu).exp()).sum::<f64>().ln()
}

pub fn random_sym<R: Rng>(rng: &mut R, n: usize, scale: f64) -> SymMatrix {
    SymMatrix::from_upper_fn(n, |_, _| scale * rng.gen_range(-1.0..1.0))
}

/// `GGᵀ` with a random `n×r` factor.
pub fn random_psd<R: Rng>(rng: &mut R, n: usize, rank: usize, scale: f64) -> SymMatrix {
    let g: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..rank).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    SymMatrix::from_upper_fn(n, |i, j| scale * (0..rank).map(|k| g[i][k] * g[j][k]).sum::<f64>())
}

/// Pencil with `B0 ≻ 0` and `B_e ⪰ 0`, so `B(x) ≻ 0` for every `x ≥ 0`.
pub fn random_pencil<R: Rng>(rng: &mut R, n: usize, m: usize) -> AffinePencil {
    let a0 = random_sym(rng, n, 1.0);
    let a = (0..m).map(|_| random_sym(rng, n, 1.0)).collect();
    let mut b0 = random_psd(rng, n, n, 0.3);
    for i in 0..n {
        b0.add_at(i, i, 0.5);
    }
    let b = (0..m)
        .map(|_| {
            let r = rng.gen_range(1..=n);
            random_psd(rng, n, r, 1.0)
        })
        .collect();
    AffinePencil::new(a0, a, b0, b).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(0.05..2.0)).collect()
}

/// Least-squares slope of `ln(y)` against `ln(k)` over `k ∈ [lo, hi]`.
pub fn loglog_slope(y: &[f64], lo: usize, hi: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (lo..=hi).map(|k| ((k as f64).ln(), y[k].ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
