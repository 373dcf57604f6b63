//! Dense symmetric linear algebra: Cholesky, cyclic Jacobi eigensolver and the
//! symmetric-definite generalized eigenproblem via Cholesky reduction.
//!
//! For a pair `(X, Y)` with `Y = L Lᵀ ≻ 0` the generalized eigenvalues of
//! `X v = λ Y v` are the ordinary eigenvalues of `C = L⁻¹ X L⁻ᵀ`; eigenvectors
//! `ū` of `C` map back through `v = L⁻ᵀ ū` and are then `Y`-orthonormal.

use crate::error::{Error, Result};

/// Maximum number of Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Symmetric tolerance used when validating externally supplied matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Dense symmetric matrix. Both triangles are stored and kept identical.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Validates symmetry to `tol` (relative to the largest entry), rejects
    /// non-finite values and stores the averaged matrix `(M + Mᵀ)/2`.
    pub fn from_rows(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "matrix row length",
                    expected: n,
                    found: r.len(),
                });
            }
        }
        let scale = rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
            .max(1.0);
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let (a, b) = (rows[i][j], rows[j][i]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::NonFinite("matrix entry"));
                }
                let diff = (a - b).abs();
                if diff > tol * scale {
                    return Err(Error::NonSymmetric {
                        row: i,
                        col: j,
                        diff,
                    });
                }
                m.set(i, j, 0.5 * (a + b));
            }
        }
        Ok(m)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Adds `v` to `(i, j)` and, off the diagonal, to `(j, i)`.
    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
        if i != j {
            self.data[j * self.n + i] += v;
        }
    }

    /// Row-major view of the full matrix.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: f64, other: &SymMatrix) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn scaled(&self, c: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_diag(&self) -> f64 {
        (0..self.n).fold(0.0_f64, |acc, i| acc.max(self.get(i, i).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    /// `xᵀ M y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.data
            .chunks(self.n)
            .zip(x)
            .map(|(row, xi)| xi * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>())
            .sum()
    }
}

/// Upper-triangle coordinate list of a symmetric matrix; quadratic and
/// bilinear forms cost O(nnz) instead of O(n²).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseSym {
    entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn from_dense(m: &SymMatrix) -> Self {
        let n = m.order();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                let v = m.get(i, j);
                if v != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        Self { entries }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `xᵀ M x`.
    #[inline]
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| {
                if i == j {
                    v * x[i] * x[i]
                } else {
                    2.0 * v * x[i] * x[j]
                }
            })
            .sum()
    }

    /// `xᵀ M y`.
    #[inline]
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| {
                if i == j {
                    v * x[i] * y[i]
                } else {
                    v * (x[i] * y[j] + x[j] * y[i])
                }
            })
            .sum()
    }
}

/// Lower-triangular Cholesky factor `L` with `Y = L Lᵀ`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.l[i * self.n + j]
    }

    /// Solves `L x = b` in place.
    pub fn forward_solve(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s: f64 = row.iter().zip(&b[..i]).map(|(l, x)| l * x).sum();
            b[i] = (b[i] - s) / self.l[i * n + i];
        }
    }

    /// Solves `Lᵀ x = b` in place.
    pub fn backward_solve(&self, b: &mut [f64]) {
        let n = self.n;
        for i in (0..n).rev() {
            let mut s = 0.0;
            for k in i + 1..n {
                s += self.l[k * n + i] * b[k];
            }
            b[i] = (b[i] - s) / self.l[i * n + i];
        }
    }

    /// Dense copy of `L`.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.l.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

/// Cholesky factorization. Fails when a pivot drops to `n·eps·max_diag`.
pub fn cholesky(y: &SymMatrix) -> Result<Cholesky> {
    let n = y.order();
    let threshold = n as f64 * f64::EPSILON * y.max_abs_diag();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = y.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > threshold) {
            return Err(Error::NotPositiveDefinite {
                row: j,
                pivot: d,
                threshold,
            });
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in j + 1..n {
            let mut s = y.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    Ok(Cholesky { n, l })
}

/// Eigenvalues sorted descending with matching eigenvectors.
///
/// From [`sym_eig`] the vectors are orthonormal; from [`gen_eig`] they are
/// orthonormal in the `Y` inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct GenEigDecomposition {
    n: usize,
    values: Vec<f64>,
    /// Column-major: vector `i` occupies `vectors[i*n..(i+1)*n]`.
    vectors: Vec<f64>,
}

impl GenEigDecomposition {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lambda_max(&self) -> f64 {
        self.values[0]
    }

    pub fn lambda_min(&self) -> f64 {
        self.values[self.n - 1]
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.vectors.chunks(self.n)
    }
}

/// Cyclic Jacobi eigensolver for a symmetric matrix.
///
/// Stops once the off-diagonal Frobenius norm falls to `n·eps·‖X‖_F`.
pub fn sym_eig(x: &SymMatrix) -> Result<GenEigDecomposition> {
    if !x.is_finite() {
        return Err(Error::NonFinite("sym_eig input"));
    }
    let n = x.order();
    let mut a = x.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let tol = n as f64 * f64::EPSILON * x.frobenius_norm();

    let mut converged = false;
    for sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                // v is column-major here: column p at v[p*n..].
                for k in 0..n {
                    let vkp = v[p * n + k];
                    let vkq = v[q * n + k];
                    v[p * n + k] = c * vkp - s * vkq;
                    v[q * n + k] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        vectors.extend_from_slice(&v[i * n..(i + 1) * n]);
    }
    Ok(GenEigDecomposition { n, values, vectors })
}

/// Reduces `C = L⁻¹ X L⁻ᵀ` given the Cholesky factor of `Y`.
pub fn reduce_congruence(x: &SymMatrix, chol: &Cholesky) -> SymMatrix {
    let n = x.order();
    // W = L⁻¹ X, stored with row k of W at w[k*n..]; computed column by column.
    let mut w = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        for i in 0..n {
            col[i] = x.get(i, j);
        }
        chol.forward_solve(&mut col);
        for i in 0..n {
            w[i * n + j] = col[i];
        }
    }
    // C = L⁻¹ Wᵀ; column j of Wᵀ is row j of W.
    let mut c = vec![0.0; n * n];
    for j in 0..n {
        col.copy_from_slice(&w[j * n..(j + 1) * n]);
        chol.forward_solve(&mut col);
        for i in 0..n {
            c[i * n + j] = col[i];
        }
    }
    SymMatrix::from_upper_fn(n, |i, j| 0.5 * (c[i * n + j] + c[j * n + i]))
}

/// Generalized eigendecomposition of the symmetric-definite pair `(X, Y)`.
pub fn gen_eig(x: &SymMatrix, y: &SymMatrix) -> Result<GenEigDecomposition> {
    if x.order() != y.order() {
        return Err(Error::DimensionMismatch {
            what: "pencil pair order",
            expected: x.order(),
            found: y.order(),
        });
    }
    let chol = cholesky(y)?;
    let c = reduce_congruence(x, &chol);
    let mut dec = sym_eig(&c)?;
    let n = dec.n;
    for v in dec.vectors.chunks_mut(n) {
        chol.backward_solve(v);
    }
    Ok(dec)
}

/// Default gap used to decide which eigenvalues coincide with `λ_1`.
pub fn default_gap_tol(lambda_1: f64) -> f64 {
    1e-6 * lambda_1.abs().max(1.0)
}

/// Number of leading eigenvalues within `gap_tol` of the largest one.
///
/// `eigenvalues` must be sorted descending and non-empty.
pub fn multiplicity(eigenvalues: &[f64], gap_tol: f64) -> usize {
    let Some(&top) = eigenvalues.first() else {
        return 0;
    };
    eigenvalues
        .iter()
        .take_while(|&&l| top - l <= gap_tol)
        .count()
        .max(1)
}
