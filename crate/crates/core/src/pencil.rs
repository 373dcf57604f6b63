//! Affine symmetric-matrix pencils `A(x) = A0 + Σ x_e A_e`, `B(x) = B0 + Σ x_e B_e`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, GenEigDecomposition, SparseSym, SymMatrix, SYMMETRY_TOL};

#[derive(Debug, Clone)]
pub struct AffinePencil {
    n: usize,
    a0: SymMatrix,
    a: Vec<SymMatrix>,
    b0: SymMatrix,
    b: Vec<SymMatrix>,
    a_forms: Vec<SparseSym>,
    b_forms: Vec<SparseSym>,
}

impl PartialEq for AffinePencil {
    fn eq(&self, other: &Self) -> bool {
        self.a0 == other.a0 && self.a == other.a && self.b0 == other.b0 && self.b == other.b
    }
}

impl AffinePencil {
    pub fn new(
        a0: SymMatrix,
        a: Vec<SymMatrix>,
        b0: SymMatrix,
        b: Vec<SymMatrix>,
    ) -> Result<Self> {
        let n = a0.order();
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                what: "number of B_e coefficients",
                expected: a.len(),
                found: b.len(),
            });
        }
        for mat in a.iter().chain(std::iter::once(&b0)).chain(b.iter()) {
            if mat.order() != n {
                return Err(Error::DimensionMismatch {
                    what: "pencil matrix order",
                    expected: n,
                    found: mat.order(),
                });
            }
            if !mat.is_finite() {
                return Err(Error::NonFinite("pencil coefficient"));
            }
        }
        if !a0.is_finite() {
            return Err(Error::NonFinite("pencil coefficient"));
        }
        let a_forms = a.iter().map(SparseSym::from_dense).collect();
        let b_forms = b.iter().map(SparseSym::from_dense).collect();
        Ok(Self {
            n,
            a0,
            a,
            b0,
            b,
            a_forms,
            b_forms,
        })
    }

    /// Number of design variables.
    pub fn vars(&self) -> usize {
        self.a.len()
    }

    /// Matrix order.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn a0(&self) -> &SymMatrix {
        &self.a0
    }

    pub fn b0(&self) -> &SymMatrix {
        &self.b0
    }

    pub fn a_coeffs(&self) -> &[SymMatrix] {
        &self.a
    }

    pub fn b_coeffs(&self) -> &[SymMatrix] {
        &self.b
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.vars() {
            return Err(Error::DimensionMismatch {
                what: "design vector",
                expected: self.vars(),
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("design vector"));
        }
        Ok(())
    }

    /// `(A(x), B(x))`.
    pub fn evaluate(&self, x: &[f64]) -> Result<(SymMatrix, SymMatrix)> {
        self.check_dim(x)?;
        let mut a = self.a0.clone();
        let mut b = self.b0.clone();
        for (e, &xe) in x.iter().enumerate() {
            if xe != 0.0 {
                a.axpy(xe, &self.a[e]);
                b.axpy(xe, &self.b[e]);
            }
        }
        Ok((a, b))
    }

    pub fn spectrum_at(&self, x: &[f64]) -> Result<PointSpectrum> {
        let (a, b) = self.evaluate(x)?;
        let decomposition = linalg::gen_eig(&a, &b)?;
        Ok(PointSpectrum {
            x: x.to_vec(),
            lambda_max: decomposition.lambda_max(),
            decomposition,
        })
    }

    /// `λ_1^{A,B}(x)`.
    pub fn lambda_max(&self, x: &[f64]) -> Result<f64> {
        Ok(self.spectrum_at(x)?.lambda_max)
    }

    /// `λ_1(A(x) − α B(x))`, the largest ordinary eigenvalue of the shifted
    /// matrix. Nonpositive exactly when `x` lies in the `α`-sublevel set, and
    /// defined even where `B(x)` is only semidefinite.
    pub fn sublevel_gap(&self, x: &[f64], alpha: f64) -> Result<f64> {
        let (mut a, b) = self.evaluate(x)?;
        a.axpy(-alpha, &b);
        Ok(linalg::sym_eig(&a)?.lambda_max())
    }

    /// The pencil `(A − αB)/scale` paired with the identity. Its top
    /// eigenvalue is `sublevel_gap(x, α)/scale`, a convex function of `x`.
    pub fn shifted_standard(&self, alpha: f64, scale: f64) -> AffinePencil {
        let inv = 1.0 / scale;
        let mut a0 = self.a0.clone();
        a0.axpy(-alpha, &self.b0);
        let a = self
            .a
            .iter()
            .zip(&self.b)
            .map(|(ae, be)| {
                let mut c = ae.clone();
                c.axpy(-alpha, be);
                c.scaled(inv)
            })
            .collect::<Vec<_>>();
        let zero = SymMatrix::zeros(self.n);
        let b = vec![zero; a.len()];
        AffinePencil::new(a0.scaled(inv), a, SymMatrix::identity(self.n), b)
            .expect("shifted pencil inherits valid dimensions")
    }

    /// The row `[vᵀ(A_e − λ B_e)w]_e` used by every gradient formula.
    pub(crate) fn directional_row(&self, v: &[f64], w: &[f64], lambda: f64, out: &mut [f64]) {
        for (e, o) in out.iter_mut().enumerate() {
            let a = &self.a_forms[e];
            let b = &self.b_forms[e];
            let av = if std::ptr::eq(v, w) {
                a.quad_form(v)
            } else {
                a.bilinear(v, w)
            };
            let bv = if b.is_empty() {
                0.0
            } else if std::ptr::eq(v, w) {
                b.quad_form(v)
            } else {
                b.bilinear(v, w)
            };
            *o = av - lambda * bv;
        }
    }

    pub fn to_json(&self) -> PencilJson {
        PencilJson {
            m: self.vars(),
            n: self.n,
            a0: self.a0.to_rows(),
            a: self.a.iter().map(SymMatrix::to_rows).collect(),
            b0: self.b0.to_rows(),
            b: self.b.iter().map(SymMatrix::to_rows).collect(),
        }
    }

    pub fn from_json(j: &PencilJson) -> Result<Self> {
        let mat = |rows: &Vec<Vec<f64>>| -> Result<SymMatrix> {
            if rows.len() != j.n {
                return Err(Error::DimensionMismatch {
                    what: "matrix order in pencil file",
                    expected: j.n,
                    found: rows.len(),
                });
            }
            SymMatrix::from_rows(rows, SYMMETRY_TOL)
        };
        for (what, len) in [("A list length", j.a.len()), ("B list length", j.b.len())] {
            if len != j.m {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: j.m,
                    found: len,
                });
            }
        }
        let a = j.a.iter().map(mat).collect::<Result<Vec<_>>>()?;
        let b = j.b.iter().map(mat).collect::<Result<Vec<_>>>()?;
        AffinePencil::new(mat(&j.a0)?, a, mat(&j.b0)?, b)
    }
}

/// Serialized pencil: matrices as arrays of rows.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PencilJson {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "A0")]
    pub a0: Vec<Vec<f64>>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "B0")]
    pub b0: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Vec<f64>>>,
}

/// Generalized spectrum of the pencil at one design point.
#[derive(Debug, Clone)]
pub struct PointSpectrum {
    pub x: Vec<f64>,
    pub decomposition: GenEigDecomposition,
    pub lambda_max: f64,
}

impl PointSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        self.decomposition.values()
    }
}

/// `A(x) = diag(x1, x2)`, `B(x) = diag(x2, x1)`, whose top generalized
/// eigenvalue is `max{x1/x2, x2/x1}`.
pub fn swap_ratio_pencil() -> AffinePencil {
    let e = |i: usize| {
        let mut d = [0.0; 2];
        d[i] = 1.0;
        SymMatrix::from_diag(&d)
    };
    AffinePencil::new(SymMatrix::zeros(2), vec![e(0), e(1)], SymMatrix::zeros(2), vec![e(1), e(0)])
        .expect("static dimensions")
}

/// `A = (1)`, `B(x) = (x)`: `λ_1 = 1/x`.
pub fn reciprocal_pencil() -> AffinePencil {
    AffinePencil::new(
        SymMatrix::from_diag(&[1.0]),
        vec![SymMatrix::zeros(1)],
        SymMatrix::zeros(1),
        vec![SymMatrix::from_diag(&[1.0])],
    )
    .expect("static dimensions")
}

/// Diagonal pencil with `A(x)_ii = a_i0 + Σ a_ie x_e` and likewise for `B`.
/// `a[i]` and `b[i]` hold `m + 1` coefficients, constant term first.
pub fn diagonal_pencil(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<AffinePencil> {
    let n = a.len();
    if b.len() != n || n == 0 {
        return Err(Error::DimensionMismatch {
            what: "diagonal pencil rows",
            expected: n,
            found: b.len(),
        });
    }
    let m1 = a[0].len();
    if m1 == 0 || a.iter().chain(b).any(|r| r.len() != m1) {
        return Err(Error::InvalidInput("ragged diagonal coefficients".into()));
    }
    let diag = |rows: &[Vec<f64>], e: usize| {
        SymMatrix::from_diag(&rows.iter().map(|r| r[e]).collect::<Vec<_>>())
    };
    AffinePencil::new(
        diag(a, 0),
        (1..m1).map(|e| diag(a, e)).collect(),
        diag(b, 0),
        (1..m1).map(|e| diag(b, e)).collect(),
    )
}
