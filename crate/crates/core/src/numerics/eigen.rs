// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

use faer::complex_native::c64;
use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};

use super::C64;
use crate::error::{Error, Result};

/// Relative Hermiticity tolerance, scaled by the largest entry modulus.
const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex Hermitian matrix. Construction validates Hermiticity.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: DMatrix<C64>,
}

impl HermitianMatrix {
    /// Builds from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != dim * dim {
            return Err(Error::NotSquare {
                rows: entries.len() / dim,
                cols: dim,
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::EmptyMatrix);
        }
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        check_hermitian(&m)?;
        Ok(Self { inner: m })
    }

    /// Wraps a matrix the caller built Hermitian by construction.
    pub(crate) fn new_unchecked(m: DMatrix<C64>) -> Self {
        debug_assert!(check_hermitian(&m).is_ok());
        Self { inner: m }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).sum()
    }
}

fn check_hermitian(m: &DMatrix<C64>) -> Result<()> {
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tolerance = HERMITIAN_TOL * scale;
    let mut worst = (0, 0, 0.0);
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst.2 || d.is_nan() {
                worst = (i, j, d);
            }
        }
    }
    if worst.2 > tolerance || worst.2.is_nan() {
        return Err(Error::NotHermitian {
            row: worst.0,
            col: worst.1,
            deviation: worst.2,
            tolerance,
        });
    }
    Ok(())
}

/// Eigenpairs with eigenvalues ascending; column `k` of `eigenvectors`
/// belongs to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, k: usize) -> DVector<C64> {
        self.eigenvectors.column(k).into_owned()
    }
}

pub fn eigensolve(h: &HermitianMatrix) -> EigenDecomposition {
    let n = h.dim();
    let (values, vectors): (Vec<f64>, DMatrix<C64>) = if is_real(h) {
        let eig = to_faer_real(h).selfadjoint_eigendecomposition(Side::Lower);
        let (s, u) = (eig.s().column_vector(), eig.u());
        (
            (0..n).map(|k| s.read(k)).collect(),
            DMatrix::from_fn(n, n, |r, c| C64::new(u.read(r, c), 0.0)),
        )
    } else {
        let eig = to_faer_complex(h).selfadjoint_eigendecomposition(Side::Lower);
        let (s, u) = (eig.s().column_vector(), eig.u());
        (
            (0..n).map(|k| s.read(k).re).collect(),
            DMatrix::from_fn(n, n, |r, c| {
                let z = u.read(r, c);
                C64::new(z.re, z.im)
            }),
        )
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    EigenDecomposition {
        eigenvalues: order.iter().map(|&k| values[k]).collect(),
        eigenvectors: DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]),
    }
}

/// Eigenvalues only, ascending. Skips the eigenvector accumulation.
pub fn eigenvalues(h: &HermitianMatrix) -> Vec<f64> {
    let mut v = if is_real(h) {
        to_faer_real(h).selfadjoint_eigenvalues(Side::Lower)
    } else {
        to_faer_complex(h).selfadjoint_eigenvalues(Side::Lower)
    };
    v.sort_by(f64::total_cmp);
    v
}

// A real symmetric matrix takes the cheaper real reduction.
fn is_real(h: &HermitianMatrix) -> bool {
    h.inner.iter().all(|z| z.im == 0.0)
}

fn to_faer_real(h: &HermitianMatrix) -> Mat<f64> {
    Mat::from_fn(h.dim(), h.dim(), |r, c| h.inner[(r, c)].re)
}

fn to_faer_complex(h: &HermitianMatrix) -> Mat<c64> {
    Mat::from_fn(h.dim(), h.dim(), |r, c| {
        let z = h.inner[(r, c)];
        c64::new(z.re, z.im)
    })
}
