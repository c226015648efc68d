// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense Hermitian eigensolver, Nelder–Mead minimizer and bracketing root finder.

mod eigen;
mod minimize;
mod root;

pub use eigen::{eigensolve, eigenvalues, EigenDecomposition, HermitianMatrix};
pub use minimize::{minimize, MinimizeOptions, Minimum};
pub use root::find_root;

pub use nalgebra::Complex;
pub type C64 = Complex<f64>;
