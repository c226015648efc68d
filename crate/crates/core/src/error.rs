// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has zero dimension")]
    EmptyMatrix,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: |H[{row}][{col}] - conj(H[{col}][{row}])| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
        tolerance: f64,
    },
    #[error("bracket [{lo}, {hi}] does not straddle a sign change: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("objective is not finite at the starting point")]
    NonFiniteStart,
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("capacitance matrix is singular (Cj = 0 and Cs = 0)")]
    SingularCapacitance,
    #[error("dispersive approximation invalid: |detuning| = {detuning:e} rad/s <= g = {g:e} rad/s")]
    NotDispersive { detuning: f64, g: f64 },
    #[error("calibration impossible: {0}")]
    Calibration(String),
    #[error("fit did not converge: {reason} (rms residual {residual:e})")]
    NotConverged { reason: String, residual: f64 },
    #[error("unphysical coherence times: {0}")]
    Unphysical(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
