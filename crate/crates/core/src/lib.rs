// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation and analysis of a capacitively shunted flux qubit: charge-basis
//! spectra, thermal spectroscopy, relaxation budgets, coherence fits and
//! circuit-parameter estimation.

// `!(x > 0.0)` guards intentionally reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod constants;
pub mod error;
pub mod fit;
pub mod loss;
pub mod model;
pub mod numerics;
pub mod spectroscopy;
pub mod timedomain;

pub use error::{Error, Result};
