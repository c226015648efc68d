// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! CODATA 2018 physical constants (SI, exact where the SI defines them).

use std::f64::consts::PI;

/// Planck constant (J·s).
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = H / (2.0 * PI);
/// Boltzmann constant (J/K).
pub const KB: f64 = 1.380_649e-23;
/// Elementary charge (C).
pub const E: f64 = 1.602_176_634e-19;
/// Magnetic flux quantum h/2e (Wb).
pub const PHI0: f64 = H / (2.0 * E);

/// The constant set as a value, for code that wants to pass it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub h: f64,
    pub hbar: f64,
    pub kb: f64,
    pub e: f64,
    pub phi0: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: Self = Self {
        h: H,
        hbar: HBAR,
        kb: KB,
        e: E,
        phi0: PHI0,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Energy of a photon at `freq` (Hz) expressed as a temperature, h·f/k_B (K).
#[inline]
pub fn freq_to_kelvin(freq: f64) -> f64 {
    H * freq / KB
}

/// Electron-volts to joules.
#[inline]
pub fn ev_to_joule(ev: f64) -> f64 {
    ev * E
}
