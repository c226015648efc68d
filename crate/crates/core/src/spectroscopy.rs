// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Thermal level populations and synthetic spectroscopy traces.

use serde::{Deserialize, Serialize};

use crate::constants::freq_to_kelvin;
use crate::error::{invalid, Result};
use crate::model::{EnergySpectrum, TransitionSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalState {
    pub temp: f64,
    pub populations: Vec<f64>,
}

impl ThermalState {
    pub fn population(&self, level: usize) -> f64 {
        self.populations.get(level).copied().unwrap_or(0.0)
    }
}

/// Boltzmann populations of the lowest `n_levels` levels, normalized over
/// that truncated set.
pub fn gibbs_populations(spec: &EnergySpectrum, temp: f64, n_levels: usize) -> Result<ThermalState> {
    if !(temp >= 0.0) {
        return Err(invalid("temp", format!("must be >= 0, got {temp}")));
    }
    if n_levels == 0 || n_levels > spec.levels.len() {
        return Err(invalid(
            "n_levels",
            format!("must lie in 1..={}, got {n_levels}", spec.levels.len()),
        ));
    }
    let levels = &spec.levels[..n_levels];
    let populations = if temp == 0.0 {
        let mut p = vec![0.0; n_levels];
        p[0] = 1.0;
        p
    } else {
        let e0 = levels[0];
        let w: Vec<f64> = levels
            .iter()
            .map(|&e| (-freq_to_kelvin(e - e0) / temp).exp())
            .collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    };
    Ok(ThermalState { temp, populations })
}

/// Temperature reproducing the two-level population ratio p1/p0.
pub fn infer_effective_temperature(levels: &[f64], ratio: f64) -> Result<f64> {
    if levels.len() < 2 {
        return Err(invalid("levels", "need at least two levels"));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(invalid(
            "ratio",
            format!("p1/p0 must lie in (0, 1) for a thermal state, got {ratio}"),
        ));
    }
    Ok(freq_to_kelvin(levels[1] - levels[0]) / (1.0 / ratio).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub f_lo: f64,
    pub f_hi: f64,
    pub n_points: usize,
    /// Single-photon FWHM (Hz).
    pub width_1photon: f64,
    /// An m-photon line is narrower by this factor^(m-1).
    pub multiphoton_width_factor: f64,
    /// An m-photon line is weaker by this factor^(m-1).
    pub multiphoton_amp_factor: f64,
    /// Peaks below this fraction of the tallest in-grid peak are left out
    /// of the peak table.
    pub visibility_floor: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            f_lo: 4.8e9,
            f_hi: 6.3e9,
            n_points: 1501,
            width_1photon: 50e6,
            multiphoton_width_factor: 5.0,
            multiphoton_amp_factor: 0.3,
            visibility_floor: 0.01,
        }
    }
}

impl TraceConfig {
    fn validate(&self) -> Result<()> {
        if !(self.f_lo < self.f_hi) || self.n_points < 2 {
            return Err(invalid(
                "grid",
                format!("need f_lo < f_hi and n_points >= 2, got [{}, {}] x {}", self.f_lo, self.f_hi, self.n_points),
            ));
        }
        if !(self.width_1photon > 0.0
            && self.multiphoton_width_factor > 0.0
            && self.multiphoton_amp_factor > 0.0
            && self.visibility_floor >= 0.0)
        {
            return Err(invalid("trace config", "widths and factors must be positive"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let step = (self.f_hi - self.f_lo) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|k| if k + 1 == self.n_points { self.f_hi } else { self.f_lo + step * k as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub center: f64,
    /// FWHM (Hz).
    pub width: f64,
    pub height: f64,
    pub i: usize,
    pub j: usize,
    pub order: u32,
}

impl Peak {
    pub fn label(&self) -> (usize, usize, u32) {
        (self.i, self.j, self.order)
    }

    pub fn at(&self, f: f64) -> f64 {
        let x = 2.0 * (f - self.center) / self.width;
        self.height / (1.0 + x * x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectroscopyTrace {
    pub freqs: Vec<f64>,
    pub amplitude: Vec<f64>,
    /// Visible in-grid peaks, ordered by center frequency.
    pub peaks: Vec<Peak>,
}

/// Sum of Lorentzians, one per transition, weighted by the population of
/// the initial level.
pub fn synthesize_trace(
    transitions: &TransitionSet,
    state: &ThermalState,
    config: &TraceConfig,
) -> Result<SpectroscopyTrace> {
    config.validate()?;
    let freqs = config.grid();
    let lines: Vec<Peak> = transitions
        .entries
        .iter()
        .map(|t| {
            let k = (t.order - 1) as i32;
            Peak {
                center: t.freq,
                width: config.width_1photon / config.multiphoton_width_factor.powi(k),
                height: state.population(t.i) * config.multiphoton_amp_factor.powi(k),
                i: t.i,
                j: t.j,
                order: t.order,
            }
        })
        .collect();
    let amplitude = freqs
        .iter()
        .map(|&f| lines.iter().map(|p| p.at(f)).sum())
        .collect();

    let in_grid = |p: &&Peak| p.center >= config.f_lo && p.center <= config.f_hi && p.height > 0.0;
    let tallest = lines.iter().filter(in_grid).map(|p| p.height).fold(0.0, f64::max);
    let mut peaks: Vec<Peak> = lines
        .iter()
        .filter(in_grid)
        .filter(|p| p.height >= config.visibility_floor * tallest)
        .copied()
        .collect();
    peaks.sort_by(|a, b| a.center.total_cmp(&b.center));
    Ok(SpectroscopyTrace {
        freqs,
        amplitude,
        peaks,
    })
}
