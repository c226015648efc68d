// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Browser bindings: flux sweep, synthetic spectroscopy, T1 vs temperature.
//! Results cross the boundary as flat `f64` arrays; the row layout is
//! documented on each export.

use csfq_core::config::DeviceConfig;
use csfq_core::constants::ev_to_joule;
use csfq_core::loss::{calibrate_qp, half_plateau_temperature, t1_vs_temperature};
use csfq_core::model::{flux_grid, levels, transitions, DeviceParams, EnergySpectrum, FluxBias};
use csfq_core::spectroscopy::{gibbs_populations, synthesize_trace, TraceConfig};
use wasm_bindgen::prelude::*;

/// Charge cutoff used in the browser; lower than the library default to
/// keep sweeps interactive.
pub const DEMO_CUTOFF: usize = 8;

fn js(e: csfq_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Device {
    params: DeviceParams,
    cutoff: usize,
}

impl Default for Device {
    fn default() -> Self {
        Self {
            params: DeviceConfig::paper_default().to_params().expect("shipped config is valid"),
            cutoff: DEMO_CUTOFF,
        }
    }
}

impl Device {
    pub fn with_qubit(i0_ua: f64, alpha: f64, cs_ff: f64, cj_ff: f64) -> csfq_core::Result<Self> {
        let mut d = Self::default();
        d.params.i0 = i0_ua * 1e-6;
        d.params.alpha = alpha;
        d.params.cs = cs_ff * 1e-15;
        d.params.cj = cj_ff * 1e-15;
        d.params.validate()?;
        Ok(d)
    }

    pub fn params(&self) -> &DeviceParams {
        &self.params
    }

    /// Rows of `[flux, E1, .., EK]` (GHz), flattened.
    pub fn sweep_rows(&self, f_lo: f64, f_hi: f64, n: usize, k: usize) -> csfq_core::Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n * (k + 1));
        for f in flux_grid(f_lo, f_hi, n)? {
            let lv = levels(&self.params, f, k + 1, self.cutoff)?;
            out.push(f.0);
            out.extend(lv[1..].iter().map(|e| e / 1e9));
        }
        Ok(out)
    }

    fn spectrum(&self, flux: f64) -> csfq_core::Result<EnergySpectrum> {
        Ok(EnergySpectrum {
            flux: FluxBias(flux),
            levels: levels(&self.params, FluxBias(flux), 4, self.cutoff)?,
            charge_cutoff: self.cutoff,
            converged: true,
        })
    }

    /// `[freqs (GHz) ..., amplitudes ...]` followed by peak rows
    /// `[center GHz, width GHz, height, i, j, order]`; `n_points` gives the
    /// split.
    pub fn trace(&self, flux: f64, teff: f64, order: u32, n_points: usize) -> csfq_core::Result<Vec<f64>> {
        let spec = self.spectrum(flux)?;
        let state = gibbs_populations(&spec, teff, 4)?;
        let cfg = TraceConfig {
            n_points,
            ..TraceConfig::default()
        };
        let tr = synthesize_trace(&transitions(&spec, order.max(1)), &state, &cfg)?;
        let mut out: Vec<f64> = tr.freqs.iter().map(|f| f / 1e9).collect();
        out.extend(&tr.amplitude);
        for p in &tr.peaks {
            out.extend([p.center / 1e9, p.width / 1e9, p.height, p.i as f64, p.j as f64, p.order as f64]);
        }
        Ok(out)
    }
}

#[wasm_bindgen]
impl Device {
    /// The shipped default device.
    #[wasm_bindgen(constructor)]
    pub fn new() -> Device {
        Self::default()
    }

    /// A device with the given qubit parameters and the default cavity.
    #[wasm_bindgen(js_name = withQubit)]
    pub fn js_with_qubit(i0_ua: f64, alpha: f64, cs_ff: f64, cj_ff: f64) -> Result<Device, JsError> {
        Self::with_qubit(i0_ua, alpha, cs_ff, cj_ff).map_err(js)
    }

    #[wasm_bindgen(js_name = fluxSweep)]
    pub fn js_flux_sweep(&self, f_lo: f64, f_hi: f64, n: usize, k: usize) -> Result<Vec<f64>, JsError> {
        self.sweep_rows(f_lo, f_hi, n, k).map_err(js)
    }

    #[wasm_bindgen(js_name = spectroscopy)]
    pub fn js_spectroscopy(&self, flux: f64, teff: f64, order: u32, n_points: usize) -> Result<Vec<f64>, JsError> {
        self.trace(flux, teff, order, n_points).map_err(js)
    }
}

/// Rows of `[T (K), T1 (us)]` followed by the half-plateau temperature (K).
pub fn t1_rows(t1_base_us: f64, t1_ref_us: f64, temp_ref: f64, lo: f64, hi: f64, n: usize) -> csfq_core::Result<Vec<f64>> {
    let gap = ev_to_joule(200e-6);
    let model = calibrate_qp(gap, t1_base_us * 1e-6, t1_ref_us * 1e-6, temp_ref)?;
    let g0 = 1e6 / t1_base_us;
    let temps: Vec<f64> = flux_grid(lo, hi, n)?.into_iter().map(|f| f.0).collect();
    let mut out = Vec::with_capacity(2 * n + 1);
    for b in t1_vs_temperature(&model, g0, &temps) {
        out.extend([b.temp, b.t1 * 1e6]);
    }
    out.push(half_plateau_temperature(&model, g0, 1e-3, 10.0)?);
    Ok(out)
}

#[wasm_bindgen(js_name = t1Curve)]
pub fn js_t1_curve(t1_base_us: f64, t1_ref_us: f64, temp_ref: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    t1_rows(t1_base_us, t1_ref_us, temp_ref, lo, hi, n).map_err(js)
}
