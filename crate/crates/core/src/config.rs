// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Device configuration files. Keys carry their units (`i0_uA`, `cs_fF`,
//! ...); conversion to SI happens only in [`DeviceConfig::to_params`].

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CavityParams, DeviceParams, DEFAULT_CHARGE_CUTOFF};

/// Shipped default: fitted to the measured transitions, Cj calibrated to the
/// sweet-spot frequency.
pub const PAPER_CSFQ_JSON: &str = include_str!("../configs/paper-csfq.json");
/// The published circuit parameters, unfitted, with a reference Cj.
pub const PAPER_PUBLISHED_JSON: &str = include_str!("../configs/paper-published.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitSection {
    #[serde(rename = "i0_uA")]
    pub i0_ua: f64,
    pub alpha: f64,
    #[serde(rename = "cs_fF")]
    pub cs_ff: f64,
    #[serde(rename = "cj_fF")]
    pub cj_ff: f64,
    #[serde(default)]
    pub ng1: f64,
    #[serde(default)]
    pub ng2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    #[serde(rename = "f_cav_GHz")]
    pub f_cav_ghz: f64,
    #[serde(rename = "g_over_2pi_MHz")]
    pub g_over_2pi_mhz: f64,
    #[serde(rename = "kappa_over_2pi_kHz")]
    pub kappa_over_2pi_khz: f64,
    #[serde(rename = "cqr_fF", default)]
    pub cqr_ff: f64,
    #[serde(rename = "cc_fF", default)]
    pub cc_ff: f64,
}

/// Measured reference values the report and CLI defaults are built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceSection {
    pub sweet_spot_flux: f64,
    pub spectroscopy_flux: f64,
    pub t1_before_us: f64,
    pub t1_after_us: f64,
    pub t2_star_after_us: f64,
    pub t2_echo_after_us: f64,
    pub qp_t1_ref_us: f64,
    #[serde(rename = "qp_temp_ref_K")]
    pub qp_temp_ref_k: f64,
    #[serde(rename = "base_temp_K")]
    pub base_temp_k: f64,
    #[serde(rename = "gap_ueV")]
    pub gap_uev: f64,
    #[serde(rename = "radiator_temp_K")]
    pub radiator_temp_k: f64,
    #[serde(rename = "radiator_freq_GHz")]
    pub radiator_freq_ghz: f64,
    pub rate_enhancement: f64,
    #[serde(rename = "teff_before_K")]
    pub teff_before_k: f64,
    #[serde(rename = "teff_after_K")]
    pub teff_after_k: f64,
}

impl Default for ReferenceSection {
    fn default() -> Self {
        Self {
            sweet_spot_flux: 0.5,
            spectroscopy_flux: 0.51,
            t1_before_us: 0.513,
            t1_after_us: 5.7,
            t2_star_after_us: 5.6,
            t2_echo_after_us: 9.4,
            qp_t1_ref_us: 0.7,
            qp_temp_ref_k: 0.175,
            base_temp_k: 0.015,
            gap_uev: 200.0,
            radiator_temp_k: 0.8,
            radiator_freq_ghz: 5.0,
            rate_enhancement: 10.0,
            teff_before_k: 0.175,
            teff_after_k: 0.015,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub name: String,
    #[serde(default)]
    pub provenance: Vec<String>,
    #[serde(default = "default_cutoff")]
    pub charge_cutoff: usize,
    pub qubit: QubitSection,
    pub cavity: CavitySection,
    #[serde(default)]
    pub reference: ReferenceSection,
}

fn default_cutoff() -> usize {
    DEFAULT_CHARGE_CUTOFF
}

impl DeviceConfig {
    pub fn paper_default() -> Self {
        Self::from_json_str(PAPER_CSFQ_JSON).expect("shipped config parses")
    }

    pub fn paper_published() -> Self {
        Self::from_json_str(PAPER_PUBLISHED_JSON).expect("shipped config parses")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.to_params()?;
        if cfg.charge_cutoff < 2 {
            return Err(Error::Config(format!("charge_cutoff must be >= 2, got {}", cfg.charge_cutoff)));
        }
        Ok(cfg)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_string())
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
    }

    /// SI device parameters, validated.
    pub fn to_params(&self) -> Result<DeviceParams> {
        let q = &self.qubit;
        let c = &self.cavity;
        let p = DeviceParams {
            i0: q.i0_ua * 1e-6,
            alpha: q.alpha,
            cs: q.cs_ff * 1e-15,
            cj: q.cj_ff * 1e-15,
            ng1: q.ng1,
            ng2: q.ng2,
            cavity: CavityParams {
                omega_cav: 2.0 * PI * c.f_cav_ghz * 1e9,
                g: 2.0 * PI * c.g_over_2pi_mhz * 1e6,
                kappa: 2.0 * PI * c.kappa_over_2pi_khz * 1e3,
                cqr: c.cqr_ff * 1e-15,
                cc: c.cc_ff * 1e-15,
            },
        };
        p.validate()?;
        Ok(p)
    }

    /// Replaces the qubit section with `params` (converted to config units),
    /// keeping cavity, metadata and reference values.
    pub fn with_qubit(&self, params: &DeviceParams) -> Self {
        let q = &self.qubit;
        Self {
            qubit: QubitSection {
                i0_ua: rescale(q.i0_ua, 1e-6, params.i0),
                alpha: params.alpha,
                cs_ff: rescale(q.cs_ff, 1e-15, params.cs),
                cj_ff: rescale(q.cj_ff, 1e-15, params.cj),
                ng1: params.ng1,
                ng2: params.ng2,
            },
            ..self.clone()
        }
    }
}

// Unit conversion does not round-trip exactly, so an unchanged value keeps
// its original config spelling.
fn rescale(current: f64, unit: f64, si: f64) -> f64 {
    if current * unit == si {
        current
    } else {
        si / unit
    }
}
