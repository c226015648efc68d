// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Relaxation channels: thermal photons, quasiparticles, Purcell decay, and
//! their additive combination into T1.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constants::{ev_to_joule, freq_to_kelvin, KB};
use crate::error::{invalid, Error, Result};
use crate::numerics::find_root;

/// Aluminium gap, 200 µeV (J).
pub fn aluminium_gap() -> f64 {
    ev_to_joule(200e-6)
}

/// Bose–Einstein occupation 1 / (exp(hf / kT) - 1). Zero at T = 0.
pub fn nbar(freq: f64, temp: f64) -> f64 {
    if temp <= 0.0 {
        return 0.0;
    }
    1.0 / (freq_to_kelvin(freq) / temp).exp_m1()
}

/// How a relaxation-rate enhancement maps onto a thermal occupation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThermalConvention {
    /// ratio = 1 + 2 nbar (stimulated emission plus absorption).
    Stimulated,
    /// ratio = 2 nbar.
    TwoNbar,
}

impl ThermalConvention {
    pub fn enhancement(self, nbar: f64) -> f64 {
        match self {
            Self::Stimulated => 1.0 + 2.0 * nbar,
            Self::TwoNbar => 2.0 * nbar,
        }
    }
}

impl fmt::Display for ThermalConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Stimulated => "stimulated",
            Self::TwoNbar => "two_nbar",
        })
    }
}

/// Bath temperature whose thermal occupation at `freq` produces a rate
/// enhancement `rate_ratio` under `convention`.
pub fn effective_bath_temperature(
    rate_ratio: f64,
    freq: f64,
    convention: ThermalConvention,
) -> Result<f64> {
    if !(freq > 0.0) {
        return Err(invalid("freq", format!("must be > 0, got {freq}")));
    }
    let target = match convention {
        ThermalConvention::Stimulated => {
            if rate_ratio < 1.0 || !rate_ratio.is_finite() {
                return Err(invalid(
                    "rate_ratio",
                    format!("stimulated convention needs ratio >= 1, got {rate_ratio}"),
                ));
            }
            if rate_ratio == 1.0 {
                return Ok(0.0);
            }
            (rate_ratio - 1.0) / 2.0
        }
        ThermalConvention::TwoNbar => {
            if rate_ratio <= 0.0 || !rate_ratio.is_finite() {
                return Err(invalid(
                    "rate_ratio",
                    format!("two_nbar convention needs ratio > 0, got {rate_ratio}"),
                ));
            }
            rate_ratio / 2.0
        }
    };
    let t_photon = freq_to_kelvin(freq);
    // nbar(T) >= kT/hf - 1/2, so this upper end already overshoots the target
    let hi = t_photon * (target + 1.0);
    let lo = t_photon * 1e-3;
    find_root(|t| nbar(freq, t) / target - 1.0, lo, hi, 1e-13)
}

/// Thermal-equilibrium quasiparticle density sqrt(2 pi kT / Delta) exp(-Delta / kT).
/// Returns 0 for T <= 0.
pub fn xqp_thermal(temp: f64, gap: f64) -> f64 {
    if temp <= 0.0 {
        return 0.0;
    }
    let r = KB * temp / gap;
    (2.0 * PI * r).sqrt() * (-1.0 / r).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub temp: f64,
    pub gamma: f64,
}

/// Gamma_qp(T) = scale * x_qp(T, gap). Any frequency dependence of the
/// rate is folded into `scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiparticleModel {
    pub gap: f64,
    pub scale: f64,
    pub calibration_point: CalibrationPoint,
}

impl QuasiparticleModel {
    pub fn gamma(&self, temp: f64) -> f64 {
        self.scale * xqp_thermal(temp, self.gap)
    }
}

/// Attributes the excess rate 1/t1_ref - 1/t1_base at `temp_ref` to
/// thermal quasiparticles.
pub fn calibrate_qp(gap: f64, t1_base: f64, t1_ref: f64, temp_ref: f64) -> Result<QuasiparticleModel> {
    if !(gap > 0.0) {
        return Err(invalid("gap", "must be > 0"));
    }
    if !(temp_ref > 0.0) {
        return Err(invalid("temp_ref", format!("must be > 0, got {temp_ref}")));
    }
    if !(t1_base > 0.0 && t1_ref > 0.0) {
        return Err(invalid("t1", "lifetimes must be > 0"));
    }
    if t1_ref >= t1_base {
        return Err(Error::Calibration(format!(
            "t1_ref ({t1_ref:e} s) must be shorter than t1_base ({t1_base:e} s); no excess rate to attribute"
        )));
    }
    let gamma = 1.0 / t1_ref - 1.0 / t1_base;
    let x = xqp_thermal(temp_ref, gap);
    if !(x > 0.0) {
        return Err(Error::Calibration(format!(
            "quasiparticle density underflows at {temp_ref} K"
        )));
    }
    Ok(QuasiparticleModel {
        gap,
        scale: gamma / x,
        calibration_point: CalibrationPoint {
            temp: temp_ref,
            gamma,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBudget {
    pub gamma_intrinsic: f64,
    pub gamma_qp: f64,
    pub gamma_purcell: f64,
    /// Multiplies the intrinsic rate; >= 1.
    pub thermal_factor: f64,
    pub t1: f64,
    pub temp: f64,
}

impl LossBudget {
    pub fn new(
        gamma_intrinsic: f64,
        gamma_qp: f64,
        gamma_purcell: f64,
        thermal_factor: f64,
        temp: f64,
    ) -> Self {
        let total = thermal_factor * gamma_intrinsic + gamma_qp + gamma_purcell;
        Self {
            gamma_intrinsic,
            gamma_qp,
            gamma_purcell,
            thermal_factor,
            t1: 1.0 / total,
            temp,
        }
    }

    pub fn total_rate(&self) -> f64 {
        self.thermal_factor * self.gamma_intrinsic + self.gamma_qp + self.gamma_purcell
    }
}

pub fn t1_vs_temperature(
    model: &QuasiparticleModel,
    gamma_intrinsic: f64,
    temps: &[f64],
) -> Vec<LossBudget> {
    temps
        .iter()
        .map(|&t| LossBudget::new(gamma_intrinsic, model.gamma(t), 0.0, 1.0, t))
        .collect()
}

/// Temperature at which the quasiparticle rate equals `gamma_intrinsic`,
/// i.e. T1 falls to half its low-temperature plateau.
pub fn half_plateau_temperature(
    model: &QuasiparticleModel,
    gamma_intrinsic: f64,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let target = gamma_intrinsic.ln();
    find_root(|t| model.gamma(t).ln() - target, lo, hi, 1e-12)
}

/// Dispersive Purcell rate kappa (g / detuning)^2 (1/s).
pub fn purcell_rate(g: f64, detuning: f64, kappa: f64) -> Result<f64> {
    if detuning.abs() <= g {
        return Err(Error::NotDispersive { detuning: detuning.abs(), g });
    }
    if kappa < 0.0 || g < 0.0 {
        return Err(invalid("purcell", "g and kappa must be >= 0"));
    }
    Ok(kappa * (g / detuning).powi(2))
}

/// Q = 2 pi f T1.
pub fn quality_factor(freq: f64, t1: f64) -> f64 {
    2.0 * PI * freq * t1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurcellInputs {
    pub g: f64,
    pub detuning: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalInputs {
    /// Qubit transition frequency (Hz).
    pub freq: f64,
    pub bath_temp: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BudgetInputs<'a> {
    pub gamma_intrinsic: f64,
    pub qp: Option<&'a QuasiparticleModel>,
    pub temp: f64,
    pub purcell: Option<PurcellInputs>,
    pub thermal: Option<ThermalInputs>,
}

pub fn combine(inputs: &BudgetInputs<'_>) -> Result<LossBudget> {
    if !(inputs.gamma_intrinsic >= 0.0) {
        return Err(invalid("gamma_intrinsic", "must be >= 0"));
    }
    let gamma_qp = inputs.qp.map_or(0.0, |m| m.gamma(inputs.temp));
    let gamma_purcell = match inputs.purcell {
        Some(p) => purcell_rate(p.g, p.detuning, p.kappa)?,
        None => 0.0,
    };
    let thermal_factor = inputs
        .thermal
        .map_or(1.0, |t| ThermalConvention::Stimulated.enhancement(nbar(t.freq, t.bath_temp)));
    Ok(LossBudget::new(
        inputs.gamma_intrinsic,
        gamma_qp,
        gamma_purcell,
        thermal_factor,
        inputs.temp,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::H;

    /// Closed-form inverse of nbar, used as an oracle for the root-found one.
    fn t_from_nbar(n: f64, freq: f64) -> f64 {
        H * freq / (KB * (1.0 + 1.0 / n).ln())
    }

    #[test]
    fn nbar_values() {
        assert!((nbar(5e9, 0.8) - 2.859).abs() < 5e-4);
        assert_eq!(nbar(5e9, 0.0), 0.0);
        let t = freq_to_kelvin(5e9);
        assert!((nbar(5e9, t) - 1.0 / (1f64.exp() - 1.0)).abs() < 1e-12);
        assert!((nbar(5e9, t) - 0.58198).abs() < 1e-5);
    }

    #[test]
    fn nbar_monotone() {
        assert!(nbar(5e9, 0.3) < nbar(5e9, 0.31));
        assert!(nbar(5e9, 0.3) > nbar(5.1e9, 0.3));
    }

    #[test]
    fn nbar_high_temperature_asymptote() {
        let f = 5e9;
        let t = 50.0 * freq_to_kelvin(f);
        let n = nbar(f, t);
        let asym = t / freq_to_kelvin(f) - 0.5;
        assert!((n - asym).abs() / n <= 0.01);
    }

    #[test]
    fn bath_temperature_examples() {
        let t = effective_bath_temperature(10.0, 5.3e9, ThermalConvention::Stimulated).unwrap();
        assert!((t - t_from_nbar(4.5, 5.3e9)).abs() < 1e-9);
        assert!((t - 1.267).abs() < 1e-3);
        let t = effective_bath_temperature(10.0, 5.01e9, ThermalConvention::Stimulated).unwrap();
        assert!((t - 1.198).abs() < 1e-3);
        let t = effective_bath_temperature(10.0, 5.01e9, ThermalConvention::TwoNbar).unwrap();
        assert!((t - t_from_nbar(5.0, 5.01e9)).abs() < 1e-9);
        assert_eq!(
            effective_bath_temperature(1.0, 7e9, ThermalConvention::Stimulated).unwrap(),
            0.0
        );
        assert!(effective_bath_temperature(0.0, 5e9, ThermalConvention::TwoNbar).is_err());
        assert!(effective_bath_temperature(0.5, 5e9, ThermalConvention::Stimulated).is_err());
    }

    #[test]
    fn bath_temperature_round_trip() {
        for t in [0.1, 0.5, 1.0, 2.0] {
            let ratio = 1.0 + 2.0 * nbar(5.01e9, t);
            let back = effective_bath_temperature(ratio, 5.01e9, ThermalConvention::Stimulated).unwrap();
            assert!((back - t).abs() < 1e-6, "{t} -> {back}");
        }
    }

    #[test]
    fn quasiparticle_density() {
        let gap = aluminium_gap();
        let x = xqp_thermal(0.175, gap);
        assert!((x - 1.196e-6).abs() / 1.196e-6 < 2e-3, "{x}");
        assert!((xqp_thermal(0.15, gap) - 1.213e-7).abs() / 1.213e-7 < 2e-3);
        assert_eq!(xqp_thermal(0.0, gap), 0.0);
    }

    #[test]
    fn qp_calibration() {
        let gap = aluminium_gap();
        let m = calibrate_qp(gap, 5.7e-6, 0.7e-6, 0.175).unwrap();
        assert!((m.scale - 1.05e12).abs() / 1.05e12 < 0.01, "{}", m.scale);
        let want = 1.0 / 0.7e-6 - 1.0 / 5.7e-6;
        assert!((m.gamma(0.175) - want).abs() / want < 1e-12);
        assert!(calibrate_qp(gap, 5.7e-6, 5.7e-6, 0.175).is_err());
    }

    #[test]
    fn t1_curve() {
        let gap = aluminium_gap();
        let m = calibrate_qp(gap, 5.7e-6, 0.7e-6, 0.175).unwrap();
        let g0 = 1.0 / 5.7e-6;
        let b = t1_vs_temperature(&m, g0, &[0.015, 0.15, 0.175]);
        assert!(b[0].gamma_qp < 1e-50);
        assert!((b[0].t1 - 5.7e-6).abs() / 5.7e-6 < 1e-3);
        assert!((b[1].t1 - 3.3e-6).abs() < 0.02e-6, "{}", b[1].t1);
        assert!((b[2].t1 - 0.7e-6).abs() < 1e-12);
        let t_half = half_plateau_temperature(&m, g0, 0.05, 0.5).unwrap();
        assert!((0.130..=0.165).contains(&t_half));
    }

    #[test]
    fn purcell() {
        let two_pi = 2.0 * PI;
        let r = purcell_rate(two_pi * 100e6, two_pi * 5.29e9, two_pi * 470e3).unwrap();
        assert!((r - 1.055e3).abs() < 1.0, "{r}");
        assert!((1.0 / r - 948e-6).abs() < 1e-6);
        assert_eq!(purcell_rate(0.0, 1e9, 1e6).unwrap(), 0.0);
        let a = purcell_rate(1e8, 3e9, 1e6).unwrap();
        let b = purcell_rate(1e8, 6e9, 1e6).unwrap();
        assert!((a / b - 4.0).abs() < 1e-12);
        assert!(purcell_rate(1e8, 1e8, 1e6).is_err());
    }

    #[test]
    fn quality_factors() {
        assert!((quality_factor(5.01e9, 5.7e-6) - 1.794e5).abs() < 100.0);
        assert!((quality_factor(5.01e9, 513e-9) - 1.61e4).abs() / 1.61e4 < 0.01);
        assert!((10.3e9 / 470e3 - 21_915.0f64).abs() < 1.0);
    }

    #[test]
    fn combine_budget() {
        let g0 = 1.7544e5;
        let b = combine(&BudgetInputs {
            gamma_intrinsic: g0,
            ..Default::default()
        })
        .unwrap();
        assert!((b.t1 - 5.7e-6).abs() < 1e-9);
        assert_eq!(b.thermal_factor, 1.0);

        let b = combine(&BudgetInputs {
            gamma_intrinsic: g0,
            thermal: Some(ThermalInputs {
                freq: 5.01e9,
                bath_temp: 0.0,
            }),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(b.thermal_factor, 1.0);

        let b = LossBudget::new(g0, 0.0, 0.0, 10.0, 0.015);
        assert!((b.t1 - 570e-9).abs() < 1e-10);
    }
}
