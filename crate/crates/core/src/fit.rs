// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Least-squares estimation of circuit parameters from observed transition
//! frequencies.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{levels, map_maybe_parallel, DeviceParams, FluxBias, DEFAULT_CHARGE_CUTOFF};
use crate::numerics::{minimize, MinimizeOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitParam {
    I0,
    Alpha,
    Cs,
    Cj,
}

impl FitParam {
    pub const ALL: [FitParam; 4] = [FitParam::I0, FitParam::Alpha, FitParam::Cs, FitParam::Cj];

    pub fn get(self, p: &DeviceParams) -> f64 {
        match self {
            Self::I0 => p.i0,
            Self::Alpha => p.alpha,
            Self::Cs => p.cs,
            Self::Cj => p.cj,
        }
    }

    pub fn set(self, p: &mut DeviceParams, v: f64) {
        match self {
            Self::I0 => p.i0 = v,
            Self::Alpha => p.alpha = v,
            Self::Cs => p.cs = v,
            Self::Cj => p.cj = v,
        }
    }

    /// Allowed range. Alpha's ends are excluded.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Self::I0 => (0.05e-6, 1e-6),
            Self::Alpha => (0.2, 0.8),
            Self::Cs => (10e-15, 300e-15),
            Self::Cj => (0.1e-15, 20e-15),
        }
    }

    pub fn in_bounds(self, v: f64) -> bool {
        let (lo, hi) = self.bounds();
        match self {
            Self::Alpha => v > lo && v < hi,
            _ => v >= lo && v <= hi,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::I0 => "i0",
            Self::Alpha => "alpha",
            Self::Cs => "cs",
            Self::Cj => "cj",
        }
    }
}

impl fmt::Display for FitParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FitParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i0" => Ok(Self::I0),
            "alpha" => Ok(Self::Alpha),
            "cs" => Ok(Self::Cs),
            "cj" => Ok(Self::Cj),
            other => Err(invalid("free", format!("unknown parameter '{other}' (expected i0, alpha, cs, cj)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionObservation {
    pub flux: FluxBias,
    pub i: usize,
    pub j: usize,
    /// Observed single-photon transition frequency (Hz).
    pub freq: f64,
    pub weight: f64,
}

impl TransitionObservation {
    pub fn new(flux: f64, i: usize, j: usize, freq: f64) -> Self {
        Self {
            flux: FluxBias(flux),
            i,
            j,
            freq,
            weight: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.j <= self.i {
            return Err(invalid("observation", format!("need j > i, got {} -> {}", self.i, self.j)));
        }
        if !(self.freq > 0.0) {
            return Err(invalid("observation", format!("freq must be > 0, got {}", self.freq)));
        }
        if !(self.weight > 0.0) {
            return Err(invalid("observation", format!("weight must be > 0, got {}", self.weight)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub minimize: MinimizeOptions,
    pub charge_cutoff: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            minimize: MinimizeOptions {
                tolerance: 1e-6,
                max_iterations: 2000,
                restarts: 5,
                seed: 0,
                jitter: 0.1,
                initial_step: 0.05,
            },
            charge_cutoff: DEFAULT_CHARGE_CUTOFF,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: DeviceParams,
    /// Weighted RMS of model - observed (Hz).
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
    /// model - observed per observation (Hz).
    pub per_point_errors: Vec<f64>,
}

/// Model frequencies for each observation, sharing one diagonalization per
/// distinct flux.
pub fn model_frequencies(
    params: &DeviceParams,
    observations: &[TransitionObservation],
    charge_cutoff: usize,
) -> Result<Vec<f64>> {
    let mut need: BTreeMap<u64, (FluxBias, usize)> = BTreeMap::new();
    for o in observations {
        let e = need.entry(o.flux.0.to_bits()).or_insert((o.flux, 0));
        e.1 = e.1.max(o.j + 1);
    }
    let jobs: Vec<(u64, FluxBias, usize)> = need.into_iter().map(|(k, (f, n))| (k, f, n)).collect();
    let solved = map_maybe_parallel(&jobs, |&(_, f, n)| levels(params, f, n, charge_cutoff));
    let mut by_flux = BTreeMap::new();
    for ((key, _, _), lv) in jobs.iter().zip(solved) {
        by_flux.insert(*key, lv?);
    }
    Ok(observations
        .iter()
        .map(|o| {
            let lv = &by_flux[&o.flux.0.to_bits()];
            lv[o.j] - lv[o.i]
        })
        .collect())
}

fn weighted_rms(errors: &[f64], observations: &[TransitionObservation]) -> f64 {
    let wsum: f64 = observations.iter().map(|o| o.weight).sum();
    let s: f64 = errors
        .iter()
        .zip(observations)
        .map(|(e, o)| o.weight * e * e)
        .sum();
    (s / wsum).sqrt()
}

const OUT_OF_BOUNDS: f64 = 1e6;

pub fn fit(
    observations: &[TransitionObservation],
    start: &DeviceParams,
    free: &[FitParam],
    options: &FitOptions,
) -> Result<FitResult> {
    start.validate()?;
    let mut free_sorted = free.to_vec();
    free_sorted.sort();
    free_sorted.dedup();
    let free = free_sorted;
    if observations.len() < free.len() || observations.is_empty() {
        return Err(invalid(
            "observations",
            format!("{} observations cannot constrain {} free parameters", observations.len(), free.len()),
        ));
    }
    for o in observations {
        o.validate()?;
    }
    for p in &free {
        if !p.in_bounds(p.get(start)) {
            return Err(invalid(p.name(), format!("start value {:e} outside bounds {:?}", p.get(start), p.bounds())));
        }
    }

    let scale: Vec<f64> = free.iter().map(|p| p.get(start)).collect();
    let params_at = |x: &[f64]| {
        let mut p = *start;
        for ((fp, s), v) in free.iter().zip(&scale).zip(x) {
            fp.set(&mut p, s * v);
        }
        p
    };
    let cutoff = options.charge_cutoff;
    let wsum: f64 = observations.iter().map(|o| o.weight).sum();
    // objective in GHz^2 keeps the simplex arithmetic well scaled
    let objective = |x: &[f64]| -> f64 {
        let p = params_at(x);
        let mut excess = 0.0;
        for (fp, v) in free.iter().zip(x) {
            let val = fp.get(&p);
            if !fp.in_bounds(val) {
                let (lo, hi) = fp.bounds();
                excess += ((lo - val).max(val - hi).max(0.0) / (hi - lo)).abs() + (v - 1.0).abs() * 1e-9;
            }
        }
        if excess > 0.0 {
            return OUT_OF_BOUNDS * (1.0 + excess);
        }
        match model_frequencies(&p, observations, cutoff) {
            Ok(m) => {
                m.iter()
                    .zip(observations)
                    .map(|(mf, o)| o.weight * ((mf - o.freq) / 1e9).powi(2))
                    .sum::<f64>()
                    / wsum
            }
            Err(_) => f64::NAN,
        }
    };

    let x0 = vec![1.0; free.len()];
    let f0 = objective(&x0);
    let (x, iterations, converged) = if free.is_empty() || f0 == 0.0 {
        (x0, 0, true)
    } else {
        let m = minimize(objective, &x0, &options.minimize)?;
        (m.argmin, m.iterations, m.converged)
    };
    let params = params_at(&x);
    let model = model_frequencies(&params, observations, cutoff)?;
    let per_point_errors: Vec<f64> = model.iter().zip(observations).map(|(m, o)| m - o.freq).collect();
    Ok(FitResult {
        params,
        residual_rms: weighted_rms(&per_point_errors, observations),
        iterations,
        converged,
        per_point_errors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variable {
    Param(FitParam),
    Flux,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Param(p) => p.fmt(f),
            Self::Flux => f.write_str("flux"),
        }
    }
}

/// Relative step used by [`sensitivity`].
pub const SENSITIVITY_STEP: f64 = 1e-4;

/// Central-difference derivatives of the observation's model frequency,
/// in Hz per SI unit of each variable (Hz per unit reduced flux for flux).
pub fn sensitivity(
    params: &DeviceParams,
    observation: &TransitionObservation,
    vars: &[Variable],
    charge_cutoff: usize,
) -> Result<Vec<(Variable, f64)>> {
    sensitivity_with_step(params, observation, vars, charge_cutoff, SENSITIVITY_STEP)
}

pub fn sensitivity_with_step(
    params: &DeviceParams,
    observation: &TransitionObservation,
    vars: &[Variable],
    charge_cutoff: usize,
    rel_step: f64,
) -> Result<Vec<(Variable, f64)>> {
    params.validate()?;
    let n = observation.j + 1;
    let omega = |p: &DeviceParams, f: f64| -> Result<f64> {
        let lv = levels(p, FluxBias(f), n, charge_cutoff)?;
        Ok(lv[observation.j] - lv[observation.i])
    };
    let f = observation.flux.0;
    vars.iter()
        .map(|&v| {
            let d = match v {
                Variable::Flux => {
                    let h = rel_step * if f != 0.0 { f.abs() } else { 1.0 };
                    (omega(params, f + h)? - omega(params, f - h)?) / (2.0 * h)
                }
                Variable::Param(fp) => {
                    let x = fp.get(params);
                    let h = rel_step * x.abs();
                    let mut up = *params;
                    let mut down = *params;
                    fp.set(&mut up, x + h);
                    fp.set(&mut down, x - h);
                    (omega(&up, f)? - omega(&down, f)?) / (2.0 * h)
                }
            };
            Ok((v, d))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CavityParams;
    use std::f64::consts::PI;

    fn device() -> DeviceParams {
        DeviceParams {
            i0: 0.3e-6,
            alpha: 0.41,
            cs: 93e-15,
            cj: 5e-15,
            ng1: 0.0,
            ng2: 0.0,
            cavity: CavityParams {
                omega_cav: 2.0 * PI * 10.3e9,
                g: 2.0 * PI * 100e6,
                kappa: 2.0 * PI * 470e3,
                cqr: 5e-15,
                cc: 2e-15,
            },
        }
    }

    fn opts() -> FitOptions {
        FitOptions {
            charge_cutoff: 6,
            minimize: MinimizeOptions {
                restarts: 1,
                ..FitOptions::default().minimize
            },
        }
    }

    fn synthetic(p: &DeviceParams, cutoff: usize) -> Vec<TransitionObservation> {
        let mut obs = vec![
            TransitionObservation::new(0.5, 0, 1, 1.0),
            TransitionObservation::new(0.51, 0, 1, 1.0),
            TransitionObservation::new(0.51, 1, 2, 1.0),
            TransitionObservation::new(0.51, 2, 3, 1.0),
        ];
        let m = model_frequencies(p, &obs, cutoff).unwrap();
        for (o, f) in obs.iter_mut().zip(m) {
            o.freq = f;
        }
        obs
    }

    #[test]
    fn parses_names() {
        assert_eq!("Alpha".parse::<FitParam>().unwrap(), FitParam::Alpha);
        assert!("ej".parse::<FitParam>().is_err());
    }

    #[test]
    fn exact_start_needs_no_iterations() {
        let p = device();
        let obs = synthetic(&p, 6);
        let r = fit(&obs, &p, &[FitParam::I0, FitParam::Alpha, FitParam::Cs], &opts()).unwrap();
        assert_eq!(r.residual_rms, 0.0);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.params, p);
    }

    #[test]
    fn no_free_params_evaluates_only() {
        let p = device();
        let mut obs = synthetic(&p, 6);
        obs[0].freq += 1e6;
        let r = fit(&obs, &p, &[], &opts()).unwrap();
        assert_eq!(r.iterations, 0);
        assert!((r.per_point_errors[0] + 1e6).abs() < 1e-3);
        // weighted mean of squares with unit weights
        assert!((r.residual_rms - 1e6 / 2.0).abs() < 1e-3);
    }

    #[test]
    fn too_few_observations() {
        let p = device();
        let obs = synthetic(&p, 6);
        assert!(fit(&obs[..2], &p, &[FitParam::I0, FitParam::Alpha, FitParam::Cs], &opts()).is_err());
    }

    #[test]
    fn recovers_perturbed_start() {
        let truth = device();
        let obs = synthetic(&truth, 6);
        let mut start = truth;
        start.i0 *= 1.15;
        start.alpha *= 1.15;
        start.cs *= 1.15;
        let r = fit(&obs, &start, &[FitParam::I0, FitParam::Alpha, FitParam::Cs], &opts()).unwrap();
        assert!(r.converged);
        for fp in [FitParam::I0, FitParam::Alpha, FitParam::Cs] {
            let rel = (fp.get(&r.params) - fp.get(&truth)) / fp.get(&truth);
            assert!(rel.abs() < 0.01, "{fp}: {rel}");
        }
    }

    #[test]
    fn residual_invariant_under_weight_scaling() {
        let p = device();
        let mut obs = synthetic(&p, 6);
        for (k, o) in obs.iter_mut().enumerate() {
            o.freq += (k as f64 + 1.0) * 3e6;
            o.weight = 1.0 + k as f64;
        }
        let a = fit(&obs, &p, &[], &opts()).unwrap().residual_rms;
        for o in obs.iter_mut() {
            o.weight *= 17.0;
        }
        let b = fit(&obs, &p, &[], &opts()).unwrap().residual_rms;
        assert!((a - b).abs() / a < 1e-12);
    }

    #[test]
    fn sweet_spot_is_stationary() {
        let obs = TransitionObservation::new(0.5, 0, 1, 5e9);
        let s = sensitivity(&device(), &obs, &[Variable::Flux], 6).unwrap();
        let slope_off = sensitivity(&device(), &TransitionObservation::new(0.51, 0, 1, 5e9), &[Variable::Flux], 6)
            .unwrap()[0]
            .1;
        assert!(s[0].1.abs() < 1e-6 * slope_off.abs(), "{} vs {}", s[0].1, slope_off);
    }

    #[test]
    fn heavier_shunt_lowers_transition() {
        let obs = TransitionObservation::new(0.5, 0, 1, 5e9);
        let s = sensitivity(&device(), &obs, &[Variable::Param(FitParam::Cs)], 6).unwrap();
        assert!(s[0].1 < 0.0);
    }

    #[test]
    fn step_halving_consistent() {
        let obs = TransitionObservation::new(0.51, 0, 1, 5e9);
        let vars: Vec<Variable> = FitParam::ALL.iter().map(|&p| Variable::Param(p)).collect();
        let a = sensitivity_with_step(&device(), &obs, &vars, 6, 1e-4).unwrap();
        let b = sensitivity_with_step(&device(), &obs, &vars, 6, 5e-5).unwrap();
        for ((v, x), (_, y)) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 0.01 * x.abs(), "{v}: {x} vs {y}");
        }
    }
}
