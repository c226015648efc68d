// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Synthetic T1 / Ramsey / echo curves, least-squares extraction of their
//! time constants, and the T1-T2-Tphi rate identities.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{minimize, MinimizeOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayKind {
    T1,
    Ramsey,
    Echo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayShape {
    #[default]
    Exponential,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    /// T1, T2* or T2 depending on the experiment (s).
    pub tau: f64,
    /// Ramsey detuning (Hz); ignored for the other kinds.
    pub detuning: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub shape: DecayShape,
}

impl DecayParams {
    pub fn exponential(tau: f64) -> Self {
        Self {
            tau,
            detuning: 0.0,
            amplitude: 1.0,
            offset: 0.0,
            shape: DecayShape::Exponential,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub times: Vec<f64>,
    pub signal: Vec<f64>,
    pub kind: DecayKind,
    pub shape: DecayShape,
    pub truth: Option<DecayParams>,
}

fn envelope(shape: DecayShape, x: f64) -> f64 {
    match shape {
        DecayShape::Exponential => (-x).exp(),
        DecayShape::Gaussian => (-x * x).exp(),
    }
}

fn model(kind: DecayKind, p: &DecayParams, t: f64) -> f64 {
    let env = envelope(p.shape, t / p.tau);
    let osc = match kind {
        DecayKind::Ramsey => (2.0 * PI * p.detuning * t).cos(),
        _ => 1.0,
    };
    p.amplitude * env * osc + p.offset
}

/// Uniform time grid `[0, t_max]` with `n` samples.
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    let step = t_max / (n.max(2) - 1) as f64;
    (0..n).map(|k| step * k as f64).collect()
}

pub fn generate(kind: DecayKind, params: &DecayParams, times: &[f64]) -> Result<DecayCurve> {
    if !(params.tau > 0.0) {
        return Err(invalid("tau", format!("must be > 0, got {}", params.tau)));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("times", "must be strictly ascending"));
    }
    Ok(DecayCurve {
        times: times.to_vec(),
        signal: times.iter().map(|&t| model(kind, params, t)).collect(),
        kind,
        shape: params.shape,
        truth: Some(*params),
    })
}

/// Adds seeded Gaussian noise of standard deviation `sigma`.
pub fn add_noise(curve: &DecayCurve, sigma: f64, seed: u64) -> DecayCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma must be finite and >= 0");
    DecayCurve {
        signal: curve.signal.iter().map(|&y| y + normal.sample(&mut rng)).collect(),
        ..curve.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub params: DecayParams,
    pub residual_rms: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Least-squares fit of the curve's model. `shape` selects the envelope to
/// fit, which need not match the one that generated the data.
pub fn extract_with_shape(curve: &DecayCurve, shape: DecayShape) -> Result<DecayFit> {
    let n = curve.times.len();
    if n < 8 || curve.signal.len() != n {
        return Err(invalid("curve", format!("need >= 8 samples with matching lengths, got {n}")));
    }
    let t0 = curve.times[0];
    let span = curve.times[n - 1] - t0;
    let y = &curve.signal;
    let (lo, hi) = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let scale = hi - lo;
    if !(scale > 1e-12 * hi.abs().max(lo.abs()).max(1e-300)) {
        return Err(Error::NotConverged {
            reason: "no decay present (flat signal)".into(),
            residual: 0.0,
        });
    }

    // normalized coordinates: time in units of span, signal in units of scale
    let ts: Vec<f64> = curve.times.iter().map(|&t| (t - t0) / span).collect();
    let ys: Vec<f64> = y.iter().map(|&v| v / scale).collect();
    let start = initial_guess(curve.kind, shape, &ts, &ys);

    let kind = curve.kind;
    let unpack = |x: &[f64]| DecayParams {
        amplitude: x[0],
        tau: x[1],
        offset: x[2],
        detuning: if kind == DecayKind::Ramsey { x[3] } else { 0.0 },
        shape,
    };
    let cost = |x: &[f64]| {
        if !(x[1] > 1e-6) {
            return 1e6 * (1.0 + (x[1] - 1e-6).abs());
        }
        let p = unpack(x);
        ts.iter()
            .zip(&ys)
            .map(|(&t, &v)| (model(kind, &p, t) - v).powi(2))
            .sum::<f64>()
    };
    let opts = MinimizeOptions {
        tolerance: 1e-10,
        max_iterations: 20_000,
        restarts: 2,
        seed: 7,
        jitter: 0.05,
        initial_step: 0.05,
    };
    let m = minimize(cost, &start, &opts)?;
    let fitted = unpack(&m.argmin);
    let params = DecayParams {
        amplitude: fitted.amplitude * scale,
        offset: fitted.offset * scale,
        tau: fitted.tau * span,
        detuning: fitted.detuning / span,
        shape,
    };
    let residual_rms = (m.value / n as f64).sqrt() * scale;
    if !m.converged {
        return Err(Error::NotConverged {
            reason: "simplex did not contract below tolerance".into(),
            residual: residual_rms,
        });
    }
    if params.tau * 2.0 > span {
        return Err(Error::NotConverged {
            reason: format!(
                "curve spans only {:.2} fitted time constants (need >= 2)",
                span / params.tau
            ),
            residual: residual_rms,
        });
    }
    Ok(DecayFit {
        params,
        residual_rms,
        converged: true,
        iterations: m.iterations,
    })
}

pub fn extract(curve: &DecayCurve) -> Result<DecayFit> {
    extract_with_shape(curve, curve.shape)
}

/// Amplitude and offset from the ends of the trace, tau from the 1/e
/// crossing; Ramsey detuning from a matched-filter scan.
fn initial_guess(kind: DecayKind, shape: DecayShape, ts: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = ys.len();
    match kind {
        DecayKind::T1 | DecayKind::Echo => {
            let offset = ys[n - 1];
            let amp = ys[0] - offset;
            let tau = ts
                .iter()
                .zip(ys)
                .find(|(_, &v)| (v - offset) / amp <= (-1.0f64).exp())
                // both envelopes cross 1/e at t = tau
                .map(|(&t, _)| t)
                .filter(|&t| t > 0.0)
                .unwrap_or(1.0 / 3.0);
            vec![amp, tau, offset]
        }
        DecayKind::Ramsey => {
            let tail = n / 4;
            let offset = ys[n - tail.max(1)..].iter().sum::<f64>() / tail.max(1) as f64;
            let amp = ys[0] - offset;
            let tau = 1.0 / 3.0;
            // detuning in cycles per span; scan up to a quarter of the sample rate
            let max_cycles = (n as f64 / 4.0).max(1.0);
            let steps = 4 * n;
            let mut best = (0.0, f64::NEG_INFINITY);
            for k in 0..=steps {
                let d = max_cycles * k as f64 / steps as f64;
                let (mut num, mut den) = (0.0, 0.0);
                for (&t, &v) in ts.iter().zip(ys) {
                    let b = envelope(shape, t / tau) * (2.0 * PI * d * t).cos();
                    num += (v - offset) * b;
                    den += b * b;
                }
                let score = num * num.abs() / den.max(1e-300);
                if score > best.1 {
                    best = (d, score);
                }
            }
            vec![amp, tau, offset, best.0]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSet {
    pub t1: f64,
    pub t2_star: f64,
    pub t2_echo: f64,
    /// `None` when the decay is lifetime limited (no pure dephasing).
    pub tphi_star: Option<f64>,
    pub tphi_echo: Option<f64>,
}

impl CoherenceSet {
    pub fn star_lifetime_limited(&self) -> bool {
        self.tphi_star.is_none()
    }

    pub fn echo_lifetime_limited(&self) -> bool {
        self.tphi_echo.is_none()
    }
}

/// Fractional slack allowed on T2 <= 2 T1 before rejecting as unphysical.
pub const T2_SLACK: f64 = 0.05;

/// Pure dephasing time from 1/Tphi = 1/T2 - 1/(2 T1); `None` when the rate
/// vanishes (T2 at or, within slack, above 2 T1).
pub fn pure_dephasing(t1: f64, t2: f64) -> Result<Option<f64>> {
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(invalid("coherence", format!("times must be > 0, got T1 = {t1}, T2 = {t2}")));
    }
    if t2 > 2.0 * t1 * (1.0 + T2_SLACK) {
        return Err(Error::Unphysical(format!(
            "T2 = {t2:e} s exceeds 2 T1 = {:e} s beyond {}% slack",
            2.0 * t1,
            T2_SLACK * 100.0
        )));
    }
    let rate = 1.0 / t2 - 1.0 / (2.0 * t1);
    Ok(if rate > 0.0 { Some(1.0 / rate) } else { None })
}

pub fn coherence_relations(t1: f64, t2_star: f64, t2_echo: f64) -> Result<CoherenceSet> {
    Ok(CoherenceSet {
        t1,
        t2_star,
        t2_echo,
        tphi_star: pure_dephasing(t1, t2_star)?,
        tphi_echo: pure_dephasing(t1, t2_echo)?,
    })
}

/// Inverse of [`pure_dephasing`]: 1/T2 = 1/(2 T1) + 1/Tphi.
pub fn compose_t2(t1: f64, tphi: f64) -> f64 {
    1.0 / (1.0 / (2.0 * t1) + 1.0 / tphi)
}
