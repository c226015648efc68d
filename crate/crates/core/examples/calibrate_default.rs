// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Derives the shipped default device: fit (I0, alpha, Cs) to the four
//! measured transitions at a reference Cj, then calibrate Cj so the
//! sweet-spot transition sits at 5.01 GHz.
//!
//! cargo run --release -p csfq-core --example calibrate_default

use std::time::Instant;

use csfq_core::config::DeviceConfig;
use csfq_core::fit::{fit, FitOptions, FitParam, TransitionObservation};
use csfq_core::model::{calibrate_cj, levels, FluxBias};

fn main() -> csfq_core::Result<()> {
    let cfg = DeviceConfig::paper_published();
    let start = cfg.to_params()?;
    let obs = [
        TransitionObservation::new(0.50, 0, 1, 5.01e9),
        TransitionObservation::new(0.51, 0, 1, 5.30e9),
        TransitionObservation::new(0.51, 1, 2, 5.58e9),
        TransitionObservation::new(0.51, 2, 3, 5.83e9),
    ];
    let opts = FitOptions::default();
    let t = Instant::now();
    let r = fit(&obs, &start, &[FitParam::I0, FitParam::Alpha, FitParam::Cs], &opts)?;
    println!("fit: {:?} rms {:.2} MHz iters {} converged {} ({:.1?})", r.params, r.residual_rms / 1e6, r.iterations, r.converged, t.elapsed());
    println!("errors MHz: {:?}", r.per_point_errors.iter().map(|e| e / 1e6).collect::<Vec<_>>());
    let cal = calibrate_cj(&r.params, FluxBias(0.5), 5.01e9, 1e-15, r.params.cj, opts.charge_cutoff)?;
    println!("Cj = {:.6} fF", cal.cj * 1e15);
    let a = levels(&cal, FluxBias(0.5), 2, 12)?;
    let b = levels(&cal, FluxBias(0.51), 4, 12)?;
    println!("w01(0.5) = {:.4} GHz; ladder(0.51) = {:?}", a[1] / 1e9, b.windows(2).map(|w| (w[1] - w[0]) / 1e9).collect::<Vec<_>>());
    let mut out = cfg.with_qubit(&cal);
    out.name = "paper-csfq".into();
    println!("{}", out.to_json_string());
    Ok(())
}
