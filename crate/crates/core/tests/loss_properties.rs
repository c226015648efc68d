// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

use csfq_core::constants::{freq_to_kelvin, H, KB};
use csfq_core::loss::{
    aluminium_gap, calibrate_qp, effective_bath_temperature, half_plateau_temperature, nbar, purcell_rate,
    t1_vs_temperature, ThermalConvention,
};
use proptest::prelude::*;

#[test]
fn bath_temperature_inverts_nbar() {
    let f = 5.01e9;
    for t in [0.1, 0.5, 1.0, 2.0] {
        let ratio = 1.0 + 2.0 * nbar(f, t);
        let back = effective_bath_temperature(ratio, f, ThermalConvention::Stimulated).unwrap();
        assert!((back - t).abs() <= 1e-6, "{t} K -> {back} K");
    }
}

#[test]
fn high_temperature_asymptote() {
    let f = 5e9;
    let t0 = 50.0 * freq_to_kelvin(f);
    for t in [t0, 2.0 * t0, 10.0 * t0] {
        let n = nbar(f, t);
        let classical = KB * t / (H * f) - 0.5;
        assert!((n - classical).abs() / n <= 0.01);
    }
}

#[test]
fn t1_non_increasing_in_temperature() {
    let m = calibrate_qp(aluminium_gap(), 5.7e-6, 0.7e-6, 0.175).unwrap();
    let temps: Vec<f64> = (0..=200).map(|k| 0.01 + 0.002 * k as f64).collect();
    let b = t1_vs_temperature(&m, 1.0 / 5.7e-6, &temps);
    assert!(b.windows(2).all(|w| w[1].t1 - w[0].t1 <= 0.0));
}

#[test]
fn roll_off_band() {
    let m = calibrate_qp(aluminium_gap(), 5.7e-6, 0.7e-6, 0.175).unwrap();
    let t = half_plateau_temperature(&m, 1.0 / 5.7e-6, 1e-3, 10.0).unwrap();
    assert!((0.130..=0.165).contains(&t), "{t}");
}

proptest! {
    #[test]
    fn purcell_scaling(frac in 1e-4..0.2f64, det in 2e9..5e10f64, kappa in 1e3..1e8f64, s in 1.1..4.0f64) {
        // g stays a small fraction of the detuning so s * g remains dispersive.
        let g = frac * det;
        let base = purcell_rate(g, det, kappa).unwrap();
        let rel = |x: f64, y: f64| ((x - y) / y).abs();
        prop_assert!(rel(purcell_rate(s * g, det, kappa).unwrap(), s * s * base) < 1e-12);
        prop_assert!(rel(purcell_rate(g, s * det, kappa).unwrap(), base / (s * s)) < 1e-12);
        prop_assert!(rel(purcell_rate(g, det, s * kappa).unwrap(), s * base) < 1e-12);
    }

    #[test]
    fn bath_temperature_round_trip(t in 0.02..3.0f64, f in 1e9..1.5e10f64) {
        for conv in [ThermalConvention::Stimulated, ThermalConvention::TwoNbar] {
            let ratio = conv.enhancement(nbar(f, t));
            let back = effective_bath_temperature(ratio, f, conv).unwrap();
            prop_assert!((back - t).abs() <= 1e-6, "{:?}: {} -> {}", conv, t, back);
        }
    }
}
