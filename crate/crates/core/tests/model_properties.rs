// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

use csfq_core::config::DeviceConfig;
use csfq_core::model::{flux_sweep, levels, spectrum, DeviceParams, FluxBias, CONVERGENCE_HZ};
use proptest::prelude::*;

const KHZ: f64 = 1e3;

fn device() -> DeviceParams {
    DeviceConfig::paper_default().to_params().unwrap()
}

#[test]
fn converged_at_default_cutoff() {
    let p = device();
    for f in [0.5, 0.51] {
        let s = spectrum(&p, FluxBias(f), 4, 12).unwrap();
        let w12 = levels(&p, FluxBias(f), 2, 12).unwrap()[1];
        let w14 = levels(&p, FluxBias(f), 2, 14).unwrap()[1];
        assert!((w12 - w14).abs() <= CONVERGENCE_HZ, "f = {f}: {} Hz", w12 - w14);
        assert!(s.converged);
    }
}

#[test]
fn symmetric_about_sweet_spot() {
    let p = device();
    for d in [0.001, 0.005, 0.01, 0.02] {
        let a = levels(&p, FluxBias(0.5 + d), 2, 12).unwrap()[1];
        let b = levels(&p, FluxBias(0.5 - d), 2, 12).unwrap()[1];
        assert!((a - b).abs() <= KHZ, "delta {d}: {} Hz", a - b);
    }
}

#[test]
fn periodic_in_flux() {
    let p = device();
    for f in [0.37, 0.5, 0.51] {
        let a = levels(&p, FluxBias(f), 4, 12).unwrap();
        let b = levels(&p, FluxBias(f + 1.0), 4, 12).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= KHZ);
        }
    }
}

#[test]
fn positive_anharmonicity_off_sweet_spot() {
    let lv = levels(&device(), FluxBias(0.51), 3, 12).unwrap();
    assert!(lv[2] - lv[1] > lv[1]);
}

#[test]
fn offset_charge_sign_flip() {
    let mut p = device();
    p.ng1 = 0.12;
    p.ng2 = -0.31;
    let a = levels(&p, FluxBias(0.51), 4, 10).unwrap();
    p.ng1 = -0.12;
    p.ng2 = 0.31;
    let b = levels(&p, FluxBias(0.51), 4, 10).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= KHZ);
    }
}

#[test]
fn sweep_minimum_at_half_flux() {
    let s = flux_sweep(&device(), 0.48, 0.52, 41, 2, 10).unwrap();
    let k = (0..s.len()).min_by(|&a, &b| s[a].levels[1].total_cmp(&s[b].levels[1])).unwrap();
    assert!((s[k].flux.0 - 0.5).abs() < 1e-12);
}

fn params_strategy() -> impl Strategy<Value = DeviceParams> {
    (0.2e-6..0.6e-6f64, 0.3..0.7f64, 30e-15..200e-15f64, 2e-15..15e-15f64).prop_map(|(i0, alpha, cs, cj)| {
        DeviceParams { i0, alpha, cs, cj, ..device() }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symmetry_and_periodicity_hold_for_any_device(p in params_strategy(), d in 0.0..0.3f64) {
        let a = levels(&p, FluxBias(0.5 + d), 3, 5).unwrap();
        let b = levels(&p, FluxBias(0.5 - d), 3, 5).unwrap();
        let c = levels(&p, FluxBias(1.5 + d), 3, 5).unwrap();
        for k in 0..3 {
            prop_assert!((a[k] - b[k]).abs() <= KHZ);
            prop_assert!((a[k] - c[k]).abs() <= KHZ);
        }
        prop_assert!(a.windows(2).all(|w| w[0] <= w[1]));
    }
}
