// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

use csfq_core::numerics::{eigensolve, eigenvalues, HermitianMatrix, C64};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let a = DMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    HermitianMatrix::new((&a + a.adjoint()) * C64::new(0.5, 0.0)).unwrap()
}

// Cyclic Jacobi rotations on a real symmetric matrix; slow but simple.
fn jacobi_eigenvalues(mut a: DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut v: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// [[Re, -Im], [Im, Re]]: same spectrum as H, each eigenvalue twice.
fn doubled_real(h: &HermitianMatrix) -> DMatrix<f64> {
    let n = h.dim();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = h.get(r % n, c % n);
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

#[test]
fn residual_trace_orthonormality_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    for case in 0..200 {
        let n = rng.random_range(2..=64);
        let h = random_hermitian(&mut rng, n);
        let norm = h.frobenius_norm();
        let d = eigensolve(&h);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]), "case {case}: not ascending");
        for k in 0..n {
            let v = d.eigenvector(k);
            let r = (h.as_matrix() * &v - &v * C64::new(d.eigenvalues[k], 0.0)).norm();
            assert!(r <= 1e-9 * norm, "case {case} n {n} k {k}: residual {r:e}");
        }
        let sum: f64 = d.eigenvalues.iter().sum();
        assert!((sum - h.trace()).abs() <= 1e-9 * norm, "case {case}: trace");
        let gram = d.eigenvectors.adjoint() * &d.eigenvectors;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - C64::new(want, 0.0)).norm() <= 1e-9, "case {case}: <v{i}, v{j}>");
            }
        }
    }
}

#[test]
fn doubled_real_form_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let n = rng.random_range(2..=16);
        let h = random_hermitian(&mut rng, n);
        let ours = eigenvalues(&h);
        let oracle = jacobi_eigenvalues(doubled_real(&h));
        for (k, &e) in ours.iter().enumerate() {
            assert!((oracle[2 * k] - e).abs() <= 1e-9, "{} vs {e}", oracle[2 * k]);
            assert!((oracle[2 * k + 1] - e).abs() <= 1e-9, "{} vs {e}", oracle[2 * k + 1]);
        }
    }
}

#[test]
fn real_and_complex_paths_agree() {
    // an imaginary part of 0 takes the real reduction; a vanishing one does not
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = random_hermitian(&mut rng, 20);
    let real = HermitianMatrix::new(h.as_matrix().map(|z| C64::new(z.re, 0.0))).unwrap();
    let nearly = HermitianMatrix::new(DMatrix::from_fn(20, 20, |r, c| {
        let z = real.get(r, c);
        C64::new(z.re, if r < c { 1e-300 } else if r > c { -1e-300 } else { 0.0 })
    }))
    .unwrap();
    for (a, b) in eigenvalues(&real).iter().zip(eigenvalues(&nearly)) {
        assert!((a - b).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn small_matrices_decompose(entries in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..=36)) {
        let n = (entries.len() as f64).sqrt() as usize;
        let a = DMatrix::from_fn(n, n, |r, c| { let (x, y) = entries[r * n + c]; C64::new(x, y) });
        let h = HermitianMatrix::new((&a + a.adjoint()) * C64::new(0.5, 0.0)).unwrap();
        let d = eigensolve(&h);
        let norm = h.frobenius_norm();
        for k in 0..n {
            let v = d.eigenvector(k);
            let r = (h.as_matrix() * &v - &v * C64::new(d.eigenvalues[k], 0.0)).norm();
            prop_assert!(r <= 1e-9 * norm.max(1e-300));
        }
        for (a, b) in d.eigenvalues.iter().zip(eigenvalues(&h)) {
            prop_assert!((a - b).abs() <= 1e-9 * norm.max(1e-300));
        }
    }
}
