// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! Capacitively shunted flux qubit in the two-node charge basis.
//!
//! Coordinates are the phases across the two large junctions; the small
//! (ratio `alpha`) junction's phase is fixed by flux quantization. With
//! reduced flux `f = Phi/Phi0` the potential is
//!
//! ```text
//! U(p1, p2) = E_J [2 + alpha - cos p1 - cos p2 - alpha cos(2 pi f + p1 - p2)]
//! ```
//!
//! and the kinetic term is `2 e^2 (n - ng)^T C^-1 (n - ng)` with
//! `C = [[Cj + Ca, -Ca], [-Ca, Cj + Ca]]`, `Ca = alpha Cj + Cs`.
//! Matrices are assembled in frequency units (energy / h, Hz).

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::constants::{E, H, PHI0};
use crate::error::{invalid, Error, Result};
use crate::numerics::{eigenvalues, find_root, HermitianMatrix, C64};

/// Default charge cutoff: basis states with |n1|, |n2| <= 12.
pub const DEFAULT_CHARGE_CUTOFF: usize = 12;
/// Threshold on |w01(N) - w01(N + 2)| for the converged flag (Hz).
pub const CONVERGENCE_HZ: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    /// Cavity angular frequency (rad/s).
    pub omega_cav: f64,
    /// Qubit-cavity coupling, angular (rad/s).
    pub g: f64,
    /// Cavity linewidth, angular (rad/s).
    pub kappa: f64,
    /// Qubit-resonator coupling capacitance (F); metadata only.
    pub cqr: f64,
    /// Resonator-feedline coupling capacitance (F); metadata only.
    pub cc: f64,
}

impl CavityParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_cav > 0.0 && self.omega_cav.is_finite()) {
            return Err(invalid("omega_cav", format!("must be > 0, got {}", self.omega_cav)));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(invalid("kappa", format!("must be > 0, got {}", self.kappa)));
        }
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(invalid("g", format!("must be >= 0, got {}", self.g)));
        }
        Ok(())
    }

    /// Loaded quality factor omega_cav / kappa.
    pub fn quality_factor(&self) -> f64 {
        self.omega_cav / self.kappa
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    /// Critical current of each large junction (A).
    pub i0: f64,
    /// Small-junction ratio.
    pub alpha: f64,
    /// Shunt capacitance (F).
    pub cs: f64,
    /// Large-junction self-capacitance (F).
    pub cj: f64,
    /// Offset charges in Cooper pairs.
    pub ng1: f64,
    pub ng2: f64,
    pub cavity: CavityParams,
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.i0 > 0.0 && self.i0.is_finite()) {
            return Err(invalid("i0", format!("must be > 0, got {}", self.i0)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(invalid("alpha", format!("must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.cs > 0.0 && self.cs.is_finite()) {
            return Err(invalid("cs", format!("must be > 0, got {}", self.cs)));
        }
        if !(self.cj >= 0.0 && self.cj.is_finite()) {
            return Err(invalid("cj", format!("must be >= 0, got {}", self.cj)));
        }
        if !(self.ng1.is_finite() && self.ng2.is_finite()) {
            return Err(invalid("ng", "offset charges must be finite"));
        }
        self.cavity.validate()
    }

    /// Large-junction Josephson energy I0 Phi0 / 2pi (J).
    pub fn josephson_energy(&self) -> f64 {
        self.i0 * PHI0 / (2.0 * PI)
    }

    /// Shunt charging scale e^2 / (2 Cs) (J).
    pub fn shunt_charging_energy(&self) -> f64 {
        E * E / (2.0 * self.cs)
    }

    /// Node capacitance matrix (F).
    pub fn capacitance_matrix(&self) -> [[f64; 2]; 2] {
        let ca = self.alpha * self.cj + self.cs;
        let d = self.cj + ca;
        [[d, -ca], [-ca, d]]
    }

    fn inverse_capacitance(&self) -> Result<[[f64; 2]; 2]> {
        let c = self.capacitance_matrix();
        let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        // det = Cj (Cj + 2 Ca): vanishes whenever Cj = 0
        if !(det > 0.0) || det < 1e-12 * c[0][0] * c[0][0] {
            return Err(Error::SingularCapacitance);
        }
        Ok([
            [c[1][1] / det, -c[0][1] / det],
            [-c[1][0] / det, c[0][0] / det],
        ])
    }
}

/// Reduced flux Phi / Phi0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FluxBias(pub f64);

impl FluxBias {
    pub fn reduced(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySpectrum {
    pub flux: FluxBias,
    /// E_k/h - E_0/h (Hz), ascending, levels[0] = 0.
    pub levels: Vec<f64>,
    pub charge_cutoff: usize,
    pub converged: bool,
}

impl EnergySpectrum {
    /// Transition frequency between two levels (Hz).
    pub fn omega(&self, i: usize, j: usize) -> f64 {
        self.levels[j] - self.levels[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub i: usize,
    pub j: usize,
    /// (E_j - E_i) / (order h), Hz.
    pub freq: f64,
    /// Photon number.
    pub order: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransitionSet {
    pub entries: Vec<Transition>,
}

impl TransitionSet {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn find(&self, i: usize, j: usize, order: u32) -> Option<&Transition> {
        self.entries
            .iter()
            .find(|t| t.i == i && t.j == j && t.order == order)
    }
}

fn basis_dim(cutoff: usize) -> usize {
    (2 * cutoff + 1).pow(2)
}

/// Charge-basis Hamiltonian in Hz, dimension (2N + 1)^2. Basis index is
/// `(n1 + N) (2N + 1) + (n2 + N)`.
pub fn build_hamiltonian(
    params: &DeviceParams,
    flux: FluxBias,
    charge_cutoff: usize,
) -> Result<HermitianMatrix> {
    if charge_cutoff < 2 {
        return Err(invalid("charge_cutoff", format!("must be >= 2, got {charge_cutoff}")));
    }
    params.validate()?;
    let cinv = params.inverse_capacitance()?;
    let n = charge_cutoff as i64;
    let side = 2 * charge_cutoff + 1;
    let dim = side * side;
    let idx = |n1: i64, n2: i64| ((n1 + n) as usize) * side + (n2 + n) as usize;

    let ej = params.josephson_energy() / H;
    let alpha = params.alpha;
    let kin = 2.0 * E * E / H;
    let hop_alpha = C64::from_polar(-0.5 * alpha * ej, 2.0 * PI * flux.0);

    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for n1 in -n..=n {
        for n2 in -n..=n {
            let s = idx(n1, n2);
            let q1 = n1 as f64 - params.ng1;
            let q2 = n2 as f64 - params.ng2;
            let diag = kin * (cinv[0][0] * q1 * q1 + 2.0 * cinv[0][1] * q1 * q2 + cinv[1][1] * q2 * q2)
                + ej * (2.0 + alpha);
            m[(s, s)] = C64::new(diag, 0.0);
            if n1 < n {
                let t = idx(n1 + 1, n2);
                m[(t, s)] = C64::new(-0.5 * ej, 0.0);
                m[(s, t)] = C64::new(-0.5 * ej, 0.0);
            }
            if n2 < n {
                let t = idx(n1, n2 + 1);
                m[(t, s)] = C64::new(-0.5 * ej, 0.0);
                m[(s, t)] = C64::new(-0.5 * ej, 0.0);
            }
            // e^{i p1} e^{-i p2}: |n1, n2> -> |n1 + 1, n2 - 1>
            if n1 < n && n2 > -n {
                let t = idx(n1 + 1, n2 - 1);
                m[(t, s)] = hop_alpha;
                m[(s, t)] = hop_alpha.conj();
            }
        }
    }
    Ok(HermitianMatrix::new_unchecked(m))
}

/// Sparse basis vector: (charge-basis index, coefficient) pairs.
type SparseVec = Vec<(usize, f64)>;

/// Sector basis vectors under the exchange (n1, n2) -> (-n2, -n1), which
/// commutes with H whenever ng1 = -ng2. Returns (even, odd) as lists of
/// sparse vectors.
fn parity_sectors(charge_cutoff: usize) -> (Vec<SparseVec>, Vec<SparseVec>) {
    let n = charge_cutoff as i64;
    let side = 2 * charge_cutoff + 1;
    let idx = |n1: i64, n2: i64| ((n1 + n) as usize) * side + (n2 + n) as usize;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for n1 in -n..=n {
        for n2 in -n..=n {
            let s = idx(n1, n2);
            let p = idx(-n2, -n1);
            if s == p {
                even.push(vec![(s, 1.0)]);
            } else if s < p {
                even.push(vec![(s, r), (p, r)]);
                odd.push(vec![(s, r), (p, -r)]);
            }
        }
    }
    (even, odd)
}

fn project(h: &HermitianMatrix, basis: &[Vec<(usize, f64)>]) -> HermitianMatrix {
    let m = h.as_matrix();
    let d = basis.len();
    let block = DMatrix::from_fn(d, d, |a, b| {
        let mut acc = C64::new(0.0, 0.0);
        for &(i, ci) in &basis[a] {
            for &(j, cj) in &basis[b] {
                acc += m[(i, j)] * (ci * cj);
            }
        }
        acc
    });
    HermitianMatrix::new_unchecked(block)
}

/// Lowest `n_levels` eigenvalues of H in Hz, relative to the ground state,
/// without the convergence check.
pub fn levels(
    params: &DeviceParams,
    flux: FluxBias,
    n_levels: usize,
    charge_cutoff: usize,
) -> Result<Vec<f64>> {
    let dim = basis_dim(charge_cutoff);
    if n_levels == 0 || n_levels > dim {
        return Err(invalid(
            "n_levels",
            format!("must lie in 1..={dim} for charge cutoff {charge_cutoff}, got {n_levels}"),
        ));
    }
    let h = build_hamiltonian(params, flux, charge_cutoff)?;
    let mut ev = if params.ng1 == -params.ng2 {
        let (even, odd) = parity_sectors(charge_cutoff);
        let mut v = eigenvalues(&project(&h, &even));
        v.extend(eigenvalues(&project(&h, &odd)));
        v.sort_by(f64::total_cmp);
        v
    } else {
        eigenvalues(&h)
    };
    ev.truncate(n_levels);
    let e0 = ev[0];
    Ok(ev.into_iter().map(|e| e - e0).collect())
}

/// Full-matrix eigenvalues without the parity reduction (slower; used to
/// cross-check the block path).
pub fn levels_full_matrix(
    params: &DeviceParams,
    flux: FluxBias,
    n_levels: usize,
    charge_cutoff: usize,
) -> Result<Vec<f64>> {
    let h = build_hamiltonian(params, flux, charge_cutoff)?;
    let mut ev = eigenvalues(&h);
    ev.truncate(n_levels.max(1));
    let e0 = ev[0];
    Ok(ev.into_iter().map(|e| e - e0).collect())
}

/// Spectrum at one flux, with convergence checked against cutoff N + 2.
pub fn spectrum(
    params: &DeviceParams,
    flux: FluxBias,
    n_levels: usize,
    charge_cutoff: usize,
) -> Result<EnergySpectrum> {
    let lv = levels(params, flux, n_levels.max(2), charge_cutoff)?;
    let refined = levels(params, flux, 2, charge_cutoff + 2)?;
    let converged = (lv[1] - refined[1]).abs() <= CONVERGENCE_HZ;
    let mut lv = lv;
    lv.truncate(n_levels);
    Ok(EnergySpectrum {
        flux,
        levels: lv,
        charge_cutoff,
        converged,
    })
}

/// Evenly spaced flux points over `[f_lo, f_hi]`.
pub fn flux_grid(f_lo: f64, f_hi: f64, n_points: usize) -> Result<Vec<FluxBias>> {
    if !(f_lo < f_hi) || !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(invalid("flux range", format!("need f_lo < f_hi, got [{f_lo}, {f_hi}]")));
    }
    if n_points < 2 {
        return Err(invalid("n_points", format!("must be >= 2, got {n_points}")));
    }
    let step = (f_hi - f_lo) / (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|k| FluxBias(if k + 1 == n_points { f_hi } else { f_lo + step * k as f64 }))
        .collect())
}

pub fn flux_sweep(
    params: &DeviceParams,
    f_lo: f64,
    f_hi: f64,
    n_points: usize,
    n_levels: usize,
    charge_cutoff: usize,
) -> Result<Vec<EnergySpectrum>> {
    let grid = flux_grid(f_lo, f_hi, n_points)?;
    sweep(params, &grid, n_levels, charge_cutoff)
}

/// Spectra at arbitrary flux points, in input order.
pub fn sweep(
    params: &DeviceParams,
    grid: &[FluxBias],
    n_levels: usize,
    charge_cutoff: usize,
) -> Result<Vec<EnergySpectrum>> {
    map_maybe_parallel(grid, |&f| spectrum(params, f, n_levels, charge_cutoff))
        .into_iter()
        .collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_maybe_parallel<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_maybe_parallel<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Single-photon transitions between every level pair, plus m-photon
/// transitions (2 <= m <= max_order) between levels at least two apart.
pub fn transitions(spec: &EnergySpectrum, max_order: u32) -> TransitionSet {
    let n = spec.levels.len();
    let mut entries = Vec::new();
    for order in 1..=max_order.max(1) {
        for i in 0..n {
            let min_gap = if order == 1 { 1 } else { 2 };
            for j in (i + min_gap)..n {
                entries.push(Transition {
                    i,
                    j,
                    freq: spec.omega(i, j) / order as f64,
                    order,
                });
            }
        }
    }
    TransitionSet { entries }
}

/// Solves for the junction capacitance that puts the 0 -> 1 transition at
/// `target_hz` at `flux`, searching `[cj_lo, cj_hi]`.
///
/// w01 is not monotone in Cj (it peaks near 10 fF for this device family),
/// so the bracket picks the branch.
pub fn calibrate_cj(
    params: &DeviceParams,
    flux: FluxBias,
    target_hz: f64,
    cj_lo: f64,
    cj_hi: f64,
    charge_cutoff: usize,
) -> Result<DeviceParams> {
    let w01 = |cj: f64| -> Result<f64> {
        let p = DeviceParams { cj, ..*params };
        Ok(levels(&p, flux, 2, charge_cutoff)?[1])
    };
    let (lo, hi) = (w01(cj_lo)? - target_hz, w01(cj_hi)? - target_hz);
    if lo * hi > 0.0 {
        return Err(Error::Calibration(format!(
            "w01 - target does not change sign on Cj in [{:.4} fF, {:.4} fF]: {:.1} MHz and {:.1} MHz",
            cj_lo * 1e15,
            cj_hi * 1e15,
            lo / 1e6,
            hi / 1e6
        )));
    }
    // work in fF so the bracket tolerance means something
    let mut failure = None;
    let cj_ff = find_root(
        |x| match w01(x * 1e-15) {
            Ok(w) => (w - target_hz) / 1e6,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        cj_lo * 1e15,
        cj_hi * 1e15,
        1e-9,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(DeviceParams {
        cj: cj_ff * 1e-15,
        ..*params
    })
}
