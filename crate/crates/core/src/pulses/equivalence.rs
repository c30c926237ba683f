// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ZERO};

/// Acceptance threshold for multi-pulse products (accumulated rounding).
pub const SEQUENCE_TOL: f64 = 1e-6;

const GRID_POINTS: usize = 64;
const GRID_SWEEPS: usize = 3;
const MAX_REFINE_SWEEPS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceClass {
    /// `V = e^{iα} U`.
    GlobalPhase,
    /// `V = e^{iα} D U` with `D` a product of per-qubit phases on `S`
    /// (logical 1). Requires qubit-subspace matrices of dimension `2^k`.
    LocalZ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub class: EquivalenceClass,
    pub fidelity: f64,
    /// Per-qubit phase corrections (units of π) applied to `S`; empty for the
    /// global-phase class.
    pub phases: Vec<f64>,
    pub passed: bool,
}

/// Class-maximised overlap `|Tr(U† D V)| / d`.
pub fn verify_equivalence(u: &CMatrix, v: &CMatrix, cls: EquivalenceClass) -> Result<f64> {
    Ok(match cls {
        EquivalenceClass::GlobalPhase => global_overlap(u, v)?,
        EquivalenceClass::LocalZ => local_z_correction(u, v)?.0,
    })
}

fn check_dims(u: &CMatrix, v: &CMatrix) -> Result<()> {
    if u.shape() != v.shape() || u.nrows() != u.ncols() {
        return Err(Error::Argument(format!(
            "cannot compare {:?} with {:?}",
            u.shape(),
            v.shape()
        )));
    }
    Ok(())
}

fn global_overlap(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    check_dims(u, v)?;
    let d = u.nrows() as f64;
    let tr: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok((tr.norm() / d).min(1.0))
}

/// Best per-qubit phase correction `D` (on the left of `v`) and the
/// resulting overlap. A 64-point grid per phase in coordinate sweeps is
/// followed by exact coordinate-wise maximisation.
pub fn local_z_correction(u: &CMatrix, v: &CMatrix) -> Result<(f64, Vec<f64>)> {
    check_dims(u, v)?;
    let d = u.nrows();
    if !d.is_power_of_two() {
        return Err(Error::Argument(format!(
            "local-Z equivalence needs a qubit-subspace matrix, got dimension {d}"
        )));
    }
    let k = d.trailing_zeros() as usize;
    // Tr(U† D V) = Σ_r D_rr w_r with w_r = Σ_c V_rc conj(U_rc)
    let w: Vec<Complex64> = (0..d)
        .map(|r| (0..d).map(|c| v[(r, c)] * u[(r, c)].conj()).sum())
        .collect();
    let bit = |r: usize, q: usize| (r >> (k - 1 - q)) & 1 == 1;
    let mut phases = vec![0.0f64; k];
    let weighted = |phases: &[f64], r: usize| -> Complex64 {
        let ph: f64 = (0..k).filter(|&q| bit(r, q)).map(|q| phases[q]).sum();
        w[r] * Complex64::from_polar(1.0, ph * std::f64::consts::PI)
    };
    // split the trace into the parts with qubit q in D (a) and in S (b)
    let split = |phases: &[f64], q: usize| -> (Complex64, Complex64) {
        let mut a = ZERO;
        let mut b = ZERO;
        for r in 0..d {
            let mut p = phases.to_vec();
            p[q] = 0.0;
            let t = weighted(&p, r);
            if bit(r, q) {
                b += t;
            } else {
                a += t;
            }
        }
        (a, b)
    };
    for _ in 0..GRID_SWEEPS {
        for q in 0..k {
            let (a, b) = split(&phases, q);
            let best = (0..GRID_POINTS)
                .map(|g| 2.0 * g as f64 / GRID_POINTS as f64)
                .max_by(|x, y| {
                    let fx = (a + b * Complex64::from_polar(1.0, x * std::f64::consts::PI)).norm();
                    let fy = (a + b * Complex64::from_polar(1.0, y * std::f64::consts::PI)).norm();
                    fx.total_cmp(&fy)
                })
                .unwrap_or(0.0);
            phases[q] = best;
        }
    }
    let total = |phases: &[f64]| (0..d).map(|r| weighted(phases, r)).sum::<Complex64>().norm();
    let mut current = total(&phases);
    for _ in 0..MAX_REFINE_SWEEPS {
        for q in 0..k {
            let (a, b) = split(&phases, q);
            if b.norm() > 0.0 && a.norm() > 0.0 {
                phases[q] = ((a.arg() - b.arg()) / std::f64::consts::PI).rem_euclid(2.0);
            }
        }
        let next = total(&phases);
        if next - current < 1e-15 {
            current = current.max(next);
            break;
        }
        current = next;
    }
    Ok(((current / d as f64).min(1.0), phases))
}

/// Checks a realised operator against its target: global phase first, then
/// local-Z if the global check misses `tol`.
pub fn check_against_target(target: &CMatrix, realised: &CMatrix, tol: f64) -> Result<EquivalenceReport> {
    let global = global_overlap(target, realised)?;
    if global >= 1.0 - tol || !target.nrows().is_power_of_two() {
        return Ok(EquivalenceReport {
            class: EquivalenceClass::GlobalPhase,
            fidelity: global,
            phases: vec![],
            passed: global >= 1.0 - tol,
        });
    }
    let (fidelity, phases) = local_z_correction(target, realised)?;
    Ok(EquivalenceReport {
        class: EquivalenceClass::LocalZ,
        fidelity,
        phases,
        passed: fidelity >= 1.0 - tol,
    })
}
