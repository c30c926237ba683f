// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::pulse::{Pulse, PulseKind, PulseSequence, Transition};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, I, ONE, ZERO};
use crate::state::{IonLevel, IonState};

type Local = [Complex64; 16];

fn identity_local() -> Local {
    let mut m = [ZERO; 16];
    for k in 0..4 {
        m[k * 5] = ONE;
    }
    m
}

/// Embeds a 2×2 operator `[[uu, ul], [lu, ll]]` on `(upper, lower)` of a
/// transition into the four-level ion space.
fn embed(transition: Transition, two: [[Complex64; 2]; 2]) -> Local {
    let (up, lo) = transition.levels();
    let (u, l) = (up.digit(), lo.digit());
    let mut m = identity_local();
    m[u * 4 + u] = two[0][0];
    m[u * 4 + l] = two[0][1];
    m[l * 4 + u] = two[1][0];
    m[l * 4 + l] = two[1][1];
    m
}

/// `exp(−i(π/2)θ σ_φ)` on one ion.
fn rotation_local(theta: f64, phi: f64, transition: Transition) -> Local {
    let half = FRAC_PI_2 * theta;
    let (c, s) = (half.cos(), half.sin());
    // σ_φ = [[0, e^{-iφπ}], [e^{iφπ}, 0]] in (upper, lower)
    let e_minus = Complex64::from_polar(1.0, -phi * PI);
    let e_plus = Complex64::from_polar(1.0, phi * PI);
    embed(
        transition,
        [
            [Complex64::new(c, 0.0), -I * s * e_minus],
            [-I * s * e_plus, Complex64::new(c, 0.0)],
        ],
    )
}

/// `exp(−i(θπ/2)σz)` on one ion.
fn phase_local(theta: f64, transition: Transition) -> Local {
    let half = FRAC_PI_2 * theta;
    embed(
        transition,
        [
            [Complex64::from_polar(1.0, -half), ZERO],
            [ZERO, Complex64::from_polar(1.0, half)],
        ],
    )
}

/// Hadamard on the `(D, S)` pair; maps the σx eigenbasis to `(D, S)` digits
/// with eigenvalue `+1` on digit `D`.
fn x_basis_local() -> Local {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    embed(Transition::T1, [[h, h], [h, -h]])
}

fn apply_ms(state: &mut IonState, theta: f64) {
    let n = state.num_ions();
    let w = x_basis_local();
    for ion in 0..n {
        state.apply_local(&w, ion);
    }
    let d_digit = IonLevel::D.digit();
    let s_digit = IonLevel::S.digit();
    state.apply_diagonal(|mut idx| {
        let mut m: i64 = 0;
        for _ in 0..n {
            let d = idx & 3;
            if d == d_digit {
                m += 1;
            } else if d == s_digit {
                m -= 1;
            }
            idx >>= 2;
        }
        Complex64::from_polar(1.0, -FRAC_PI_4 * theta * (m * m) as f64)
    });
    for ion in 0..n {
        state.apply_local(&w, ion);
    }
}

/// Applies the ideal unitary of `pulse`. Guards are ignored here; the
/// runtime decides whether a guarded pulse fires.
pub fn apply_pulse(state: &mut IonState, pulse: &Pulse) -> Result<()> {
    match pulse.kind {
        PulseKind::CollectiveR { theta, phi, transition } => {
            let m = rotation_local(theta, phi, transition);
            for ion in 0..state.num_ions() {
                state.apply_local(&m, ion);
            }
        }
        PulseKind::AddressedZ { theta, ion, transition } => {
            if ion >= state.num_ions() {
                return Err(Error::Argument(format!(
                    "addressed ion {ion} outside register of {} ions",
                    state.num_ions()
                )));
            }
            state.apply_local(&phase_local(theta, transition), ion);
        }
        PulseKind::Ms { theta } => apply_ms(state, theta),
    }
    Ok(())
}

/// Applies an unguarded sequence.
pub fn apply_sequence(state: &mut IonState, seq: &PulseSequence) -> Result<()> {
    if seq.is_guarded() {
        return Err(Error::Contract(format!(
            "sequence '{}' contains guarded pulses; execute it through the runtime",
            seq.name
        )));
    }
    for p in &seq.pulses {
        apply_pulse(state, p)?;
    }
    Ok(())
}

fn columns_unitary<F>(num_ions: usize, mut evolve: F) -> Result<CMatrix>
where
    F: FnMut(&mut IonState) -> Result<()>,
{
    if num_ions == 0 {
        return Err(Error::Argument("num_ions must be at least 1".into()));
    }
    let d = 1usize << (2 * num_ions);
    let mut u = CMatrix::zeros(d, d);
    for col in 0..d {
        let mut amps = vec![ZERO; d];
        amps[col] = ONE;
        let mut s = IonState::from_amplitudes(num_ions, amps)?;
        evolve(&mut s)?;
        for (row, a) in s.amplitudes().iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    Ok(u)
}

/// Full `4^n × 4^n` unitary of a single pulse.
pub fn pulse_unitary(pulse: &Pulse, num_ions: usize) -> Result<CMatrix> {
    columns_unitary(num_ions, |s| apply_pulse(s, pulse))
}

/// Product unitary of an unguarded sequence (first pulse applied first).
pub fn sequence_unitary(seq: &PulseSequence, num_ions: usize) -> Result<CMatrix> {
    if seq.is_guarded() {
        return Err(Error::Contract(format!(
            "sequence '{}' contains guarded pulses; use the runtime for conditioned execution",
            seq.name
        )));
    }
    seq.validate(num_ions)?;
    columns_unitary(num_ions, |s| apply_sequence(s, seq))
}

fn qubit_indices(num_ions: usize) -> Vec<usize> {
    (0..1usize << num_ions)
        .map(|bits| {
            (0..num_ions).fold(0usize, |acc, i| {
                let bit = (bits >> (num_ions - 1 - i)) & 1;
                acc * 4 + IonLevel::from_bit(bit as u8).digit()
            })
        })
        .collect()
}

/// Restriction of a four-level register operator to the logical qubit
/// subspace, indexed by logical bit strings (ion 0 most significant).
pub fn qubit_block(u: &CMatrix, num_ions: usize) -> CMatrix {
    let idx = qubit_indices(num_ions);
    let d = idx.len();
    CMatrix::from_fn(d, d, |r, c| u[(idx[r], idx[c])])
}

/// Largest probability with which a qubit-subspace basis state leaves the
/// qubit subspace under `u`.
pub fn qubit_leakage(u: &CMatrix, num_ions: usize) -> f64 {
    let idx = qubit_indices(num_ions);
    idx.iter()
        .map(|&c| {
            let inside: f64 = idx.iter().map(|&r| u[(r, c)].norm_sqr()).sum();
            1.0 - inside
        })
        .fold(0.0, f64::max)
}

/// Pauli operators on the qubit transition of one ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

pub fn apply_pauli(state: &mut IonState, ion: usize, pauli: Pauli) {
    let two = match pauli {
        Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
        Pauli::Y => [[ZERO, -I], [I, ZERO]],
        Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
    };
    state.apply_local(&embed(Transition::T1, two), ion);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_error};
    use crate::pulses::{verify_equivalence, EquivalenceClass};

    fn expm_hermitian(h: &CMatrix, scale: Complex64) -> CMatrix {
        // exp(scale·H) via eigendecomposition of the Hermitian H
        let eig = h.clone().symmetric_eigen();
        let d = h.nrows();
        let mut diag = CMatrix::zeros(d, d);
        for k in 0..d {
            diag[(k, k)] = (scale * eig.eigenvalues[k]).exp();
        }
        &eig.eigenvectors * diag * eig.eigenvectors.adjoint()
    }

    fn two_level_pauli(n: usize, ion: usize, p: Pauli) -> CMatrix {
        // σ on T1 of `ion`, zero outside the qubit pair of that ion
        let (s, d) = (IonLevel::S.digit(), IonLevel::D.digit());
        let mut one = CMatrix::zeros(4, 4);
        match p {
            Pauli::X => {
                one[(s, d)] = ONE;
                one[(d, s)] = ONE;
            }
            Pauli::Y => {
                one[(s, d)] = -I;
                one[(d, s)] = I;
            }
            Pauli::Z => {
                one[(s, s)] = ONE;
                one[(d, d)] = -ONE;
            }
        }
        let mut m = CMatrix::identity(1, 1);
        for k in 0..n {
            let f = if k == ion { one.clone() } else { CMatrix::identity(4, 4) };
            m = m.kronecker(&f);
        }
        m
    }

    #[test]
    fn pulses_match_matrix_exponentials() {
        let n = 2;
        let sx = two_level_pauli(n, 0, Pauli::X) + two_level_pauli(n, 1, Pauli::X);
        let sy = two_level_pauli(n, 0, Pauli::Y) + two_level_pauli(n, 1, Pauli::Y);
        let (theta, phi) = (0.37, 0.81);
        let sphi = &sx * Complex64::new((phi * PI).cos(), 0.0)
            + &sy * Complex64::new((phi * PI).sin(), 0.0);
        let expected = expm_hermitian(&sphi, -I * FRAC_PI_2 * theta);
        let got = pulse_unitary(&Pulse::r(theta, phi), n).unwrap();
        assert!(max_abs_diff(&expected, &got) < 1e-12);

        let ms_expected = expm_hermitian(&(&sx * &sx), -I * FRAC_PI_4 * theta);
        let ms = pulse_unitary(&Pulse::ms(theta), n).unwrap();
        assert!(max_abs_diff(&ms_expected, &ms) < 1e-12);

        let z_expected = expm_hermitian(&two_level_pauli(n, 1, Pauli::Z), -I * FRAC_PI_2 * theta);
        let z = pulse_unitary(&Pulse::z(theta, 1), n).unwrap();
        assert!(max_abs_diff(&z_expected, &z) < 1e-12);
    }

    #[test]
    fn bit_flip_is_r_1_0() {
        let u = qubit_block(&pulse_unitary(&Pulse::r(1.0, 0.0), 1).unwrap(), 1);
        let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let f = verify_equivalence(&x, &u, EquivalenceClass::GlobalPhase).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_ms_makes_ghz_from_dd() {
        let mut s = IonState::from_levels(&[IonLevel::D, IonLevel::D]).unwrap();
        apply_pulse(&mut s, &Pulse::ms(0.5)).unwrap();
        let p = s.qubit_probabilities(&[0, 1]);
        assert!((p[0b00] - 0.5).abs() < 1e-12);
        assert!((p[0b11] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn full_z_turn_is_minus_identity_on_qubit() {
        let u = qubit_block(&pulse_unitary(&Pulse::z(2.0, 0), 1).unwrap(), 1);
        let minus = CMatrix::identity(2, 2) * (-ONE);
        assert!(max_abs_diff(&u, &minus) < 1e-12);
    }

    #[test]
    fn pulses_are_unitary_and_transition_local() {
        for tr in [Transition::T1, Transition::T2, Transition::T3] {
            for p in [Pulse::r_on(0.3, 0.7, tr), Pulse::z_on(1.3, 0, tr)] {
                let u = pulse_unitary(&p, 2).unwrap();
                assert!(unitarity_error(&u) < 1e-12);
                if tr != Transition::T1 {
                    let one = pulse_unitary(&p, 1).unwrap();
                    let (s, d) = (IonLevel::S.digit(), IonLevel::D.digit());
                    assert_eq!(one[(s, d)], ZERO);
                    assert_eq!(one[(d, s)], ZERO);
                }
            }
        }
        assert!(unitarity_error(&pulse_unitary(&Pulse::ms(0.3), 3).unwrap()) < 1e-12);
    }

    #[test]
    fn ms_composes_additively() {
        let a = pulse_unitary(&Pulse::ms(0.3), 3).unwrap();
        let b = pulse_unitary(&Pulse::ms(0.45), 3).unwrap();
        let ab = pulse_unitary(&Pulse::ms(0.75), 3).unwrap();
        assert!(max_abs_diff(&(&b * &a), &ab) < 1e-12);
    }

    #[test]
    fn ms_two_is_identity_on_two_ions() {
        let u = qubit_block(&pulse_unitary(&Pulse::ms(2.0), 2).unwrap(), 2);
        let f = verify_equivalence(&CMatrix::identity(4, 4), &u, EquivalenceClass::GlobalPhase).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ms_is_permutation_symmetric() {
        let n = 3;
        let u = pulse_unitary(&Pulse::ms(0.41), n).unwrap();
        // swap ions 0 and 2
        let d = 1 << (2 * n);
        let perm: Vec<usize> = (0..d)
            .map(|i| {
                let (a, b, c) = (i >> 4 & 3, i >> 2 & 3, i & 3);
                (c << 4) | (b << 2) | a
            })
            .collect();
        let p = crate::linalg::permutation_matrix(&perm);
        assert!(max_abs_diff(&(&p * &u), &(&u * &p)) < 1e-12);
    }

    #[test]
    fn guarded_sequence_has_no_unitary() {
        let seq = PulseSequence::new("g", vec![0], vec![Pulse::z(1.0, 0).with_guard(0, 1)]).unwrap();
        assert!(matches!(sequence_unitary(&seq, 1), Err(Error::Contract(_))));
    }

    #[test]
    fn sequence_then_inverse_is_identity() {
        let seq = PulseSequence::new(
            "mix",
            vec![0, 1],
            vec![Pulse::r(0.3, 0.2), Pulse::ms(0.7), Pulse::z(0.4, 1), Pulse::r_on(0.5, 0.0, Transition::T3)],
        )
        .unwrap();
        let u = sequence_unitary(&seq, 2).unwrap();
        let ui = sequence_unitary(&seq.inverse(), 2).unwrap();
        assert!(max_abs_diff(&(&ui * &u), &CMatrix::identity(16, 16)) < 1e-9);
        let single = PulseSequence::new("one", vec![0], vec![Pulse::ms(0.7)]).unwrap();
        assert!(
            max_abs_diff(&sequence_unitary(&single, 2).unwrap(), &pulse_unitary(&Pulse::ms(0.7), 2).unwrap())
                < 1e-15
        );
    }
}
