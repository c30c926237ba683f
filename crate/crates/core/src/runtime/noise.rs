// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Stochastic Pauli insertion.
//!
//! After an ideal operation, an error event occurs with probability `1 − f`
//! and applies a uniformly random non-identity Pauli string to the qubits
//! the operation touched, so a single application has process fidelity `f`.
//! Collective rotations draw an independent event per coupled ion. Pulses
//! on the auxiliary transitions (decoupling, readout shelving) are ideal.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{apply_gate, LogicalGate};
use crate::error::{Error, Result};
use crate::pulses::{apply_pauli, apply_pulse, Pauli, Pulse, PulseKind, Transition};
use crate::state::IonState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub ms_fidelity: f64,
    pub local_fidelity: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self { ms_fidelity: 0.95, local_fidelity: 0.993 }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        for (name, f) in [("ms_fidelity", self.ms_fidelity), ("local_fidelity", self.local_fidelity)] {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1], got {f}")));
            }
        }
        Ok(())
    }
}

const PAULIS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

/// With probability `1 − fidelity`, a random non-identity Pauli string on
/// `ions`. No randomness is consumed at unit fidelity.
fn maybe_error<R: Rng + ?Sized>(state: &mut IonState, ions: &[usize], fidelity: f64, rng: &mut R) {
    if fidelity >= 1.0 || ions.is_empty() || rng.random::<f64>() >= 1.0 - fidelity {
        return;
    }
    let strings = 1usize << (2 * ions.len());
    let mut code = rng.random_range(1..strings);
    for &ion in ions {
        let p = code & 3;
        code >>= 2;
        if p != 0 {
            apply_pauli(state, ion, PAULIS[p - 1]);
        }
    }
}

/// Applies `pulse` ideally, then the error channel of its class. `coupled`
/// lists the ions not parked in the cache while the pulse runs.
pub fn apply_noisy_pulse<R: Rng + ?Sized>(
    state: &mut IonState,
    pulse: &Pulse,
    coupled: &[usize],
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<()> {
    apply_pulse(state, pulse)?;
    match pulse.kind {
        PulseKind::Ms { .. } => maybe_error(state, coupled, noise.ms_fidelity, rng),
        PulseKind::CollectiveR { transition: Transition::T1, .. } => {
            for &ion in coupled {
                maybe_error(state, &[ion], noise.local_fidelity, rng);
            }
        }
        PulseKind::AddressedZ { transition: Transition::T1, ion, .. } => {
            maybe_error(state, &[ion], noise.local_fidelity, rng)
        }
        _ => {}
    }
    Ok(())
}

/// Gate-level counterpart: entangling gates fail at the MS fidelity,
/// single-qubit gates at the local fidelity.
pub fn apply_noisy_gate<R: Rng + ?Sized>(
    state: &mut IonState,
    gate: &LogicalGate,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<()> {
    apply_gate(state, gate)?;
    let qubits = gate.qubits();
    let f = if gate.is_entangling() { noise.ms_fidelity } else { noise.local_fidelity };
    maybe_error(state, &qubits, f, rng);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::fredkin_sequence;
    use crate::runtime::stream_rng;

    #[test]
    fn unit_fidelity_is_ideal_and_consumes_no_randomness() {
        let noise = NoiseModel { ms_fidelity: 1.0, local_fidelity: 1.0 };
        let mut a = IonState::from_qubit_bits(3, 0b101).unwrap();
        let mut b = a.clone();
        let mut rng = stream_rng(1, 0);
        for p in &fredkin_sequence().pulses {
            apply_noisy_pulse(&mut a, p, &[0, 1, 2], &noise, &mut rng).unwrap();
            apply_pulse(&mut b, p).unwrap();
        }
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert_eq!(rng.random::<u64>(), stream_rng(1, 0).random::<u64>());
    }

    #[test]
    fn error_frequency() {
        let noise = NoiseModel { ms_fidelity: 0.8, local_fidelity: 1.0 };
        let mut rng = stream_rng(9, 0);
        let n = 20_000;
        let mut flipped = 0;
        for _ in 0..n {
            // Z errors leave |00⟩ alone; count any X/Y component.
            let mut st = IonState::from_qubit_bits(2, 0).unwrap();
            maybe_error(&mut st, &[0, 1], noise.ms_fidelity, &mut rng);
            if st.qubit_probabilities(&[0, 1])[0] < 0.5 {
                flipped += 1;
            }
        }
        // 12 of the 15 non-identity strings contain X or Y
        let expect = 0.2 * 12.0 / 15.0;
        assert!((flipped as f64 / n as f64 - expect).abs() < 0.01);
    }
}
