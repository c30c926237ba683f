// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Ideal gate-level action on the logical subspace.

use super::gate::{Circuit, LogicalGate};
use crate::error::Result;
use crate::linalg::{cis_pi, CMatrix, ZERO};
use crate::state::{IonLevel, IonState};

fn controlled_table(k: usize, f: impl Fn(usize) -> usize) -> Vec<usize> {
    // Control is the most significant bit of the k+1 bit index.
    let half = 1 << k;
    (0..2 * half).map(|x| if x >= half { half + f(x - half) } else { x }).collect()
}

pub fn apply_gate(state: &mut IonState, gate: &LogicalGate) -> Result<()> {
    match gate {
        LogicalGate::CSwap { control, a, b } => {
            let table = controlled_table(2, |x| ((x & 1) << 1) | (x >> 1));
            state.apply_qubit_permutation(&[*control, *a, *b], &table)
        }
        LogicalGate::MultiCNot { control, targets } => {
            let k = targets.len();
            let table = controlled_table(k, |x| x ^ ((1 << k) - 1));
            let ions: Vec<usize> = std::iter::once(*control).chain(targets.iter().copied()).collect();
            state.apply_qubit_permutation(&ions, &table)
        }
        LogicalGate::X { target } => state.apply_qubit_permutation(&[*target], &[1, 0]),
        LogicalGate::LocalZ { target, angle } => {
            let stride = state.stride(*target);
            let phase = cis_pi(*angle);
            let one = crate::linalg::ONE;
            state.apply_diagonal(|i| if (i / stride) % 4 == IonLevel::S.digit() { phase } else { one });
            Ok(())
        }
        LogicalGate::Ry { target, angle } => {
            // exp(−iθY/2) with θ = angle·π, on (|0⟩ = D, |1⟩ = S).
            let (s, c) = (angle * std::f64::consts::FRAC_PI_2).sin_cos();
            let mut u = CMatrix::identity(4, 4);
            let (d0, d1) = (IonLevel::D.digit(), IonLevel::S.digit());
            u[(d0, d0)] = c.into();
            u[(d1, d1)] = c.into();
            u[(d1, d0)] = s.into();
            u[(d0, d1)] = (-s).into();
            state.apply_unitary(&u, &[*target])
        }
        LogicalGate::GenericPermutation { targets, table } => state.apply_qubit_permutation(targets, table),
        LogicalGate::Barrier => Ok(()),
    }
}

pub fn apply_circuit(state: &mut IonState, circuit: &Circuit) -> Result<()> {
    circuit.gates.iter().try_for_each(|g| apply_gate(state, g))
}

/// Ideal `2^n × 2^n` unitary of `circuit` on the logical basis (qubit 0 most
/// significant).
pub fn circuit_qubit_unitary(circuit: &Circuit) -> Result<CMatrix> {
    let n = circuit.num_qubits;
    let d = 1 << n;
    let mut u = CMatrix::from_element(d, d, ZERO);
    for col in 0..d {
        let mut st = IonState::from_qubit_bits(n, col)?;
        apply_circuit(&mut st, circuit)?;
        for row in 0..d {
            let levels: Vec<IonLevel> = (0..n).map(|q| IonLevel::from_bit(((row >> (n - 1 - q)) & 1) as u8)).collect();
            u[(row, col)] = st.amplitude(&levels);
        }
    }
    Ok(u)
}
