// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Lowering of logical gates to native pulses.
//!
//! Entangling gates decouple every spectator ion into the cache, run a fixed
//! table sequence on the remaining ions and recouple. Single-qubit gates
//! decouple everything except their target and apply a collective rotation.

use super::gate::{Circuit, LogicalGate};
use crate::error::{Error, Result};
use crate::pulses::{
    decouple_sequence, four_target_cnot_sequence, fredkin_phase_correction, fredkin_sequence, recouple_sequence,
    Pulse, PulseSequence,
};

/// The controlled-NOT table entangles however many ions are coupled. With
/// fewer than five it still acts as a controlled flip of all coupled
/// targets, but anti-controlled for an odd target count and with a leftover
/// phase on the control. Returns `(flip targets afterwards, control phase)`.
fn cnot_fixup(targets: usize) -> Option<(bool, f64)> {
    match targets {
        1 => Some((true, 1.5)),
        2 => Some((false, 1.0)),
        3 => Some((true, 0.5)),
        4 => Some((false, 0.0)),
        _ => None,
    }
}

/// Wraps `body` (addressing absolute ions) with decoupling of every ion not
/// in `active`.
fn sandwiched(name: String, active: &[usize], num_ions: usize, body: Vec<Pulse>) -> Result<PulseSequence> {
    let spectators: Vec<usize> = (0..num_ions).filter(|i| !active.contains(i)).collect();
    let mut pulses = vec![];
    if !spectators.is_empty() {
        pulses.extend(decouple_sequence(&spectators, num_ions)?.pulses);
    }
    pulses.extend(body);
    if !spectators.is_empty() {
        pulses.extend(recouple_sequence(&spectators, num_ions)?.pulses);
    }
    PulseSequence::new(name, active.to_vec(), pulses)
}

/// Collective flip of every coupled ion except `keep`, assuming the ions in
/// `cached` are already decoupled.
fn flip_all_but(keep: usize, num_ions: usize) -> Result<Vec<Pulse>> {
    let mut pulses = decouple_sequence(&[keep], num_ions)?.pulses;
    pulses.push(Pulse::r(1.0, 0.0));
    pulses.extend(recouple_sequence(&[keep], num_ions)?.pulses);
    Ok(pulses)
}

pub fn lower_to_pulses(gate: &LogicalGate, num_ions: usize) -> Result<PulseSequence> {
    if let Some(q) = gate.qubits().into_iter().find(|&q| q >= num_ions) {
        return Err(Error::Compile(format!("{gate:?} addresses ion {q} of a {num_ions}-ion register")));
    }
    match gate {
        LogicalGate::CSwap { control, a, b } => {
            let map = [*control, *a, *b];
            let mut body: Vec<Pulse> = fredkin_sequence().pulses.iter().map(|p| p.remapped(&map)).collect();
            body.extend(fredkin_phase_correction().iter().map(|p| p.remapped(&map)));
            sandwiched(format!("cswap({control},{a},{b})"), &map, num_ions, body)
        }
        LogicalGate::MultiCNot { control, targets } => {
            let (flip, phase) = cnot_fixup(targets.len()).ok_or_else(|| {
                Error::Compile(format!("controlled-NOT with {} targets; at most 4 are supported", targets.len()))
            })?;
            let mut map = vec![0; 5];
            map[0] = *control;
            let mut body: Vec<Pulse> =
                four_target_cnot_sequence().pulses.iter().map(|p| p.remapped(&map)).collect();
            if flip {
                body.extend(flip_all_but(*control, num_ions)?);
            }
            if phase != 0.0 {
                body.push(Pulse::z(phase, *control));
            }
            let active: Vec<usize> = gate.qubits();
            sandwiched(format!("cnot({control}->{targets:?})"), &active, num_ions, body)
        }
        LogicalGate::X { target } => {
            sandwiched(format!("x({target})"), &[*target], num_ions, vec![Pulse::r(1.0, 0.0)])
        }
        LogicalGate::Ry { target, angle } => {
            sandwiched(format!("ry({target})"), &[*target], num_ions, vec![Pulse::r(-angle, 0.5)])
        }
        LogicalGate::LocalZ { target, angle } => {
            PulseSequence::new(format!("z({target})"), vec![*target], vec![Pulse::z(-angle, *target)])
        }
        LogicalGate::GenericPermutation { .. } => {
            Err(Error::Compile("generic permutations have no pulse-level lowering".into()))
        }
        LogicalGate::Barrier => Err(Error::Compile("barriers carry no pulses".into())),
    }
}

/// Lowers every non-barrier gate; one sequence per gate.
pub fn lower_circuit(c: &Circuit) -> Result<Vec<PulseSequence>> {
    c.gates
        .iter()
        .filter(|g| !matches!(g, LogicalGate::Barrier))
        .map(|g| lower_to_pulses(g, c.num_qubits))
        .collect()
}
