// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use super::gate::{Circuit, LogicalGate, QubitRole};

/// Drops single-qubit gates on computational qubits that follow the last
/// entangling gate on that qubit. The work register is never measured, so
/// such gates cannot change the control-qubit statistics.
pub fn strip_final_locals(c: &Circuit) -> Circuit {
    let mut entangled_later = vec![false; c.num_qubits];
    let mut kept = Vec::with_capacity(c.gates.len());
    for g in c.gates.iter().rev() {
        let qs = g.qubits();
        if g.is_local() {
            let q = qs[0];
            if c.role(q) == Some(QubitRole::Computational) && !entangled_later[q] {
                continue;
            }
        } else {
            for q in qs {
                entangled_later[q] = true;
            }
        }
        kept.push(g.clone());
    }
    kept.reverse();
    Circuit { gates: kept, ..c.clone() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrunedCircuit {
    pub circuit: Circuit,
    /// `mapping[new] = old` qubit index.
    pub mapping: Vec<usize>,
}

/// Removes qubits that no gate touches and renumbers the rest in order.
/// The control qubit is always kept.
pub fn prune_idle_qubits(c: &Circuit) -> PrunedCircuit {
    let mut used = vec![false; c.num_qubits];
    for q in c.gates.iter().flat_map(|g| g.qubits()) {
        used[q] = true;
    }
    if let Some(ctl) = c.control_qubit() {
        used[ctl] = true;
    }
    let mapping: Vec<usize> = (0..c.num_qubits).filter(|&q| used[q]).collect();
    let mut inverse = vec![usize::MAX; c.num_qubits];
    for (new, &old) in mapping.iter().enumerate() {
        inverse[old] = new;
    }
    let roles: BTreeMap<usize, QubitRole> =
        c.roles.iter().filter(|(q, _)| used[**q]).map(|(q, r)| (inverse[*q], *r)).collect();
    let gates: Vec<LogicalGate> = c.gates.iter().map(|g| g.remapped(&inverse)).collect();
    PrunedCircuit { circuit: Circuit { num_qubits: mapping.len(), roles, gates }, mapping }
}
