// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Logical circuits for the controlled modular multipliers, the circuit
//! simplifications used by the iterative algorithm, and lowering to pulses.
//!
//! Qubit 0 is the control; computational qubits follow with the most
//! significant bit first, so for `N = 15` qubit 1 holds bit 3 and qubit 4
//! holds bit 0. Circuit qubit `q` runs on ion `q`.

mod arith;
mod gate;
mod logical;
mod lower;
mod multiplier;
mod transform;

pub use arith::{classical_modexp, find_period, gcd, register_bits};
pub use gate::{Circuit, LogicalGate, QubitRole};
pub use logical::{apply_circuit, apply_gate, circuit_qubit_unitary};
pub use lower::{lower_circuit, lower_to_pulses};
pub use multiplier::{
    build_first_multiplier_map, build_generic_multiplier, build_multiplier_circuit,
    computational_qubit, multiplier_permutation, SUPPORTED_BASES,
};
pub use transform::{prune_idle_qubits, strip_final_locals, PrunedCircuit};
