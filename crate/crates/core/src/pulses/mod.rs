// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Native trapped-ion gate algebra.
//!
//! Angles are dimensionless multiples of π: a collective rotation
//! `R(θ, φ) = exp(−i·(π/2)·θ·S_φ)` with `S_φ = Σ cos(φπ)σx + sin(φπ)σy`,
//! an addressed phase shift `Sz(θ, i) = exp(−i·(θπ/2)·σz⁽ⁱ⁾)` and the
//! Mølmer–Sørensen interaction `MS(θ) = exp(−i·(π/4)·θ·Sx²)`. On every
//! transition `σz` is `+1` on the first level named by the transition
//! (`S` for the qubit transition).
//!
//! Ions are zero-indexed: the tabulated sequences' "qubit 1" is ion 0.

mod algebra;
mod equivalence;
mod protocols;
mod pulse;
mod tables;

pub use algebra::{
    apply_pauli, apply_pulse, apply_sequence, pulse_unitary, qubit_block, qubit_leakage,
    sequence_unitary, Pauli,
};
pub use equivalence::{
    check_against_target, local_z_correction, verify_equivalence, EquivalenceClass,
    EquivalenceReport, SEQUENCE_TOL,
};
pub use protocols::{decouple_sequence, readout_encode_sequence, recouple_sequence};
pub use pulse::{Guard, Pulse, PulseKind, PulseSequence, Transition};
pub use tables::{
    four_target_cnot_sequence, fredkin_phase_correction, fredkin_sequence,
};
