// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Experimentally used pulse sequences, transcribed pulse by pulse.

use super::pulse::{Pulse, PulseSequence};

/// Three-ion controlled-SWAP: ion 0 controls, ions 1 and 2 are exchanged.
///
/// 18 pulses, 4 of them MS. Only valid on exactly three coupled ions; any
/// further ion must be decoupled first. The sequence realises the
/// controlled-SWAP up to the phase fixed by [`fredkin_phase_correction`].
pub fn fredkin_sequence() -> PulseSequence {
    let pulses = vec![
        Pulse::r(1.0 / 2.0, 1.0 / 2.0),
        Pulse::z(3.0 / 2.0, 2),
        Pulse::ms(4.0 / 8.0),
        Pulse::z(3.0 / 2.0, 1),
        Pulse::z(1.0 / 2.0, 2),
        Pulse::r(3.0 / 4.0, 0.0),
        Pulse::ms(6.0 / 8.0),
        Pulse::z(3.0 / 2.0, 1),
        Pulse::ms(4.0 / 8.0),
        Pulse::r(1.0 / 2.0, 1.0),
        Pulse::z(1.0 / 4.0, 1),
        Pulse::z(3.0 / 2.0, 2),
        Pulse::ms(4.0 / 8.0),
        Pulse::z(3.0 / 2.0, 1),
        Pulse::z(3.0 / 2.0, 0),
        Pulse::r(1.0 / 2.0, 1.0),
        Pulse::z(3.0 / 2.0, 0),
        Pulse::z(3.0 / 2.0, 1),
    ];
    PulseSequence { name: "fredkin".into(), target_ions: vec![0, 1, 2], pulses }
}

/// Addressed π phase shifts on the control and the first swap ion that turn
/// [`fredkin_sequence`] into an exact controlled-SWAP (up to global phase).
pub fn fredkin_phase_correction() -> Vec<Pulse> {
    vec![Pulse::z(1.0, 0), Pulse::z(1.0, 1)]
}

/// Five-ion controlled-NOT of ion 0 onto ions 1–4, 9 pulses with 2 MS.
pub fn four_target_cnot_sequence() -> PulseSequence {
    let pulses = vec![
        Pulse::r(1.0 / 2.0, 1.0),
        Pulse::z(3.0 / 2.0, 0),
        Pulse::ms(3.0 / 4.0),
        Pulse::r(5.0 / 4.0, 1.0),
        Pulse::z(1.0, 0),
        Pulse::ms(1.0 / 4.0),
        Pulse::r(3.0 / 4.0, 0.0),
        Pulse::z(3.0 / 2.0, 0),
        Pulse::r(1.0 / 2.0, 0.0),
    ];
    PulseSequence { name: "four-target-cnot".into(), target_ions: vec![0, 1, 2, 3, 4], pulses }
}
