// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Spectroscopic decoupling and single-ion readout encoding.
//!
//! Both are built from collective half-rotations on the auxiliary
//! transitions with an addressed echo in between: two half pulses add up to a
//! full transfer on every ion, except on echoed ions where the intermediate
//! π phase shift refocuses them back. Echoed ions only pick up a phase.

use super::pulse::{Pulse, PulseSequence, Transition};
use crate::error::{Error, Result};

fn refocused_transfer(transition: Transition, echoed: &[usize]) -> Vec<Pulse> {
    let mut pulses = vec![Pulse::r_on(0.5, 0.0, transition)];
    pulses.extend(echoed.iter().map(|&i| Pulse::z_on(1.0, i, transition)));
    pulses.push(Pulse::r_on(0.5, 0.0, transition));
    pulses
}

fn check_ions(ions: &[usize], num_ions: usize) -> Result<()> {
    if ions.is_empty() {
        return Err(Error::Argument("no ions to decouple".into()));
    }
    for (k, &i) in ions.iter().enumerate() {
        if i >= num_ions {
            return Err(Error::Argument(format!("ion {i} outside register of {num_ions} ions")));
        }
        if ions[..k].contains(&i) {
            return Err(Error::Argument(format!("ion {i} listed twice")));
        }
    }
    Ok(())
}

/// Moves the listed ions into the cache: `S → D'` and `D → S'` (each with a
/// factor `−i`). Ions not listed acquire the global factor `(−i)²` on
/// their qubit levels and are otherwise untouched.
pub fn decouple_sequence(ions: &[usize], num_ions: usize) -> Result<PulseSequence> {
    check_ions(ions, num_ions)?;
    let kept: Vec<usize> = (0..num_ions).filter(|i| !ions.contains(i)).collect();
    let mut pulses = refocused_transfer(Transition::T2, &kept);
    pulses.extend(refocused_transfer(Transition::T3, &kept));
    PulseSequence::new(format!("decouple{ions:?}"), ions.to_vec(), pulses)
}

/// Exact inverse of [`decouple_sequence`].
pub fn recouple_sequence(ions: &[usize], num_ions: usize) -> Result<PulseSequence> {
    let mut seq = decouple_sequence(ions, num_ions)?.inverse();
    seq.name = format!("recouple{ions:?}");
    Ok(seq)
}

/// Shelves every ion except `keep` out of the fluorescing levels
/// (`S → D'`, `D` stays dark) so that detection light projects `keep` only.
/// Assumes the register is in the qubit subspace.
pub fn readout_encode_sequence(keep: usize, num_ions: usize) -> Result<PulseSequence> {
    if keep >= num_ions {
        return Err(Error::Argument(format!("ion {keep} outside register of {num_ions} ions")));
    }
    PulseSequence::new(
        format!("readout-encode[{keep}]"),
        vec![keep],
        refocused_transfer(Transition::T2, &[keep]),
    )
}
