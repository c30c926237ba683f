// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Shelving an ion in the cache hides it from qubit-transition pulses.

use ionfactor::pulses::{apply_pulse, apply_sequence, decouple_sequence, recouple_sequence, Pulse};
use ionfactor::{IonLevel, IonState};

fn main() -> ionfactor::Result<()> {
    let mut s = IonState::from_levels(&[IonLevel::S, IonLevel::S, IonLevel::D])?;
    apply_sequence(&mut s, &decouple_sequence(&[2], 3)?)?;
    println!("ion 2 in S' after decoupling: {:.3}", s.population(2, &[IonLevel::Sp]));
    for p in [Pulse::r(0.5, 0.0), Pulse::ms(0.5), Pulse::r(1.0, 0.5)] {
        apply_pulse(&mut s, &p)?;
    }
    println!("ion 2 in S' after three qubit pulses: {:.3}", s.population(2, &[IonLevel::Sp]));
    apply_sequence(&mut s, &recouple_sequence(&[2], 3)?)?;
    println!("ion 2 back in D: {:.3}", s.population(2, &[IonLevel::D]));
    Ok(())
}
