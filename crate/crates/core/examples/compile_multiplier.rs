// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Lowers the controlled ×2 multiplier to native pulses.

use ionfactor::circuit::{build_multiplier_circuit, lower_circuit};

fn main() -> ionfactor::Result<()> {
    let c = build_multiplier_circuit(2)?;
    println!("{}", c.to_json()?);
    let blocks = lower_circuit(&c)?;
    let pulses: usize = blocks.iter().map(|b| b.len()).sum();
    let ms: usize = blocks.iter().map(|b| b.ms_count()).sum();
    for b in &blocks {
        println!("{:<28} {:>3} pulses, {} MS", b.name, b.len(), b.ms_count());
    }
    println!("total {pulses} pulses, {ms} MS");
    Ok(())
}
