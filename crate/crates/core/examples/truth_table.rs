// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Noisy pulse-level truth table of the controlled ×7 multiplier.

use ionfactor::runtime::{truth_table, ExecutionMode, NoiseModel};

fn main() -> ionfactor::Result<()> {
    let t = truth_table(7, ExecutionMode::Pulse, Some(&NoiseModel::default()), 200, 1)?;
    for (input, (row, &want)) in t.rows.iter().zip(&t.expected).enumerate() {
        println!("{input:05b} -> {want:05b}  p = {:.3}", row[want]);
    }
    println!("mean fidelity {:.3}", t.fidelity());
    Ok(())
}
