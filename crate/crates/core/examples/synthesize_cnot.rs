// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Finds a two-MS pulse sequence for the CNOT.

use ionfactor::synth::{named_target, synthesize, SynthesisProblem};

fn main() -> ionfactor::Result<()> {
    let mut problem = SynthesisProblem::new(named_target("cnot")?, 2);
    problem.restarts = 50;
    let r = synthesize(&problem, 2024)?;
    println!("infidelity {:.2e} after {} iterations (restart {})", r.infidelity, r.iterations, r.restart);
    println!("{}", r.sequence.to_json()?);
    Ok(())
}
