// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse-level factoring with gate noise and imperfect readout.

use ionfactor::runtime::{run_experiment, ExecutionMode, ExperimentConfig, FidelityMode, NoiseModel, ReadoutModel};

fn main() -> ionfactor::Result<()> {
    for a in [2, 7, 11] {
        let cfg = ExperimentConfig {
            mode: ExecutionMode::Pulse,
            fidelity_mode: FidelityMode::Sampled,
            noise: Some(NoiseModel::default()),
            readout: Some(ReadoutModel::default()),
            shots: 2000,
            seed: 42,
            ..ExperimentConfig::fifteen(a)
        };
        let rec = run_experiment(&cfg)?;
        println!("a = {a:>2}  histogram {:?}", rec.histogram);
        println!("        sso {:.3}  success {:.3}  factors {:?}", rec.sso, rec.success_probability, rec.factors);
    }
    Ok(())
}
