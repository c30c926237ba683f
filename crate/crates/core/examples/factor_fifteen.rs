// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Ideal iterative period finding for every supported base of 15.

use ionfactor::runtime::{run_experiment, ExperimentConfig};

fn main() -> ionfactor::Result<()> {
    for a in [2, 7, 8, 11, 13] {
        let rec = run_experiment(&ExperimentConfig::fifteen(a))?;
        let peaks: Vec<String> = rec
            .distribution
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 1e-12)
            .map(|(x, p)| format!("{x}:{p:.3}"))
            .collect();
        println!("a = {a:>2}  peaks [{}]  success {:.2}  factors {:?}", peaks.join(" "), rec.success_probability, rec.factors);
    }
    Ok(())
}
