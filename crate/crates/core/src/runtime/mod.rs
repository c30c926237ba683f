// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Iterative phase estimation on a recycled control ion.
//!
//! Each round prepares the control, applies one controlled multiplier,
//! corrects the control phase from the bits already measured, rotates into
//! the measurement basis, reads the control out by fluorescence and resets
//! it. The first measured bit is the least significant bit of the outcome.

mod config;
mod engine;
mod noise;
mod readout;
mod record;
mod truth_table;

pub use config::{CompileOptions, ExecutionMode, ExperimentConfig, FidelityMode};
pub use engine::{execute_plan, plan_rounds, run_experiment, RoundKind, RoundPlan, CONTROL_PREP_ANGLE};
pub use noise::{apply_noisy_gate, apply_noisy_pulse, NoiseModel};
pub use readout::{sample_readout, ReadoutModel};
pub use record::{ExperimentRecord, SCHEMA_VERSION};
pub use truth_table::{building_block_truth_table, truth_table, TruthTable};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random stream `index` of the run seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
