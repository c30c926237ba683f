// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::noise::NoiseModel;
use super::readout::ReadoutModel;
use crate::circuit::{gcd, register_bits};
use crate::error::{Error, Result};
use crate::state::MAX_IONS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ExecutionMode {
    /// Ideal logical gates on the qubit subspace.
    #[default]
    Logical,
    /// Lowered native pulses, including decoupling and readout shelving.
    Pulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FidelityMode {
    /// Enumerate the measurement tree with exact branch probabilities.
    #[default]
    ExactAmplitude,
    /// One stochastic trajectory per shot.
    Sampled,
}

/// Compiler switches. All default to on; turning them off is for
/// validating that they change nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileOptions {
    pub strip_final_locals: bool,
    pub prune_idle: bool,
    pub feed_forward: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { strip_final_locals: true, prune_idle: true, feed_forward: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub a: u64,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub digits: u32,
    pub shots: u64,
    #[serde(default)]
    pub mode: ExecutionMode,
    #[serde(default)]
    pub fidelity_mode: FidelityMode,
    #[serde(default)]
    pub noise: Option<NoiseModel>,
    #[serde(default)]
    pub readout: Option<ReadoutModel>,
    #[serde(default)]
    pub faithful_identity_rounds: bool,
    pub seed: u64,
    #[serde(default)]
    pub options: CompileOptions,
}

impl ExperimentConfig {
    /// Noiseless exact run of `a` modulo 15 with three digits.
    pub fn fifteen(a: u64) -> Self {
        Self {
            a,
            modulus: 15,
            digits: 3,
            shots: 1000,
            mode: ExecutionMode::Logical,
            fidelity_mode: FidelityMode::ExactAmplitude,
            noise: None,
            readout: None,
            faithful_identity_rounds: false,
            seed: 0,
            options: CompileOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modulus < 3 {
            return Err(Error::Config(format!("modulus {} too small", self.modulus)));
        }
        if self.a < 2 || self.a >= self.modulus {
            return Err(Error::Config(format!("base must lie in [2, {}), got {}", self.modulus, self.a)));
        }
        let g = gcd(self.a, self.modulus);
        if g != 1 {
            return Err(Error::TrivialFactor { a: self.a, n: self.modulus, factor: g });
        }
        if self.digits == 0 || self.digits > 16 {
            return Err(Error::Config(format!("digits must lie in 1..=16, got {}", self.digits)));
        }
        if self.shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        let ions = 1 + register_bits(self.modulus);
        if ions > MAX_IONS {
            return Err(Error::Unsupported(format!("N = {} needs {ions} ions, at most {MAX_IONS} supported", self.modulus)));
        }
        if self.mode == ExecutionMode::Pulse && self.modulus != 15 {
            return Err(Error::Unsupported(format!("pulse mode is only available for N = 15, got {}", self.modulus)));
        }
        if self.fidelity_mode == FidelityMode::ExactAmplitude && (self.noise.is_some() || self.readout.is_some()) {
            return Err(Error::Config("noise and readout models require sampled mode".into()));
        }
        if let Some(n) = &self.noise {
            n.validate()?;
        }
        if let Some(r) = &self.readout {
            r.validate()?;
        }
        Ok(())
    }
}
