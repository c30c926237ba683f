// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Basis-state truth tables of multipliers and pulse building blocks.

use std::io::Write;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExecutionMode;
use super::noise::{apply_noisy_gate, apply_noisy_pulse, NoiseModel};
use super::stream_rng;
use crate::circuit::{apply_gate, build_multiplier_circuit, lower_circuit, multiplier_permutation, LogicalGate};
use crate::error::{Error, Result};
use crate::pulses::{apply_pulse, PulseSequence};
use crate::state::IonState;

/// `rows[i][j]`: frequency of output basis state `j` for input `i`
/// (qubit 0 most significant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    pub num_qubits: usize,
    pub rows: Vec<Vec<f64>>,
    /// Ideal output of each input.
    pub expected: Vec<usize>,
}

impl TruthTable {
    /// Mean frequency of the ideal output over all inputs.
    pub fn fidelity(&self) -> f64 {
        self.rows.iter().zip(&self.expected).map(|(r, &e)| r[e]).sum::<f64>() / self.rows.len() as f64
    }

    /// Frequency of the ideal output for every input.
    pub fn diagonal(&self) -> Vec<f64> {
        self.rows.iter().zip(&self.expected).map(|(r, &e)| r[e]).collect()
    }

    /// Row-major matrix with one row per input.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let width = self.rows.first().map_or(0, Vec::len);
        let mut header = vec!["input".to_string()];
        header.extend((0..width).map(|j| j.to_string()));
        w.write_record(&header)?;
        for (i, row) in self.rows.iter().enumerate() {
            let mut rec = vec![i.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

enum Body<'a> {
    Gates(&'a [LogicalGate]),
    Pulses(&'a [PulseSequence]),
}

fn evolve(
    body: &Body<'_>,
    state: &mut IonState,
    noise: Option<&NoiseModel>,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<()> {
    match body {
        Body::Gates(gates) => gates.iter().try_for_each(|g| match noise {
            Some(n) => apply_noisy_gate(state, g, n, rng),
            None => apply_gate(state, g),
        }),
        Body::Pulses(seqs) => {
            for seq in seqs.iter() {
                if seq.is_guarded() {
                    return Err(Error::Argument(format!("sequence '{}' has classical guards", seq.name)));
                }
                for p in &seq.pulses {
                    match noise {
                        Some(n) => apply_noisy_pulse(state, p, &seq.target_ions, n, rng)?,
                        None => apply_pulse(state, p)?,
                    }
                }
            }
            Ok(())
        }
    }
}

/// Exact output probabilities without noise; `shots` sampled trajectories
/// per input with it.
fn tabulate(
    num_qubits: usize,
    expected: Vec<usize>,
    body: Body<'_>,
    noise: Option<&NoiseModel>,
    shots: u64,
    seed: u64,
) -> Result<TruthTable> {
    let all: Vec<usize> = (0..num_qubits).collect();
    let dim = 1usize << num_qubits;
    if noise.is_some() && shots == 0 {
        return Err(Error::Config("noisy truth tables need at least one shot per input".into()));
    }
    let rows = (0..dim)
        .into_par_iter()
        .map(|input| -> Result<Vec<f64>> {
            let mut rng = stream_rng(seed, input as u64);
            let start = IonState::from_qubit_bits(num_qubits, input)?;
            if noise.is_none() {
                let mut st = start;
                evolve(&body, &mut st, None, &mut rng)?;
                return Ok(st.qubit_probabilities(&all));
            }
            let mut row = vec![0.0; dim];
            for _ in 0..shots {
                let mut st = start.clone();
                evolve(&body, &mut st, noise, &mut rng)?;
                let probs = st.qubit_probabilities(&all);
                let out = WeightedIndex::new(&probs).map_err(|e| Error::Internal(e.to_string()))?.sample(&mut rng);
                row[out] += 1.0 / shots as f64;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruthTable { num_qubits, rows, expected })
}

/// 32×32 table of the controlled multiplier by `a` modulo 15.
pub fn truth_table(
    a: u64,
    mode: ExecutionMode,
    noise: Option<&NoiseModel>,
    shots_per_input: u64,
    seed: u64,
) -> Result<TruthTable> {
    let circuit = build_multiplier_circuit(a)?;
    let perm = multiplier_permutation(a)?;
    let expected = (0..32).map(|i| if i >= 16 { 16 + perm[i - 16] } else { i }).collect();
    let lowered;
    let body = match mode {
        ExecutionMode::Logical => Body::Gates(&circuit.gates),
        ExecutionMode::Pulse => {
            lowered = lower_circuit(&circuit)?;
            Body::Pulses(&lowered)
        }
    };
    tabulate(5, expected, body, noise, shots_per_input, seed)
}

/// Table of a stand-alone pulse sequence on `num_ions` ions against the
/// ideal basis permutation `expected`.
pub fn building_block_truth_table(
    sequence: &PulseSequence,
    num_ions: usize,
    expected: &[usize],
    noise: Option<&NoiseModel>,
    shots_per_input: u64,
    seed: u64,
) -> Result<TruthTable> {
    if expected.len() != 1 << num_ions {
        return Err(Error::Argument("expected permutation has the wrong size".into()));
    }
    sequence.validate(num_ions)?;
    tabulate(
        num_ions,
        expected.to_vec(),
        Body::Pulses(std::slice::from_ref(sequence)),
        noise,
        shots_per_input,
        seed,
    )
}
