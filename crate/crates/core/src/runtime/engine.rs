// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExecutionMode, ExperimentConfig, FidelityMode};
use super::noise::{apply_noisy_gate, apply_noisy_pulse, NoiseModel};
use super::readout::sample_readout;
use super::record::ExperimentRecord;
use super::stream_rng;
use crate::analysis::{extract_period, factors_from_period, ideal_distribution, sso, success_probability};
use crate::circuit::{
    apply_gate, build_first_multiplier_map, build_generic_multiplier, build_multiplier_circuit, classical_modexp,
    lower_circuit, lower_to_pulses, prune_idle_qubits, register_bits, strip_final_locals, Circuit, LogicalGate,
};
use crate::error::{Error, Result};
use crate::pulses::{apply_pulse, readout_encode_sequence, Pulse, PulseSequence};
use crate::state::{ClassicalRegister, IonLevel, IonState};

/// `R_y` angle (π units) taking the reset control `|1⟩` to `|+⟩`; the same
/// rotation maps `|±⟩` to `|0⟩`/`|1⟩` before readout.
pub const CONTROL_PREP_ANGLE: f64 = -0.5;

/// Branches of the exact measurement tree below this weight are dropped.
const BRANCH_CUTOFF: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundKind {
    /// `a^e ≡ 1`: nothing to do, or a pair of multipliers composing to the
    /// identity when identity rounds are run faithfully.
    Identity,
    /// First non-trivial multiplier, specialised to the input 1.
    FirstMap,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundPlan {
    /// 1-based round index `t`.
    pub round: u32,
    /// The round applies the controlled multiplication by `a^exponent`.
    pub exponent: u64,
    pub kind: RoundKind,
    pub circuit: Circuit,
}

fn multiplier(base: u64, n: u64) -> Result<Circuit> {
    if n == 15 {
        build_multiplier_circuit(base)
    } else {
        build_generic_multiplier(base, n)
    }
}

fn concat(bits: usize, parts: &[Circuit]) -> Result<Circuit> {
    let mut c = Circuit::kitaev(bits);
    for g in parts.iter().flat_map(|p| p.gates.iter()) {
        c.push(g.clone())?;
    }
    Ok(c)
}

/// Multiplier circuits for every round, largest exponent first.
pub fn plan_rounds(cfg: &ExperimentConfig) -> Result<Vec<RoundPlan>> {
    cfg.validate()?;
    let (a, n, m) = (cfg.a, cfg.modulus, cfg.digits);
    let bits = register_bits(n);
    let mut first_done = false;
    let mut plan = Vec::with_capacity(m as usize);
    for t in 1..=m {
        let exponent = 1u64 << (m - t);
        let (kind, circuit) = if classical_modexp(a, exponent, n)? == 1 {
            let circuit = if cfg.faithful_identity_rounds {
                // a^{2^j} for the largest j whose power is not yet 1; it
                // squares to 1, so two applications are the identity.
                let mut e = exponent;
                while classical_modexp(a, e, n)? == 1 {
                    e /= 2;
                }
                let c = multiplier(classical_modexp(a, e, n)?, n)?;
                concat(bits, &[c.clone(), c])?
            } else {
                Circuit::kitaev(bits)
            };
            (RoundKind::Identity, circuit)
        } else if !first_done {
            first_done = true;
            (RoundKind::FirstMap, build_first_multiplier_map(a, n, exponent)?)
        } else {
            (RoundKind::Full, multiplier(classical_modexp(a, exponent, n)?, n)?)
        };
        plan.push(RoundPlan { round: t, exponent, kind, circuit });
    }
    Ok(plan)
}

#[derive(Debug, Clone)]
enum Step {
    Gate(LogicalGate),
    /// Logical-mode phase correction computed from the register.
    FeedForward { round: u32 },
    /// Pulses with the ions coupled while they run.
    Pulses(PulseSequence),
}

/// The compiled experiment: register layout and one step list per round.
#[derive(Debug, Clone)]
struct Machine {
    initial: Vec<IonLevel>,
    rounds: Vec<Vec<Step>>,
    encode: PulseSequence,
    decode: PulseSequence,
    noise: Option<NoiseModel>,
    readout: Option<super::readout::ReadoutModel>,
}

const CONTROL: usize = 0;

fn feed_forward_angle(round: u32, register: &ClassicalRegister) -> f64 {
    (1..round)
        .filter(|&s| register.get(s as usize - 1) == Some(1))
        .map(|s| -1.0 / f64::from(1u32 << (round - s)))
        .sum()
}

impl Machine {
    fn compile(cfg: &ExperimentConfig, plan: &[RoundPlan]) -> Result<Self> {
        if plan.len() != cfg.digits as usize {
            return Err(Error::Config(format!("{} rounds planned for {} digits", plan.len(), cfg.digits)));
        }
        let bits = register_bits(cfg.modulus);
        let mut circuits: Vec<Circuit> = plan.iter().map(|r| r.circuit.clone()).collect();
        if let Some(c) = circuits.first() {
            if c.num_qubits != bits + 1 || c.control_qubit() != Some(CONTROL) {
                return Err(Error::Config("round circuits must use the Kitaev register layout".into()));
            }
        }
        if cfg.options.strip_final_locals {
            if let Some(last) = circuits.last_mut() {
                *last = strip_final_locals(last);
            }
        }
        let mut mapping: Vec<usize> = (0..=bits).collect();
        if cfg.options.prune_idle {
            let joint = concat(bits, &circuits)?;
            mapping = prune_idle_qubits(&joint).mapping;
            let mut inverse = vec![usize::MAX; bits + 1];
            for (new, &old) in mapping.iter().enumerate() {
                inverse[old] = new;
            }
            for c in circuits.iter_mut() {
                let mut pruned = Circuit::kitaev(mapping.len() - 1);
                for g in &c.gates {
                    pruned.push(g.remapped(&inverse))?;
                }
                *c = pruned;
            }
        }
        let num_ions = mapping.len();
        // work register starts at 1: only its least significant bit is set
        let initial = mapping
            .iter()
            .map(|&q| if q == CONTROL || q == bits { IonLevel::S } else { IonLevel::D })
            .collect();

        let prep = LogicalGate::Ry { target: CONTROL, angle: CONTROL_PREP_ANGLE };
        let mut rounds = Vec::with_capacity(circuits.len());
        for (t, circuit) in (1u32..).zip(&circuits) {
            let mut steps = vec![];
            match cfg.mode {
                ExecutionMode::Logical => {
                    steps.push(Step::Gate(prep.clone()));
                    steps.extend(
                        circuit.gates.iter().filter(|g| **g != LogicalGate::Barrier).cloned().map(Step::Gate),
                    );
                    if cfg.options.feed_forward && t > 1 {
                        steps.push(Step::FeedForward { round: t });
                    }
                    steps.push(Step::Gate(prep.clone()));
                }
                ExecutionMode::Pulse => {
                    let rotation = lower_to_pulses(&prep, num_ions)?;
                    steps.push(Step::Pulses(rotation.clone()));
                    steps.extend(lower_circuit(circuit)?.into_iter().map(Step::Pulses));
                    if cfg.options.feed_forward && t > 1 {
                        // LocalZ(−1/2^{t−s}) for every earlier 1 bit, as
                        // addressed pulses conditioned on the register.
                        let pulses = (1..t)
                            .map(|s| Pulse::z(1.0 / f64::from(1u32 << (t - s)), CONTROL).with_guard(s as usize - 1, 1))
                            .collect();
                        steps.push(Step::Pulses(PulseSequence::new(format!("feed-forward{t}"), vec![CONTROL], pulses)?));
                    }
                    steps.push(Step::Pulses(rotation));
                }
            }
            rounds.push(steps);
        }
        let encode = readout_encode_sequence(CONTROL, num_ions)?;
        let decode = encode.inverse();
        Ok(Self { initial, rounds, encode, decode, noise: cfg.noise, readout: cfg.readout })
    }

    fn initial_state(&self) -> Result<IonState> {
        IonState::from_levels(&self.initial)
    }

    fn run_round(
        &self,
        t: usize,
        state: &mut IonState,
        register: &ClassicalRegister,
        rng: &mut ChaCha8Rng,
    ) -> Result<()> {
        for step in &self.rounds[t] {
            match step {
                Step::Gate(g) => self.gate(state, g, rng)?,
                Step::FeedForward { round } => {
                    let angle = feed_forward_angle(*round, register);
                    if angle != 0.0 {
                        self.gate(state, &LogicalGate::LocalZ { target: CONTROL, angle }, rng)?;
                    }
                }
                Step::Pulses(seq) => {
                    for p in &seq.pulses {
                        if let Some(guard) = p.guard {
                            if !guard.holds(register)? {
                                continue;
                            }
                        }
                        match &self.noise {
                            Some(noise) => apply_noisy_pulse(state, p, &seq.target_ions, noise, rng)?,
                            None => apply_pulse(state, p)?,
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn gate(&self, state: &mut IonState, g: &LogicalGate, rng: &mut ChaCha8Rng) -> Result<()> {
        match &self.noise {
            Some(noise) => apply_noisy_gate(state, g, noise, rng),
            None => apply_gate(state, g),
        }
    }

    fn shelve(&self, state: &mut IonState, seq: &PulseSequence) -> Result<()> {
        seq.pulses.iter().try_for_each(|p| apply_pulse(state, p))
    }

    /// Collapses the control onto `outcome` (probability returned), then
    /// unshelves and recycles it.
    fn finish_readout(&self, state: &mut IonState, outcome: Option<u8>, rng: &mut ChaCha8Rng) -> Result<(u8, f64)> {
        self.shelve(state, &self.encode)?;
        state.check_readout_protection(CONTROL)?;
        let (outcome, p) = match outcome {
            Some(o) => {
                let p1 = state.bright_population(CONTROL);
                let p = if o == 1 { p1 } else { 1.0 - p1 };
                if p < BRANCH_CUTOFF {
                    return Ok((o, 0.0));
                }
                state.project(CONTROL, o)?;
                (o, p)
            }
            None => (state.measure_ion(CONTROL, rng)?, 1.0),
        };
        self.shelve(state, &self.decode)?;
        state.reset_ion(CONTROL)?;
        Ok((outcome, p))
    }

    /// Probability of every outcome, by walking the measurement tree.
    fn exact_distribution(&self) -> Result<Vec<f64>> {
        let m = self.rounds.len();
        let mut dummy = stream_rng(0, 0);
        let mut nodes = vec![(self.initial_state()?, ClassicalRegister::new(), 1.0)];
        for t in 0..m {
            let mut next = Vec::with_capacity(2 * nodes.len());
            for (mut state, register, weight) in nodes {
                self.run_round(t, &mut state, &register, &mut dummy)?;
                for outcome in [0u8, 1] {
                    let mut branch = state.clone();
                    let (_, p) = self.finish_readout(&mut branch, Some(outcome), &mut dummy)?;
                    if p * weight > BRANCH_CUTOFF {
                        let mut reg = register.clone();
                        reg.push(outcome, format!("b{}", t + 1));
                        next.push((branch, reg, p * weight));
                    }
                }
            }
            nodes = next;
        }
        let mut dist = vec![0.0; 1 << m];
        for (_, reg, w) in nodes {
            dist[reg.value_lsb_first() as usize] += w;
        }
        let total: f64 = dist.iter().sum();
        dist.iter_mut().for_each(|p| *p /= total);
        Ok(dist)
    }

    /// One trajectory; returns the discriminated bits in measurement order.
    fn shot(&self, rng: &mut ChaCha8Rng) -> Result<ClassicalRegister> {
        let mut state = self.initial_state()?;
        let mut register = ClassicalRegister::new();
        for t in 0..self.rounds.len() {
            self.run_round(t, &mut state, &register, rng)?;
            let (outcome, _) = self.finish_readout(&mut state, None, rng)?;
            let bit = match &self.readout {
                Some(model) => sample_readout(outcome == 1, model, rng).0,
                None => outcome,
            };
            register.push(bit, format!("b{}", t + 1));
        }
        Ok(register)
    }
}

fn transcript(x: u64, m: u32) -> String {
    (0..m).map(|t| if x >> t & 1 == 1 { '1' } else { '0' }).collect()
}

/// Runs precomputed rounds (see [`plan_rounds`]); the compile options in
/// `cfg` are applied here.
pub fn execute_plan(cfg: &ExperimentConfig, plan: &[RoundPlan]) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let machine = Machine::compile(cfg, plan)?;
    let m = cfg.digits;
    let size = 1usize << m;
    let (outcomes, distribution) = match cfg.fidelity_mode {
        FidelityMode::ExactAmplitude => {
            let dist = machine.exact_distribution()?;
            let sampler = WeightedIndex::new(&dist).map_err(|e| Error::Internal(e.to_string()))?;
            let mut rng = stream_rng(cfg.seed, u64::MAX);
            let outcomes: Vec<u64> = (0..cfg.shots).map(|_| sampler.sample(&mut rng) as u64).collect();
            (outcomes, dist)
        }
        FidelityMode::Sampled => {
            let outcomes: Vec<u64> = (0..cfg.shots)
                .into_par_iter()
                .map(|i| machine.shot(&mut stream_rng(cfg.seed, i)).map(|r| r.value_lsb_first()))
                .collect::<Result<_>>()?;
            let mut dist = vec![0.0; size];
            for &x in &outcomes {
                dist[x as usize] += 1.0 / cfg.shots as f64;
            }
            (outcomes, dist)
        }
    };
    let mut histogram = vec![0u64; size];
    for &x in &outcomes {
        histogram[x as usize] += 1;
    }
    let ideal = ideal_distribution(cfg.a, cfg.modulus, m)?;
    let normalised: Vec<f64> = {
        let s: f64 = distribution.iter().sum();
        distribution.iter().map(|p| p / s).collect()
    };
    let mut factors = BTreeSet::new();
    for (x, p) in distribution.iter().enumerate() {
        if *p > 0.0 {
            if let Some(r) = extract_period(x as u64, m, cfg.a, cfg.modulus)?.candidate_r {
                if let Some((f1, f2)) = factors_from_period(cfg.a, r, cfg.modulus) {
                    factors.extend([f1, f2]);
                }
            }
        }
    }
    Ok(ExperimentRecord {
        schema_version: super::record::SCHEMA_VERSION,
        config: cfg.clone(),
        histogram: histogram.into_iter().enumerate().map(|(x, c)| (x as u64, c)).collect(),
        distribution: distribution.clone(),
        transcripts: outcomes.iter().map(|&x| transcript(x, m)).collect(),
        sso: sso(&normalised, &ideal)?,
        success_probability: success_probability(&normalised, cfg.a, cfg.modulus, m)?,
        factors: factors.into_iter().collect(),
        wall_time_ms: None,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    let plan = plan_rounds(cfg)?;
    execute_plan(cfg, &plan)
}
