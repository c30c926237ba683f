// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Command line front end. Every subcommand prints JSON (or CSV where
//! offered) to stdout, or to `--out`.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 on a valid request this
//! build does not support.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::circuit::{
    build_first_multiplier_map, build_generic_multiplier, build_multiplier_circuit, circuit_qubit_unitary,
    lower_circuit, Circuit, LogicalGate,
};
use crate::error::{Error, Result};
use crate::pulses::{
    check_against_target, four_target_cnot_sequence, fredkin_sequence, qubit_block, sequence_unitary,
    EquivalenceReport, PulseSequence, SEQUENCE_TOL,
};
use crate::runtime::{
    run_experiment, truth_table, CompileOptions, ExecutionMode, ExperimentConfig, FidelityMode, NoiseModel,
    ReadoutModel,
};
use crate::synth::{named_target, synthesize, SynthesisProblem};

/// Environment variable naming the directory for output files when `--out`
/// is not given.
pub const OUT_DIR_ENV: &str = "IONFACTOR_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "ionfactor", version, about = "Trapped-ion iterative Shor factoring simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the iterative period-finding experiment.
    Factor(FactorArgs),
    /// Basis-state truth table of a controlled multiplier modulo 15.
    TruthTable(TruthTableArgs),
    /// Check the tabulated pulse sequences against their logical targets.
    VerifySequence(VerifyArgs),
    /// Search for a pulse sequence realising a named gate.
    Synthesize(SynthArgs),
    /// Misclassification rates of the fluorescence discriminator.
    ReadoutModel(ReadoutArgs),
    /// Print a multiplier circuit (optionally lowered to pulses).
    DescribeCircuit(DescribeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Logical,
    Pulse,
}

impl From<ModeArg> for ExecutionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Logical => ExecutionMode::Logical,
            ModeArg::Pulse => ExecutionMode::Pulse,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FidelityArg {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct NoiseArgs {
    /// Enable gate noise with default fidelities.
    #[arg(long)]
    noise: bool,
    /// MS interaction fidelity (implies --noise).
    #[arg(long)]
    noise_ms: Option<f64>,
    /// Single-ion operation fidelity (implies --noise).
    #[arg(long)]
    noise_local: Option<f64>,
}

impl NoiseArgs {
    fn model(&self) -> Option<NoiseModel> {
        (self.noise || self.noise_ms.is_some() || self.noise_local.is_some()).then(|| {
            let d = NoiseModel::default();
            NoiseModel {
                ms_fidelity: self.noise_ms.unwrap_or(d.ms_fidelity),
                local_fidelity: self.noise_local.unwrap_or(d.local_fidelity),
            }
        })
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; relative paths resolve against $IONFACTOR_OUT_DIR if set.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FactorArgs {
    #[arg(long, default_value_t = 15)]
    n: u64,
    #[arg(long)]
    base: u64,
    #[arg(long, default_value_t = 3)]
    digits: u32,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Logical)]
    mode: ModeArg,
    /// Defaults to sampled when noise or readout is requested, else exact.
    #[arg(long, value_enum)]
    fidelity: Option<FidelityArg>,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Discriminate the control with the photon-counting readout model.
    #[arg(long)]
    readout: bool,
    /// Run identity rounds as multiplier pairs instead of skipping them.
    #[arg(long)]
    faithful: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct TruthTableArgs {
    #[arg(long)]
    base: u64,
    #[arg(long, default_value_t = 200)]
    shots_per_input: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Pulse)]
    mode: ModeArg,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SequenceName {
    Fredkin,
    FourTargetCnot,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SequenceName::All)]
    name: SequenceName,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// cnot, swap, cz, cswap, toffoli or identity-K.
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 2)]
    ms_layers: usize,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ReadoutArgs {
    #[arg(long, default_value_t = 300.0)]
    window_us: f64,
    #[arg(long, default_value_t = 4)]
    threshold: u32,
    #[arg(long, default_value_t = 48.0)]
    bright_rate: f64,
    #[arg(long, default_value_t = 0.24)]
    dark_rate: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct DescribeArgs {
    #[arg(long)]
    base: u64,
    #[arg(long, default_value_t = 15)]
    n: u64,
    /// Describe the specialised first-round map for this exponent instead.
    #[arg(long)]
    first_map_exponent: Option<u64>,
    /// Emit the lowered pulse sequences as well.
    #[arg(long)]
    pulses: bool,
    #[command(flatten)]
    output: Output,
}

fn resolve_out(out: &Output) -> Option<PathBuf> {
    let path = out.out.clone()?;
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Some(PathBuf::from(dir).join(path)),
        _ => Some(path),
    }
}

fn emit(text: &str, out: &Output) -> Result<()> {
    match resolve_out(out) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, text)?;
            Ok(())
        }
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{}", text.trim_end()) {
                // a closed pipe (e.g. `| head`) is not a failure
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

#[derive(Debug, Serialize)]
pub struct SequenceReport {
    pub name: String,
    pub pulses: usize,
    pub ms_pulses: usize,
    #[serde(flatten)]
    pub equivalence: EquivalenceReport,
}

/// Verifies a tabulated sequence (`fredkin` or `four-target-cnot`) on its
/// own register against the ideal gate.
pub fn verify_named_sequence(name: &str) -> Result<SequenceReport> {
    let (seq, gate, n): (PulseSequence, LogicalGate, usize) = match name {
        "fredkin" => (fredkin_sequence(), LogicalGate::CSwap { control: 0, a: 1, b: 2 }, 3),
        "four-target-cnot" => {
            (four_target_cnot_sequence(), LogicalGate::MultiCNot { control: 0, targets: vec![1, 2, 3, 4] }, 5)
        }
        other => return Err(Error::Argument(format!("unknown sequence '{other}'"))),
    };
    let mut c = Circuit::kitaev(n - 1);
    c.push(gate)?;
    let target = circuit_qubit_unitary(&c)?;
    let realised = qubit_block(&sequence_unitary(&seq, n)?, n);
    Ok(SequenceReport {
        name: name.to_string(),
        pulses: seq.len(),
        ms_pulses: seq.ms_count(),
        equivalence: check_against_target(&target, &realised, SEQUENCE_TOL)?,
    })
}

fn factor(args: FactorArgs) -> Result<()> {
    let noise = args.noise.model();
    let readout = args.readout.then(ReadoutModel::default);
    let fidelity_mode = match args.fidelity {
        Some(FidelityArg::Exact) => FidelityMode::ExactAmplitude,
        Some(FidelityArg::Sampled) => FidelityMode::Sampled,
        None if noise.is_some() || readout.is_some() => FidelityMode::Sampled,
        None => FidelityMode::ExactAmplitude,
    };
    let cfg = ExperimentConfig {
        a: args.base,
        modulus: args.n,
        digits: args.digits,
        shots: args.shots,
        mode: args.mode.into(),
        fidelity_mode,
        noise,
        readout,
        faithful_identity_rounds: args.faithful,
        seed: seed_or_entropy(args.seed),
        options: CompileOptions::default(),
    };
    let start = Instant::now();
    let mut record = run_experiment(&cfg)?;
    record.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    let text = match args.format {
        Format::Json => record.to_json()?,
        Format::Csv => {
            let mut buf = vec![];
            record.write_histogram_csv(&mut buf)?;
            String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))?
        }
    };
    emit(&text, &args.output)
}

fn truth(args: TruthTableArgs) -> Result<()> {
    let seed = seed_or_entropy(args.seed);
    let noise = args.noise.model();
    let table = truth_table(args.base, args.mode.into(), noise.as_ref(), args.shots_per_input, seed)?;
    let text = match args.format {
        Format::Json => json(&serde_json::json!({
            "base": args.base,
            "seed": seed,
            "noise": noise,
            "fidelity": table.fidelity(),
            "table": table,
        }))?,
        Format::Csv => {
            let mut buf = vec![];
            table.write_csv(&mut buf)?;
            String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))?
        }
    };
    emit(&text, &args.output)
}

fn verify(args: VerifyArgs) -> Result<()> {
    let names: &[&str] = match args.name {
        SequenceName::Fredkin => &["fredkin"],
        SequenceName::FourTargetCnot => &["four-target-cnot"],
        SequenceName::All => &["fredkin", "four-target-cnot"],
    };
    let reports = names.iter().map(|n| verify_named_sequence(n)).collect::<Result<Vec<_>>>()?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.equivalence.passed).map(|r| r.name.as_str()).collect();
    emit(&json(&reports)?, &args.output)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(format!("sequences failed verification: {failed:?}")))
    }
}

fn synth(args: SynthArgs) -> Result<()> {
    let seed = seed_or_entropy(args.seed);
    let problem = SynthesisProblem {
        target: named_target(&args.target)?,
        ms_layers: args.ms_layers,
        restarts: args.restarts,
        max_iters: args.max_iters,
        tol: args.tol,
    };
    let result = synthesize(&problem, seed)?;
    let mut v = serde_json::to_value(&result.sequence)?;
    let obj = v.as_object_mut().expect("sequence serialises to an object");
    obj.insert("target".into(), args.target.into());
    obj.insert("seed".into(), seed.into());
    obj.insert("infidelity".into(), result.infidelity.into());
    obj.insert("iterations".into(), result.iterations.into());
    obj.insert("restart".into(), result.restart.into());
    obj.insert("converged".into(), result.converged.into());
    obj.insert("parameters".into(), serde_json::to_value(&result.parameters)?);
    emit(&json(&v)?, &args.output)
}

fn readout(args: ReadoutArgs) -> Result<()> {
    let model = ReadoutModel {
        window_us: args.window_us,
        bright_rate: args.bright_rate,
        dark_rate: args.dark_rate,
        threshold: args.threshold,
    };
    model.validate()?;
    let report = serde_json::json!({
        "model": model,
        "dark_mean_counts": model.dark_mean(),
        "bright_mean_counts": model.bright_mean(),
        "dark_error": model.dark_error(),
        "bright_error": model.bright_error(),
        "confidence": 1.0 - model.dark_error().max(model.bright_error()),
    });
    emit(&json(&report)?, &args.output)
}

fn describe(args: DescribeArgs) -> Result<()> {
    let circuit = match args.first_map_exponent {
        Some(e) => build_first_multiplier_map(args.base, args.n, e)?,
        None if args.n == 15 => build_multiplier_circuit(args.base)?,
        None => build_generic_multiplier(args.base, args.n)?,
    };
    let text = if args.pulses {
        json(&serde_json::json!({ "circuit": circuit, "pulses": lower_circuit(&circuit)? }))?
    } else {
        circuit.to_json()?
    };
    emit(&text, &args.output)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Factor(a) => factor(a),
        Command::TruthTable(a) => truth(a),
        Command::VerifySequence(a) => verify(a),
        Command::Synthesize(a) => synth(a),
        Command::ReadoutModel(a) => readout(a),
        Command::DescribeCircuit(a) => describe(a),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_sequences_verify() {
        let f = verify_named_sequence("fredkin").unwrap();
        assert!(f.equivalence.passed && (f.pulses, f.ms_pulses) == (18, 4));
        let c = verify_named_sequence("four-target-cnot").unwrap();
        assert!(c.equivalence.passed && (c.pulses, c.ms_pulses) == (9, 2));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main(["ionfactor", "readout-model"]), 0);
        assert_eq!(main(["ionfactor", "factor", "--base", "6"]), 1);
        assert_eq!(main(["ionfactor", "factor", "--base", "2", "--n", "21", "--mode", "pulse"]), 2);
        assert_eq!(main(["ionfactor", "readout-model", "--bogus"]), 1);
        assert_eq!(main(["ionfactor", "--version"]), 0);
    }
}
