// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use ionfactor::analysis::{extract_period, factors_from_period, repetitions_for_confidence, sso};
use ionfactor::circuit::{classical_modexp, find_period, LogicalGate};
use ionfactor::linalg::{max_abs_diff, permutation_matrix};
use ionfactor::pulses::{
    apply_pulse, check_against_target, four_target_cnot_sequence, fredkin_sequence, qubit_block,
    sequence_unitary, Pulse, Transition,
};
use ionfactor::runtime::{
    building_block_truth_table, execute_plan, plan_rounds, run_experiment, truth_table, ExecutionMode,
    ExperimentConfig, FidelityMode, NoiseModel, ReadoutModel,
};
use ionfactor::synth::{named_target, synthesize, SynthesisProblem};
use ionfactor::IonState;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force_period, coherent_qft_distribution, multiplier_output_ok, naive_order, tv};

type Outcome = Result<String, String>;

const FIVE_BASES: [u64; 5] = [2, 7, 8, 11, 13];
const SIX_BASES: [u64; 6] = [2, 4, 7, 8, 11, 13];

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn exact(a: u64, m: u32, mode: ExecutionMode) -> Vec<f64> {
    let cfg = ExperimentConfig { digits: m, mode, ..ExperimentConfig::fifteen(a) };
    run_experiment(&cfg).expect("run").distribution
}

fn classical_oracle() -> Outcome {
    let seq: Vec<u64> = (0..5).map(|x| classical_modexp(7, x, 15).unwrap()).collect();
    ensure!(seq == [1, 7, 4, 13, 1], "7^x mod 15 = {seq:?}");
    let r = find_period(7, 15).unwrap();
    ensure!(r == 4 && naive_order(7, 15) == Some(4), "period {r}");
    let f = factors_from_period(7, r, 15);
    ensure!(f == Some((3, 5)), "factors {f:?}");
    Ok("1,7,4,13,1; r = 4; factors {3, 5}".into())
}

fn ideal_runs() -> Outcome {
    let uniform: Vec<f64> = (0..8).map(|x| if x % 2 == 0 { 0.25 } else { 0.0 }).collect();
    let mut half = vec![0.0; 8];
    half[0] = 0.5;
    half[4] = 0.5;
    for a in FIVE_BASES {
        let cfg = ExperimentConfig::fifteen(a);
        let rec = run_experiment(&cfg).unwrap();
        let want = if a == 11 { &half } else { &uniform };
        let d = tv(&rec.distribution, want);
        ensure!(d < 1e-9, "a = {a}: total variation {d:e}");
        if a != 11 {
            ensure!((rec.success_probability - 0.5).abs() < 1e-12, "a = {a}: success {}", rec.success_probability);
        }
    }
    Ok("r = 4 bases uniform on {0,2,4,6}, a = 11 on {0,4}; success 0.5".into())
}

fn semiclassical_is_coherent() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in FIVE_BASES {
        for m in 2..=4 {
            let d = tv(&exact(a, m, ExecutionMode::Logical), &coherent_qft_distribution(a, 15, m));
            ensure!(d < 1e-9, "a = {a}, m = {m}: total variation {d:e}");
            worst = worst.max(d);
        }
    }
    Ok(format!("15 runs, worst total variation {worst:.1e}"))
}

fn pulse_tables() -> Outcome {
    let cswap = permutation_matrix(&[0, 1, 2, 3, 4, 6, 5, 7]);
    let cnot4 = permutation_matrix(&(0..32).map(|x| if x >= 16 { x ^ 0b1111 } else { x }).collect::<Vec<_>>());
    let mut lines = vec![];
    for (name, seq, target, n, pulses, ms) in [
        ("fredkin", fredkin_sequence(), cswap, 3, 18, 4),
        ("four-target-cnot", four_target_cnot_sequence(), cnot4, 5, 9, 2),
    ] {
        ensure!(seq.len() == pulses && seq.ms_count() == ms, "{name}: {} pulses, {} MS", seq.len(), seq.ms_count());
        let u = qubit_block(&sequence_unitary(&seq, n).unwrap(), n);
        let report = check_against_target(&target, &u, 1e-6).unwrap();
        ensure!(report.fidelity >= 1.0 - 1e-6, "{name}: fidelity {}", report.fidelity);
        lines.push(format!("{name} {:?} {:.9}", report.class, report.fidelity));
    }
    Ok(lines.join("; "))
}

fn multiplier_truth_tables() -> Outcome {
    for a in SIX_BASES {
        let t = truth_table(a, ExecutionMode::Pulse, None, 0, 0).unwrap();
        for (row, freqs) in t.rows.iter().enumerate() {
            let (y, f) = freqs.iter().copied().enumerate().max_by(|p, q| p.1.total_cmp(&q.1)).unwrap();
            ensure!((f - 1.0).abs() < 1e-9, "a = {a}, row {row}: peak {f}");
            let (control, x) = (row >> 4, row & 15);
            let ok = if control == 0 { y == row } else { y >> 4 == 1 && multiplier_output_ok(a, x, y & 15) };
            ensure!(ok, "a = {a}: input {row} -> {y}");
        }
    }
    Ok("6 bases x 32 rows deterministic and correct".into())
}

fn pulse_equals_logical() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in FIVE_BASES {
        let d = tv(&exact(a, 3, ExecutionMode::Logical), &exact(a, 3, ExecutionMode::Pulse));
        ensure!(d < 1e-6, "a = {a}: total variation {d:e}");
        worst = worst.max(d);
    }
    Ok(format!("worst total variation {worst:.1e}"))
}

fn noise_consistency() -> Outcome {
    let noise = NoiseModel { ms_fidelity: 0.95, local_fidelity: 0.993 };
    let expected = [0, 1, 2, 3, 4, 6, 5, 7];
    let fredkin = building_block_truth_table(&fredkin_sequence(), 3, &expected, Some(&noise), 250, 17).unwrap();
    let f = fredkin.fidelity();
    ensure!((0.64..=0.84).contains(&f), "Fredkin truth-table fidelity {f:.3}");
    let mut parts = vec![format!("Fredkin {f:.3}")];
    for a in SIX_BASES {
        let t = truth_table(a, ExecutionMode::Pulse, Some(&noise), 200, 100 + a).unwrap();
        let f = t.fidelity();
        ensure!((0.30..=0.58).contains(&f), "a = {a}: multiplier fidelity {f:.3}");
        parts.push(format!("a={a} {f:.3}"));
    }
    Ok(parts.join(", "))
}

fn readout_discriminator() -> Outcome {
    use statrs::distribution::{DiscreteCDF, Poisson};
    let m = ReadoutModel::default();
    ensure!(m.window_us == 300.0 && m.threshold == 4, "defaults {m:?}");
    let dark = 1.0 - Poisson::new(0.24 * 0.3).unwrap().cdf(3);
    let bright = Poisson::new(48.0 * 0.3).unwrap().cdf(3);
    ensure!((m.dark_error() - dark).abs() < 1e-5, "dark {} vs {dark}", m.dark_error());
    ensure!((m.bright_error() - bright).abs() < 1e-5, "bright {} vs {bright}", m.bright_error());
    ensure!(m.dark_error() < 0.002 && m.bright_error() < 0.002, "rates too large");
    Ok(format!("dark {:.3e}, bright {:.3e}", m.dark_error(), m.bright_error()))
}

fn repetition_math() -> Outcome {
    let a = repetitions_for_confidence(0.47, 0.99).unwrap();
    let b = repetitions_for_confidence(0.5, 0.99).unwrap();
    ensure!(a == 8 && b == 7, "got {a} and {b}");
    Ok("8 and 7".into())
}

fn circuit_transformations() -> Outcome {
    let trailing = [
        LogicalGate::LocalZ { target: 1, angle: 0.3 },
        LogicalGate::Ry { target: 2, angle: 0.7 },
        LogicalGate::X { target: 3 },
        LogicalGate::LocalZ { target: 4, angle: 1.1 },
    ];
    let mut worst: f64 = 0.0;
    for mode in [ExecutionMode::Logical, ExecutionMode::Pulse] {
        for a in FIVE_BASES {
            let on = ExperimentConfig { mode, ..ExperimentConfig::fifteen(a) };
            let mut off = on.clone();
            off.options.strip_final_locals = false;
            off.options.prune_idle = false;
            let reference = run_experiment(&off).unwrap().distribution;
            let mut plan = plan_rounds(&on).unwrap();
            for g in &trailing {
                plan.last_mut().unwrap().circuit.push(g.clone()).unwrap();
            }
            for cfg in [&on, &off] {
                let d = tv(&execute_plan(cfg, &plan).unwrap().distribution, &reference);
                ensure!(d < 1e-9, "a = {a}, {mode:?}, options {:?}: total variation {d:e}", cfg.options);
                worst = worst.max(d);
            }
        }
    }
    Ok(format!("worst total variation {worst:.1e}"))
}

fn synthesis() -> Outcome {
    let mut cnot = SynthesisProblem::new(named_target("cnot").unwrap(), 2);
    cnot.restarts = 50;
    cnot.tol = 1e-6;
    let r1 = synthesize(&cnot, 2024).unwrap();
    ensure!(r1.infidelity < 1e-4, "CNOT infidelity {:e}", r1.infidelity);
    let mut cswap = SynthesisProblem::new(named_target("cswap").unwrap(), 4);
    cswap.restarts = 100;
    cswap.tol = 1e-5;
    let r2 = synthesize(&cswap, 2024).unwrap();
    ensure!(r2.infidelity < 1e-3, "controlled-SWAP infidelity {:e}", r2.infidelity);
    Ok(format!("CNOT {:.1e}, controlled-SWAP {:.1e}", r1.infidelity, r2.infidelity))
}

fn random_single_ion(rng: &mut ChaCha8Rng, support: &[usize]) -> [Complex64; 4] {
    let mut v = [Complex64::default(); 4];
    for &d in support {
        v[d] = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    }
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.map(|c| c / n)
}

fn product_state(ions: &[[Complex64; 4]]) -> IonState {
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for ion in ions {
        amps = amps.iter().flat_map(|a| ion.iter().map(move |b| a * b)).collect();
    }
    IonState::from_amplitudes(ions.len(), amps).unwrap()
}

fn random_pulse(rng: &mut ChaCha8Rng, n: usize, qubit_only: bool) -> Pulse {
    let transitions = if qubit_only { vec![Transition::T1] } else { vec![Transition::T1, Transition::T2, Transition::T3] };
    let t = transitions[rng.random_range(0..transitions.len())];
    match rng.random_range(0..3) {
        0 => Pulse::r_on(rng.random_range(-2.0..2.0), rng.random_range(0.0..2.0), t),
        1 => Pulse::z_on(rng.random_range(-2.0..2.0), rng.random_range(0..n), t),
        _ => Pulse::ms(rng.random_range(-1.0..1.0)),
    }
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    // norm preservation
    for _ in 0..200 {
        let ions: Vec<_> = (0..3).map(|_| random_single_ion(&mut rng, &[0, 1, 2, 3])).collect();
        let mut st = product_state(&ions);
        for _ in 0..20 {
            apply_pulse(&mut st, &random_pulse(&mut rng, 3, false)).unwrap();
        }
        ensure!((st.norm() - 1.0).abs() < 1e-12, "norm drifted to {}", st.norm());
    }
    // cached ions are invisible to qubit-transition pulses
    for _ in 0..100 {
        let mut ions: Vec<_> = (0..2).map(|_| random_single_ion(&mut rng, &[0, 1])).collect();
        ions.extend((0..2).map(|_| random_single_ion(&mut rng, &[2, 3])));
        let mut st = product_state(&ions);
        let before = st.reduced_density_matrix(&[2, 3]).unwrap();
        for _ in 0..20 {
            apply_pulse(&mut st, &random_pulse(&mut rng, 4, true)).unwrap();
        }
        let after = st.reduced_density_matrix(&[2, 3]).unwrap();
        let diff = max_abs_diff(&after, &before);
        ensure!(diff < 1e-9, "cache state changed by {diff:e}");
    }
    // seed determinism
    let cfg = ExperimentConfig {
        mode: ExecutionMode::Pulse,
        fidelity_mode: FidelityMode::Sampled,
        noise: Some(NoiseModel::default()),
        readout: Some(ReadoutModel::default()),
        shots: 300,
        seed: 99,
        ..ExperimentConfig::fifteen(7)
    };
    let a = run_experiment(&cfg).unwrap().to_json().unwrap();
    let b = run_experiment(&cfg).unwrap().to_json().unwrap();
    ensure!(a == b, "records differ for identical seeds");
    let c = run_experiment(&ExperimentConfig { seed: 100, ..cfg }).unwrap().to_json().unwrap();
    ensure!(a != c, "seed has no effect");
    // SSO axioms
    for _ in 0..200 {
        let mut draw = || {
            let v: Vec<f64> = (0..8).map(|_| rng.random::<f64>()).collect();
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect::<Vec<_>>()
        };
        let (p, q) = (draw(), draw());
        let pq = sso(&p, &q).unwrap();
        ensure!((0.0..=1.0).contains(&pq), "sso {pq} out of range");
        ensure!((pq - sso(&q, &p).unwrap()).abs() < 1e-12, "sso not symmetric");
        ensure!((sso(&p, &p).unwrap() - 1.0).abs() < 1e-12, "sso(p, p) != 1");
    }
    ensure!(sso(&[1.0, 0.0], &[0.0, 1.0]).unwrap() == 0.0, "disjoint support");
    // continued fractions against exhaustive search
    let mut cases = 0;
    for n in 3..=63u64 {
        for a in (2..n).filter(|&a| naive_order(a, n).is_some()) {
            for m in 1..=6 {
                for x in 0..1u64 << m {
                    let est = extract_period(x, m, a, n).unwrap();
                    let (cand, informative) = brute_force_period(x, m, a, n);
                    ensure!(
                        est.candidate_r == cand && est.informative == informative,
                        "x = {x}, m = {m}, a = {a}, N = {n}: {:?} vs ({cand:?}, {informative})",
                        est
                    );
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("norm, cache protection, determinism, SSO; {cases} period cases"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("classical oracle", classical_oracle),
        ("ideal Kitaev runs", ideal_runs),
        ("semiclassical = coherent QFT", semiclassical_is_coherent),
        ("pulse-table verification", pulse_tables),
        ("multiplier truth tables", multiplier_truth_tables),
        ("pulse mode = logical mode", pulse_equals_logical),
        ("noise-model consistency", noise_consistency),
        ("readout discriminator", readout_discriminator),
        ("repetition math", repetition_math),
        ("circuit transformations", circuit_transformations),
        ("synthesis", synthesis),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
