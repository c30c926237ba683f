// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Numerical pulse synthesis on a fixed alternating template.
//!
//! The template is `L + 1` local layers with an MS interaction between
//! consecutive ones. A local layer is an addressed phase on every ion, one
//! collective rotation and another addressed phase on every ion. All angles
//! are optimised jointly with BFGS on finite-difference gradients; random
//! restarts run in parallel.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cis_pi, unitarity_error, CMatrix, ONE, ZERO};
use crate::pulses::{qubit_block, sequence_unitary, Pulse, PulseSequence};
use crate::runtime::stream_rng;

const FD_STEP: f64 = 1e-6;
const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 50;
const SPECIAL_MS: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisProblem {
    /// Target on the logical basis, qubit 0 most significant.
    pub target: CMatrix,
    pub ms_layers: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub sequence: PulseSequence,
    pub parameters: Vec<f64>,
    pub infidelity: f64,
    pub iterations: usize,
    pub restart: usize,
    pub converged: bool,
}

/// Named targets accepted by front ends.
pub fn named_target(name: &str) -> Result<CMatrix> {
    let perm = |table: &[usize]| crate::linalg::permutation_matrix(table);
    Ok(match name {
        "cnot" => perm(&[0, 1, 3, 2]),
        "swap" => perm(&[0, 2, 1, 3]),
        "cz" => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE])),
        "cswap" => perm(&[0, 1, 2, 3, 4, 6, 5, 7]),
        "toffoli" => perm(&[0, 1, 2, 3, 4, 5, 7, 6]),
        _ => match name.strip_prefix("identity-").and_then(|k| k.parse::<u32>().ok()) {
            Some(k) if (1..=4).contains(&k) => CMatrix::identity(1 << k, 1 << k),
            _ => {
                return Err(Error::Argument(format!(
                    "unknown target '{name}' (cnot, swap, cz, cswap, toffoli, identity-1..4)"
                )))
            }
        },
    })
}

impl SynthesisProblem {
    pub fn new(target: CMatrix, ms_layers: usize) -> Self {
        Self { target, ms_layers, restarts: 20, max_iters: 2000, tol: 1e-6 }
    }

    pub fn num_qubits(&self) -> usize {
        self.target.nrows().trailing_zeros() as usize
    }

    pub fn num_parameters(&self) -> usize {
        (self.ms_layers + 1) * (2 * self.num_qubits() + 2) + self.ms_layers
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.target.nrows();
        if d != self.target.ncols() || !d.is_power_of_two() || !(2..=16).contains(&d) {
            return Err(Error::Validation(format!("target must be 2^k square with k in 1..=4, got {d}")));
        }
        let err = unitarity_error(&self.target);
        if err > 1e-9 {
            return Err(Error::Validation(format!("target is not unitary (error {err:.2e})")));
        }
        if !(self.tol > 0.0) || self.restarts == 0 {
            return Err(Error::Validation("need tol > 0 and at least one restart".into()));
        }
        Ok(())
    }

    /// Pulse sequence described by `p` (see the module docs for the layout).
    pub fn sequence(&self, p: &[f64]) -> Result<PulseSequence> {
        let k = self.num_qubits();
        let mut pulses = vec![];
        for (l, layer) in self.layers(p).enumerate() {
            let (pre, rest) = layer.split_at(k);
            let (rot, post) = rest.split_at(2);
            pulses.extend(pre.iter().enumerate().map(|(i, &t)| Pulse::z(t, i)));
            pulses.push(Pulse::r(rot[0], rot[1]));
            pulses.extend(post.iter().enumerate().map(|(i, &t)| Pulse::z(t, i)));
            if l < self.ms_layers {
                pulses.push(Pulse::ms(self.ms_angle(p, l)));
            }
        }
        PulseSequence::new(format!("synth-l{}", self.ms_layers), (0..k).collect(), pulses)
    }

    fn layer_len(&self) -> usize {
        2 * self.num_qubits() + 2
    }

    fn layers<'a>(&self, p: &'a [f64]) -> impl Iterator<Item = &'a [f64]> {
        let step = self.layer_len() + 1;
        let len = self.layer_len();
        (0..=self.ms_layers).map(move |l| &p[l * step..l * step + len])
    }

    fn ms_angle(&self, p: &[f64], l: usize) -> f64 {
        p[l * (self.layer_len() + 1) + self.layer_len()]
    }
}

/// Row-major `d × d` work matrix for the qubit-subspace fast path.
struct Work {
    k: usize,
    d: usize,
    m: Vec<Complex64>,
}

impl Work {
    fn identity(k: usize) -> Self {
        let d = 1 << k;
        let mut m = vec![ZERO; d * d];
        for i in 0..d {
            m[i * d + i] = ONE;
        }
        Self { k, d, m }
    }

    /// Left-multiplies by `a` acting on qubit `q`.
    fn local(&mut self, a: &[[Complex64; 2]; 2], q: usize) {
        let bit = 1 << (self.k - 1 - q);
        let d = self.d;
        for r0 in (0..d).filter(|r| r & bit == 0) {
            let r1 = r0 | bit;
            for c in 0..d {
                let (x, y) = (self.m[r0 * d + c], self.m[r1 * d + c]);
                self.m[r0 * d + c] = a[0][0] * x + a[0][1] * y;
                self.m[r1 * d + c] = a[1][0] * x + a[1][1] * y;
            }
        }
    }

    fn diagonal(&mut self, phase: impl Fn(usize) -> Complex64) {
        let d = self.d;
        for r in 0..d {
            let f = phase(r);
            for v in &mut self.m[r * d..(r + 1) * d] {
                *v *= f;
            }
        }
    }
}

/// Qubit-basis (|0⟩ = D, |1⟩ = S) forms of the native operations.
fn rotation(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (std::f64::consts::FRAC_PI_2 * theta).sin_cos();
    let mi = Complex64::new(0.0, -s);
    [[c.into(), mi * cis_pi(phi)], [mi * cis_pi(-phi), c.into()]]
}

fn hadamard() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn fast_unitary(problem: &SynthesisProblem, p: &[f64]) -> Work {
    let k = problem.num_qubits();
    let mut w = Work::identity(k);
    let z_phase = |thetas: &[f64], r: usize| -> Complex64 {
        let total: f64 = (0..k).map(|q| if r >> (k - 1 - q) & 1 == 1 { -thetas[q] } else { thetas[q] }).sum();
        cis_pi(total / 2.0)
    };
    for (l, layer) in problem.layers(p).enumerate() {
        let (pre, rest) = layer.split_at(k);
        let (rot, post) = rest.split_at(2);
        w.diagonal(|r| z_phase(pre, r));
        let r = rotation(rot[0], rot[1]);
        for q in 0..k {
            w.local(&r, q);
        }
        w.diagonal(|r| z_phase(post, r));
        if l < problem.ms_layers {
            let theta = problem.ms_angle(p, l);
            let h = hadamard();
            (0..k).for_each(|q| w.local(&h, q));
            w.diagonal(|r| {
                let m = k as f64 - 2.0 * r.count_ones() as f64;
                cis_pi(-0.25 * theta * m * m)
            });
            (0..k).for_each(|q| w.local(&h, q));
        }
    }
    w
}

/// `Φ(p) = (|Tr(U_target† U(p))| / d)²`.
pub fn evaluate_fidelity(p: &[f64], problem: &SynthesisProblem) -> Result<f64> {
    if p.len() != problem.num_parameters() {
        return Err(Error::Argument(format!("expected {} parameters, got {}", problem.num_parameters(), p.len())));
    }
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("non-finite parameter".into()));
    }
    Ok(fidelity_unchecked(p, problem))
}

fn fidelity_unchecked(p: &[f64], problem: &SynthesisProblem) -> f64 {
    let w = fast_unitary(problem, p);
    let d = w.d;
    let mut tr = ZERO;
    for r in 0..d {
        for c in 0..d {
            tr += problem.target[(r, c)].conj() * w.m[r * d + c];
        }
    }
    (tr.norm() / d as f64).powi(2).min(1.0)
}

/// Central-difference gradient of the infidelity.
fn gradient(p: &[f64], problem: &SynthesisProblem, h: f64) -> Vec<f64> {
    let mut x = p.to_vec();
    (0..p.len())
        .map(|i| {
            x[i] = p[i] + h;
            let up = fidelity_unchecked(&x, problem);
            x[i] = p[i] - h;
            let down = fidelity_unchecked(&x, problem);
            x[i] = p[i];
            -(up - down) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Descent {
    params: Vec<f64>,
    infidelity: f64,
    iterations: usize,
}

/// BFGS on `1 − Φ` with Armijo backtracking. Every accepted step lowers the
/// infidelity.
fn minimise(problem: &SynthesisProblem, start: Vec<f64>) -> Descent {
    let n = start.len();
    let f = |x: &[f64]| 1.0 - fidelity_unchecked(x, problem);
    let mut x = start;
    let mut fx = f(&x);
    let mut g = gradient(&x, problem, FD_STEP);
    let mut hinv = vec![0.0; n * n];
    let reset = |h: &mut Vec<f64>| {
        h.iter_mut().for_each(|v| *v = 0.0);
        (0..n).for_each(|i| h[i * n + i] = 1.0);
    };
    reset(&mut hinv);
    let mut iterations = 0;
    while iterations < problem.max_iters && fx > problem.tol {
        iterations += 1;
        let mut dir: Vec<f64> = (0..n).map(|i| -dot(&hinv[i * n..(i + 1) * n], &g)).collect();
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            reset(&mut hinv);
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        if slope.abs() < 1e-300 {
            break;
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + alpha * b).collect();
            let ft = f(&trial);
            if ft <= fx + ARMIJO * alpha * slope && ft < fx {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((next, fnext)) = accepted else { break };
        let gnext = gradient(&next, problem, FD_STEP);
        let s: Vec<f64> = next.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gnext.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 {
            // H ← (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..n).map(|i| dot(&hinv[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    hinv[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        x = next;
        fx = fnext;
        g = gnext;
    }
    Descent { params: x, infidelity: fx.max(0.0), iterations }
}

fn initial_point<R: Rng>(problem: &SynthesisProblem, rng: &mut R) -> Vec<f64> {
    let mut p: Vec<f64> = (0..problem.num_parameters()).map(|_| rng.random_range(0.0..2.0)).collect();
    for l in 0..problem.ms_layers {
        if rng.random::<f64>() < 0.25 {
            let idx = l * (problem.layer_len() + 1) + problem.layer_len();
            p[idx] = SPECIAL_MS[rng.random_range(0..SPECIAL_MS.len())];
        }
    }
    p
}

/// Best of `problem.restarts` independent descents; deterministic in
/// `(problem, seed)`.
pub fn synthesize(problem: &SynthesisProblem, seed: u64) -> Result<SynthesisResult> {
    problem.validate()?;
    let runs: Vec<(usize, Descent)> = (0..problem.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            (r, minimise(problem, initial_point(problem, &mut rng)))
        })
        .collect();
    let (restart, best) = runs
        .into_iter()
        .min_by(|(ra, a), (rb, b)| a.infidelity.total_cmp(&b.infidelity).then(ra.cmp(rb)))
        .expect("at least one restart");
    Ok(SynthesisResult {
        sequence: problem.sequence(&best.params)?,
        infidelity: best.infidelity,
        converged: best.infidelity <= problem.tol,
        parameters: best.params,
        iterations: best.iterations,
        restart,
    })
}

/// Infidelity of a sequence on its qubit subspace, through the full
/// four-level simulator.
pub fn sequence_infidelity(target: &CMatrix, seq: &PulseSequence) -> Result<f64> {
    let k = target.nrows().trailing_zeros() as usize;
    let u = qubit_block(&sequence_unitary(seq, k)?, k);
    let tr: Complex64 = target.iter().zip(u.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok((1.0 - (tr.norm() / target.nrows() as f64).powi(2)).max(0.0))
}
