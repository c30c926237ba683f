// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Reference implementations that share no code with the library.

#![allow(dead_code)]

use num_complex::Complex64;

pub fn naive_order(a: u64, n: u64) -> Option<u64> {
    let mut v = 1u64;
    for d in 1..=n {
        v = v * a % n;
        if v == 1 {
            return Some(d);
        }
    }
    None
}

fn naive_pow(a: u64, e: u64, n: u64) -> u64 {
    (0..e).fold(1u64, |v, _| v * a % n)
}

/// Outcome distribution of textbook phase estimation: `m` control qubits
/// in uniform superposition, controlled powers of `x ↦ a·x mod n` on the
/// work register `|1⟩`, inverse QFT and measurement of the control
/// register. Because the work register only ever holds `a^x mod n`, the
/// probability of `y` is `Σ_w |2^{−m} Σ_{x: a^x ≡ w} e^{−2πi x y / 2^m}|²`.
pub fn coherent_qft_distribution(a: u64, n: u64, m: u32) -> Vec<f64> {
    let size = 1u64 << m;
    let mut out = vec![0.0; size as usize];
    for (y, slot) in out.iter_mut().enumerate() {
        let mut per_work = std::collections::HashMap::<u64, Complex64>::new();
        for x in 0..size {
            let w = naive_pow(a, x, n);
            let angle = -2.0 * std::f64::consts::PI * (x * y as u64 % size) as f64 / size as f64;
            *per_work.entry(w).or_default() += Complex64::from_polar(1.0 / size as f64, angle);
        }
        *slot = per_work.values().map(|v| v.norm_sqr()).sum();
    }
    out
}

pub fn tv(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Period candidate by exhaustive search: among `d ≤ n` whose `d·x/2^m` is
/// closer to an integer than for every smaller denominator, the smallest
/// with `a^d ≡ 1`, else the largest such `d`.
pub fn brute_force_period(x: u64, m: u32, a: u64, n: u64) -> (Option<u64>, bool) {
    if x == 0 {
        return (None, false);
    }
    let size = 1u64 << m;
    let dist = |d: u64| {
        let r = d * x % size;
        r.min(size - r)
    };
    let mut best = u64::MAX;
    let mut record = vec![];
    for d in 1..=n {
        let e = dist(d);
        if e < best {
            best = e;
            record.push(d);
        }
    }
    let passing = record.iter().copied().find(|&d| naive_pow(a, d, n) == 1);
    let candidate = passing.or(record.last().copied());
    let informative = passing.is_some() && passing == naive_order(a, n);
    (candidate, informative)
}

/// Expected multiplier output for control 1, judged as residues: inputs
/// `1..=14` must map to `a·x mod 15`, and the two encodings of 0 to an
/// encoding of 0.
pub fn multiplier_output_ok(a: u64, x: usize, y: usize) -> bool {
    if (1..15).contains(&x) {
        y as u64 == a * x as u64 % 15
    } else {
        y % 15 == 0
    }
}
