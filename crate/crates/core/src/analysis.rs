// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical post-processing of period-register outcomes.

use serde::{Deserialize, Serialize};

use crate::circuit::{classical_modexp, find_period, gcd};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodEstimate {
    pub x: u64,
    pub digits: u32,
    pub candidate_r: Option<u64>,
    /// The candidate is the true order of `a`.
    pub informative: bool,
}

/// Convergents `p/q` of the continued fraction of `num/den`, in order.
pub fn convergents(num: u64, den: u64) -> Vec<(u64, u64)> {
    let (mut n, mut d) = (u128::from(num), u128::from(den));
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    let mut out = vec![];
    while d != 0 {
        let a = n / d;
        (p0, p1) = (p1, a * p1 + p0);
        (q0, q1) = (q1, a * q1 + q0);
        out.push((p1 as u64, q1 as u64));
        (n, d) = (d, n - a * d);
    }
    out
}

/// Candidate period from the outcome `x` of an `m`-digit period register.
///
/// The smallest convergent denominator `d ≤ n` of `x/2^m` with `a^d ≡ 1`
/// is the candidate. Failing that, the largest convergent denominator
/// `≤ n` is reported as a (wrong) candidate; `x = 0` carries no information.
pub fn extract_period(x: u64, m: u32, a: u64, n: u64) -> Result<PeriodEstimate> {
    if m == 0 || m > 63 || x >= 1u64 << m {
        return Err(Error::Argument(format!("outcome {x} does not fit {m} digits")));
    }
    let mut est = PeriodEstimate { x, digits: m, candidate_r: None, informative: false };
    if x == 0 {
        return Ok(est);
    }
    let dens: Vec<u64> = convergents(x, 1 << m).into_iter().map(|(_, q)| q).filter(|&q| q <= n).collect();
    let passing = dens.iter().copied().find(|&d| classical_modexp(a, d, n).is_ok_and(|v| v == 1));
    est.candidate_r = passing.or_else(|| dens.last().copied());
    est.informative = match passing {
        Some(d) => find_period(a, n).is_ok_and(|r| r == d),
        None => false,
    };
    Ok(est)
}

/// Nontrivial factor pair `(gcd(a^{r/2} − 1, n), gcd(a^{r/2} + 1, n))`.
pub fn factors_from_period(a: u64, r: u64, n: u64) -> Option<(u64, u64)> {
    if r == 0 || r % 2 == 1 {
        return None;
    }
    let half = classical_modexp(a, r / 2, n).ok()?;
    if half == n - 1 {
        return None;
    }
    let f1 = gcd((half + n - 1) % n, n);
    let f2 = gcd(half + 1, n);
    let nontrivial = |f: u64| f > 1 && f < n;
    (nontrivial(f1) && nontrivial(f2)).then_some((f1, f2))
}

fn check_distributions(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::Argument(format!("distribution lengths differ: {} vs {}", p.len(), q.len())));
    }
    for d in [p, q] {
        let s: f64 = d.iter().sum();
        if (s - 1.0).abs() > 1e-6 || d.iter().any(|v| *v < 0.0 || !v.is_finite()) {
            return Err(Error::Argument(format!("not a probability distribution (sum {s})")));
        }
    }
    Ok(())
}

/// Squared statistical overlap `(Σ √(p_j q_j))²`.
pub fn sso(p: &[f64], q: &[f64]) -> Result<f64> {
    check_distributions(p, q)?;
    let b: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    Ok((b * b).min(1.0))
}

pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    check_distributions(p, q)?;
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Smallest `k` with `1 − (1 − p)^k ≥ confidence`.
pub fn repetitions_for_confidence(p_success: f64, confidence: f64) -> Result<u64> {
    if !(p_success > 0.0 && p_success < 1.0 && confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Argument(format!(
            "need probabilities in (0, 1), got p = {p_success}, confidence = {confidence}"
        )));
    }
    let mut k = ((1.0 - confidence).ln() / (1.0 - p_success).ln()).ceil().max(1.0) as u64;
    // Guard against ln rounding either way.
    while k > 1 && 1.0 - (1.0 - p_success).powi(k as i32 - 1) >= confidence {
        k -= 1;
    }
    while 1.0 - (1.0 - p_success).powi(k as i32) < confidence {
        k += 1;
    }
    Ok(k)
}

/// Noiseless outcome distribution of an `m`-digit phase estimation of the
/// order of `a` modulo `n`: the average over eigenphases `s/r` of the
/// Fejér-kernel peak.
pub fn ideal_distribution(a: u64, n: u64, m: u32) -> Result<Vec<f64>> {
    if m == 0 || m > 20 {
        return Err(Error::Argument(format!("digit count {m} outside 1..=20")));
    }
    let r = find_period(a, n)?;
    let size = 1usize << m;
    let big = size as f64;
    let mut out = vec![0.0; size];
    for s in 0..r {
        for (x, slot) in out.iter_mut().enumerate() {
            let delta = s as f64 / r as f64 - x as f64 / big;
            let phase = std::f64::consts::PI * delta;
            // |Σ_j e^{2πi j δ}|² / M² = sin²(Mπδ) / (M² sin²(πδ))
            let amp = if (delta - delta.round()).abs() < 1e-12 {
                1.0
            } else {
                ((big * phase).sin() / (big * phase.sin())).powi(2)
            };
            *slot += amp / r as f64;
        }
    }
    Ok(out)
}

/// Probability mass on outcomes that yield the true period.
pub fn success_probability(dist: &[f64], a: u64, n: u64, m: u32) -> Result<f64> {
    let mut total = 0.0;
    for (x, p) in dist.iter().enumerate() {
        if *p > 0.0 && extract_period(x as u64, m, a, n)?.informative {
            total += p;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionStats {
    pub observed: Vec<f64>,
    pub ideal: Vec<f64>,
    pub sso: f64,
    pub success_probability: f64,
}

impl DistributionStats {
    pub fn new(observed: Vec<f64>, a: u64, n: u64, m: u32) -> Result<Self> {
        let ideal = ideal_distribution(a, n, m)?;
        let sso = sso(&observed, &ideal)?;
        let success_probability = success_probability(&observed, a, n, m)?;
        Ok(Self { observed, ideal, sso, success_probability })
    }
}
