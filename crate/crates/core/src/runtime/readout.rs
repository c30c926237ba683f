// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Photon-counting discriminator for fluorescence detection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutModel {
    pub window_us: f64,
    /// Counts per millisecond from a fluorescing ion.
    pub bright_rate: f64,
    /// Background counts per millisecond from a dark ion.
    pub dark_rate: f64,
    /// Counts at or above this are called bright.
    pub threshold: u32,
}

impl Default for ReadoutModel {
    fn default() -> Self {
        Self { window_us: 300.0, bright_rate: 48.0, dark_rate: 0.24, threshold: 4 }
    }
}

/// `P(K ≤ k)` for `K ~ Poisson(mean)`, summed term by term.
fn poisson_cdf(mean: f64, k: u32) -> f64 {
    let mut term = (-mean).exp();
    let mut acc = term;
    for j in 1..=k {
        term *= mean / f64::from(j);
        acc += term;
    }
    acc.min(1.0)
}

/// `P(K ≥ k)`, summed upward from `k` so small tails keep their precision.
fn poisson_upper_tail(mean: f64, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if mean <= 0.0 {
        return 0.0;
    }
    if mean > f64::from(k) {
        return 1.0 - poisson_cdf(mean, k - 1);
    }
    let mut term = (-mean).exp();
    for j in 1..=k {
        term *= mean / f64::from(j);
    }
    let mut acc = 0.0;
    let mut j = k;
    while term > acc * 1e-17 {
        acc += term;
        j += 1;
        term *= mean / f64::from(j);
    }
    acc.min(1.0)
}

impl ReadoutModel {
    pub fn validate(&self) -> Result<()> {
        let ok = self.window_us > 0.0
            && self.bright_rate > 0.0
            && self.dark_rate >= 0.0
            && self.bright_rate > self.dark_rate
            && self.threshold > 0
            && [self.window_us, self.bright_rate, self.dark_rate].iter().all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid readout model {self:?}")))
        }
    }

    pub fn bright_mean(&self) -> f64 {
        self.bright_rate * self.window_us * 1e-3
    }

    pub fn dark_mean(&self) -> f64 {
        self.dark_rate * self.window_us * 1e-3
    }

    /// Probability that a dark ion is called bright.
    pub fn dark_error(&self) -> f64 {
        poisson_upper_tail(self.dark_mean(), self.threshold)
    }

    /// Probability that a bright ion is called dark.
    pub fn bright_error(&self) -> f64 {
        poisson_cdf(self.bright_mean(), self.threshold - 1)
    }
}

/// Draws a photon count for an ion that is (`bright`) or is not fluorescing
/// and discriminates it. Returns `(bit, counts)` with `bit = 1` for bright.
pub fn sample_readout<R: Rng + ?Sized>(bright: bool, model: &ReadoutModel, rng: &mut R) -> (u8, u64) {
    let mean = if bright { model.bright_mean() } else { model.dark_mean() };
    let counts = if mean > 0.0 {
        Poisson::new(mean).expect("positive finite mean").sample(rng) as u64
    } else {
        0
    };
    (u8::from(counts >= u64::from(model.threshold)), counts)
}
