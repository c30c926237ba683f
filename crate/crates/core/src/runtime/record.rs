// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::analysis::{extract_period, factors_from_period, ideal_distribution, sso, success_probability};
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    /// Shot counts per outcome, every outcome in `[0, 2^m)` listed.
    pub histogram: BTreeMap<u64, u64>,
    /// Exact outcome probabilities, or shot frequencies in sampled mode.
    pub distribution: Vec<f64>,
    /// Measured bits of each shot, first-measured first.
    pub transcripts: Vec<String>,
    pub sso: f64,
    pub success_probability: f64,
    pub factors: Vec<u64>,
    /// Filled by front ends; kept out of library output so records are
    /// reproducible byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl ExperimentRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Recomputes `(sso, success_probability, factors)` from the stored
    /// distribution.
    pub fn derived_statistics(&self) -> Result<(f64, f64, Vec<u64>)> {
        let (a, n, m) = (self.config.a, self.config.modulus, self.config.digits);
        let ideal = ideal_distribution(a, n, m)?;
        let s = sso(&self.distribution, &ideal)?;
        let p = success_probability(&self.distribution, a, n, m)?;
        let mut factors = BTreeSet::new();
        for (x, q) in self.distribution.iter().enumerate() {
            if *q > 0.0 {
                if let Some(r) = extract_period(x as u64, m, a, n)?.candidate_r {
                    if let Some((f1, f2)) = factors_from_period(a, r, n) {
                        factors.extend([f1, f2]);
                    }
                }
            }
        }
        Ok((s, p, factors.into_iter().collect()))
    }

    /// `outcome,count,frequency` rows.
    pub fn write_histogram_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["outcome", "count", "frequency"])?;
        let shots = self.histogram.values().sum::<u64>().max(1) as f64;
        for (x, c) in &self.histogram {
            w.write_record([x.to_string(), c.to_string(), (*c as f64 / shots).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
