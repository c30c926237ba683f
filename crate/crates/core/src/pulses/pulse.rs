// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{ClassicalRegister, IonLevel};

/// Optical transition a pulse drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Transition {
    /// `S ↔ D`, the qubit transition.
    #[default]
    T1,
    /// `S ↔ D'`.
    T2,
    /// `D ↔ S'`.
    T3,
}

impl Transition {
    /// `(upper, lower)`: `σz = +1` on `upper`.
    pub const fn levels(self) -> (IonLevel, IonLevel) {
        match self {
            Transition::T1 => (IonLevel::S, IonLevel::D),
            Transition::T2 => (IonLevel::S, IonLevel::Dp),
            Transition::T3 => (IonLevel::D, IonLevel::Sp),
        }
    }

    fn is_t1(&self) -> bool {
        *self == Transition::T1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PulseKind {
    CollectiveR {
        theta: f64,
        phi: f64,
        #[serde(default, skip_serializing_if = "Transition::is_t1")]
        transition: Transition,
    },
    AddressedZ {
        theta: f64,
        ion: usize,
        #[serde(default, skip_serializing_if = "Transition::is_t1")]
        transition: Transition,
    },
    Ms {
        theta: f64,
    },
}

/// Feed-forward condition: the pulse fires only when classical bit `bit`
/// equals `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guard {
    pub bit: usize,
    pub value: u8,
}

impl Guard {
    pub fn holds(&self, register: &ClassicalRegister) -> Result<bool> {
        match register.get(self.bit) {
            Some(b) => Ok(b == self.value),
            None => Err(Error::Contract(format!(
                "guard references bit {} but only {} bits are measured",
                self.bit,
                register.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    #[serde(flatten)]
    pub kind: PulseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<Guard>,
}

impl Pulse {
    pub const fn new(kind: PulseKind) -> Self {
        Self { kind, guard: None }
    }

    /// Collective rotation on the qubit transition.
    pub const fn r(theta: f64, phi: f64) -> Self {
        Self::r_on(theta, phi, Transition::T1)
    }

    pub const fn r_on(theta: f64, phi: f64, transition: Transition) -> Self {
        Self::new(PulseKind::CollectiveR { theta, phi, transition })
    }

    /// Addressed phase shift on the qubit transition.
    pub const fn z(theta: f64, ion: usize) -> Self {
        Self::z_on(theta, ion, Transition::T1)
    }

    pub const fn z_on(theta: f64, ion: usize, transition: Transition) -> Self {
        Self::new(PulseKind::AddressedZ { theta, ion, transition })
    }

    pub const fn ms(theta: f64) -> Self {
        Self::new(PulseKind::Ms { theta })
    }

    pub fn with_guard(mut self, bit: usize, value: u8) -> Self {
        self.guard = Some(Guard { bit, value });
        self
    }

    pub fn theta(&self) -> f64 {
        match self.kind {
            PulseKind::CollectiveR { theta, .. }
            | PulseKind::AddressedZ { theta, .. }
            | PulseKind::Ms { theta } => theta,
        }
    }

    pub fn is_ms(&self) -> bool {
        matches!(self.kind, PulseKind::Ms { .. })
    }

    /// Pulse undoing this one (same guard).
    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            PulseKind::CollectiveR { theta, phi, transition } => {
                PulseKind::CollectiveR { theta: -theta, phi, transition }
            }
            PulseKind::AddressedZ { theta, ion, transition } => {
                PulseKind::AddressedZ { theta: -theta, ion, transition }
            }
            PulseKind::Ms { theta } => PulseKind::Ms { theta: -theta },
        };
        Self { kind, guard: self.guard }
    }

    fn is_finite(&self) -> bool {
        match self.kind {
            PulseKind::CollectiveR { theta, phi, .. } => theta.is_finite() && phi.is_finite(),
            PulseKind::AddressedZ { theta, .. } | PulseKind::Ms { theta } => theta.is_finite(),
        }
    }

    /// Relabels the addressed ion through `map` (`map[old] = new`).
    pub fn remapped(&self, map: &[usize]) -> Self {
        let mut p = *self;
        if let PulseKind::AddressedZ { ion, .. } = &mut p.kind {
            *ion = map[*ion];
        }
        p
    }
}

/// Ordered native instruction stream. The first pulse is applied first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub name: String,
    pub target_ions: Vec<usize>,
    pub pulses: Vec<Pulse>,
}

impl PulseSequence {
    pub fn new(name: impl Into<String>, target_ions: Vec<usize>, pulses: Vec<Pulse>) -> Result<Self> {
        let seq = Self { name: name.into(), target_ions, pulses };
        if seq.pulses.is_empty() {
            return Err(Error::Argument(format!("pulse sequence '{}' is empty", seq.name)));
        }
        if let Some(p) = seq.pulses.iter().find(|p| !p.is_finite()) {
            return Err(Error::Argument(format!("non-finite pulse angle in {p:?}")));
        }
        Ok(seq)
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn ms_count(&self) -> usize {
        self.pulses.iter().filter(|p| p.is_ms()).count()
    }

    pub fn is_guarded(&self) -> bool {
        self.pulses.iter().any(|p| p.guard.is_some())
    }

    /// Checks that every addressed ion exists in a register of `num_ions`.
    pub fn validate(&self, num_ions: usize) -> Result<()> {
        for p in &self.pulses {
            if let PulseKind::AddressedZ { ion, .. } = p.kind {
                if ion >= num_ions {
                    return Err(Error::Argument(format!(
                        "sequence '{}' addresses ion {ion} in a {num_ions}-ion register",
                        self.name
                    )));
                }
            }
        }
        if let Some(&ion) = self.target_ions.iter().find(|&&i| i >= num_ions) {
            return Err(Error::Argument(format!(
                "sequence '{}' targets ion {ion} in a {num_ions}-ion register",
                self.name
            )));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        Self {
            name: format!("{}^-1", self.name),
            target_ions: self.target_ions.clone(),
            pulses: self.pulses.iter().rev().map(Pulse::inverse).collect(),
        }
    }

    /// Relabels addressed and target ions (`map[old] = new`).
    pub fn remapped(&self, map: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            target_ions: self.target_ions.iter().map(|&i| map[i]).collect(),
            pulses: self.pulses.iter().map(|p| p.remapped(map)).collect(),
        }
    }

    pub fn extend(&mut self, other: &PulseSequence) {
        self.pulses.extend_from_slice(&other.pulses);
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let seq: Self = serde_json::from_str(s)?;
        Self::new(seq.name, seq.target_ions, seq.pulses)
    }
}
