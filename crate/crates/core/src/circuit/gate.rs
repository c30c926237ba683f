// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRecord", into = "GateRecord")]
pub enum LogicalGate {
    /// Swap `a` and `b` when `control` is 1.
    CSwap { control: usize, a: usize, b: usize },
    /// Flip every target when `control` is 1.
    MultiCNot { control: usize, targets: Vec<usize> },
    X { target: usize },
    /// `diag(1, e^{iπ·angle})` on the logical basis.
    LocalZ { target: usize, angle: f64 },
    /// `exp(−i·angle·(π/2)·Y)` on the logical basis.
    Ry { target: usize, angle: f64 },
    /// Basis permutation of `targets` (first target most significant).
    GenericPermutation { targets: Vec<usize>, table: Vec<usize> },
    Barrier,
}

impl LogicalGate {
    /// Qubits the gate acts on, control first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            LogicalGate::CSwap { control, a, b } => vec![*control, *a, *b],
            LogicalGate::MultiCNot { control, targets } => {
                std::iter::once(*control).chain(targets.iter().copied()).collect()
            }
            LogicalGate::X { target }
            | LogicalGate::LocalZ { target, .. }
            | LogicalGate::Ry { target, .. } => vec![*target],
            LogicalGate::GenericPermutation { targets, .. } => targets.clone(),
            LogicalGate::Barrier => vec![],
        }
    }

    pub fn is_entangling(&self) -> bool {
        self.qubits().len() > 1
    }

    pub fn is_local(&self) -> bool {
        self.qubits().len() == 1
    }

    fn validate(&self) -> Result<()> {
        let q = self.qubits();
        for (k, x) in q.iter().enumerate() {
            if q[..k].contains(x) {
                return Err(Error::Argument(format!("{self:?}: qubit {x} used twice")));
            }
        }
        match self {
            LogicalGate::MultiCNot { targets, .. } if targets.is_empty() => {
                Err(Error::Argument("controlled-NOT without targets".into()))
            }
            LogicalGate::LocalZ { angle, .. } | LogicalGate::Ry { angle, .. } if !angle.is_finite() => {
                Err(Error::Argument("non-finite angle".into()))
            }
            LogicalGate::GenericPermutation { targets, table } => {
                if table.len() != 1 << targets.len() {
                    return Err(Error::Argument("permutation table size mismatch".into()));
                }
                let mut seen = vec![false; table.len()];
                for &t in table {
                    if t >= seen.len() || std::mem::replace(&mut seen[t], true) {
                        return Err(Error::Argument("permutation table is not a bijection".into()));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn remapped(&self, map: &[usize]) -> LogicalGate {
        let m = |q: &usize| map[*q];
        match self {
            LogicalGate::CSwap { control, a, b } => LogicalGate::CSwap { control: m(control), a: m(a), b: m(b) },
            LogicalGate::MultiCNot { control, targets } => LogicalGate::MultiCNot {
                control: m(control),
                targets: targets.iter().map(m).collect(),
            },
            LogicalGate::X { target } => LogicalGate::X { target: m(target) },
            LogicalGate::LocalZ { target, angle } => LogicalGate::LocalZ { target: m(target), angle: *angle },
            LogicalGate::Ry { target, angle } => LogicalGate::Ry { target: m(target), angle: *angle },
            LogicalGate::GenericPermutation { targets, table } => LogicalGate::GenericPermutation {
                targets: targets.iter().map(m).collect(),
                table: table.clone(),
            },
            LogicalGate::Barrier => LogicalGate::Barrier,
        }
    }
}

/// Flat wire form: `{kind, control?, targets?, angle?, table?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    control: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    targets: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<usize>>,
}

impl From<LogicalGate> for GateRecord {
    fn from(g: LogicalGate) -> Self {
        let rec = |kind: &str, control, targets, angle, table| GateRecord {
            kind: kind.to_string(),
            control,
            targets,
            angle,
            table,
        };
        match g {
            LogicalGate::CSwap { control, a, b } => rec("cswap", Some(control), Some(vec![a, b]), None, None),
            LogicalGate::MultiCNot { control, targets } => rec("multi_cnot", Some(control), Some(targets), None, None),
            LogicalGate::X { target } => rec("x", None, Some(vec![target]), None, None),
            LogicalGate::LocalZ { target, angle } => rec("local_z", None, Some(vec![target]), Some(angle), None),
            LogicalGate::Ry { target, angle } => rec("ry", None, Some(vec![target]), Some(angle), None),
            LogicalGate::GenericPermutation { targets, table } => {
                rec("generic_permutation", None, Some(targets), None, Some(table))
            }
            LogicalGate::Barrier => rec("barrier", None, None, None, None),
        }
    }
}

impl TryFrom<GateRecord> for LogicalGate {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Self> {
        let missing = |what: &str| Error::Argument(format!("gate '{}' needs {what}", r.kind));
        let targets = || r.targets.clone().ok_or_else(|| missing("targets"));
        let single = || -> Result<usize> {
            match targets()?.as_slice() {
                [t] => Ok(*t),
                _ => Err(Error::Argument(format!("gate '{}' takes exactly one target", r.kind))),
            }
        };
        let gate = match r.kind.as_str() {
            "cswap" => match targets()?.as_slice() {
                [a, b] => LogicalGate::CSwap { control: r.control.ok_or_else(|| missing("control"))?, a: *a, b: *b },
                _ => return Err(Error::Argument("cswap takes two targets".into())),
            },
            "multi_cnot" => LogicalGate::MultiCNot {
                control: r.control.ok_or_else(|| missing("control"))?,
                targets: targets()?,
            },
            "x" => LogicalGate::X { target: single()? },
            "local_z" => LogicalGate::LocalZ { target: single()?, angle: r.angle.ok_or_else(|| missing("angle"))? },
            "ry" => LogicalGate::Ry { target: single()?, angle: r.angle.ok_or_else(|| missing("angle"))? },
            "generic_permutation" => LogicalGate::GenericPermutation {
                targets: targets()?,
                table: r.table.clone().ok_or_else(|| missing("table"))?,
            },
            "barrier" => LogicalGate::Barrier,
            other => return Err(Error::Argument(format!("unknown gate kind '{other}'"))),
        };
        gate.validate()?;
        Ok(gate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitRole {
    Control,
    Computational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub roles: BTreeMap<usize, QubitRole>,
    pub gates: Vec<LogicalGate>,
}

impl Circuit {
    /// Kitaev layout: qubit 0 controls, qubits `1..=n` are computational.
    pub fn kitaev(computational: usize) -> Self {
        let mut roles = BTreeMap::new();
        roles.insert(0, QubitRole::Control);
        for q in 1..=computational {
            roles.insert(q, QubitRole::Computational);
        }
        Self { num_qubits: computational + 1, roles, gates: vec![] }
    }

    pub fn push(&mut self, gate: LogicalGate) -> Result<()> {
        gate.validate()?;
        if let Some(q) = gate.qubits().into_iter().find(|&q| q >= self.num_qubits) {
            return Err(Error::Argument(format!(
                "gate {gate:?} uses qubit {q} of a {}-qubit circuit",
                self.num_qubits
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn role(&self, qubit: usize) -> Option<QubitRole> {
        self.roles.get(&qubit).copied()
    }

    pub fn control_qubit(&self) -> Option<usize> {
        self.roles.iter().find(|(_, r)| **r == QubitRole::Control).map(|(q, _)| *q)
    }

    pub fn count(&self, pred: impl Fn(&LogicalGate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }

    pub fn validate(&self) -> Result<()> {
        let controls = self.roles.values().filter(|r| **r == QubitRole::Control).count();
        if controls > 1 {
            return Err(Error::Argument(format!("{controls} control qubits, expected at most one")));
        }
        if let Some(q) = self.roles.keys().find(|&&q| q >= self.num_qubits) {
            return Err(Error::Argument(format!("role assigned to missing qubit {q}")));
        }
        let mut copy = Circuit { gates: vec![], ..self.clone() };
        for g in &self.gates {
            copy.push(g.clone())?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }
}
