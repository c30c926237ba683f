// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Trapped-ion native simulation and compilation for iterative (Kitaev-style)
//! Shor factoring.
//!
//! The crate is organised bottom-up:
//!
//! * [`state`] — dense statevector over registers of four-level ions
//!   (qubit levels `S`, `D` plus the cache levels `S'`, `D'`), projective
//!   single-ion readout and reset.
//! * [`pulses`] — the native gate algebra (collective rotations, addressed
//!   phase shifts, Mølmer–Sørensen interactions), the tabulated controlled-SWAP
//!   and four-target CNOT sequences, spectroscopic decoupling and readout
//!   encoding, and unitary-equivalence checks.
//! * [`circuit`] — modular arithmetic, controlled modular multipliers for
//!   `N = 15`, circuit simplifications and lowering to pulses.
//! * [`runtime`] — the iterative phase-estimation engine with feed-forward,
//!   qubit recycling, noise trajectories and a Poisson fluorescence readout.
//! * [`synth`] — numerical synthesis of pulse sequences on an alternating
//!   local/MS template.
//! * [`analysis`] — continued fractions, factor recovery, SSO and repetition
//!   statistics.
//! * [`cli`] — the `ionfactor` command line front end.

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod pulses;
pub mod runtime;
pub mod state;
pub mod synth;

pub use error::{Error, Result};
pub use state::{ClassicalRegister, IonLevel, IonState};
