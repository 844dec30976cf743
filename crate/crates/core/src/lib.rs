// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Simulation of clock-transition molecular spin qubits.
//!
//! * [`spin`]: crystal-field + hyperfine + Zeeman Hamiltonians of one molecule.
//! * [`clock`]: level diagrams, anticrossing search and parameter calibration.
//! * [`open`]: Redfield relaxation, T1/T2 extraction and Arrhenius analysis.
//! * [`dimer`]: two dipolar-coupled molecules and their four-level operating space.
//! * [`pulses`]: microwave / electric-field pulse sequences and Bell-state protocols.
//! * [`cli`]: batch front-end used by the `ctqsim` binary.

pub mod cli;
pub mod clock;
pub mod dimer;
pub mod error;
pub mod linalg;
pub mod open;
pub mod pulses;
pub mod spin;
pub mod units;

pub use error::{Error, Result};
