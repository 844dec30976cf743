// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! A declarative sequence in TOML: Rabi flop of qubit a, then a lab-frame
//! replay of the same pulse.

use ctqsim::dimer::DimerSystem;
use ctqsim::error::{Error, Result};
use ctqsim::pulses::{operating_system, propagate_sequence, Frame, PulseSequence};
use ctqsim::spin::Preset;

const SEQUENCE: &str = r#"
initial = "00"
initial_voltage = 300.0

[[segments]]
kind = "microwave"
from = "00"
to = "10"
omega_mhz = 0.625

[[segments]]
kind = "free"
duration_ns = 500.0
"#;

pub fn run_example() -> Result<(Vec<f64>, Vec<f64>)> {
    let (sys, _) = operating_system(&DimerSystem::preset(Preset::Experimental9p1GHz), 12.0, 300.0)?;
    let mut seq: PulseSequence = toml::from_str(SEQUENCE).map_err(|e| Error::Config(e.to_string()))?;
    let rwa = propagate_sequence(&seq, &sys, None)?.populations();
    seq.frame = Frame::Lab;
    let lab = propagate_sequence(&seq, &sys, None)?.populations();
    Ok((rwa, lab))
}

fn main() -> Result<()> {
    let (rwa, lab) = run_example()?;
    println!("RWA {rwa:.6?}\nlab {lab:.6?}");
    Ok(())
}
