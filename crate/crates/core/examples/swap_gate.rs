// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Exchange oscillation between |10> and |01> with the electrode off.

use ctqsim::dimer::DimerSystem;
use ctqsim::error::Result;
use ctqsim::pulses::{operating_system, swap_oscillation, OscillationRecord};
use ctqsim::spin::Preset;

pub fn run_example() -> Result<OscillationRecord> {
    let (sys, _) = operating_system(&DimerSystem::preset(Preset::Experimental9p1GHz), 12.0, 300.0)?;
    let times: Vec<f64> = (0..=300).map(|k| k as f64 * 50.0).collect();
    swap_oscillation(&sys, 0.0, "10", "01", &times)
}

fn main() -> Result<()> {
    let r = run_example()?;
    println!("oscillation {:.6} MHz vs splitting {:.6} MHz", r.frequency_mhz, r.splitting_mhz);
    println!("full swap {:.0} ns, sqrt(SWAP) {:.0} ns", r.full_swap_ns, r.half_rotation_ns);
    Ok(())
}
