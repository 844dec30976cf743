// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! The Phi protocol with per-qubit damping from Redfield T1 and T2 at
//! several temperatures.

use ctqsim::dimer::DimerSystem;
use ctqsim::error::Result;
use ctqsim::open::{relaxation_times, RelaxationConfig};
use ctqsim::pulses::{bell_protocol, operating_system, BellOptions, Damping};
use ctqsim::spin::{Preset, SpinSystemParams};

pub fn run_example() -> Result<Vec<(f64, f64, f64)>> {
    let params = SpinSystemParams::preset(Preset::Experimental9p1GHz);
    let (sys, _) = operating_system(&DimerSystem::preset(Preset::Experimental9p1GHz), 12.0, 300.0)?;
    let mut out = Vec::new();
    for temp in [4.0, 4.5, 5.0] {
        let rt = relaxation_times(&params, 12.0, temp, &RelaxationConfig::default())?;
        let damping = Damping { t1_us: rt.t1_us, t2_us: rt.t2_us.min(2.0 * rt.t1_us) };
        let r = bell_protocol(&sys, 300.0, &BellOptions::default(), Some(&damping))?;
        out.push((temp, r.fidelity, r.concurrence));
    }
    Ok(out)
}

fn main() -> Result<()> {
    for (t, f, c) in run_example()? {
        println!("{t:.1} K: fidelity {f:.4}, concurrence {c:.4}");
    }
    Ok(())
}
