// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Operating space of the dipolar pair: delta f with and without the
//! electrode, and the regime it falls in.

use ctqsim::dimer::{delta_f_scan, DeltaFPoint, DimerSystem};
use ctqsim::error::Result;
use ctqsim::spin::Preset;

pub fn run_example() -> Result<Vec<DeltaFPoint>> {
    let dimer = DimerSystem::preset(Preset::Experimental9p1GHz);
    let fields: Vec<f64> = (0..=12).map(|k| 4.0 * k as f64).collect();
    delta_f_scan(&dimer, &fields, &[0.0, 300.0])
}

fn main() -> Result<()> {
    for p in run_example()? {
        println!("{:4} V {:5.1} mT  delta f = {:9.5} MHz  {}", p.voltage, p.b_mt, p.delta_f_mhz, p.regime.tag());
    }
    Ok(())
}
