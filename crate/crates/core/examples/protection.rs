// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! First and second field derivatives of the qubit frequency around the
//! first clock transition.

use ctqsim::clock::{protection_profile, uniform_grid};
use ctqsim::error::Result;
use ctqsim::spin::{Preset, SpinSystemParams};

pub fn run_example() -> Result<Vec<(f64, f64, f64)>> {
    let params = SpinSystemParams::preset(Preset::Experimental9p1GHz);
    let grid = uniform_grid(14.0, 34.0, 2.0)?;
    let prof = protection_profile(&params, (7, 8), &grid, 0.01)?;
    Ok(prof.rows.iter().map(|r| (r.b_mt, r.df_db, r.d2f_db2)).collect())
}

fn main() -> Result<()> {
    println!("B_mT  df/dB (MHz/mT)  d2f/dB2 (MHz/mT^2)");
    for (b, d1, d2) in run_example()? {
        println!("{b:5.1} {:14.4} {:14.4}", d1 * 1e3, d2 * 1e3);
    }
    Ok(())
}
