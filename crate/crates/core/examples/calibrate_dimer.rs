// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Fix the pair separation from delta f at 0 V and the spin-electric
//! coefficient from delta f with the electrode on.

use ctqsim::dimer::geometry::DimerGeometry;
use ctqsim::dimer::{calibrate_sec, calibrate_separation, delta_f, DimerSystem};
use ctqsim::error::Result;
use ctqsim::spin::Preset;

pub fn run_example() -> Result<(f64, f64, f64)> {
    // 11 GHz sites at the separation calibrated for the 9.1 GHz preset
    let mut start = DimerSystem::preset(Preset::Calculated11GHz);
    start.geometry = DimerGeometry::default();
    let d = calibrate_separation(&start, 12.0, 0.1)?;
    let d = calibrate_sec(&d, 12.0, 300.0, 3.6976)?;
    let r = ctqsim::dimer::geometry::norm(d.geometry.r_angstrom);
    Ok((r, delta_f(&d, 12.0, 0.0)?.delta_f_mhz, delta_f(&d, 12.0, 300.0)?.delta_f_mhz))
}

fn main() -> Result<()> {
    let (r, off, on) = run_example()?;
    println!("r = {r:.4} A, delta f = {off:.6} MHz (0 V), {on:.6} MHz (300 V)");
    Ok(())
}
