// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Recover the tunneling gap and hyperfine constant from a clock
//! transition at 24 mT and 11 GHz.

use ctqsim::clock::{calibrate, CalibrationOptions, CalibrationTarget, FreeParam, Observable, Target};
use ctqsim::error::Result;
use ctqsim::spin::SpinSystemParams;

pub fn run_example() -> Result<(f64, f64, f64)> {
    // deliberately off start
    let start = SpinSystemParams::effective(10.0, 30.0);
    let targets = CalibrationTarget {
        targets: vec![
            Target { observable: Observable::first_ct_field(), value: 24.0, weight: 1.0 },
            Target { observable: Observable::first_ct_frequency(), value: 11.0, weight: 1.0 },
        ],
    };
    let report = calibrate(&start, &targets, &[FreeParam::Delta, FreeParam::AZ], &CalibrationOptions::default())?;
    Ok((report.params.tunneling_gap(), report.params.a_z, report.residual))
}

fn main() -> Result<()> {
    let (delta, a_z, residual) = run_example()?;
    println!("delta = {delta:.9} GHz, A_z = {a_z:.9} GHz, residual {residual:.2e}");
    Ok(())
}
