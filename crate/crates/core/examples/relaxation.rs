// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! T1 and T2 from Redfield dynamics across the first clock transition at 5 K.

use ctqsim::error::Result;
use ctqsim::open::{relaxation_sweep, RelaxationConfig, SweepRow};
use ctqsim::spin::{Preset, SpinSystemParams};

pub fn run_example() -> Result<Vec<SweepRow>> {
    let params = SpinSystemParams::preset(Preset::Experimental9p1GHz);
    let fields: Vec<f64> = (0..=8).map(|k| 4.0 + 5.0 * k as f64).collect();
    relaxation_sweep(&params, &fields, &[5.0], &RelaxationConfig::default())
}

fn main() -> Result<()> {
    for r in run_example()? {
        match (r.t1_us, r.t2_us) {
            (Some(t1), Some(t2)) => println!("{:5.1} mT  T1 {t1:.4} us  T2 {t2:.4} us", r.b_mt),
            _ => println!("{:5.1} mT  {}", r.b_mt, r.note.unwrap_or_default()),
        }
    }
    Ok(())
}
