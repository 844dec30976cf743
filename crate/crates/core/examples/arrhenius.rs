// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Temperature dependence of T1 at the clock transition and its
//! Arrhenius barrier.

use ctqsim::error::Result;
use ctqsim::open::{arrhenius_fit, relaxation_sweep, ArrheniusFit, RelaxationConfig};
use ctqsim::spin::{Preset, SpinSystemParams};

pub fn run_example() -> Result<ArrheniusFit> {
    let params = SpinSystemParams::preset(Preset::Experimental9p1GHz);
    let temps: Vec<f64> = (3..=11).map(f64::from).collect();
    let rows = relaxation_sweep(&params, &[24.0], &temps, &RelaxationConfig::default())?;
    let pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.t1_us.map(|t1| (r.temperature_k, t1))).collect();
    arrhenius_fit(&pts)
}

fn main() -> Result<()> {
    let fit = run_example()?;
    println!(
        "U_eff = {:.2} cm^-1 (tau0 = {:.3e} us, R^2 = {:.5}) over {:?} K",
        fit.u_eff_cm1, fit.tau0, fit.r_squared, fit.t_range_k
    );
    Ok(())
}
