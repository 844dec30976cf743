// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Zeeman diagram of the 16 electro-nuclear levels and the clock
//! transitions of the 8-9 pair.

use ctqsim::clock::{find_anticrossings, level_diagram, uniform_grid, CtPoint, CtSearch};
use ctqsim::error::Result;
use ctqsim::spin::{Preset, SpinSystemParams};

pub fn run_example() -> Result<(usize, Vec<CtPoint>)> {
    let params = SpinSystemParams::preset(Preset::Experimental9p1GHz);
    let grid = uniform_grid(0.0, 200.0, 1.0)?;
    let diagram = level_diagram(&params, &grid)?;
    let cts = find_anticrossings(&params, (7, 8), (0.0, 200.0), &CtSearch::default())?;
    Ok((diagram.energies[0].len(), cts))
}

fn main() -> Result<()> {
    let (levels, cts) = run_example()?;
    println!("{levels} levels");
    for ct in cts {
        println!("CT at {:.4} mT, gap {:.6} GHz, d2f/dB2 {:.3e} GHz/mT^2", ct.b_min_mt, ct.f_ct_ghz, ct.d2f_db2);
    }
    Ok(())
}
