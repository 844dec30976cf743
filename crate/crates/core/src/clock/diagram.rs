// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{diagonalize, Spectrum};
use crate::spin::{axial_field, build_hamiltonian, SpinSystemParams};

/// Minimum squared overlap between consecutive eigenvectors of a tracked branch.
pub const TRACKING_THRESHOLD: f64 = 0.9;

/// Energies closer than this (GHz) count as degenerate; tracking is not
/// checked (nor the reference vector updated) across such points.
const DEGENERACY_TOL: f64 = 1e-7;

/// Energies E_i(B) over a field grid.
#[derive(Debug, Clone)]
pub struct LevelDiagram {
    pub fields_mt: Vec<f64>,
    /// Ascending energies at every grid point (GHz).
    pub energies: Vec<Vec<f64>>,
    /// `branches[b][p]` is the ascending-order level index that adiabatic
    /// branch `b` occupies at grid point `p`.
    pub branches: Vec<Vec<usize>>,
    /// Smallest accepted overlap along any branch.
    pub min_overlap: f64,
}

impl LevelDiagram {
    pub fn branch_energies(&self, branch: usize) -> Vec<f64> {
        self.branches[branch].iter().zip(&self.energies).map(|(&lvl, e)| e[lvl]).collect()
    }

    /// CSV with one row per field: `B_mT,E_1,...,E_n` (ascending order).
    pub fn to_csv(&self) -> String {
        let n = self.energies.first().map_or(0, Vec::len);
        let mut out = String::from("B_mT");
        for i in 1..=n {
            out.push_str(&format!(",E_{i}"));
        }
        out.push('\n');
        for (b, e) in self.fields_mt.iter().zip(&self.energies) {
            out.push_str(&format!("{b:.6}"));
            for x in e {
                out.push_str(&format!(",{x:.9}"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("field grid is empty".into()));
    }
    if grid.iter().any(|b| !b.is_finite()) {
        return Err(Error::InvalidGrid("field grid has non-finite values".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("field grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Uniform grid from `start` to `stop` inclusive (up to rounding) with `step`.
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) {
        return Err(Error::InvalidGrid(format!("bad grid specification start={start} stop={stop} step={step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

pub fn spectrum_at(params: &SpinSystemParams, b_mt: f64, voltage: f64) -> Result<Spectrum> {
    diagonalize(&build_hamiltonian(params, axial_field(b_mt), voltage)?)
}

fn degenerate(energies: &[f64], level: usize) -> bool {
    let e = energies[level];
    let scale = energies.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let near = |j: usize| j != level && (energies[j] - e).abs() < DEGENERACY_TOL * scale;
    (level > 0 && near(level - 1)) || (level + 1 < energies.len() && near(level + 1))
}

pub fn level_diagram(params: &SpinSystemParams, grid: &[f64]) -> Result<LevelDiagram> {
    level_diagram_at_voltage(params, grid, 0.0)
}

pub fn level_diagram_at_voltage(params: &SpinSystemParams, grid: &[f64], voltage: f64) -> Result<LevelDiagram> {
    check_grid(grid)?;
    let spectra: Vec<Spectrum> = grid.par_iter().map(|&b| spectrum_at(params, b, voltage)).collect::<Result<_>>()?;
    let n = spectra[0].dim();

    let mut branches: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    // Reference eigenvector per branch; refreshed only at non-degenerate points.
    let mut reference: Vec<_> = (0..n).map(|i| spectra[0].states.column(i).into_owned()).collect();
    let mut min_overlap = 1.0_f64;

    for (p, spec) in spectra.iter().enumerate().skip(1) {
        let mut pairs = Vec::with_capacity(n * n);
        for (b, r) in reference.iter().enumerate() {
            for j in 0..n {
                let ov = (r.adjoint() * spec.states.column(j))[(0, 0)].norm_sqr();
                pairs.push((ov, b, j));
            }
        }
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let mut branch_taken = vec![false; n];
        let mut level_taken = vec![false; n];
        let mut assigned = vec![(0usize, 0.0f64); n];
        for (ov, b, j) in pairs {
            if !branch_taken[b] && !level_taken[j] {
                branch_taken[b] = true;
                level_taken[j] = true;
                assigned[b] = (j, ov);
            }
        }
        let prev = &spectra[p - 1];
        for (b, &(j, ov)) in assigned.iter().enumerate() {
            let prev_level = branches[b][p - 1];
            let exempt = degenerate(&spec.energies, j) || degenerate(&prev.energies, prev_level);
            if !exempt {
                if ov < TRACKING_THRESHOLD {
                    return Err(Error::GridTooCoarse { field_mt: grid[p], overlap: ov });
                }
                min_overlap = min_overlap.min(ov);
                reference[b] = spec.states.column(j).into_owned();
            }
            branches[b].push(j);
        }
    }

    Ok(LevelDiagram {
        fields_mt: grid.to_vec(),
        energies: spectra.into_iter().map(|s| s.energies).collect(),
        branches,
        min_overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::Preset;

    #[test]
    fn zero_field_levels_pair_up() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        let s = spectrum_at(&p, 0.0, 0.0).unwrap();
        // +-M_I blocks are degenerate at zero field
        for pair in s.energies.chunks(2) {
            assert!((pair[0] - pair[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn tracking_follows_hyperfine_blocks_through_crossings() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        let grid = uniform_grid(0.0, 60.0, 0.5).unwrap();
        let d = level_diagram(&p, &grid).unwrap();
        assert!(d.min_overlap >= TRACKING_THRESHOLD);
        assert_eq!(d.branches.len(), 16);
        // every branch is a permutation slot at each point
        for p in 0..grid.len() {
            let mut lv: Vec<_> = d.branches.iter().map(|b| b[p]).collect();
            lv.sort();
            assert_eq!(lv, (0..16).collect::<Vec<_>>());
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        let err = level_diagram(&p, &[5.0, 300.0]).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { .. }));
    }

    #[test]
    fn bad_grids_rejected() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        assert!(level_diagram(&p, &[]).is_err());
        assert!(level_diagram(&p, &[1.0, 1.0]).is_err());
        assert!(uniform_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn csv_has_sixteen_energy_columns() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        let d = level_diagram(&p, &[0.0, 0.1]).unwrap();
        let csv = d.to_csv();
        let header = csv.lines().next().unwrap();
        assert_eq!(header.split(',').count(), 17);
    }
}
