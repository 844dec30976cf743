// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spin::SpinSystemParams;

use super::diagram::{spectrum_at, uniform_grid};

/// Search settings for anticrossings.
#[derive(Debug, Clone, Copy)]
pub struct CtSearch {
    /// Pre-scan grid step, mT.
    pub prescan_step_mt: f64,
    /// Central finite-difference step for derivatives, mT.
    pub fd_step_mt: f64,
    /// Bracket width at which golden-section refinement stops, mT.
    pub tol_mt: f64,
    /// Minima with a smaller gap are true crossings, not anticrossings (GHz).
    pub min_gap_ghz: f64,
    /// Electrode voltage applied during the search.
    pub voltage: f64,
}

impl Default for CtSearch {
    fn default() -> Self {
        Self { prescan_step_mt: 0.1, fd_step_mt: 0.01, tol_mt: 1e-4, min_gap_ghz: 1e-6, voltage: 0.0 }
    }
}

/// A clock transition: a stationary minimum of a transition frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtPoint {
    pub b_min_mt: f64,
    pub f_ct_ghz: f64,
    pub level_pair: (usize, usize),
    /// GHz/mT
    pub df_db: f64,
    /// GHz/mT^2
    pub d2f_db2: f64,
}

pub fn check_pair(pair: (usize, usize), dim: usize) -> Result<()> {
    if pair.1 >= dim {
        return Err(Error::LevelOutOfRange { index: pair.1, dim });
    }
    if pair.0 >= pair.1 {
        return Err(Error::InvalidParameter(format!(
            "level pair ({}, {}) must be ordered lower < upper",
            pair.0, pair.1
        )));
    }
    Ok(())
}

/// f(B) = E_upper - E_lower for ascending level indices.
pub fn transition_frequency(params: &SpinSystemParams, pair: (usize, usize), b_mt: f64, voltage: f64) -> Result<f64> {
    let s = spectrum_at(params, b_mt, voltage)?;
    check_pair(pair, s.dim())?;
    Ok(s.energies[pair.1] - s.energies[pair.0])
}

fn golden_section<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let r = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// First and second central differences of `f` at `x` with step `h`.
pub fn derivatives<F: Fn(f64) -> Result<f64>>(f: &F, x: f64, h: f64) -> Result<(f64, f64, f64)> {
    let f0 = f(x)?;
    let fp = f(x + h)?;
    let fm = f(x - h)?;
    Ok((f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
}

/// Local minima of `gap` over `range` (mT): (B_min, f, df/dB, d2f/dB2).
pub fn gap_minima<F>(gap: F, range: (f64, f64), opts: &CtSearch) -> Result<Vec<(f64, f64, f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let grid = uniform_grid(range.0, range.1, opts.prescan_step_mt)?;
    let values: Vec<f64> = grid.par_iter().map(|&b| gap(b)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 1..grid.len().saturating_sub(1) {
        if values[i] < values[i - 1] && values[i] <= values[i + 1] {
            let b = golden_section(&gap, grid[i - 1], grid[i + 1], opts.tol_mt * 1e-2)?;
            let (f0, d1, d2) = derivatives(&gap, b, opts.fd_step_mt)?;
            if f0 > opts.min_gap_ghz {
                out.push((b, f0, d1, d2));
            }
        }
    }
    Ok(out)
}

/// Anticrossings between ascending levels `pair` inside `range` (mT).
/// An empty result means the gap has no interior minimum there.
pub fn find_anticrossings(
    params: &SpinSystemParams,
    pair: (usize, usize),
    range: (f64, f64),
    opts: &CtSearch,
) -> Result<Vec<CtPoint>> {
    check_pair(pair, params.dim())?;
    let gap = |b: f64| transition_frequency(params, pair, b, opts.voltage);
    Ok(gap_minima(gap, range, opts)?
        .into_iter()
        .map(|(b, f, d1, d2)| CtPoint { b_min_mt: b, f_ct_ghz: f, level_pair: pair, df_db: d1, d2f_db2: d2 })
        .collect())
}

pub fn ct_table_csv(points: &[CtPoint]) -> String {
    let mut out = String::from("B_min_mT,f_CT_GHz,lower,upper,df_dB_GHz_per_mT,d2f_dB2_GHz_per_mT2\n");
    for p in points {
        out.push_str(&format!(
            "{:.6},{:.9},{},{},{:.6e},{:.6e}\n",
            p.b_min_mt,
            p.f_ct_ghz,
            p.level_pair.0 + 1,
            p.level_pair.1 + 1,
            p.df_db,
            p.d2f_db2
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtectionRow {
    pub b_mt: f64,
    pub f_ghz: f64,
    pub df_db: f64,
    pub d2f_db2: f64,
}

/// f(B), df/dB, d2f/dB2 over a grid.
#[derive(Debug, Clone)]
pub struct ProtectionProfile {
    pub rows: Vec<ProtectionRow>,
    pub fd_step_mt: f64,
}

impl ProtectionProfile {
    /// Rows where both derivatives are below their thresholds.
    pub fn flat_points(&self, max_df: f64, max_d2f: f64) -> Vec<ProtectionRow> {
        self.rows.iter().copied().filter(|r| r.df_db.abs() < max_df && r.d2f_db2.abs() < max_d2f).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("B_mT,f_GHz,df_dB_GHz_per_mT,d2f_dB2_GHz_per_mT2\n");
        for r in &self.rows {
            out.push_str(&format!("{:.6},{:.12e},{:.6e},{:.6e}\n", r.b_mt, r.f_ghz, r.df_db, r.d2f_db2));
        }
        out
    }
}

/// Derivative table of an arbitrary transition frequency `f(B)`.
pub fn protection_profile_of<F>(f: F, grid: &[f64], fd_step_mt: f64) -> Result<ProtectionProfile>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    super::diagram::check_grid(grid)?;
    let rows = grid
        .par_iter()
        .map(|&b| {
            let (f0, d1, d2) = derivatives(&f, b, fd_step_mt)?;
            Ok(ProtectionRow { b_mt: b, f_ghz: f0, df_db: d1, d2f_db2: d2 })
        })
        .collect::<Result<_>>()?;
    Ok(ProtectionProfile { rows, fd_step_mt })
}

pub fn protection_profile(
    params: &SpinSystemParams,
    pair: (usize, usize),
    grid: &[f64],
    fd_step_mt: f64,
) -> Result<ProtectionProfile> {
    check_pair(pair, params.dim())?;
    protection_profile_of(|b| transition_frequency(params, pair, b, 0.0), grid, fd_step_mt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::Preset;

    fn two_level(delta: f64, slope: f64, b0: f64) -> impl Fn(f64) -> Result<f64> + Sync {
        move |b: f64| {
            let bias = slope * (b - b0);
            Ok(2.0 * (delta * delta / 4.0 + bias * bias).sqrt())
        }
    }

    #[test]
    fn analytic_two_level_anticrossing() {
        let m = gap_minima(two_level(3.0, 0.2, 17.3), (0.0, 40.0), &CtSearch::default()).unwrap();
        assert_eq!(m.len(), 1);
        let (b, f, d1, d2) = m[0];
        assert!((b - 17.3).abs() < 1e-4);
        assert!((f - 3.0).abs() < 1e-10);
        assert!(d1.abs() < 1e-6);
        // curvature 4 slope^2 / delta
        assert!((d2 - 4.0 * 0.04 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn constant_gap_has_zero_derivatives() {
        let prof = protection_profile_of(two_level(2.0, 0.0, 0.0), &[1.0, 2.0, 3.0], 0.01).unwrap();
        for r in &prof.rows {
            assert_eq!(r.df_db, 0.0);
            assert_eq!(r.d2f_db2, 0.0);
        }
        assert_eq!(prof.flat_points(1e-12, 1e-12).len(), 3);
    }

    #[test]
    fn no_minimum_gives_empty_list() {
        let m = gap_minima(|b: f64| Ok(1.0 + b), (0.0, 5.0), &CtSearch::default()).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn first_ct_of_preset() {
        for preset in [Preset::Experimental9p1GHz, Preset::Calculated11GHz] {
            let p = SpinSystemParams::preset(preset);
            let cts = find_anticrossings(&p, (7, 8), (0.0, 50.0), &CtSearch::default()).unwrap();
            assert_eq!(cts.len(), 1);
            let ct = cts[0];
            assert!((ct.b_min_mt - 24.0).abs() < 1e-3, "{}", ct.b_min_mt);
            assert!((ct.f_ct_ghz / preset.ct_frequency_ghz() - 1.0).abs() < 1e-6);
            assert!(ct.df_db.abs() < 1e-6);
            assert!(ct.d2f_db2 > 0.0);
            // local minimality over one grid step
            let f = |b| transition_frequency(&p, (7, 8), b, 0.0).unwrap();
            assert!(f(ct.b_min_mt + 0.1) >= ct.f_ct_ghz);
            assert!(f(ct.b_min_mt - 0.1) >= ct.f_ct_ghz);
        }
    }

    #[test]
    fn four_anticrossings_up_to_300_mt() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        let cts = find_anticrossings(&p, (7, 8), (0.0, 300.0), &CtSearch::default()).unwrap();
        let fields: Vec<f64> = cts.iter().map(|c| c.b_min_mt).collect();
        assert_eq!(fields.len(), 4, "{fields:?}");
        // one per nuclear projection -1/2 .. -7/2: B = 24 * 2|M_I|
        for (b, expect) in fields.iter().zip([24.0, 72.0, 120.0, 168.0]) {
            assert!((b - expect).abs() < 1e-3, "{b}");
        }
    }

    #[test]
    fn mirrored_range_finds_negative_ct() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        let pos = find_anticrossings(&p, (7, 8), (0.0, 50.0), &CtSearch::default()).unwrap();
        let neg = find_anticrossings(&p, (7, 8), (-50.0, 0.0), &CtSearch::default()).unwrap();
        assert_eq!(neg.len(), 1);
        assert!((neg[0].b_min_mt + pos[0].b_min_mt).abs() < 1e-3);
        assert!((neg[0].f_ct_ghz - pos[0].f_ct_ghz).abs() < 1e-9);
    }

    #[test]
    fn ct_field_scales_with_hyperfine() {
        let mut p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        let opts = CtSearch { tol_mt: 1e-7, ..CtSearch::default() };
        let b1 = find_anticrossings(&p, (7, 8), (0.0, 40.0), &opts).unwrap()[0].b_min_mt;
        p.a_z *= 2.0;
        let b2 = find_anticrossings(&p, (7, 8), (30.0, 60.0), &opts).unwrap()[0].b_min_mt;
        assert!((b2 / b1 - 2.0).abs() < 1e-6, "{b1} {b2}");
    }

    #[test]
    fn single_molecule_ct_is_first_order_only() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        let prof = protection_profile(&p, (7, 8), &[24.0], 0.01).unwrap();
        assert!(prof.rows[0].df_db.abs() < 1e-6);
        assert!(prof.rows[0].d2f_db2 > 1e-4);
    }

    #[test]
    fn bad_pair_rejected() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        assert!(find_anticrossings(&p, (8, 7), (0.0, 1.0), &CtSearch::default()).is_err());
        assert!(find_anticrossings(&p, (7, 16), (0.0, 1.0), &CtSearch::default()).is_err());
    }
}
