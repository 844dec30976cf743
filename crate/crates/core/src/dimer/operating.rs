// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Four-level operating space of the dimer and the splitting delta f.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix, Spectrum};
use crate::units::MHZ_PER_GHZ;

use super::system::{composed_spectrum, sector_projector, DimerSystem};

/// Energies closer than this (GHz) are treated as degenerate.
pub const DEGENERACY_TOL_GHZ: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "s")]
    Symmetric,
    #[serde(rename = "as")]
    Asymmetric,
    #[serde(rename = "mixed")]
    Mixed,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::Symmetric => "s",
            Regime::Asymmetric => "as",
            Regime::Mixed => "mixed",
        }
    }
}

/// Product states |x>_a |y>_b of the operating sectors, ordered gg, ge, eg, ee
/// (labels 00, 01, 10, 11: a digit is 1 when that site is excited).
#[derive(Debug, Clone)]
pub struct ProductBasis {
    pub states: [DVector<Complex64>; 4],
    /// Single-site qubit frequencies (GHz) of a and b.
    pub site_gaps: (f64, f64),
}

/// Lower and upper eigenstate of a site within its operating sector.
fn sector_pair(site: &crate::spin::SpinSystemParams, s: &Spectrum, m: f64) -> Result<(usize, usize)> {
    let p = sector_projector(site, m)?;
    let mut found = Vec::new();
    for level in 0..s.dim() {
        if s.expectation(level, &p)? > 0.5 {
            found.push(level);
        }
    }
    match found.as_slice() {
        [g, e, ..] => Ok((*g, *e)),
        _ => Err(Error::InvalidParameter(format!("sector {m} has fewer than two levels"))),
    }
}

pub fn product_basis(dimer: &DimerSystem, b_mt: f64, voltage: f64) -> Result<ProductBasis> {
    let (sa, sb) = dimer.site_spectra(b_mt, voltage)?;
    let (ma, mb) = dimer.operating_sector();
    let (ga, ea) = sector_pair(&dimer.site_a, &sa, ma)?;
    let (gb, eb) = sector_pair(&dimer.site_b, &sb, mb)?;
    let v = |x: usize, y: usize| -> DVector<Complex64> {
        let m = kron(
            &CMatrix::from_column_slice(16, 1, sa.states.column(x).as_slice()),
            &CMatrix::from_column_slice(16, 1, sb.states.column(y).as_slice()),
        );
        DVector::from_column_slice(m.as_slice())
    };
    Ok(ProductBasis {
        states: [v(ga, gb), v(ga, eb), v(ea, gb), v(ea, eb)],
        site_gaps: (sa.energies[ea] - sa.energies[ga], sb.energies[eb] - sb.energies[gb]),
    })
}

#[derive(Debug, Clone)]
pub struct OperatingSpace {
    /// Energies (GHz) of |00>, |01>, |10>, |11>.
    pub energies: [f64; 4],
    pub states: [DVector<Complex64>; 4],
    pub regime: Regime,
    /// weights[k][p]: |<product p | state k>|^2, products ordered gg, ge, eg, ee.
    pub weights: [[f64; 4]; 4],
    pub labels: [&'static str; 4],
}

impl OperatingSpace {
    /// delta f = E(|10>) - E(|01>), MHz.
    pub fn delta_f_mhz(&self) -> f64 {
        (self.energies[2] - self.energies[1]) * MHZ_PER_GHZ
    }

    /// Projection of `op` (full space) onto the operating states, in label order.
    pub fn project(&self, op: &CMatrix) -> CMatrix {
        CMatrix::from_fn(4, 4, |i, j| (self.states[i].adjoint() * op * &self.states[j])[(0, 0)])
    }
}

fn overlap_weights(v: &DVector<Complex64>, basis: &ProductBasis) -> [f64; 4] {
    [0, 1, 2, 3].map(|p| basis.states[p].dotc(v).norm_sqr())
}

/// Select the four eigenstates with the largest weight on the operating
/// product space and label them. Degenerate eigenvalue clusters are rotated
/// to maximise the overlap before selection.
pub fn identify_operating_space(spectrum: &Spectrum, basis: &ProductBasis) -> Result<OperatingSpace> {
    let n = spectrum.dim();
    if basis.states[0].len() != n {
        return Err(Error::DimensionMismatch { expected: basis.states[0].len(), got: n });
    }
    let q = CMatrix::from_columns(&basis.states);
    let mut candidates: Vec<(f64, f64, DVector<Complex64>)> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && spectrum.energies[end] - spectrum.energies[end - 1] < DEGENERACY_TOL_GHZ {
            end += 1;
        }
        let vc = spectrum.states.columns(start, end - start).into_owned();
        let e = spectrum.energies[start..end].iter().sum::<f64>() / (end - start) as f64;
        let m = q.adjoint() * &vc;
        if m.norm() > 1e-6 {
            if end - start == 1 {
                candidates.push((m.norm_squared(), e, vc.column(0).into_owned()));
            } else {
                let svd = m.svd(false, true);
                let vt = svd.v_t.expect("requested");
                for (i, s) in svd.singular_values.iter().enumerate() {
                    let w = vt.row(i).adjoint();
                    candidates.push((s * s, e, &vc * w));
                }
            }
        }
        start = end;
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    if candidates.len() < 4 {
        return Err(Error::InvalidState("operating space not found in spectrum".into()));
    }
    let mut chosen: Vec<(f64, DVector<Complex64>)> = candidates.into_iter().take(4).map(|(_, e, v)| (e, v)).collect();
    chosen.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut regime = Regime::Symmetric;
    let w: Vec<[f64; 4]> = chosen.iter().map(|(_, v)| overlap_weights(v, basis)).collect();
    if w.iter().any(|x| x.iter().sum::<f64>() < 0.5) {
        regime = Regime::Mixed;
    }
    let argmax = |p: usize| (0..4).max_by(|&i, &j| w[i][p].total_cmp(&w[j][p])).expect("four states");
    let (k00, k11) = (argmax(0), argmax(3));
    let mid: Vec<usize> = (0..4).filter(|&k| k != k00 && k != k11).collect();
    if k00 == k11 || mid.len() != 2 {
        return Err(Error::InvalidState("ground and doubly excited states coincide".into()));
    }
    let (lo, hi) = (mid[0], mid[1]);

    let (s01, s10, regime) = if (chosen[hi].0 - chosen[lo].0).abs() < DEGENERACY_TOL_GHZ {
        // degenerate pair: report the (anti)symmetric product combinations
        let span = [&chosen[lo].1, &chosen[hi].1];
        let proj = |t: &DVector<Complex64>| -> DVector<Complex64> {
            let mut v = span[0] * span[0].dotc(t) + span[1] * span[1].dotc(t);
            let nrm = v.norm();
            v /= Complex64::new(nrm, 0.0);
            v
        };
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let plus = proj(&((&basis.states[2] + &basis.states[1]) * r));
        let mut minus = proj(&((&basis.states[2] - &basis.states[1]) * r));
        let c = plus.dotc(&minus);
        minus -= &plus * c;
        let nrm = minus.norm();
        minus /= Complex64::new(nrm, 0.0);
        let e = chosen[lo].0;
        ((e, minus), (e, plus), if regime == Regime::Mixed { Regime::Mixed } else { Regime::Symmetric })
    } else {
        let wu = w[hi];
        let dominant = wu[1].max(wu[2]) / (wu[1] + wu[2]).max(1e-300);
        let upper_is_10 = wu[2] >= wu[1];
        let r = if regime == Regime::Mixed {
            Regime::Mixed
        } else if dominant > 0.9 {
            Regime::Asymmetric
        } else if (dominant - 0.5).abs() <= 0.05 {
            Regime::Symmetric
        } else {
            Regime::Mixed
        };
        let upper_10 = r == Regime::Symmetric || upper_is_10;
        let (l, h) = (chosen[lo].clone(), chosen[hi].clone());
        if upper_10 {
            (l, h, r)
        } else {
            (h, l, r)
        }
    };
    let states = [chosen[k00].1.clone(), s01.1, s10.1, chosen[k11].1.clone()];
    let weights = [0, 1, 2, 3].map(|k| overlap_weights(&states[k], basis));
    Ok(OperatingSpace {
        energies: [chosen[k00].0, s01.0, s10.0, chosen[k11].0],
        states,
        regime,
        weights,
        labels: ["|00>", "|01>", "|10>", "|11>"],
    })
}

pub fn operating_space(dimer: &DimerSystem, b_mt: f64, voltage: f64) -> Result<OperatingSpace> {
    let s = composed_spectrum(dimer, b_mt, voltage)?;
    identify_operating_space(&s, &product_basis(dimer, b_mt, voltage)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaFPoint {
    pub b_mt: f64,
    pub voltage: f64,
    pub energies_ghz: [f64; 4],
    pub delta_f_mhz: f64,
    pub regime: Regime,
}

pub fn delta_f(dimer: &DimerSystem, b_mt: f64, voltage: f64) -> Result<DeltaFPoint> {
    let op = operating_space(dimer, b_mt, voltage)?;
    Ok(DeltaFPoint { b_mt, voltage, energies_ghz: op.energies, delta_f_mhz: op.delta_f_mhz(), regime: op.regime })
}

pub fn delta_f_scan(dimer: &DimerSystem, fields: &[f64], voltages: &[f64]) -> Result<Vec<DeltaFPoint>> {
    let pts: Vec<(f64, f64)> = voltages.iter().flat_map(|&v| fields.iter().map(move |&b| (b, v))).collect();
    pts.par_iter().map(|&(b, v)| delta_f(dimer, b, v)).collect()
}

pub fn delta_f_csv(points: &[DeltaFPoint]) -> String {
    let mut out = String::from("B_mT,V,E00_GHz,E01_GHz,E10_GHz,E11_GHz,deltaf_MHz,regime\n");
    for p in points {
        let e = p.energies_ghz;
        out.push_str(&format!(
            "{},{},{:.12},{:.12},{:.12},{:.12},{:.9e},{}\n",
            p.b_mt,
            p.voltage,
            e[0],
            e[1],
            e[2],
            e[3],
            p.delta_f_mhz,
            p.regime.tag()
        ));
    }
    out
}

/// Weight of `state` in each nuclear product sector (M_I^a, M_I^b); rows are
/// M_I^a from +I to -I, columns M_I^b likewise.
pub fn composition_table(dimer: &DimerSystem, state: &DVector<Complex64>) -> Result<Vec<Vec<f64>>> {
    let (na, nb) = (dimer.site_a.nuclear.dim(), dimer.site_b.nuclear.dim());
    let (da, db) = (dimer.site_a.dim(), dimer.site_b.dim());
    if state.len() != da * db {
        return Err(Error::DimensionMismatch { expected: da * db, got: state.len() });
    }
    let norm = state.norm_squared();
    let mut t = vec![vec![0.0; nb]; na];
    for ia in 0..da {
        for ib in 0..db {
            t[ia % na][ib % nb] += state[ia * db + ib].norm_sqr() / norm;
        }
    }
    Ok(t)
}

pub fn composition_csv(dimer: &DimerSystem, table: &[Vec<f64>]) -> String {
    let nb = dimer.site_b.nuclear;
    let na = dimer.site_a.nuclear;
    let mut out = String::from("MI_a\\MI_b");
    for j in 0..nb.dim() {
        out.push_str(&format!(",{}", crate::spin::angular::m_label(nb.m(j))));
    }
    out.push('\n');
    for (i, row) in table.iter().enumerate() {
        out.push_str(&crate::spin::angular::m_label(na.m(i)));
        for w in row {
            out.push_str(&format!(",{w:.9}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::system::CouplingMode;
    use crate::spin::Preset;

    fn dimer() -> DimerSystem {
        DimerSystem::preset(Preset::Experimental9p1GHz)
    }

    #[test]
    fn separable_operating_energies() {
        let mut d = dimer();
        d.mode = CouplingMode::Off;
        let op = operating_space(&d, 12.0, 0.0).unwrap();
        let (fa, fb) = product_basis(&d, 12.0, 0.0).unwrap().site_gaps;
        assert!((op.energies[3] - op.energies[0] - fa - fb).abs() < 1e-10);
        assert!(op.delta_f_mhz().abs() < 1e-6);
        assert_eq!(op.regime, Regime::Symmetric);
    }

    #[test]
    fn symmetric_point_is_degenerate() {
        let op = operating_space(&dimer(), 24.0, 0.0).unwrap();
        assert!(op.delta_f_mhz().abs() < 1e-6, "{}", op.delta_f_mhz());
        assert_eq!(op.regime, Regime::Symmetric);
        for k in [1, 2] {
            assert!((op.weights[k][1] - 0.5).abs() < 1e-6 && (op.weights[k][2] - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn coupled_middle_states_are_symmetric_combinations() {
        let op = operating_space(&dimer(), 12.0, 0.0).unwrap();
        assert_eq!(op.regime, Regime::Symmetric);
        assert!(op.delta_f_mhz() > 0.0);
        for k in [1, 2] {
            assert!((op.weights[k][1] - 0.5).abs() < 1e-6, "{:?}", op.weights);
        }
    }

    #[test]
    fn electric_field_separates_sites() {
        let op = operating_space(&dimer(), 12.0, 300.0).unwrap();
        assert_eq!(op.regime, Regime::Asymmetric);
        assert!(op.weights[2][2] > 0.9 && op.weights[1][1] > 0.9);
        assert!(op.delta_f_mhz() > 1.0);
        let rev = operating_space(&dimer(), 12.0, -300.0).unwrap();
        assert!(rev.delta_f_mhz() < -1.0);
    }

    #[test]
    fn delta_f_even_in_small_voltage_in_symmetric_regime() {
        let d = dimer();
        let f0 = delta_f(&d, 12.0, 0.0).unwrap().delta_f_mhz;
        let fp = delta_f(&d, 12.0, 0.1).unwrap().delta_f_mhz;
        let fm = delta_f(&d, 12.0, -0.1).unwrap().delta_f_mhz;
        assert!(((fp + fm) / (2.0 * f0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn composition_rows_normalised() {
        let d = dimer();
        let op = operating_space(&d, 12.0, 300.0).unwrap();
        for s in &op.states {
            let t = composition_table(&d, s).unwrap();
            let total: f64 = t.iter().flatten().sum();
            assert!((total - 1.0).abs() < 1e-8);
            // operating sector: M_I^a = -1/2 (index 4), M_I^b = +1/2 (index 3)
            assert!(t[4][3] > 0.999);
        }
        let csv = composition_csv(&d, &composition_table(&d, &op.states[0]).unwrap());
        assert_eq!(csv.lines().count(), 9);
    }
}
