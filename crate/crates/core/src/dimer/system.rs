// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Two coupled molecules on the 256-level product space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{diagonalize, kron, real, CMatrix, OperatorMatrix, Spectrum};
use crate::spin::hamiltonian::{basis_labels, build_hamiltonian, electronic_ops, jz_operator};
use crate::spin::params::TUNNELING_KEY;
use crate::spin::{ModelKind, Preset, SpinSystemParams};

use super::geometry::{dot, local_field, local_frame, DimerGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    /// Point-dipole operator D [J_a.J_b - 3 (J_a.r)(J_b.r)].
    FullDipolar,
    /// Per nuclear sector, j Jz_a Jz_b with j scaled by the sector moments
    /// |<Jz>_a <Jz>_b| / m^2, so the coupling vanishes at clock transitions.
    #[default]
    EffectiveScalar,
    /// No interaction (separable reference).
    Off,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimerSystem {
    pub site_a: SpinSystemParams,
    /// Site b; the electrode voltage acts on this site only.
    pub site_b: SpinSystemParams,
    pub geometry: DimerGeometry,
    #[serde(default)]
    pub mode: CouplingMode,
}

/// Calibrated separation for the 11 GHz preset, angstrom.
pub const SEPARATION_11GHZ_ANGSTROM: f64 = 52.473_987_990_607_26;
/// Calibrated tunneling-gap response for the 11 GHz preset, GHz per V/m.
pub const SEC_11GHZ_GHZ_PER_V_PER_M: f64 = -2.492_698_442_564_266e-8;

/// Only 16-level sites are composed (256 levels in total).
pub const SITE_DIM: usize = 16;

impl DimerSystem {
    /// Preset pair, with separation and spin-electric response calibrated
    /// per preset to the same operating-space splittings (see `calibrate`).
    pub fn preset(p: Preset) -> Self {
        let mut site = SpinSystemParams::preset(p);
        let mut geometry = DimerGeometry::default();
        if p == Preset::Calculated11GHz {
            site.e_response.derivatives.set(TUNNELING_KEY.0, TUNNELING_KEY.1, SEC_11GHZ_GHZ_PER_V_PER_M);
            geometry = geometry.with_distance(SEPARATION_11GHZ_ANGSTROM);
        }
        Self { site_a: site.clone(), site_b: site, geometry, mode: CouplingMode::default() }
    }

    pub fn validate(&self) -> Result<()> {
        self.site_a.validate()?;
        self.site_b.validate()?;
        self.geometry.validate()?;
        for s in [&self.site_a, &self.site_b] {
            if s.dim() != SITE_DIM || s.model_kind != ModelKind::EffectiveDoublet {
                return Err(Error::DimensionMismatch { expected: SITE_DIM, got: s.dim() });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.site_a.dim() * self.site_b.dim()
    }

    /// Single-molecule Hamiltonians of a (no voltage) and b (voltage applied).
    pub fn site_hamiltonians(&self, b_mt: f64, voltage: f64) -> Result<(OperatorMatrix, OperatorMatrix)> {
        Ok((
            build_hamiltonian(&self.site_a, local_field(self.geometry.axis_a, b_mt), 0.0)?,
            build_hamiltonian(&self.site_b, local_field(self.geometry.axis_b, b_mt), voltage)?,
        ))
    }

    pub fn site_spectra(&self, b_mt: f64, voltage: f64) -> Result<(Spectrum, Spectrum)> {
        let (ha, hb) = self.site_hamiltonians(b_mt, voltage)?;
        Ok((diagonalize(&ha)?, diagonalize(&hb)?))
    }

    /// Nuclear projection of the operating sector of each site:
    /// M_I = -1/2 in the frame of a site whose axis points along the field.
    pub fn operating_sector(&self) -> (f64, f64) {
        let s = |n: [f64; 3]| -0.5 * dot(n, [0.0, 0.0, 1.0]).signum();
        (s(self.geometry.axis_a), s(self.geometry.axis_b))
    }
}

/// Projector onto nuclear projection `m` of a site.
pub fn sector_projector(site: &SpinSystemParams, m: f64) -> Result<CMatrix> {
    let ni = site.nuclear.dim();
    let k = site.nuclear.index_of(m).ok_or_else(|| Error::InvalidParameter(format!("no nuclear projection {m}")))?;
    let mut p = CMatrix::zeros(ni, ni);
    p[(k, k)] = real(1.0);
    Ok(crate::spin::hamiltonian::lift_nuclear(site, &p))
}

/// |<Jz>| of the lowest eigenstate of `site` inside nuclear sector `m`.
pub fn sector_moment(site: &SpinSystemParams, spectrum: &Spectrum, m: f64) -> Result<f64> {
    let p = sector_projector(site, m)?;
    let jz = jz_operator(site);
    for level in 0..spectrum.dim() {
        if spectrum.expectation(level, &p)? > 0.5 {
            return Ok(spectrum.expectation(level, &jz)?.abs());
        }
    }
    Err(Error::InvalidParameter(format!("sector {m} not found")))
}

/// Effective scalar exchange (GHz) of the nuclear sector pair (m_a, m_b).
pub fn sector_exchange(dimer: &DimerSystem, b_mt: f64, voltage: f64, sector: (f64, f64)) -> Result<f64> {
    let (sa, sb) = dimer.site_spectra(b_mt, voltage)?;
    sector_exchange_from(dimer, &sa, &sb, sector)
}

fn sector_exchange_from(dimer: &DimerSystem, sa: &Spectrum, sb: &Spectrum, sector: (f64, f64)) -> Result<f64> {
    let d = dimer.geometry.axial_coupling(dimer.site_a.g_j);
    let norm = dimer.site_a.doublet_mj * dimer.site_b.doublet_mj;
    Ok(d * sector_moment(&dimer.site_a, sa, sector.0)? * sector_moment(&dimer.site_b, sb, sector.1)? / norm)
}

/// Interaction Hamiltonian on the product space (GHz).
pub fn dipolar_operator(dimer: &DimerSystem, b_mt: f64, voltage: f64) -> Result<CMatrix> {
    let (a, b) = (&dimer.site_a, &dimer.site_b);
    let (na, nb) = (a.dim(), b.dim());
    match dimer.mode {
        CouplingMode::Off => Ok(CMatrix::zeros(na * nb, na * nb)),
        CouplingMode::FullDipolar => {
            let lift = |p: &SpinSystemParams, axis: [f64; 3]| -> [CMatrix; 3] {
                let ops = electronic_ops(p);
                let (e1, e2, n) = local_frame(axis);
                let l = |o: &CMatrix| crate::spin::hamiltonian::lift_electronic(p, o);
                let (jx, jy, jz) = (l(&ops.jx), l(&ops.jy), l(&ops.jz));
                [0, 1, 2].map(|i| &jx * real(e1[i]) + &jy * real(e2[i]) + &jz * real(n[i]))
            };
            let ja = lift(a, dimer.geometry.axis_a);
            let jb = lift(b, dimer.geometry.axis_b);
            let r = dimer.geometry.unit_r();
            let mut h = CMatrix::zeros(na * nb, na * nb);
            for i in 0..3 {
                for j in 0..3 {
                    let c = (if i == j { 1.0 } else { 0.0 }) - 3.0 * r[i] * r[j];
                    if c != 0.0 {
                        h += kron(&ja[i], &jb[j]) * real(c);
                    }
                }
            }
            Ok(h * real(dimer.geometry.dipolar_constant(a.g_j)))
        }
        CouplingMode::EffectiveScalar => {
            // Jz and the sector projectors are diagonal in the product basis
            let (sa, sb) = dimer.site_spectra(b_mt, voltage)?;
            let (ni_a, ni_b) = (a.nuclear.dim(), b.nuclear.dim());
            let mut j = vec![0.0; ni_a * ni_b];
            for ia in 0..ni_a {
                for ib in 0..ni_b {
                    j[ia * ni_b + ib] = sector_exchange_from(dimer, &sa, &sb, (a.nuclear.m(ia), b.nuclear.m(ib)))?;
                }
            }
            let (jza, jzb) = (jz_operator(a), jz_operator(b));
            let mut h = CMatrix::zeros(na * nb, na * nb);
            for x in 0..na {
                for y in 0..nb {
                    let k = x * nb + y;
                    h[(k, k)] = real(j[(x % ni_a) * ni_b + y % ni_b] * jza[(x, x)].re * jzb[(y, y)].re);
                }
            }
            Ok(h)
        }
    }
}

/// H_a x 1 + 1 x H_b(V) + H_dip on the 256-level space.
pub fn compose(dimer: &DimerSystem, b_mt: f64, voltage: f64) -> Result<OperatorMatrix> {
    dimer.validate()?;
    let (ha, hb) = dimer.site_hamiltonians(b_mt, voltage)?;
    let (na, nb) = (ha.dim(), hb.dim());
    let h = kron(&ha.matrix, &CMatrix::identity(nb, nb))
        + kron(&CMatrix::identity(na, na), &hb.matrix)
        + dipolar_operator(dimer, b_mt, voltage)?;
    let la = basis_labels(&dimer.site_a);
    let lb = basis_labels(&dimer.site_b);
    let labels = la.iter().flat_map(|x| lb.iter().map(move |y| format!("a[{x}] b[{y}]"))).collect();
    OperatorMatrix::new(h, labels)
}

pub fn composed_spectrum(dimer: &DimerSystem, b_mt: f64, voltage: f64) -> Result<Spectrum> {
    diagonalize(&compose(dimer, b_mt, voltage)?)
}
