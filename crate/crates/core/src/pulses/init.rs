// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Initialization ladders on the full pair manifold.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dimer::system::{compose, sector_projector, CouplingMode, DimerSystem};
use crate::error::{Error, Result};
use crate::linalg::{diagonalize, kron, real, CMatrix, Spectrum};
use crate::spin::angular::m_label;
use crate::spin::hamiltonian::{jz_operator, lift_nuclear};
use crate::spin::SpinSystemParams;

use super::propagate::propagate_resolved;
use super::sequence::{resolve_drive, Frame, Resolved, DEFAULT_OMEGA_MHZ};
use super::system::{DrivenSystem, ELECTRONIC_DRIVE};

pub const NUCLEAR_A_DRIVE: &str = "nuclear_a";
pub const NUCLEAR_B_DRIVE: &str = "nuclear_b";

/// Lower (ground) or upper level of a site inside one nuclear sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteLevel {
    pub m_i: f64,
    #[serde(default)]
    pub excited: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairLevel {
    pub a: SiteLevel,
    pub b: SiteLevel,
}

impl std::fmt::Display for PairLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = |l: &SiteLevel| format!("{}{}", m_label(l.m_i), if l.excited { "e" } else { "g" });
        write!(f, "a({}) b({})", s(&self.a), s(&self.b))
    }
}

impl PairLevel {
    pub fn new(m_a: f64, excited_a: bool, m_b: f64, excited_b: bool) -> Self {
        Self { a: SiteLevel { m_i: m_a, excited: excited_a }, b: SiteLevel { m_i: m_b, excited: excited_b } }
    }

    /// Operating-space ground |00> of `dimer`.
    pub fn operating_ground(dimer: &DimerSystem) -> Self {
        let (ma, mb) = dimer.operating_sector();
        Self::new(ma, false, mb, false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rung {
    pub from: PairLevel,
    pub to: PairLevel,
    pub drive: String,
    #[serde(default = "default_omega")]
    pub omega_mhz: f64,
}

fn default_omega() -> f64 {
    DEFAULT_OMEGA_MHZ
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitLadder {
    pub start: PairLevel,
    pub rungs: Vec<Rung>,
    pub field_mt: f64,
    pub voltage: f64,
}

/// Full manifold in the eigenbasis of the pair Hamiltonian, with the
/// electronic drive and per-site nuclear Ix drives.
pub struct Manifold {
    pub system: DrivenSystem,
    pub spectrum: Spectrum,
    site_states: [Vec<(f64, DVector<Complex64>, DVector<Complex64>)>; 2],
}

fn site_levels(
    params: &SpinSystemParams,
    spec: &Spectrum,
) -> Result<Vec<(f64, DVector<Complex64>, DVector<Complex64>)>> {
    let mut out = Vec::new();
    for k in 0..params.nuclear.dim() {
        let m = params.nuclear.m(k);
        let p = sector_projector(params, m)?;
        let lv: Vec<usize> = (0..spec.dim()).filter(|&l| spec.expectation(l, &p).unwrap_or(0.0) > 0.5).collect();
        if lv.len() < 2 {
            return Err(Error::InvalidParameter(format!("sector {m} has fewer than two levels")));
        }
        out.push((m, spec.state(lv[0])?, spec.state(lv[1])?));
    }
    Ok(out)
}

impl Manifold {
    pub fn new(dimer: &DimerSystem, b_mt: f64, voltage: f64) -> Result<Self> {
        let h = compose(dimer, b_mt, voltage)?;
        let spectrum = diagonalize(&h)?;
        let (sa, sb) = dimer.site_spectra(b_mt, voltage)?;
        let (a, b) = (&dimer.site_a, &dimer.site_b);
        let (na, nb) = (a.dim(), b.dim());
        let ja = kron(&jz_operator(a), &CMatrix::identity(nb, nb));
        let jb = kron(&CMatrix::identity(na, na), &jz_operator(b));
        let ia = kron(&lift_nuclear(a, &a.nuclear.ops().jx), &CMatrix::identity(nb, nb));
        let ib = kron(&CMatrix::identity(na, na), &lift_nuclear(b, &b.nuclear.ops().jx));
        let diag =
            CMatrix::from_diagonal(&DVector::from_iterator(spectrum.dim(), spectrum.energies.iter().map(|&e| real(e))));
        let system = DrivenSystem {
            labels: (0..spectrum.dim()).map(|k| format!("E{k}")).collect(),
            hamiltonians: vec![(voltage, diag)],
            drives: vec![
                (ELECTRONIC_DRIVE.into(), spectrum.to_eigenbasis(&(ja + jb))),
                (NUCLEAR_A_DRIVE.into(), spectrum.to_eigenbasis(&ia)),
                (NUCLEAR_B_DRIVE.into(), spectrum.to_eigenbasis(&ib)),
            ],
            qubits: 0,
        };
        Ok(Self { system, spectrum, site_states: [site_levels(a, &sa)?, site_levels(b, &sb)?] })
    }

    fn site_state(&self, site: usize, l: &SiteLevel) -> Result<&DVector<Complex64>> {
        self.site_states[site]
            .iter()
            .find(|(m, _, _)| (m - l.m_i).abs() < 1e-9)
            .map(|(_, g, e)| if l.excited { e } else { g })
            .ok_or_else(|| Error::InvalidParameter(format!("no nuclear projection {}", l.m_i)))
    }

    /// Eigenstate with the largest overlap with the product level, and that overlap.
    pub fn locate(&self, level: &PairLevel) -> Result<(usize, f64)> {
        let (va, vb) = (self.site_state(0, &level.a)?, self.site_state(1, &level.b)?);
        let prod = kron(
            &CMatrix::from_column_slice(va.len(), 1, va.as_slice()),
            &CMatrix::from_column_slice(vb.len(), 1, vb.as_slice()),
        );
        let overlaps = self.spectrum.states.adjoint() * prod;
        let (k, w) =
            overlaps
                .iter()
                .map(|z| z.norm_sqr())
                .enumerate()
                .fold((0, -1.0), |acc, (k, w)| if w > acc.1 { (k, w) } else { acc });
        Ok((k, w))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RungReport {
    pub from: String,
    pub to: String,
    pub carrier_ghz: f64,
    pub population_after: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InitReport {
    pub rungs: Vec<RungReport>,
    /// Final population of the operating-space ground |00>.
    pub operating_population: f64,
    /// Same carriers replayed on uncoupled molecules: final population of
    /// the uncoupled |00> level.
    pub monomer_population: f64,
    /// Pair minus uncoupled transition frequency for each rung (MHz).
    pub pair_shift_mhz: Vec<f64>,
}

/// Rung transfers below this population are reported as failed.
const RUNG_OK: f64 = 0.9;

fn run(manifold: &Manifold, start: usize, segs: &[Resolved]) -> Result<(Vec<DVector<Complex64>>, Vec<f64>)> {
    let mut psi = DVector::from_element(manifold.system.dim(), Complex64::new(0.0, 0.0));
    psi[start] = Complex64::new(1.0, 0.0);
    let mut states = Vec::new();
    for seg in segs {
        let r = propagate_resolved(&manifold.system, std::slice::from_ref(seg), &psi, Frame::Rwa, None)?;
        psi = r.state.expect("closed system");
        states.push(psi.clone());
    }
    let pops = psi.iter().map(|z| z.norm_sqr()).collect();
    Ok((states, pops))
}

/// Run the ladder on the coupled pair and replay it on uncoupled molecules.
pub fn initialization_transfer(dimer: &DimerSystem, ladder: &InitLadder) -> Result<InitReport> {
    let (b, v) = (ladder.field_mt, ladder.voltage);
    let pair = Manifold::new(dimer, b, v)?;
    let mono = Manifold::new(&DimerSystem { mode: CouplingMode::Off, ..dimer.clone() }, b, v)?;
    let target = PairLevel::operating_ground(dimer);
    let mut segs = Vec::with_capacity(ladder.rungs.len());
    let mut shifts = Vec::with_capacity(ladder.rungs.len());
    for rung in &ladder.rungs {
        let (i, _) = pair.locate(&rung.from)?;
        let (j, _) = pair.locate(&rung.to)?;
        segs.push(resolve_drive(&pair.system, v, i, j, &rung.drive, rung.omega_mhz, None, 0.0, None, Frame::Rwa)?);
        let (mi, _) = mono.locate(&rung.from)?;
        let (mj, _) = mono.locate(&rung.to)?;
        shifts.push((pair.system.transition_ghz(v, i, j)?.abs() - mono.system.transition_ghz(v, mi, mj)?.abs()) * 1e3);
    }
    let (start, _) = pair.locate(&ladder.start)?;
    let (states, pops) = run(&pair, start, &segs)?;
    let mut rungs = Vec::with_capacity(segs.len());
    for ((rung, seg), psi) in ladder.rungs.iter().zip(&segs).zip(&states) {
        let (j, _) = pair.locate(&rung.to)?;
        let p = psi[j].norm_sqr();
        let carrier_ghz = match seg {
            Resolved::Drive { carrier_ghz, .. } => *carrier_ghz,
            Resolved::Hold { .. } => unreachable!(),
        };
        rungs.push(RungReport {
            from: rung.from.to_string(),
            to: rung.to.to_string(),
            carrier_ghz,
            population_after: p,
            ok: p > RUNG_OK,
        });
    }
    let (k00, _) = pair.locate(&target)?;
    let (m_start, _) = mono.locate(&ladder.start)?;
    let (_, mono_pops) = run(&mono, m_start, &segs)?;
    let (m00, _) = mono.locate(&target)?;
    Ok(InitReport {
        rungs,
        operating_population: pops[k00],
        monomer_population: mono_pops[m00],
        pair_shift_mhz: shifts,
    })
}

/// Two nuclear rungs from a(-3/2) b(+3/2) into the operating sector.
pub fn example_ladder(dimer: &DimerSystem, b_mt: f64, voltage: f64, omega_mhz: f64) -> InitLadder {
    let (ma, mb) = dimer.operating_sector();
    let (sa, sb) = (ma + ma.signum(), mb + mb.signum());
    let l = |a: f64, b: f64| PairLevel::new(a, false, b, false);
    InitLadder {
        start: l(sa, sb),
        rungs: vec![
            Rung { from: l(sa, sb), to: l(ma, sb), drive: NUCLEAR_A_DRIVE.into(), omega_mhz },
            Rung { from: l(ma, sb), to: l(ma, mb), drive: NUCLEAR_B_DRIVE.into(), omega_mhz },
        ],
        field_mt: b_mt,
        voltage,
    }
}
