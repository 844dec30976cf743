// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Few-level systems that pulse sequences act on.

use crate::dimer::operating::{operating_space, OperatingSpace};
use crate::dimer::system::{compose, DimerSystem};
use crate::error::{Error, Result};
use crate::linalg::{kron, real, CMatrix};
use crate::spin::hamiltonian::jz_operator;

/// Voltages closer than this are treated as equal.
const VOLTAGE_TOL: f64 = 1e-9;

/// Hamiltonians (GHz) for a set of electrode voltages and named drive
/// operators, all in one fixed basis.
#[derive(Debug, Clone)]
pub struct DrivenSystem {
    pub labels: Vec<String>,
    pub hamiltonians: Vec<(f64, CMatrix)>,
    pub drives: Vec<(String, CMatrix)>,
    /// Number of qubits when the levels form a qubit register (for damping).
    pub qubits: usize,
}

pub const ELECTRONIC_DRIVE: &str = "electronic";

impl DrivenSystem {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn hamiltonian(&self, voltage: f64) -> Result<&CMatrix> {
        self.hamiltonians
            .iter()
            .find(|(v, _)| (v - voltage).abs() <= VOLTAGE_TOL * v.abs().max(1.0))
            .map(|(_, h)| h)
            .ok_or_else(|| {
                let known: Vec<String> = self.hamiltonians.iter().map(|(v, _)| format!("{v}")).collect();
                Error::InvalidSequence(format!("no Hamiltonian for {voltage} V (known: {})", known.join(", ")))
            })
    }

    pub fn drive(&self, name: &str) -> Result<&CMatrix> {
        self.drives
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d)
            .ok_or_else(|| Error::InvalidSequence(format!("unknown drive '{name}'")))
    }

    pub fn level(&self, label: &str) -> Result<usize> {
        let clean = label.trim().trim_start_matches('|').trim_end_matches('>');
        self.labels
            .iter()
            .position(|l| l == clean)
            .ok_or_else(|| Error::InvalidSequence(format!("unknown level '{label}'")))
    }

    /// Diagonal-energy transition frequency to - from (GHz) at `voltage`.
    pub fn transition_ghz(&self, voltage: f64, from: usize, to: usize) -> Result<f64> {
        let h = self.hamiltonian(voltage)?;
        if from >= self.dim() || to >= self.dim() {
            return Err(Error::LevelOutOfRange { index: from.max(to), dim: self.dim() });
        }
        Ok(h[(to, to)].re - h[(from, from)].re)
    }
}

fn project(op: &OperatingSpace, m: &CMatrix) -> CMatrix {
    let p = op.project(m);
    (&p + p.adjoint()) * real(0.5)
}

/// Four-level operating space of `dimer` at `b_mt`, in the basis of the
/// operating states identified with the electrode at `v_on`. Hamiltonians are
/// provided for 0 V and `v_on`; the drive is the projected Jz_a + Jz_b.
pub fn operating_system(dimer: &DimerSystem, b_mt: f64, v_on: f64) -> Result<(DrivenSystem, OperatingSpace)> {
    let op = operating_space(dimer, b_mt, v_on)?;
    let mut hams = Vec::new();
    for v in [v_on, 0.0] {
        let h = compose(dimer, b_mt, v)?;
        hams.push((v, project(&op, &h.matrix)));
    }
    let (na, nb) = (dimer.site_a.dim(), dimer.site_b.dim());
    let jz = kron(&jz_operator(&dimer.site_a), &CMatrix::identity(nb, nb))
        + kron(&CMatrix::identity(na, na), &jz_operator(&dimer.site_b));
    Ok((
        DrivenSystem {
            labels: ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect(),
            hamiltonians: hams,
            drives: vec![(ELECTRONIC_DRIVE.to_string(), project(&op, &jz))],
            qubits: 2,
        },
        op,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    A,
    B,
}

/// Isolated two-level molecule (operating sector of one site), levels "0"
/// and "1", with Hamiltonians at 0 V and `v_on` (site a ignores the voltage).
pub fn monomer_system(dimer: &DimerSystem, site: Site, b_mt: f64, v_on: f64) -> Result<DrivenSystem> {
    let mut hams = Vec::new();
    let mut drive = None;
    for v in [v_on, 0.0] {
        let (sa, sb) = dimer.site_spectra(b_mt, v)?;
        let (params, spec) = match site {
            Site::A => (&dimer.site_a, sa),
            Site::B => (&dimer.site_b, sb),
        };
        let (ma, mb) = dimer.operating_sector();
        let m = if site == Site::A { ma } else { mb };
        let p = crate::dimer::system::sector_projector(params, m)?;
        let levels: Vec<usize> = (0..spec.dim()).filter(|&k| spec.expectation(k, &p).unwrap_or(0.0) > 0.5).collect();
        let (g, e) = (levels[0], levels[1]);
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 0)] = real(spec.energies[g]);
        h[(1, 1)] = real(spec.energies[e]);
        if drive.is_none() {
            let jz = spec.to_eigenbasis(&jz_operator(params));
            drive = Some(CMatrix::from_fn(2, 2, |i, j| jz[([g, e][i], [g, e][j])]));
        }
        hams.push((v, h));
    }
    Ok(DrivenSystem {
        labels: vec!["0".into(), "1".into()],
        hamiltonians: hams,
        drives: vec![(ELECTRONIC_DRIVE.to_string(), drive.expect("two voltages"))],
        qubits: 1,
    })
}
