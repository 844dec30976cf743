// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! SWAP oscillations, Rabi calibration, Bell-state preparation and the
//! monomer cancellation check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, unitary_propagator};
use crate::units::MHZ_PER_GHZ;

use super::metrics::{concurrence, fit_sinusoid, BellFamily};
use super::propagate::{basis_state, propagate_resolved, propagate_sequence, Damping, GateResult};
use super::sequence::{resolve, resolve_drive, Frame, PulseSequence, Resolved, Segment, DEFAULT_OMEGA_MHZ};
use super::system::{DrivenSystem, ELECTRONIC_DRIVE};

/// Splittings below this (GHz) cannot drive a visible exchange oscillation.
const MIN_SPLITTING_GHZ: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OscillationRecord {
    pub times_ns: Vec<f64>,
    pub population: Vec<f64>,
    pub frequency_mhz: f64,
    pub amplitude: f64,
    /// Splitting of the two middle eigenvalues of the Hamiltonian.
    pub splitting_mhz: f64,
    pub period_ns: f64,
    /// Complete |10> -> |01> transfer, 1 / (2 splitting).
    pub full_swap_ns: f64,
    /// Half rotation (sqrt SWAP), 1 / (4 splitting).
    pub half_rotation_ns: f64,
}

/// Middle-pair splitting (GHz) of a four-level Hamiltonian.
pub fn middle_splitting(system: &DrivenSystem, voltage: f64) -> Result<f64> {
    let (e, _) = eigh(system.hamiltonian(voltage)?)?;
    if e.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: e.len() });
    }
    Ok(e[2] - e[1])
}

/// Free evolution at `voltage` from `start`; records the population of `target`.
pub fn swap_oscillation(
    system: &DrivenSystem,
    voltage: f64,
    start: &str,
    target: &str,
    times_ns: &[f64],
) -> Result<OscillationRecord> {
    let h = system.hamiltonian(voltage)?;
    let psi0 = basis_state(system, start)?;
    let k = system.level(target)?;
    let mut pop = Vec::with_capacity(times_ns.len());
    for &t in times_ns {
        let psi = unitary_propagator(h, t)? * &psi0;
        pop.push(psi[k].norm_sqr());
    }
    let splitting = middle_splitting(system, voltage)?;
    if splitting.abs() < MIN_SPLITTING_GHZ {
        return Err(Error::NoOscillation(format!("middle splitting {splitting:e} GHz below resolution")));
    }
    let span = times_ns.last().copied().unwrap_or(0.0) - times_ns.first().copied().unwrap_or(0.0);
    let nyquist = 0.5 * (times_ns.len() as f64 - 1.0) / span.max(f64::MIN_POSITIVE);
    let fit = fit_sinusoid(times_ns, &pop, nyquist)?;
    Ok(OscillationRecord {
        times_ns: times_ns.to_vec(),
        population: pop,
        frequency_mhz: fit.frequency * MHZ_PER_GHZ,
        amplitude: fit.amplitude,
        splitting_mhz: splitting * MHZ_PER_GHZ,
        period_ns: 1.0 / fit.frequency,
        full_swap_ns: 0.5 / splitting,
        half_rotation_ns: 0.25 / splitting,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RabiScan {
    pub durations_ns: Vec<f64>,
    pub population: Vec<f64>,
    pub frequency_mhz: f64,
    pub pi_time_ns: f64,
}

/// Drive `from` -> `to` for each duration and fit the Rabi frequency.
pub fn rabi_pi_time(
    system: &DrivenSystem,
    voltage: f64,
    from: &str,
    to: &str,
    omega_mhz: f64,
    durations_ns: &[f64],
) -> Result<RabiScan> {
    let (i, j) = (system.level(from)?, system.level(to)?);
    let psi0 = basis_state(system, from)?;
    let mut pop = Vec::with_capacity(durations_ns.len());
    for &t in durations_ns {
        if t == 0.0 {
            pop.push(0.0);
            continue;
        }
        let seg = resolve_drive(system, voltage, i, j, ELECTRONIC_DRIVE, omega_mhz, None, 0.0, Some(t), Frame::Rwa)?;
        let r = propagate_resolved(system, &[seg], &psi0, Frame::Rwa, None)?;
        pop.push(r.rho[(j, j)].re);
    }
    let span = durations_ns.last().copied().unwrap_or(0.0) - durations_ns.first().copied().unwrap_or(0.0);
    let nyquist = 0.5 * (durations_ns.len() as f64 - 1.0) / span.max(f64::MIN_POSITIVE);
    let fit = fit_sinusoid(durations_ns, &pop, nyquist)?;
    Ok(RabiScan {
        durations_ns: durations_ns.to_vec(),
        population: pop,
        frequency_mhz: fit.frequency * MHZ_PER_GHZ,
        pi_time_ns: 0.5 / fit.frequency,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellOptions {
    pub family: BellFamily,
    pub omega_mhz: f64,
    /// E-off wait; defaults to a quarter exchange period 1 / (4 splitting).
    pub wait_ns: Option<f64>,
    pub frame: Frame,
}

impl Default for BellOptions {
    fn default() -> Self {
        Self { family: BellFamily::Phi, omega_mhz: DEFAULT_OMEGA_MHZ, wait_ns: None, frame: Frame::Rwa }
    }
}

/// Prepare |00>, flip a with the field on, switch it off for the exchange
/// wait, switch it back on and (for Phi) flip a again.
pub fn bell_sequence(system: &DrivenSystem, v_on: f64, opts: &BellOptions) -> Result<PulseSequence> {
    let wait = match opts.wait_ns {
        Some(w) => w,
        None => 0.25 / middle_splitting(system, 0.0)?,
    };
    let pi = |from: &str, to: &str| Segment::Microwave {
        from: from.into(),
        to: to.into(),
        omega_mhz: opts.omega_mhz,
        carrier_ghz: None,
        phase_rad: 0.0,
        duration_ns: None,
        drive: ELECTRONIC_DRIVE.into(),
    };
    let mut segments = vec![
        pi("00", "10"),
        Segment::Efield { voltage_v: 0.0, duration_ns: wait, ramp_ns: 0.0 },
        Segment::Efield { voltage_v: v_on, duration_ns: 0.0, ramp_ns: 0.0 },
    ];
    if opts.family == BellFamily::Phi {
        segments.push(pi("10", "00"));
    }
    Ok(PulseSequence { segments, initial: "00".into(), frame: opts.frame, initial_voltage: v_on })
}

#[derive(Debug, Clone)]
pub struct BellReport {
    pub family: BellFamily,
    pub wait_ns: f64,
    pub sequence: PulseSequence,
    pub resolved: Vec<Resolved>,
    pub gate: GateResult,
    pub fidelity: f64,
    /// Relative phase of the closest Bell state.
    pub theta: f64,
    pub concurrence: f64,
    /// E-on gaps |10>-|00> and |11>-|01> (MHz offsets from the carrier are what matter).
    pub gap_a_ghz: [f64; 2],
}

pub fn bell_protocol(
    system: &DrivenSystem,
    v_on: f64,
    opts: &BellOptions,
    damping: Option<&Damping>,
) -> Result<BellReport> {
    let sequence = bell_sequence(system, v_on, opts)?;
    let resolved = resolve(&sequence, system)?;
    let gate = propagate_sequence(&sequence, system, damping)?;
    let (fidelity, theta) = opts.family.best_fidelity(&gate.rho);
    let c = concurrence(&gate.rho)?;
    let wait_ns = resolved[1].duration_ns();
    Ok(BellReport {
        family: opts.family,
        wait_ns,
        sequence,
        resolved,
        fidelity,
        theta,
        concurrence: c,
        gap_a_ghz: [system.transition_ghz(v_on, 0, 2)?, system.transition_ghz(v_on, 1, 3)?],
        gate,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomerReport {
    /// |<0|U|0>|^2 of the replayed sequence.
    pub ground_fidelity: f64,
    /// Net nutation angle 2 acos |<0|U|0>| (rad, 0..pi); 0 means a multiple of 2 pi.
    pub rotation_angle_rad: f64,
    pub compliant: bool,
}

/// Fidelity threshold for a sequence to count as leaving monomers untouched.
pub const MONOMER_COMPLIANCE: f64 = 0.99;

/// Replay resolved segments (carriers and amplitudes fixed) on an isolated molecule.
pub fn monomer_cancellation_check(resolved: &[Resolved], monomer: &DrivenSystem) -> Result<MonomerReport> {
    if monomer.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: monomer.dim() });
    }
    let psi0 = basis_state(monomer, "0")?;
    let r = propagate_resolved(monomer, resolved, &psi0, Frame::Rwa, None)?;
    let u = r.unitary.expect("closed system");
    let ground_fidelity = u[(0, 0)].norm_sqr();
    let rotation_angle_rad = 2.0 * u[(0, 0)].norm().min(1.0).acos();
    Ok(MonomerReport { ground_fidelity, rotation_angle_rad, compliant: ground_fidelity > MONOMER_COMPLIANCE })
}
