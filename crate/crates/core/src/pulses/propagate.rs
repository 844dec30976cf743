// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Piecewise propagation of resolved sequences.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, kron, real, unitary_propagator, CMatrix, I, ONE, ZERO};

use super::sequence::{resolve, Frame, PulseSequence, Resolved};
use super::system::DrivenSystem;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
/// Linear E-field ramps are split into this many constant steps.
const RAMP_STEPS: usize = 200;
/// Lab-frame integration steps per period of the fastest frequency.
const LAB_STEPS_PER_PERIOD: f64 = 20.0;

/// Per-qubit relaxation times applied as Lindblad damping (rotating frame only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Damping {
    pub t1_us: f64,
    pub t2_us: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentLog {
    pub index: usize,
    pub kind: String,
    pub start_ns: f64,
    pub duration_ns: f64,
    pub voltage: f64,
    pub carrier_ghz: Option<f64>,
    pub populations: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct GateResult {
    pub labels: Vec<String>,
    pub rho: CMatrix,
    /// Final state when no damping is applied.
    pub state: Option<DVector<Complex64>>,
    /// Realised unitary (lab frame) when no damping is applied.
    pub unitary: Option<CMatrix>,
    pub log: Vec<SegmentLog>,
    pub total_ns: f64,
}

impl GateResult {
    pub fn populations(&self) -> Vec<f64> {
        (0..self.rho.nrows()).map(|k| self.rho[(k, k)].re).collect()
    }
}

/// Photon numbers n_k = round((H_kk - H_00) / f) of the rotating frame.
fn photon_numbers(h: &CMatrix, carrier: f64) -> Vec<i64> {
    let e0 = h[(0, 0)].re;
    (0..h.nrows()).map(|k| ((h[(k, k)].re - e0) / carrier).round() as i64).collect()
}

/// Rotating-frame Hamiltonian: H_kl kept when n_k = n_l, drive kept when
/// n_k - n_l = +-1, shifted by -n_k f on the diagonal.
pub fn rwa_hamiltonian(h: &CMatrix, v: &CMatrix, carrier: f64, amplitude: f64, phase: f64) -> (CMatrix, Vec<i64>) {
    let n = photon_numbers(h, carrier);
    let d = h.nrows();
    let rot = CMatrix::from_fn(d, d, |k, l| {
        let mut x = ZERO;
        if n[k] == n[l] {
            x += h[(k, l)];
        }
        if k == l {
            x -= real(n[k] as f64 * carrier);
        }
        if n[k] - n[l] == 1 {
            x += v[(k, l)] * Complex64::from_polar(0.5 * amplitude, -phase);
        } else if n[l] - n[k] == 1 {
            x += v[(k, l)] * Complex64::from_polar(0.5 * amplitude, phase);
        }
        x
    });
    (rot, n)
}

fn frame_rotation(n: &[i64], carrier: f64, t: f64) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(
        n.len(),
        n.iter().map(|&k| Complex64::from_polar(1.0, TWO_PI * k as f64 * carrier * t)),
    ))
}

/// Lindblad superoperator (row-major vec) for Hamiltonian `h` and jump operators.
fn lindbladian(h: &CMatrix, jumps: &[CMatrix]) -> CMatrix {
    let d = h.nrows();
    let id = CMatrix::identity(d, d);
    let mut l = (kron(h, &id) - kron(&id, &h.transpose())) * Complex64::new(0.0, -TWO_PI);
    for c in jumps {
        let cdc = c.adjoint() * c;
        l += kron(c, &c.map(|z| z.conj())) - (kron(&cdc, &id) + kron(&id, &cdc.transpose())) * real(0.5);
    }
    l
}

/// Jump operators (rates in 1/ns) for per-qubit T1 / pure dephasing on a
/// register of `qubits` qubits, levels ordered as binary labels.
fn damping_operators(qubits: usize, damping: &Damping) -> Result<Vec<CMatrix>> {
    if !(damping.t1_us > 0.0 && damping.t2_us > 0.0 && damping.t2_us <= 2.0 * damping.t1_us * (1.0 + 1e-12)) {
        return Err(Error::InvalidSequence("damping needs 0 < T2 <= 2 T1".into()));
    }
    let g1 = 1.0 / (damping.t1_us * 1e3);
    let gphi = (1.0 / (damping.t2_us * 1e3) - 0.5 * g1).max(0.0);
    let d = 1usize << qubits;
    let mut ops = Vec::new();
    for q in 0..qubits {
        let bit = 1usize << (qubits - 1 - q);
        let mut lower = CMatrix::zeros(d, d);
        let mut z = CMatrix::zeros(d, d);
        for k in 0..d {
            if k & bit != 0 {
                lower[(k & !bit, k)] = real(g1.sqrt());
                z[(k, k)] = real(-1.0);
            } else {
                z[(k, k)] = ONE;
            }
        }
        ops.push(lower);
        if gphi > 0.0 {
            ops.push(z * real((gphi / 2.0).sqrt()));
        }
    }
    Ok(ops)
}

enum Evolver {
    Closed(CMatrix),
    Open(CMatrix),
}

impl Evolver {
    fn apply(&mut self, u: &CMatrix) {
        match self {
            Evolver::Closed(m) => *m = u * &*m,
            Evolver::Open(rho) => *rho = u * &*rho * u.adjoint(),
        }
    }
}

fn vec_rho(rho: &CMatrix) -> DVector<Complex64> {
    let d = rho.nrows();
    DVector::from_iterator(d * d, (0..d * d).map(|k| rho[(k / d, k % d)]))
}

fn unvec_rho(v: &DVector<Complex64>, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |a, b| v[a * d + b])
}

/// Evolve under a constant Hamiltonian (lab frame) for `dt`.
fn hold(ev: &mut Evolver, h: &CMatrix, dt: f64, jumps: &[CMatrix]) -> Result<()> {
    if dt == 0.0 {
        return Ok(());
    }
    match ev {
        Evolver::Closed(_) => ev.apply(&unitary_propagator(h, dt)?),
        Evolver::Open(rho) => {
            let l = lindbladian(h, jumps) * Complex64::new(dt, 0.0);
            *rho = unvec_rho(&(l.exp() * vec_rho(rho)), rho.nrows());
        }
    }
    Ok(())
}

/// Explicit RK4 integration of the cosine drive in the interaction picture of H.
fn lab_drive(
    u: &mut CMatrix,
    h: &CMatrix,
    v: &CMatrix,
    carrier: f64,
    amp: f64,
    phase: f64,
    t0: f64,
    dur: f64,
) -> Result<()> {
    let (eps, w) = eigh(h)?;
    let d = eps.len();
    let vi = w.adjoint() * v * &w;
    let spread =
        eps.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - eps.iter().cloned().fold(f64::INFINITY, f64::min);
    let f_max = carrier + spread;
    let steps = (dur * f_max * LAB_STEPS_PER_PERIOD).ceil().max(1.0) as usize;
    let dt = dur / steps as f64;
    // interaction-picture state at absolute time t0
    let phase_at = |t: f64, sign: f64| {
        CMatrix::from_diagonal(&DVector::from_iterator(
            d,
            eps.iter().map(|&e| Complex64::from_polar(1.0, sign * TWO_PI * e * t)),
        ))
    };
    let mut psi = phase_at(t0, 1.0) * w.adjoint() * &*u;
    let rhs = |t: f64, y: &CMatrix| -> CMatrix {
        let c = amp * (TWO_PI * carrier * t + phase).cos();
        let m = CMatrix::from_fn(d, d, |k, l| vi[(k, l)] * Complex64::from_polar(c, TWO_PI * (eps[k] - eps[l]) * t));
        (m * y) * (-I * TWO_PI)
    };
    for s in 0..steps {
        let t = t0 + s as f64 * dt;
        let k1 = rhs(t, &psi);
        let k2 = rhs(t + dt / 2.0, &(&psi + &k1 * real(dt / 2.0)));
        let k3 = rhs(t + dt / 2.0, &(&psi + &k2 * real(dt / 2.0)));
        let k4 = rhs(t + dt, &(&psi + &k3 * real(dt)));
        psi += (k1 + k2 * real(2.0) + k3 * real(2.0) + k4) * real(dt / 6.0);
    }
    *u = &w * phase_at(t0 + dur, -1.0) * psi;
    Ok(())
}

fn populations_of(ev: &Evolver, psi0: &DVector<Complex64>) -> Vec<f64> {
    match ev {
        Evolver::Closed(u) => (u * psi0).iter().map(|z| z.norm_sqr()).collect(),
        Evolver::Open(rho) => (0..rho.nrows()).map(|k| rho[(k, k)].re).collect(),
    }
}

/// Propagate resolved segments from `psi0`. `damping` requires the rotating frame.
pub fn propagate_resolved(
    system: &DrivenSystem,
    segments: &[Resolved],
    psi0: &DVector<Complex64>,
    frame: Frame,
    damping: Option<&Damping>,
) -> Result<GateResult> {
    let d = system.dim();
    if psi0.len() != d || (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState("initial state must be a normalised vector of the system".into()));
    }
    let jumps = match damping {
        Some(dm) => {
            if frame == Frame::Lab {
                return Err(Error::InvalidSequence("damping is only available in the rotating frame".into()));
            }
            if system.qubits == 0 || 1usize << system.qubits != d {
                return Err(Error::InvalidSequence("damping needs a qubit register".into()));
            }
            damping_operators(system.qubits, dm)?
        }
        None => vec![],
    };
    let mut ev =
        if damping.is_some() { Evolver::Open(psi0 * psi0.adjoint()) } else { Evolver::Closed(CMatrix::identity(d, d)) };
    let mut t = 0.0;
    let mut log = Vec::with_capacity(segments.len());
    for (index, seg) in segments.iter().enumerate() {
        let (kind, voltage, carrier) = match seg {
            Resolved::Drive { carrier_ghz, amplitude, phase_rad, duration_ns, drive, voltage } => {
                let h = system.hamiltonian(*voltage)?;
                let v = system.drive(drive)?;
                match (&mut ev, frame) {
                    (Evolver::Closed(u), Frame::Lab) => {
                        lab_drive(u, h, v, *carrier_ghz, *amplitude, *phase_rad, t, *duration_ns)?
                    }
                    _ => {
                        let (h_rot, n) = rwa_hamiltonian(h, v, *carrier_ghz, *amplitude, *phase_rad);
                        ev.apply(&frame_rotation(&n, *carrier_ghz, t));
                        hold(&mut ev, &h_rot, *duration_ns, &jumps)?;
                        ev.apply(&frame_rotation(&n, *carrier_ghz, t + duration_ns).adjoint());
                    }
                }
                ("microwave", *voltage, Some(*carrier_ghz))
            }
            Resolved::Hold { voltage, from_voltage, duration_ns, ramp_ns } => {
                let h1 = system.hamiltonian(*voltage)?;
                if *ramp_ns > 0.0 {
                    let h0 = system.hamiltonian(*from_voltage)?;
                    let dt = ramp_ns / RAMP_STEPS as f64;
                    for s in 0..RAMP_STEPS {
                        let x = (s as f64 + 0.5) / RAMP_STEPS as f64;
                        hold(&mut ev, &(h0 * real(1.0 - x) + h1 * real(x)), dt, &jumps)?;
                    }
                }
                hold(&mut ev, h1, duration_ns - ramp_ns, &jumps)?;
                (if from_voltage != voltage { "efield" } else { "free" }, *voltage, None)
            }
        };
        log.push(SegmentLog {
            index,
            kind: kind.into(),
            start_ns: t,
            duration_ns: seg.duration_ns(),
            voltage,
            carrier_ghz: carrier,
            populations: populations_of(&ev, psi0),
        });
        t += seg.duration_ns();
    }
    let (rho, state, unitary) = match ev {
        Evolver::Closed(u) => {
            let psi = &u * psi0;
            (psi.clone() * psi.adjoint(), Some(psi), Some(u))
        }
        Evolver::Open(rho) => (rho, None, None),
    };
    Ok(GateResult { labels: system.labels.clone(), rho, state, unitary, log, total_ns: t })
}

pub fn basis_state(system: &DrivenSystem, label: &str) -> Result<DVector<Complex64>> {
    let mut v = DVector::from_element(system.dim(), ZERO);
    v[system.level(label)?] = ONE;
    Ok(v)
}

/// Resolve and propagate a declarative sequence.
pub fn propagate_sequence(seq: &PulseSequence, system: &DrivenSystem, damping: Option<&Damping>) -> Result<GateResult> {
    let segs = resolve(seq, system)?;
    propagate_resolved(system, &segs, &basis_state(system, &seq.initial)?, seq.frame, damping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::DimerSystem;
    use crate::pulses::sequence::Segment;
    use crate::pulses::system::operating_system;
    use crate::spin::Preset;

    fn system() -> DrivenSystem {
        operating_system(&DimerSystem::preset(Preset::Experimental9p1GHz), 12.0, 300.0).unwrap().0
    }

    fn pi_pulse(frame: Frame) -> PulseSequence {
        PulseSequence {
            segments: vec![Segment::Microwave {
                from: "00".into(),
                to: "10".into(),
                omega_mhz: 0.625,
                carrier_ghz: None,
                phase_rad: 0.0,
                duration_ns: None,
                drive: ELECTRONIC_DRIVE.into(),
            }],
            initial: "00".into(),
            frame,
            initial_voltage: 300.0,
        }
    }

    use crate::pulses::system::ELECTRONIC_DRIVE;

    #[test]
    fn pi_pulse_transfers_population() {
        let sys = system();
        let r = propagate_sequence(&pi_pulse(Frame::Rwa), &sys, None).unwrap();
        assert!((r.total_ns - 800.0).abs() < 1e-9);
        let p = r.populations();
        assert!(p[2] > 0.999, "{p:?}");
        let u = r.unitary.unwrap();
        assert!((u.adjoint() * &u - CMatrix::identity(4, 4)).norm() < 1e-8);
    }

    #[test]
    fn lab_frame_agrees_with_rwa() {
        let sys = system();
        let rwa = propagate_sequence(&pi_pulse(Frame::Rwa), &sys, None).unwrap().populations();
        let lab = propagate_sequence(&pi_pulse(Frame::Lab), &sys, None).unwrap().populations();
        for (a, b) in rwa.iter().zip(&lab) {
            assert!((a - b).abs() < 1e-3, "{rwa:?} {lab:?}");
        }
    }

    #[test]
    fn free_evolution_splits_and_keeps_eigenstates() {
        let sys = system();
        let free = |d: Vec<f64>| PulseSequence {
            segments: d.into_iter().map(|duration_ns| Segment::Free { duration_ns }).collect(),
            initial: "10".into(),
            frame: Frame::Rwa,
            initial_voltage: 0.0,
        };
        let one = propagate_sequence(&free(vec![700.0]), &sys, None).unwrap().state.unwrap();
        let two = propagate_sequence(&free(vec![300.0, 400.0]), &sys, None).unwrap().state.unwrap();
        assert!((one - two).norm() < 1e-12);
        let mut on = free(vec![1234.0]);
        on.initial_voltage = 300.0;
        let r = propagate_sequence(&on, &sys, None).unwrap();
        assert!((r.populations()[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn damping_reduces_purity_and_needs_rwa() {
        let sys = system();
        let d = Damping { t1_us: 1.0, t2_us: 0.5 };
        let r = propagate_sequence(&pi_pulse(Frame::Rwa), &sys, Some(&d)).unwrap();
        let purity = (&r.rho * &r.rho).trace().re;
        assert!(purity < 0.99 && (r.rho.trace().re - 1.0).abs() < 1e-10);
        assert!(r.unitary.is_none());
        assert!(propagate_sequence(&pi_pulse(Frame::Lab), &sys, Some(&d)).is_err());
        assert!(propagate_sequence(&pi_pulse(Frame::Rwa), &sys, Some(&Damping { t1_us: 1.0, t2_us: 3.0 })).is_err());
    }

    #[test]
    fn off_resonant_carrier_is_rejected_in_rwa() {
        let sys = system();
        let mut seq = pi_pulse(Frame::Rwa);
        if let Segment::Microwave { carrier_ghz, .. } = &mut seq.segments[0] {
            let f = sys.transition_ghz(300.0, 0, 2).unwrap();
            *carrier_ghz = Some(f + 0.01);
        }
        assert!(matches!(propagate_sequence(&seq, &sys, None), Err(Error::OffResonant { .. })));
    }

    #[test]
    fn ramp_matches_sudden_switch_when_short() {
        let sys = system();
        let seq = |ramp_ns| PulseSequence {
            segments: vec![Segment::Efield { voltage_v: 0.0, duration_ns: 2000.0, ramp_ns }],
            initial: "10".into(),
            frame: Frame::Rwa,
            initial_voltage: 300.0,
        };
        let a = propagate_sequence(&seq(0.0), &sys, None).unwrap().populations();
        let b = propagate_sequence(&seq(1e-3), &sys, None).unwrap().populations();
        assert!((a[1] - b[1]).abs() < 1e-6 && a[1] > 0.3);
    }
}
