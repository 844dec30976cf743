// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Declarative pulse sequences and their resolution against a system.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::MHZ_PER_GHZ;

use super::system::{DrivenSystem, ELECTRONIC_DRIVE};

/// Default Rabi frequency, MHz: a pi-pulse lasts 800 ns.
pub const DEFAULT_OMEGA_MHZ: f64 = 0.625;
/// Carriers further than this many Rabi frequencies from the target
/// transition are rejected in the rotating frame.
pub const RESONANCE_TOLERANCE_RABI: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Rotating-wave approximation, one rotating frame per drive segment.
    #[default]
    Rwa,
    /// Explicit cosine drive.
    Lab,
}

fn default_omega() -> f64 {
    DEFAULT_OMEGA_MHZ
}
fn default_drive() -> String {
    ELECTRONIC_DRIVE.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Segment {
    /// Drive resonant with `from -> to`; Rabi frequency `omega_mhz` on that transition.
    Microwave {
        from: String,
        to: String,
        #[serde(default = "default_omega")]
        omega_mhz: f64,
        /// Defaults to the target transition frequency at the current voltage.
        #[serde(default)]
        carrier_ghz: Option<f64>,
        #[serde(default)]
        phase_rad: f64,
        /// Defaults to a pi-pulse, 1 / (2 omega).
        #[serde(default)]
        duration_ns: Option<f64>,
        #[serde(default = "default_drive")]
        drive: String,
    },
    /// Switch the electrode to `voltage_v` (linearly over `ramp_ns`) and hold.
    Efield {
        voltage_v: f64,
        duration_ns: f64,
        #[serde(default)]
        ramp_ns: f64,
    },
    Free {
        duration_ns: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub segments: Vec<Segment>,
    #[serde(default = "default_initial")]
    pub initial: String,
    #[serde(default)]
    pub frame: Frame,
    /// Electrode voltage before the first segment.
    pub initial_voltage: f64,
}

fn default_initial() -> String {
    "00".to_string()
}

/// A segment with every default filled in and the drive amplitude expressed
/// in the units of the drive operator, so it can be replayed on another system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Resolved {
    Drive {
        carrier_ghz: f64,
        /// GHz per unit of the drive operator.
        amplitude: f64,
        phase_rad: f64,
        duration_ns: f64,
        drive: String,
        voltage: f64,
    },
    Hold {
        voltage: f64,
        from_voltage: f64,
        duration_ns: f64,
        ramp_ns: f64,
    },
}

impl Resolved {
    pub fn duration_ns(&self) -> f64 {
        match self {
            Resolved::Drive { duration_ns, .. } | Resolved::Hold { duration_ns, .. } => *duration_ns,
        }
    }
}

fn positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSequence(format!("{what} must be positive, got {x}")))
    }
}

/// Resolve a microwave drive between two levels of `system`.
#[allow(clippy::too_many_arguments)]
pub fn resolve_drive(
    system: &DrivenSystem,
    voltage: f64,
    from: usize,
    to: usize,
    drive: &str,
    omega_mhz: f64,
    carrier_ghz: Option<f64>,
    phase_rad: f64,
    duration_ns: Option<f64>,
    frame: Frame,
) -> Result<Resolved> {
    positive(omega_mhz, "Rabi frequency")?;
    let op = system.drive(drive)?;
    let element = op[(from, to)].norm();
    if element < 1e-12 {
        return Err(Error::InvalidSequence(format!(
            "drive '{drive}' does not couple {} and {}",
            system.labels[from], system.labels[to]
        )));
    }
    let f_target = system.transition_ghz(voltage, from, to)?.abs();
    let carrier = carrier_ghz.unwrap_or(f_target);
    positive(carrier, "carrier frequency")?;
    let omega = omega_mhz / MHZ_PER_GHZ;
    if frame == Frame::Rwa && (carrier - f_target).abs() > RESONANCE_TOLERANCE_RABI * omega {
        return Err(Error::OffResonant {
            carrier_ghz: carrier,
            transition_ghz: f_target,
            tolerance_mhz: RESONANCE_TOLERANCE_RABI * omega_mhz,
        });
    }
    let duration = duration_ns.unwrap_or(0.5 / omega);
    positive(duration, "pulse duration")?;
    Ok(Resolved::Drive {
        carrier_ghz: carrier,
        amplitude: omega / element,
        phase_rad,
        duration_ns: duration,
        drive: drive.to_string(),
        voltage,
    })
}

/// Fill defaults and check every segment of `seq` against `system`.
pub fn resolve(seq: &PulseSequence, system: &DrivenSystem) -> Result<Vec<Resolved>> {
    if seq.segments.is_empty() {
        return Err(Error::InvalidSequence("sequence has no segments".into()));
    }
    system.level(&seq.initial)?;
    let mut voltage = seq.initial_voltage;
    system.hamiltonian(voltage)?;
    let mut out = Vec::with_capacity(seq.segments.len());
    for s in &seq.segments {
        match s {
            Segment::Microwave { from, to, omega_mhz, carrier_ghz, phase_rad, duration_ns, drive } => {
                let (i, j) = (system.level(from)?, system.level(to)?);
                out.push(resolve_drive(
                    system,
                    voltage,
                    i,
                    j,
                    drive,
                    *omega_mhz,
                    *carrier_ghz,
                    *phase_rad,
                    *duration_ns,
                    seq.frame,
                )?);
            }
            Segment::Efield { voltage_v, duration_ns, ramp_ns } => {
                system.hamiltonian(*voltage_v)?;
                if !(*duration_ns >= 0.0 && *ramp_ns >= 0.0 && ramp_ns <= duration_ns) {
                    return Err(Error::InvalidSequence("need 0 <= ramp_ns <= duration_ns".into()));
                }
                out.push(Resolved::Hold {
                    voltage: *voltage_v,
                    from_voltage: voltage,
                    duration_ns: *duration_ns,
                    ramp_ns: *ramp_ns,
                });
                voltage = *voltage_v;
            }
            Segment::Free { duration_ns } => {
                if !(*duration_ns >= 0.0 && duration_ns.is_finite()) {
                    return Err(Error::InvalidSequence("free evolution needs a non-negative duration".into()));
                }
                out.push(Resolved::Hold { voltage, from_voltage: voltage, duration_ns: *duration_ns, ramp_ns: 0.0 });
            }
        }
    }
    Ok(out)
}
