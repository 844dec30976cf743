// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Calibration of the pair separation and the spin-electric coefficient.

use crate::error::{Error, Result};
use crate::spin::params::TUNNELING_KEY;

use super::geometry::norm;
use super::operating::delta_f;
use super::system::DimerSystem;

/// Operating field of the two-qubit protocols, mT.
pub const OPERATING_FIELD_MT: f64 = 12.0;
/// Electrode voltage that switches the operating space to the asymmetric regime.
pub const OPERATING_VOLTAGE: f64 = 300.0;
/// Zero-voltage splitting of the middle operating levels at the operating field, MHz.
pub const TARGET_DELTA_F_MHZ: f64 = 0.1;

/// Scale |r| so that delta f(b_mt, V = 0) equals `target_mhz`.
pub fn calibrate_separation(dimer: &DimerSystem, b_mt: f64, target_mhz: f64) -> Result<DimerSystem> {
    if !(target_mhz > 0.0) {
        return Err(Error::InvalidCalibration("target splitting must be positive".into()));
    }
    let mut d = dimer.clone();
    for it in 0..60 {
        let f = delta_f(&d, b_mt, 0.0)?.delta_f_mhz;
        if !(f > 0.0) {
            return Err(Error::CalibrationFailed { iterations: it, best_residual: (f - target_mhz).abs() });
        }
        let ratio = f / target_mhz;
        if (ratio - 1.0).abs() < 1e-11 {
            return Ok(d);
        }
        let r = norm(d.geometry.r_angstrom) * ratio.cbrt();
        d.geometry = d.geometry.with_distance(r);
    }
    Err(Error::CalibrationFailed { iterations: 60, best_residual: f64::NAN })
}

fn with_sec(dimer: &DimerSystem, sec: f64) -> DimerSystem {
    let mut d = dimer.clone();
    for s in [&mut d.site_a, &mut d.site_b] {
        s.e_response.derivatives.set(TUNNELING_KEY.0, TUNNELING_KEY.1, sec);
    }
    d
}

/// Find the tunneling-gap derivative (GHz per V/m) for which the E-on splitting
/// delta f(b_mt, voltage) equals `target_mhz`. Both sites receive the value;
/// only site b sees the voltage.
pub fn calibrate_sec(dimer: &DimerSystem, b_mt: f64, voltage: f64, target_mhz: f64) -> Result<DimerSystem> {
    if voltage == 0.0 {
        return Err(Error::InvalidCalibration("voltage must be non-zero".into()));
    }
    let f = |sec: f64| -> Result<f64> { Ok(delta_f(&with_sec(dimer, sec), b_mt, voltage)?.delta_f_mhz - target_mhz) };
    let current = dimer.site_b.e_response.derivatives.get(TUNNELING_KEY.0, TUNNELING_KEY.1);
    let mut x0 = if current != 0.0 { current } else { -1e-8 };
    let mut x1 = x0 * 1.01;
    let (mut f0, mut f1) = (f(x0)?, f(x1)?);
    for it in 0..60 {
        if (f1 / target_mhz).abs() < 1e-11 {
            return Ok(with_sec(dimer, x1));
        }
        if f1 == f0 {
            return Err(Error::CalibrationFailed { iterations: it, best_residual: f1.abs() });
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1)?;
    }
    Err(Error::CalibrationFailed { iterations: 60, best_residual: f1.abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::Preset;

    #[test]
    fn preset_reproduces_calibration_targets() {
        for p in [Preset::Experimental9p1GHz, Preset::Calculated11GHz] {
            check_preset(DimerSystem::preset(p));
        }
    }

    fn check_preset(d: DimerSystem) {
        let f0 = delta_f(&d, OPERATING_FIELD_MT, 0.0).unwrap().delta_f_mhz;
        assert!((f0 / TARGET_DELTA_F_MHZ - 1.0).abs() < 1e-8, "{f0}");
        let target = (3.75f64.powi(2) - 0.625f64.powi(2)).sqrt();
        let f1 = delta_f(&d, OPERATING_FIELD_MT, OPERATING_VOLTAGE).unwrap().delta_f_mhz;
        assert!((f1 / target - 1.0).abs() < 1e-8, "{f1}");
    }

    #[test]
    fn separation_calibration_recovers_distance() {
        let mut d = DimerSystem::preset(Preset::Experimental9p1GHz);
        let r0 = norm(d.geometry.r_angstrom);
        d.geometry = d.geometry.with_distance(1.3 * r0);
        let c = calibrate_separation(&d, OPERATING_FIELD_MT, TARGET_DELTA_F_MHZ).unwrap();
        assert!((norm(c.geometry.r_angstrom) / r0 - 1.0).abs() < 1e-9);
        assert!(calibrate_separation(&d, OPERATING_FIELD_MT, -1.0).is_err());
    }

    #[test]
    fn sec_calibration_hits_target() {
        let d = DimerSystem::preset(Preset::Experimental9p1GHz);
        let c = calibrate_sec(&d, OPERATING_FIELD_MT, 200.0, 2.0).unwrap();
        let f = delta_f(&c, OPERATING_FIELD_MT, 200.0).unwrap().delta_f_mhz;
        assert!((f - 2.0).abs() < 1e-9);
        assert!(calibrate_sec(&d, OPERATING_FIELD_MT, 0.0, 2.0).is_err());
    }
}
