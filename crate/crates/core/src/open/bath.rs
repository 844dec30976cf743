// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Phonon spectral densities and the one-sided bath rate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{bose, K_B_GHZ_PER_K};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianPeak {
    pub center_ghz: f64,
    /// Half width at half maximum, GHz.
    pub width_ghz: f64,
    pub strength: f64,
}

/// Bath spectral density J(nu) for nu > 0, frequencies in GHz.
///
/// Rates are normalised so that |<a|V|b>|^2 * rate(nu) is a transition rate
/// in 1/ns when V is given in GHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum SpectralDensity {
    /// J = eta nu exp(-nu / cutoff).
    OhmicCutoff { eta: f64, cutoff_ghz: f64 },
    /// Sum over vibrational modes of
    /// s (nu/nu_k)^2 w^2 / ((nu - nu_k)^2 + w^2) n(nu_k, T).
    ///
    /// The (nu/nu_k)^2 factor removes the zero-frequency (pure dephasing)
    /// limit; the mode occupation n(nu_k, T) makes the rate follow the
    /// thermal population of the vibration.
    LorentzianPeaks { peaks: Vec<LorentzianPeak> },
}

impl SpectralDensity {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            SpectralDensity::OhmicCutoff { eta, cutoff_ghz } => *eta >= 0.0 && *cutoff_ghz > 0.0,
            SpectralDensity::LorentzianPeaks { peaks } => {
                peaks.iter().all(|p| p.center_ghz > 0.0 && p.width_ghz > 0.0 && p.strength >= 0.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("bad spectral density {self:?}")))
        }
    }

    /// J(nu) at nu >= 0.
    pub fn j(&self, nu: f64, temp: f64) -> f64 {
        match self {
            SpectralDensity::OhmicCutoff { eta, cutoff_ghz } => eta * nu * (-nu / cutoff_ghz).exp(),
            SpectralDensity::LorentzianPeaks { peaks } => peaks
                .iter()
                .map(|p| {
                    let x = nu / p.center_ghz;
                    let w2 = p.width_ghz * p.width_ghz;
                    p.strength * x * x * w2 / ((nu - p.center_ghz).powi(2) + w2) * bose(p.center_ghz, temp)
                })
                .sum(),
        }
    }

    /// lim_{nu -> 0} J(nu) n(nu, T).
    fn zero_frequency_rate(&self, temp: f64) -> f64 {
        match self {
            SpectralDensity::OhmicCutoff { eta, .. } => eta * K_B_GHZ_PER_K * temp,
            SpectralDensity::LorentzianPeaks { .. } => 0.0,
        }
    }
}

/// Frequencies below this (GHz) use the analytic nu -> 0 limit.
const ZERO_FREQUENCY: f64 = 1e-12;

/// One-sided bath rate for a system transition that releases energy `nu` (GHz)
/// into the bath: J(nu)(n+1) for emission (nu > 0), J(|nu|) n for absorption.
/// Detailed balance rate(-nu)/rate(nu) = exp(-nu / k_B T) holds by construction.
pub fn bath_rate(sd: &SpectralDensity, temp: f64, nu: f64) -> f64 {
    let a = nu.abs();
    if a < ZERO_FREQUENCY {
        return sd.zero_frequency_rate(temp);
    }
    let n = bose(a, temp);
    if nu > 0.0 {
        sd.j(a, temp) * (n + 1.0)
    } else {
        sd.j(a, temp) * n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::cm1_to_ghz;

    fn ohmic() -> SpectralDensity {
        SpectralDensity::OhmicCutoff { eta: 0.3, cutoff_ghz: 500.0 }
    }

    #[test]
    fn detailed_balance() {
        let sds = [
            ohmic(),
            SpectralDensity::LorentzianPeaks {
                peaks: vec![LorentzianPeak { center_ghz: 100.0, width_ghz: 10.0, strength: 1.0 }],
            },
        ];
        for sd in &sds {
            for &t in &[0.5, 3.0, 11.0, 300.0] {
                for &nu in &[0.01, 1.0, 9.1, 250.0] {
                    let r = bath_rate(sd, t, -nu) / bath_rate(sd, t, nu);
                    let expect = (-nu / (K_B_GHZ_PER_K * t)).exp();
                    assert!((r / expect - 1.0).abs() < 1e-10, "{sd:?} T={t} nu={nu}");
                }
            }
        }
    }

    #[test]
    fn ohmic_classical_limit() {
        let sd = ohmic();
        let t = 4.0;
        let lim = 0.3 * K_B_GHZ_PER_K * t;
        assert_eq!(bath_rate(&sd, t, 0.0), lim);
        // J(n+1) ~ eta kT (1 + nu/2kT - nu/cutoff) near zero
        let nu = 1e-4;
        let series = lim * (1.0 + nu / (2.0 * K_B_GHZ_PER_K * t) - nu / 500.0);
        assert!((bath_rate(&sd, t, nu) / series - 1.0).abs() < 1e-8);
        assert_eq!(sd.j(0.0, t), 0.0);
    }

    #[test]
    fn lorentzian_peak_at_mode() {
        let nu0 = cm1_to_ghz(68.4);
        let w = cm1_to_ghz(1.0);
        let sd = SpectralDensity::LorentzianPeaks {
            peaks: vec![LorentzianPeak { center_ghz: nu0, width_ghz: w, strength: 1.0 }],
        };
        let t = 5.0;
        let mut best = (0.0, 0.0);
        let n = 20000;
        for i in 0..=n {
            let nu = nu0 - 5.0 * w + 10.0 * w * i as f64 / n as f64;
            let r = bath_rate(&sd, t, nu);
            if r > best.1 {
                best = (nu, r);
            }
        }
        assert!((best.0 - nu0).abs() < 0.05 * w, "peak at {} vs {nu0}", best.0);
        assert_eq!(bath_rate(&sd, t, 0.0), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SpectralDensity::OhmicCutoff { eta: -1.0, cutoff_ghz: 1.0 }.validate().is_err());
        assert!(SpectralDensity::LorentzianPeaks {
            peaks: vec![LorentzianPeak { center_ghz: 1.0, width_ghz: 0.0, strength: 1.0 }]
        }
        .validate()
        .is_err());
    }
}
