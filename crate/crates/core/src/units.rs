// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Unit conventions. Energies are frequencies in GHz (h = 1), times are in ns,
//! fields in tesla unless a name says otherwise.

/// GHz per cm^-1.
pub const GHZ_PER_CM1: f64 = 29.979_245_8;
/// Bohr magneton in GHz/T.
pub const MU_B_GHZ_PER_T: f64 = 13.996_244_9;
/// Boltzmann constant in GHz/K.
pub const K_B_GHZ_PER_K: f64 = 20.836_619;
/// Nuclear magneton in GHz/T.
pub const MU_N_GHZ_PER_T: f64 = 7.622_593_2e-3;
/// mu_0 / (4 pi) * mu_B^2 / h, in GHz * m^3.
pub const DIPOLAR_GHZ_M3: f64 = 1.0e-7 * 9.274_010_078_3e-24 * 9.274_010_078_3e-24 / 6.626_070_15e-34 * 1.0e-9;

pub const MHZ_PER_GHZ: f64 = 1.0e3;

pub fn cm1_to_ghz(x: f64) -> f64 {
    x * GHZ_PER_CM1
}

pub fn ghz_to_cm1(x: f64) -> f64 {
    x / GHZ_PER_CM1
}

pub fn mt_to_t(b: f64) -> f64 {
    b * 1e-3
}

/// Bose–Einstein occupation for a mode of frequency `nu` (GHz) at `temp` (K).
pub fn bose(nu: f64, temp: f64) -> f64 {
    let x = nu / (K_B_GHZ_PER_K * temp);
    1.0 / x.exp_m1()
}
