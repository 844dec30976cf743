// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Pair geometry and the point-dipole coupling constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::DIPOLAR_GHZ_M3;

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Separation of the two sites, calibrated so that the flip-flop splitting
/// of the operating space at 12 mT is 0.1 MHz (not a crystallographic value).
pub const DEFAULT_SEPARATION_ANGSTROM: f64 = 59.131_494_557_038_59;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimerGeometry {
    /// Vector from site a to site b, angstrom, crystal frame.
    pub r_angstrom: Vec3,
    /// Molecular easy axis of each site (unit vectors).
    pub axis_a: Vec3,
    pub axis_b: Vec3,
}

impl Default for DimerGeometry {
    /// Inversion-related pair: antiparallel axes, separation perpendicular to them.
    fn default() -> Self {
        Self { r_angstrom: [DEFAULT_SEPARATION_ANGSTROM, 0.0, 0.0], axis_a: [0.0, 0.0, 1.0], axis_b: [0.0, 0.0, -1.0] }
    }
}

impl DimerGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(norm(self.r_angstrom) > 0.0) || self.r_angstrom.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("separation must be non-zero and finite".into()));
        }
        for (name, n) in [("axis_a", self.axis_a), ("axis_b", self.axis_b)] {
            if (norm(n) - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!("{name} must be a unit vector")));
            }
            if dot(n, [0.0, 0.0, 1.0]).abs() < 1e-9 {
                return Err(Error::InvalidParameter(format!("{name} is perpendicular to the field")));
            }
        }
        Ok(())
    }

    pub fn distance_m(&self) -> f64 {
        norm(self.r_angstrom) * 1e-10
    }

    pub fn unit_r(&self) -> Vec3 {
        scale(self.r_angstrom, 1.0 / norm(self.r_angstrom))
    }

    pub fn with_distance(&self, angstrom: f64) -> Self {
        Self { r_angstrom: scale(self.unit_r(), angstrom), ..*self }
    }

    /// mu0/4pi (g_J mu_B)^2 / |r|^3 in GHz.
    pub fn dipolar_constant(&self, g_j: f64) -> f64 {
        DIPOLAR_GHZ_M3 * g_j * g_j / self.distance_m().powi(3)
    }

    /// Coefficient of Jz_a Jz_b (local axes) in the point-dipole energy, GHz.
    pub fn axial_coupling(&self, g_j: f64) -> f64 {
        let r = self.unit_r();
        self.dipolar_constant(g_j) * (dot(self.axis_a, self.axis_b) - 3.0 * dot(self.axis_a, r) * dot(self.axis_b, r))
    }
}

/// Right-handed local frame (e1, e2, n) for a site with easy axis `n`.
pub fn local_frame(n: Vec3) -> (Vec3, Vec3, Vec3) {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = cross(helper, n);
    let e1 = scale(e1, 1.0 / norm(e1));
    let e2 = cross(n, e1);
    (e1, e2, n)
}

/// Lab field `b_mt` along z expressed in the local frame of a site (tesla).
pub fn local_field(axis: Vec3, b_mt: f64) -> Vec3 {
    let (e1, e2, n) = local_frame(axis);
    let b = [0.0, 0.0, b_mt * 1e-3];
    [dot(b, e1), dot(b, e2), dot(b, n)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_cube_scaling() {
        let g = DimerGeometry::default();
        let d1 = g.axial_coupling(1.25);
        let d2 = g.with_distance(2.0 * norm(g.r_angstrom)).axial_coupling(1.25);
        assert!((d1 / d2 - 8.0).abs() < 1e-12);
    }

    #[test]
    fn classical_moments_hand_formula() {
        // two moments of 4 g mu_B, antiparallel along z, separated along x:
        // E = mu0/4pi m_a m_b / r^3 (n_a.n_b) = -mu0/4pi (4 g mu_B)^2 / r^3
        let g = DimerGeometry::default();
        let r = g.distance_m();
        let mu0_4pi = 1.0e-7;
        let mu_b: f64 = 9.274_010_078_3e-24;
        let h = 6.626_070_15e-34;
        let e_ghz = -mu0_4pi * (4.0 * 1.25 * mu_b).powi(2) / r.powi(3) / h * 1e-9;
        assert!((g.axial_coupling(1.25) * 16.0 / e_ghz - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frames_and_fields() {
        let (e1, e2, n) = local_frame([0.0, 0.0, -1.0]);
        assert!((dot(cross(e1, e2), n) - 1.0).abs() < 1e-12);
        assert_eq!(local_field([0.0, 0.0, -1.0], 12.0)[2], -0.012);
        assert!(DimerGeometry { axis_b: [1.0, 0.0, 0.0], ..Default::default() }.validate().is_err());
        assert!(DimerGeometry { r_angstrom: [0.0; 3], ..Default::default() }.validate().is_err());
    }
}
