// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{real, CMatrix, I};

/// Angular momentum quantum number stored as 2j so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AngularMomentumSpec {
    twice_j: u32,
}

impl AngularMomentumSpec {
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !j.is_finite() || j < 0.5 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Self { twice_j: twice.round() as u32 })
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// Projection quantum number of basis index `i`; the basis runs m = j, j-1, ..., -j.
    pub fn m(&self, i: usize) -> f64 {
        self.j() - i as f64
    }

    /// Basis index of projection `m`, if it exists.
    pub fn index_of(&self, m: f64) -> Option<usize> {
        let i = self.j() - m;
        if i < -1e-9 || (i - i.round()).abs() > 1e-9 || i.round() as usize >= self.dim() {
            return None;
        }
        Some(i.round() as usize)
    }

    pub fn ops(&self) -> AngularOps {
        angular_momentum_ops(*self)
    }
}

impl TryFrom<f64> for AngularMomentumSpec {
    type Error = Error;
    fn try_from(j: f64) -> Result<Self> {
        Self::new(j)
    }
}

impl From<AngularMomentumSpec> for f64 {
    fn from(s: AngularMomentumSpec) -> f64 {
        s.j()
    }
}

#[derive(Debug, Clone)]
pub struct AngularOps {
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    pub jp: CMatrix,
    pub jm: CMatrix,
}

pub fn angular_momentum_ops(spec: AngularMomentumSpec) -> AngularOps {
    let n = spec.dim();
    let j = spec.j();
    let mut jz = CMatrix::zeros(n, n);
    let mut jp = CMatrix::zeros(n, n);
    for i in 0..n {
        let m = spec.m(i);
        jz[(i, i)] = real(m);
        if i > 0 {
            // <m+1| J+ |m>
            jp[(i - 1, i)] = real((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * real(0.5);
    let jy = (&jp - &jm) * (-I * 0.5);
    AngularOps { jx, jy, jz, jp, jm }
}

/// Label for a projection quantum number, e.g. `+7/2`, `-4`.
pub fn m_label(m: f64) -> String {
    let twice = (2.0 * m).round() as i64;
    let sign = if twice >= 0 { "+" } else { "-" };
    if twice % 2 == 0 {
        format!("{sign}{}", twice.abs() / 2)
    } else {
        format!("{sign}{}/2", twice.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;

    #[test]
    fn spin_half_is_pauli_over_two() {
        let ops = AngularMomentumSpec::new(0.5).unwrap().ops();
        assert_eq!(ops.jz[(0, 0)], real(0.5));
        assert_eq!(ops.jz[(1, 1)], real(-0.5));
        assert!((ops.jx[(0, 1)] - real(0.5)).norm() < 1e-15);
        assert!((ops.jx[(1, 0)] - real(0.5)).norm() < 1e-15);
        assert!(ops.jx[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn j8_has_seventeen_levels() {
        let spec = AngularMomentumSpec::new(8.0).unwrap();
        let ops = spec.ops();
        assert_eq!(ops.jz.nrows(), 17);
        for i in 0..17 {
            assert_eq!(ops.jz[(i, i)].re, 8.0 - i as f64);
        }
    }

    #[test]
    fn commutation_relations_hold() {
        for j in [0.5, 1.0, 3.5, 8.0] {
            let ops = AngularMomentumSpec::new(j).unwrap().ops();
            let c = commutator(&ops.jx, &ops.jy) - &ops.jz * I;
            assert!(c.norm() < 1e-13, "j = {j}: {}", c.norm());
            let c = commutator(&ops.jz, &ops.jp) - &ops.jp;
            assert!(c.norm() < 1e-13);
        }
    }

    #[test]
    fn casimir_is_j_j_plus_one() {
        let spec = AngularMomentumSpec::new(3.5).unwrap();
        let ops = spec.ops();
        let j2 = &ops.jx * &ops.jx + &ops.jy * &ops.jy + &ops.jz * &ops.jz;
        let expect = CMatrix::identity(8, 8) * real(3.5 * 4.5);
        assert!((j2 - expect).norm() < 1e-12);
    }

    #[test]
    fn invalid_spins_rejected() {
        assert!(AngularMomentumSpec::new(0.0).is_err());
        assert!(AngularMomentumSpec::new(0.3).is_err());
        assert!(AngularMomentumSpec::new(-1.0).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(m_label(3.5), "+7/2");
        assert_eq!(m_label(-0.5), "-1/2");
        assert_eq!(m_label(-4.0), "-4");
    }
}
