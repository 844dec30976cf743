// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Redfield relaxation tensor in the system eigenbasis.
//!
//! Convention: d rho_ab / dt = -i 2 pi nu_ab rho_ab - sum_cd R_{ab,cd} rho_cd,
//! with nu_ab = E_a - E_b in GHz and t in ns.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, OperatorMatrix, Spectrum, ZERO};

use super::bath::{bath_rate, SpectralDensity};

/// Terms with |nu_ab - nu_cd| above this (GHz) are dropped in secular mode.
pub const SECULAR_CUTOFF_GHZ: f64 = 1e-5;

#[derive(Debug, Clone)]
pub struct RedfieldModel {
    pub spectrum: Spectrum,
    /// Spin-phonon coupling operators in the basis of `spectrum.basis`, GHz.
    pub couplings: Vec<OperatorMatrix>,
    pub sd: SpectralDensity,
    pub temperature: f64,
    pub secular: bool,
}

#[derive(Debug, Clone)]
pub struct RedfieldTensor {
    dim: usize,
    data: Vec<Complex64>,
    /// Level energies, GHz.
    pub energies: Vec<f64>,
    pub secular: bool,
}

impl RedfieldTensor {
    pub fn zeros(energies: Vec<f64>, secular: bool) -> Self {
        let dim = energies.len();
        Self { dim, data: vec![ZERO; dim.pow(4)], energies, secular }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        self.data[self.idx(a, b, c, d)]
    }

    fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: Complex64) {
        let i = self.idx(a, b, c, d);
        self.data[i] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Liouvillian L with d vec(rho)/dt = L vec(rho), row-major vec index a*dim + b.
    pub fn liouvillian(&self) -> CMatrix {
        let n = self.dim;
        let two_pi = 2.0 * std::f64::consts::PI;
        CMatrix::from_fn(n * n, n * n, |row, col| {
            let (a, b) = (row / n, row % n);
            let (c, d) = (col / n, col % n);
            let mut v = -self.get(a, b, c, d);
            if row == col {
                v -= Complex64::new(0.0, two_pi * (self.energies[a] - self.energies[b]));
            }
            v
        })
    }

    /// Transition rate b -> a (1/ns) for a != b.
    pub fn population_rate(&self, from: usize, to: usize) -> f64 {
        -self.get(to, to, from, from).re
    }
}

/// Build the Redfield tensor. Couplings are moved into the eigenbasis of the
/// spectrum first.
pub fn build_redfield(model: &RedfieldModel) -> Result<RedfieldTensor> {
    let n = model.spectrum.dim();
    if !(model.temperature > 0.0) {
        return Err(Error::InvalidParameter("temperature must be positive".into()));
    }
    model.sd.validate()?;
    let e = &model.spectrum.energies;
    let mut tensor = RedfieldTensor::zeros(e.clone(), model.secular);

    let mut s = vec![0.0; n * n];
    for c in 0..n {
        for m in 0..n {
            s[c * n + m] = bath_rate(&model.sd, model.temperature, e[c] - e[m]);
        }
    }
    let rate = |c: usize, m: usize| s[c * n + m];

    let mut acc = vec![ZERO; n.pow(4)];
    for v in &model.couplings {
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
        }
        if v.hermiticity_deviation() > crate::linalg::HERMITIAN_TOL {
            return Err(Error::NotHermitian(v.hermiticity_deviation()));
        }
        let a = model.spectrum.to_eigenbasis(&v.matrix);
        // x[(a, c)] = sum_n A_an A_nc S(nu_cn); y[(d, b)] = sum_n A_dn A_nb S(nu_dn)
        let x = CMatrix::from_fn(n, n, |p, c| (0..n).map(|m| a[(p, m)] * a[(m, c)] * rate(c, m)).sum());
        let y = CMatrix::from_fn(n, n, |d, b| (0..n).map(|m| a[(d, m)] * a[(m, b)] * rate(d, m)).sum());
        for p in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut r = a[(p, c)] * a[(d, b)] * (rate(c, p) + rate(d, b));
                        if b == d {
                            r -= x[(p, c)];
                        }
                        if p == c {
                            r -= y[(d, b)];
                        }
                        // stored with the opposite sign of the gain term
                        acc[((p * n + b) * n + c) * n + d] -= r * 0.5;
                    }
                }
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let keep = !model.secular || ((e[a] - e[b]) - (e[c] - e[d])).abs() <= SECULAR_CUTOFF_GHZ;
                    if keep {
                        tensor.set(a, b, c, d, acc[((a * n + b) * n + c) * n + d]);
                    }
                }
            }
        }
    }
    Ok(tensor)
}
