// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Entanglement and fidelity measures on the two-qubit operating space, and
//! a sinusoid frequency estimator.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, hermiticity_deviation, psd_sqrt, CMatrix, ONE, ZERO};

/// Two-qubit Bell families in the |00>, |01>, |10>, |11> basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BellFamily {
    /// (|00> + e^{i theta} |11>) / sqrt 2
    Phi,
    /// (|01> + e^{i theta} |10>) / sqrt 2
    Psi,
}

impl BellFamily {
    fn pair(self) -> (usize, usize) {
        match self {
            BellFamily::Phi => (0, 3),
            BellFamily::Psi => (1, 2),
        }
    }

    pub fn state(self, theta: f64) -> DVector<Complex64> {
        let (i, j) = self.pair();
        let mut v = DVector::from_element(4, ZERO);
        v[i] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[j] = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, theta);
        v
    }

    /// Fidelity with the closest family member, maximised over the relative
    /// phase theta (a local phase correction), and the maximising theta.
    pub fn best_fidelity(self, rho: &CMatrix) -> (f64, f64) {
        let (i, j) = self.pair();
        let c = rho[(j, i)];
        let f = 0.5 * (rho[(i, i)].re + rho[(j, j)].re) + c.norm();
        (f.clamp(0.0, 1.0), c.arg())
    }
}

pub fn pure_density(v: &DVector<Complex64>) -> CMatrix {
    v * v.adjoint()
}

fn check_two_qubit(rho: &CMatrix) -> Result<()> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.nrows() });
    }
    if hermiticity_deviation(rho) > 1e-9 {
        return Err(Error::InvalidState("density matrix is not Hermitian".into()));
    }
    if (rho.trace() - ONE).norm() > 1e-8 {
        return Err(Error::InvalidState("density matrix trace differs from 1".into()));
    }
    if eigh(rho)?.0[0] < -1e-8 {
        return Err(Error::InvalidState("density matrix is not positive semidefinite".into()));
    }
    Ok(())
}

/// Wootters concurrence. With rho = A A^dagger, the lambda_i are the singular
/// values of A^T (sigma_y x sigma_y) A.
pub fn concurrence(rho: &CMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let mut yy = CMatrix::zeros(4, 4);
    // sigma_y x sigma_y
    yy[(0, 3)] = Complex64::new(-1.0, 0.0);
    yy[(1, 2)] = ONE;
    yy[(2, 1)] = ONE;
    yy[(3, 0)] = Complex64::new(-1.0, 0.0);
    let (p, v) = eigh(rho)?;
    let mut a = v;
    for (j, pj) in p.iter().enumerate() {
        a.column_mut(j).scale_mut(pj.max(0.0).sqrt());
    }
    let tau = a.transpose() * yy * a;
    let mut l: Vec<f64> = tau.singular_values().iter().copied().collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
pub fn uhlmann_fidelity(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    let s = psd_sqrt(rho)?;
    let m = &s * sigma * &s;
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let (e, _) = eigh(&m)?;
    let t: f64 = e.iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok((t * t).clamp(0.0, 1.0))
}

/// Frequency, amplitude and offset of y(t) ~ c + a cos(2 pi f t + phi),
/// found by maximising the least-squares fit over f.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinusoidFit {
    /// Cycles per unit of t.
    pub frequency: f64,
    pub amplitude: f64,
    pub offset: f64,
}

fn sinusoid_ssr(t: &[f64], y: &[f64], f: f64) -> (f64, f64, f64) {
    // linear least squares in (c, a cos, b sin)
    let w = 2.0 * std::f64::consts::PI * f;
    let mut ata = nalgebra::Matrix3::<f64>::zeros();
    let mut aty = nalgebra::Vector3::<f64>::zeros();
    for (&ti, &yi) in t.iter().zip(y) {
        let row = nalgebra::Vector3::new(1.0, (w * ti).cos(), (w * ti).sin());
        ata += row * row.transpose();
        aty += row * yi;
    }
    match ata.lu().solve(&aty) {
        Some(x) => {
            let ssr = t
                .iter()
                .zip(y)
                .map(|(&ti, &yi)| (yi - x[0] - x[1] * (w * ti).cos() - x[2] * (w * ti).sin()).powi(2))
                .sum();
            (ssr, x[1].hypot(x[2]), x[0])
        }
        None => (f64::INFINITY, 0.0, 0.0),
    }
}

pub fn fit_sinusoid(t: &[f64], y: &[f64], f_max: f64) -> Result<SinusoidFit> {
    if t.len() != y.len() || t.len() < 8 {
        return Err(Error::NoOscillation("need at least eight samples".into()));
    }
    let span = t[t.len() - 1] - t[0];
    if !(span > 0.0) {
        return Err(Error::NoOscillation("empty time window".into()));
    }
    let f_min = 0.25 / span;
    let steps = ((f_max - f_min) * span * 20.0).ceil().max(50.0) as usize;
    let h = (f_max - f_min) / steps as f64;
    let mut best = (0, f64::INFINITY);
    for k in 0..=steps {
        let c = sinusoid_ssr(t, y, f_min + h * k as f64).0;
        if c < best.1 {
            best = (k, c);
        }
    }
    let (mut a, mut b) = (f_min + h * (best.0 as f64 - 1.0).max(0.0), f_min + h * (best.0 as f64 + 1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        if b - a < 1e-14 * b {
            break;
        }
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if sinusoid_ssr(t, y, c).0 < sinusoid_ssr(t, y, d).0 {
            b = d;
        } else {
            a = c;
        }
    }
    let f = 0.5 * (a + b);
    let (_, amp, off) = sinusoid_ssr(t, y, f);
    let scale = y.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    if amp < 1e-6 * scale.max(1.0) {
        return Err(Error::NoOscillation("signal does not oscillate".into()));
    }
    Ok(SinusoidFit { frequency: f, amplitude: amp, offset: off })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, real};

    #[test]
    fn concurrence_reference_values() {
        let phi = pure_density(&BellFamily::Phi.state(0.0));
        assert!((concurrence(&phi).unwrap() - 1.0).abs() < 1e-10);
        let mut g = CMatrix::zeros(4, 4);
        g[(0, 0)] = ONE;
        assert!(concurrence(&g).unwrap() < 1e-10);
        let p = 0.9;
        let werner = &phi * real(p) + CMatrix::identity(4, 4) * real((1.0 - p) / 4.0);
        assert!((concurrence(&werner).unwrap() - 0.85).abs() < 1e-10);
    }

    #[test]
    fn product_states_have_zero_concurrence() {
        let a = CMatrix::from_column_slice(2, 1, &[Complex64::new(0.6, 0.1), Complex64::new(0.2, -0.76)]);
        let b = CMatrix::from_column_slice(2, 1, &[Complex64::new(-0.3, 0.5), Complex64::new(0.81, 0.0)]);
        let v = kron(&a, &b);
        let v = DVector::from_column_slice(v.as_slice()) / Complex64::new(v.norm(), 0.0);
        assert!(concurrence(&pure_density(&v)).unwrap() < 1e-7);
    }

    #[test]
    fn rejects_invalid_states() {
        assert!(concurrence(&CMatrix::identity(4, 4)).is_err());
        assert!(concurrence(&CMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn bell_fidelity_ignores_phases() {
        let v = BellFamily::Phi.state(1.1) * Complex64::from_polar(1.0, 0.4);
        let (f, theta) = BellFamily::Phi.best_fidelity(&pure_density(&v));
        assert!((f - 1.0).abs() < 1e-12 && (theta - 1.1).abs() < 1e-12);
        let (f, _) = BellFamily::Psi.best_fidelity(&pure_density(&v));
        assert!(f.abs() < 1e-12);
    }

    #[test]
    fn uhlmann_matches_overlap_for_pure_target() {
        let t = pure_density(&BellFamily::Psi.state(0.3));
        let rho = &t * real(0.7) + CMatrix::identity(4, 4) * real(0.3 / 4.0);
        let f = uhlmann_fidelity(&rho, &t).unwrap();
        assert!((f - (0.7 + 0.075)).abs() < 1e-9);
    }

    #[test]
    fn sinusoid_frequency() {
        let t: Vec<f64> = (0..400).map(|k| k as f64 * 0.05).collect();
        let y: Vec<f64> = t.iter().map(|&x| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * 0.73 * x).cos()).collect();
        let fit = fit_sinusoid(&t, &y, 5.0).unwrap();
        assert!((fit.frequency - 0.73).abs() < 1e-8);
        assert!(fit_sinusoid(&t, &vec![0.3; 400], 5.0).is_err());
    }
}
