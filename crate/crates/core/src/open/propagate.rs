// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Density-matrix propagation under a Redfield tensor.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{connected_blocks, eigh, hermiticity_deviation, CMatrix, ONE, ZERO};

use super::redfield::RedfieldTensor;

/// Eigenvalues of rho below this flag a positivity violation.
pub const POSITIVITY_TOL: f64 = -1e-8;

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Times, ns.
    pub times: Vec<f64>,
    /// Density matrices in the system eigenbasis.
    pub states: Vec<CMatrix>,
    /// Smallest eigenvalue of rho over the trajectory.
    pub min_eigenvalue: f64,
}

impl Trajectory {
    pub fn positivity_violated(&self) -> bool {
        self.min_eigenvalue < POSITIVITY_TOL
    }

    /// tr(rho(t) O) for each time.
    pub fn expectation(&self, op: &CMatrix) -> Vec<f64> {
        self.states.iter().map(|r| (r * op).trace().re).collect()
    }

    pub fn element(&self, a: usize, b: usize) -> Vec<Complex64> {
        self.states.iter().map(|r| r[(a, b)]).collect()
    }
}

pub fn check_density_matrix(rho: &CMatrix) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::InvalidState("density matrix must be square".into()));
    }
    if hermiticity_deviation(rho) > 1e-10 {
        return Err(Error::InvalidState("density matrix is not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr - ONE).norm() > 1e-10 {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let (e, _) = eigh(rho)?;
    if e[0] < -1e-10 {
        return Err(Error::InvalidState(format!("negative eigenvalue {:.3e}", e[0])));
    }
    Ok(())
}

/// Propagate `rho0` (eigenbasis) to each time in `times` (ns, non-negative)
/// with the exact exponential of each connected Liouvillian block.
pub fn propagate(rho0: &CMatrix, tensor: &RedfieldTensor, times: &[f64]) -> Result<Trajectory> {
    let n = tensor.dim();
    if rho0.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: rho0.nrows() });
    }
    check_density_matrix(rho0)?;
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidGrid("times must be finite and non-negative".into()));
    }
    let l = tensor.liouvillian();
    let groups = connected_blocks(&l);
    let v0: Vec<Complex64> = (0..n * n).map(|k| rho0[(k / n, k % n)]).collect();

    let sub: Vec<(Vec<usize>, CMatrix, nalgebra::DVector<Complex64>)> = groups
        .into_iter()
        .filter(|g| g.iter().any(|&k| v0[k] != ZERO))
        .map(|g| {
            let m = CMatrix::from_fn(g.len(), g.len(), |i, j| l[(g[i], g[j])]);
            let v = nalgebra::DVector::from_iterator(g.len(), g.iter().map(|&k| v0[k]));
            (g, m, v)
        })
        .collect();

    let mut states = Vec::with_capacity(times.len());
    let mut min_eig = f64::INFINITY;
    for &t in times {
        let mut rho = CMatrix::zeros(n, n);
        for (g, m, v) in &sub {
            let out = (m * Complex64::new(t, 0.0)).exp() * v;
            for (i, &k) in g.iter().enumerate() {
                rho[(k / n, k % n)] = out[i];
            }
        }
        let herm = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        min_eig = min_eig.min(eigh(&herm)?.0[0]);
        states.push(rho);
    }
    Ok(Trajectory { times: times.to_vec(), states, min_eigenvalue: min_eig })
}

/// Stationary state: L rho = 0 with tr rho = 1.
pub fn steady_state(tensor: &RedfieldTensor) -> Result<CMatrix> {
    let n = tensor.dim();
    let mut l = tensor.liouvillian();
    let mut rhs = nalgebra::DVector::from_element(n * n, ZERO);
    for col in 0..n * n {
        l[(0, col)] = if col / n == col % n { ONE } else { ZERO };
    }
    rhs[0] = ONE;
    let x = l.lu().solve(&rhs).ok_or_else(|| Error::InvalidState("steady state is not unique".into()))?;
    Ok(CMatrix::from_fn(n, n, |a, b| x[a * n + b]))
}

/// Boltzmann populations of `energies` (GHz) at `temp` (K).
pub fn gibbs_populations(energies: &[f64], temp: f64) -> Vec<f64> {
    let kt = crate::units::K_B_GHZ_PER_K * temp;
    let e0 = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|e| (-(e - e0) / kt).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diagonalize, real, OperatorMatrix};
    use crate::open::bath::SpectralDensity;
    use crate::open::redfield::{build_redfield, RedfieldModel};

    fn random_model(n: usize, secular: bool) -> RedfieldModel {
        let mut state = 11u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut rnd = |scale: f64| {
            let m = CMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
            (&m + m.adjoint()) * real(0.5 * scale)
        };
        let h = rnd(30.0);
        let v = rnd(0.05);
        RedfieldModel {
            spectrum: diagonalize(&OperatorMatrix::unlabeled(h)).unwrap(),
            couplings: vec![OperatorMatrix::unlabeled(v)],
            sd: SpectralDensity::OhmicCutoff { eta: 0.5, cutoff_ghz: 200.0 },
            temperature: 0.5,
            secular,
        }
    }

    #[test]
    fn closed_system_rotates_coherences() {
        let n = 3;
        let tensor = RedfieldTensor::zeros(vec![0.0, 1.0, 2.5], false);
        let mut rho = CMatrix::from_element(n, n, real(1.0 / 3.0));
        rho[(0, 0)] = real(1.0 / 3.0);
        let traj = propagate(&rho, &tensor, &[0.0, 0.37]).unwrap();
        let r = &traj.states[1];
        let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (0.0 - 2.5) * 0.37);
        assert!((r[(0, 2)] - phase / 3.0).norm() < 1e-12);
        assert!((r[(1, 1)].re - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn trace_and_hermiticity_preserved() {
        for secular in [false, true] {
            let model = random_model(6, secular);
            let tensor = build_redfield(&model).unwrap();
            let mut rho = CMatrix::zeros(6, 6);
            rho[(5, 5)] = real(0.6);
            rho[(2, 2)] = real(0.4);
            rho[(2, 5)] = real(0.3);
            rho[(5, 2)] = real(0.3);
            let times: Vec<f64> = (0..12).map(|k| 0.5 * 2f64.powi(k)).collect();
            let traj = propagate(&rho, &tensor, &times).unwrap();
            for s in &traj.states {
                assert!((s.trace() - ONE).norm() < 1e-10);
                assert!((s - s.adjoint()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn relaxes_to_gibbs_state() {
        let model = random_model(6, true);
        let tensor = build_redfield(&model).unwrap();
        let ss = steady_state(&tensor).unwrap();
        let gibbs = gibbs_populations(&model.spectrum.energies, model.temperature);
        for a in 0..6 {
            for b in 0..6 {
                let expect = if a == b { gibbs[a] } else { 0.0 };
                assert!((ss[(a, b)].re - expect).abs() < 1e-6 && ss[(a, b)].im.abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rejects_invalid_initial_state() {
        let tensor = RedfieldTensor::zeros(vec![0.0, 1.0], false);
        let bad = CMatrix::identity(2, 2);
        assert!(propagate(&bad, &tensor, &[0.0]).is_err());
        let mut neg = CMatrix::zeros(2, 2);
        neg[(0, 0)] = real(1.5);
        neg[(1, 1)] = real(-0.5);
        assert!(propagate(&neg, &tensor, &[0.0]).is_err());
    }
}
