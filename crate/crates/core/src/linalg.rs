// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Dense complex operators and Hermitian eigendecomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance (relative Frobenius norm) above which `diagonalize` rejects input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// A dense operator together with labels for its basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub matrix: CMatrix,
    pub basis: Vec<String>,
}

impl OperatorMatrix {
    pub fn new(matrix: CMatrix, basis: Vec<String>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        if basis.len() != matrix.nrows() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: basis.len() });
        }
        Ok(Self { matrix, basis })
    }

    /// Operator with numeric labels `0..dim`.
    pub fn unlabeled(matrix: CMatrix) -> Self {
        let basis = (0..matrix.nrows()).map(|i| i.to_string()).collect();
        Self { matrix, basis }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.matrix)
    }

    /// CSV rendering: one row per basis state, real and imaginary parts of each column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("basis");
        for b in &self.basis {
            out.push_str(&format!(",re[{b}],im[{b}]"));
        }
        out.push('\n');
        for (i, label) in self.basis.iter().enumerate() {
            out.push_str(label);
            for j in 0..self.dim() {
                let z = self.matrix[(i, j)];
                out.push_str(&format!(",{:.12e},{:.12e}", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }
}

/// Eigenvalues in ascending order (GHz) and the matching unitary eigenvector matrix
/// (one eigenvector per column).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub states: CMatrix,
    pub basis: Vec<String>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Angular Bohr frequency 2 pi (E_a - E_b), rad/ns.
    pub fn omega(&self, a: usize, b: usize) -> f64 {
        2.0 * std::f64::consts::PI * (self.energies[a] - self.energies[b])
    }

    pub fn state(&self, level: usize) -> Result<nalgebra::DVector<Complex64>> {
        self.check_level(level)?;
        Ok(self.states.column(level).into_owned())
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level >= self.dim() {
            return Err(Error::LevelOutOfRange { index: level, dim: self.dim() });
        }
        Ok(())
    }

    /// Expectation value of `op` in eigenstate `level`.
    pub fn expectation(&self, level: usize, op: &CMatrix) -> Result<f64> {
        let v = self.state(level)?;
        Ok((v.adjoint() * op * &v)[(0, 0)].re)
    }

    /// Transform an operator into the eigenbasis: S^dagger A S.
    pub fn to_eigenbasis(&self, op: &CMatrix) -> CMatrix {
        self.states.adjoint() * op * &self.states
    }
}

pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / norm
}

/// Hermitian eigendecomposition with ascending energies and the
/// largest-component-real-positive phase convention.
pub fn diagonalize(op: &OperatorMatrix) -> Result<Spectrum> {
    let (energies, states) = eigh(&op.matrix)?;
    Ok(Spectrum { energies, states, basis: op.basis.clone() })
}

/// Raw Hermitian eigendecomposition used by `diagonalize`.
pub fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let dev = hermiticity_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.nrows();
    // Symmetrize so round-off in the input cannot leak into the eigensolver.
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut pairs: Vec<(f64, nalgebra::DVector<Complex64>)> = Vec::with_capacity(n);
    for block in connected_blocks(&sym) {
        let sub = CMatrix::from_fn(block.len(), block.len(), |i, j| sym[(block[i], block[j])]);
        let eig = sub.symmetric_eigen();
        for (k, &e) in eig.eigenvalues.iter().enumerate() {
            let mut v = nalgebra::DVector::zeros(n);
            for (i, &row) in block.iter().enumerate() {
                v[row] = eig.eigenvectors[(i, k)];
            }
            pairs.push((e, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut states = CMatrix::zeros(n, n);
    let mut energies = Vec::with_capacity(n);
    for (col, (e, mut v)) in pairs.into_iter().enumerate() {
        fix_phase(v.as_mut_slice());
        states.set_column(col, &v);
        energies.push(e);
    }
    Ok((energies, states))
}

/// Index sets of the connected components of the non-zero pattern of `m`.
pub fn connected_blocks(m: &CMatrix) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)] != ZERO {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Rotate a vector so that its largest-magnitude component (first one on ties)
/// is real and positive.
pub fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-9)).expect("non-empty vector");
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// exp(-i 2 pi H t) for Hermitian H in GHz and t in ns.
pub fn unitary_propagator(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let (e, s) = eigh(h)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let phases =
        nalgebra::DVector::from_iterator(e.len(), e.iter().map(|&ek| Complex64::from_polar(1.0, -two_pi * ek * t)));
    let mut scaled = s.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(scaled * s.adjoint())
}

/// Square root of a Hermitian positive semidefinite matrix; small negative
/// eigenvalues are clipped to zero.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (e, s) = eigh(m)?;
    let mut scaled = s.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= real(e[j].max(0.0).sqrt());
    }
    Ok(scaled * s.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        // Small LCG so the test does not need an RNG dependency.
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = CMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
        (&a + a.adjoint()) * real(0.5)
    }

    #[test]
    fn diagonal_input_gives_sorted_diagonal() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![real(3.0), real(-1.0), real(2.0)]));
        let s = diagonalize(&OperatorMatrix::unlabeled(m)).unwrap();
        assert_eq!(s.energies, vec![-1.0, 2.0, 3.0]);
        // states form the permutation [1, 2, 0]
        assert!((s.states[(1, 0)] - ONE).norm() < 1e-14);
        assert!((s.states[(2, 1)] - ONE).norm() < 1e-14);
        assert!((s.states[(0, 2)] - ONE).norm() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        for seed in 0..5 {
            let h = random_hermitian(16, seed);
            let s = diagonalize(&OperatorMatrix::unlabeled(h.clone())).unwrap();
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(16, s.energies.iter().map(|&e| real(e))));
            let rec = &s.states * d * s.states.adjoint();
            assert!((&h - rec).norm() < 1e-9 * h.norm());
            let gram = s.states.adjoint() * &s.states;
            assert!((gram - identity(16)).norm() < 1e-10);
            for w in s.energies.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn phase_convention_makes_pivot_real_positive() {
        let h = random_hermitian(6, 42);
        let s = diagonalize(&OperatorMatrix::unlabeled(h)).unwrap();
        for col in s.states.column_iter() {
            let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = col.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap();
            assert!(pivot.im.abs() < 1e-12 && pivot.re > 0.0);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = ONE;
        let err = diagonalize(&OperatorMatrix::unlabeled(m)).unwrap_err();
        assert!(matches!(err, Error::NotHermitian(_)));
    }

    #[test]
    fn propagator_is_unitary_and_matches_phase() {
        let h = random_hermitian(5, 7);
        let u = unitary_propagator(&h, 0.37).unwrap();
        assert!((u.adjoint() * &u - identity(5)).norm() < 1e-12);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![real(1.5), real(-0.25)]));
        let u = unitary_propagator(&d, 2.0).unwrap();
        let expected = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * 1.5 * 2.0);
        assert!((u[(0, 0)] - expected).norm() < 1e-12);
    }
}
