// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! T1/T2 of the clock-transition pair from Redfield dynamics.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clock::diagram::spectrum_at;
use crate::error::{Error, Result};
use crate::linalg::{real, CMatrix, OperatorMatrix};
use crate::spin::hamiltonian::{basis_labels, crystal_field_operator, lift_electronic};
use crate::spin::SpinSystemParams;
use crate::units::cm1_to_ghz;

use super::bath::{LorentzianPeak, SpectralDensity};
use super::fit::{fit_exponential, ExpFit, SINGLE_EXP_THRESHOLD};
use super::propagate::{propagate, Trajectory};
use super::redfield::{build_redfield, RedfieldModel, RedfieldTensor};

/// Lowest molecular vibration used by the default bath, cm^-1.
pub const DEFAULT_MODE_CM1: f64 = 68.4;
pub const DEFAULT_MODE_WIDTH_CM1: f64 = 1.0;
/// Overall bath scale; sets T1 at the clock transition and 5 K to about 1 us.
pub const DEFAULT_BATH_STRENGTH: f64 = 1.4521e13;
/// Modulation amplitudes of B_4^4 and B_4^-4 per mode coordinate, GHz.
pub const DEFAULT_VX_GHZ: f64 = 5.477_225_575;
pub const DEFAULT_VY_GHZ: f64 = 1.0;
/// Nuclear spin-bath coherence limit, shown only as a reference line.
pub const NUCLEAR_BATH_T2_US: f64 = 300.0;

/// A crystal-field modulation dB_k^q acting as a spin-phonon coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhononCoupling {
    pub k: i32,
    pub q: i32,
    pub amplitude_ghz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationConfig {
    pub sd: SpectralDensity,
    pub couplings: Vec<PhononCoupling>,
    #[serde(default = "default_secular")]
    pub secular: bool,
    /// Lower and upper level of the qubit transition (0-based).
    #[serde(default = "default_pair")]
    pub pair: (usize, usize),
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_secular() -> bool {
    true
}
fn default_pair() -> (usize, usize) {
    (7, 8)
}
fn default_samples() -> usize {
    120
}

impl Default for RelaxationConfig {
    fn default() -> Self {
        Self {
            sd: SpectralDensity::LorentzianPeaks {
                peaks: vec![LorentzianPeak {
                    center_ghz: cm1_to_ghz(DEFAULT_MODE_CM1),
                    width_ghz: cm1_to_ghz(DEFAULT_MODE_WIDTH_CM1),
                    strength: DEFAULT_BATH_STRENGTH,
                }],
            },
            couplings: vec![
                PhononCoupling { k: 4, q: 4, amplitude_ghz: DEFAULT_VX_GHZ },
                PhononCoupling { k: 4, q: -4, amplitude_ghz: DEFAULT_VY_GHZ },
            ],
            secular: true,
            pair: default_pair(),
            samples: default_samples(),
        }
    }
}

pub fn coupling_operators(params: &SpinSystemParams, couplings: &[PhononCoupling]) -> Result<Vec<OperatorMatrix>> {
    couplings
        .iter()
        .map(|c| {
            let op = crystal_field_operator(params, c.k, c.q)? * real(c.amplitude_ghz);
            OperatorMatrix::new(lift_electronic(params, &op), basis_labels(params))
        })
        .collect()
}

pub fn redfield_model(
    params: &SpinSystemParams,
    b_mt: f64,
    temp: f64,
    cfg: &RelaxationConfig,
) -> Result<RedfieldModel> {
    Ok(RedfieldModel {
        spectrum: spectrum_at(params, b_mt, 0.0)?,
        couplings: coupling_operators(params, &cfg.couplings)?,
        sd: cfg.sd.clone(),
        temperature: temp,
        secular: cfg.secular,
    })
}

/// Fit tr(rho O)(t) to a + b exp(-t/T1). Times in the trajectory are ns.
pub fn extract_t1(traj: &Trajectory, observable: &CMatrix) -> Result<ExpFit> {
    checked(fit_exponential(&traj.times, &traj.expectation(observable))?)
}

/// Fit |rho_ab(t)| to a + b exp(-t/T2).
pub fn extract_t2(traj: &Trajectory, pair: (usize, usize)) -> Result<ExpFit> {
    let n = traj.states.first().map(|s| s.nrows()).unwrap_or(0);
    if pair.0 >= n || pair.1 >= n || pair.0 == pair.1 {
        return Err(Error::LevelOutOfRange { index: pair.0.max(pair.1), dim: n });
    }
    let y: Vec<f64> = traj.element(pair.0, pair.1).iter().map(|z| z.norm()).collect();
    checked(fit_exponential(&traj.times, &y)?)
}

fn checked(fit: ExpFit) -> Result<ExpFit> {
    if fit.rel_residual > SINGLE_EXP_THRESHOLD {
        return Err(Error::NoFit(format!(
            "decay is not single-exponential (relative residual {:.3})",
            fit.rel_residual
        )));
    }
    Ok(fit)
}

/// Log-spaced grid covering the decay of a rate `gamma` (1/ns), with t = 0.
pub fn decay_grid(gamma: f64, samples: usize) -> Result<Vec<f64>> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::NoFit("nothing decays (zero relaxation rate)".into()));
    }
    let (lo, hi) = ((0.01 / gamma).ln(), (12.0 / gamma).ln());
    let m = samples.max(8);
    let mut t = vec![0.0];
    t.extend((0..m).map(|k| (lo + (hi - lo) * k as f64 / (m - 1) as f64).exp()));
    Ok(t)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelaxationResult {
    pub t1_us: f64,
    pub t2_us: f64,
    pub t1_fit: ExpFit,
    pub t2_fit: ExpFit,
    pub positivity_violated: bool,
}

pub fn relaxation_times_from_tensor(
    tensor: &RedfieldTensor,
    pair: (usize, usize),
    samples: usize,
) -> Result<RelaxationResult> {
    let n = tensor.dim();
    let (lo, up) = pair;
    if lo >= n || up >= n || lo == up {
        return Err(Error::LevelOutOfRange { index: lo.max(up), dim: n });
    }
    let mut rho1 = CMatrix::zeros(n, n);
    rho1[(up, up)] = real(1.0);
    let traj1 = propagate(&rho1, tensor, &decay_grid(tensor.get(up, up, up, up).re, samples)?)?;
    let mut proj = CMatrix::zeros(n, n);
    proj[(up, up)] = real(1.0);
    let t1 = extract_t1(&traj1, &proj)?;

    let mut rho2 = CMatrix::zeros(n, n);
    for &(a, b) in &[(lo, lo), (lo, up), (up, lo), (up, up)] {
        rho2[(a, b)] = Complex64::new(0.5, 0.0);
    }
    let traj2 = propagate(&rho2, tensor, &decay_grid(tensor.get(lo, up, lo, up).re, samples)?)?;
    let t2 = extract_t2(&traj2, pair)?;
    Ok(RelaxationResult {
        t1_us: t1.tau * 1e-3,
        t2_us: t2.tau * 1e-3,
        t1_fit: t1,
        t2_fit: t2,
        positivity_violated: traj1.positivity_violated() || traj2.positivity_violated(),
    })
}

/// T1 and T2 of the qubit pair at field `b_mt` (mT, axial) and temperature `temp` (K).
pub fn relaxation_times(
    params: &SpinSystemParams,
    b_mt: f64,
    temp: f64,
    cfg: &RelaxationConfig,
) -> Result<RelaxationResult> {
    let tensor = build_redfield(&redfield_model(params, b_mt, temp, cfg)?)?;
    relaxation_times_from_tensor(&tensor, cfg.pair, cfg.samples)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub b_mt: f64,
    pub temperature_k: f64,
    pub t1_us: Option<f64>,
    pub t2_us: Option<f64>,
    pub note: Option<String>,
}

/// Independent T1/T2 evaluation over a field x temperature grid. Points that
/// cannot be fitted are kept with a reason.
pub fn relaxation_sweep(
    params: &SpinSystemParams,
    b_grid: &[f64],
    t_grid: &[f64],
    cfg: &RelaxationConfig,
) -> Result<Vec<SweepRow>> {
    if b_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::InvalidGrid("empty field or temperature grid".into()));
    }
    if t_grid.iter().any(|t| !(*t > 0.0)) || b_grid.iter().any(|b| !b.is_finite()) {
        return Err(Error::InvalidGrid("temperatures must be positive and fields finite".into()));
    }
    params.validate()?;
    let points: Vec<(f64, f64)> = b_grid.iter().flat_map(|&b| t_grid.iter().map(move |&t| (b, t))).collect();
    Ok(points
        .par_iter()
        .map(|&(b, t)| match relaxation_times(params, b, t, cfg) {
            Ok(r) => SweepRow {
                b_mt: b,
                temperature_k: t,
                t1_us: Some(r.t1_us),
                t2_us: Some(r.t2_us),
                note: r.positivity_violated.then(|| "positivity violation".to_string()),
            },
            Err(e) => SweepRow { b_mt: b, temperature_k: t, t1_us: None, t2_us: None, note: Some(e.to_string()) },
        })
        .collect())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:.9e}")).unwrap_or_default();
    let mut out = String::from("B_mT,T_K,T1_us,T2_us,T2_spin_bath_us,note\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.b_mt,
            r.temperature_k,
            fmt(r.t1_us),
            fmt(r.t2_us),
            NUCLEAR_BATH_T2_US,
            r.note.as_deref().unwrap_or("").replace(',', ";")
        ));
    }
    out
}
