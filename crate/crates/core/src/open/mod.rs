// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Open-system dynamics: Redfield relaxation, T1/T2 and Arrhenius analysis.

pub mod bath;
pub mod fit;
pub mod propagate;
pub mod redfield;
pub mod relaxation;

pub use bath::{bath_rate, LorentzianPeak, SpectralDensity};
pub use fit::{arrhenius_fit, fit_exponential, ArrheniusFit, ExpFit};
pub use propagate::{gibbs_populations, propagate, steady_state, Trajectory};
pub use redfield::{build_redfield, RedfieldModel, RedfieldTensor, SECULAR_CUTOFF_GHZ};
pub use relaxation::{
    relaxation_sweep, relaxation_times, PhononCoupling, RelaxationConfig, RelaxationResult, SweepRow,
};
