// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid angular momentum quantum number {0} (must be a positive half-integer)")]
    InvalidSpin(f64),

    #[error("unsupported Stevens operator O_{k}^{q}: {reason}")]
    InvalidStevens { k: i32, q: i32, reason: &'static str },

    #[error("model/coefficient mismatch: {0}")]
    ModelMismatch(String),

    #[error("matrix is not Hermitian (relative deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("level index {index} out of range for dimension {dim}")]
    LevelOutOfRange { index: usize, dim: usize },

    #[error("grid too coarse for adiabatic tracking at B = {field_mt} mT (overlap {overlap:.3}); refine the grid")]
    GridTooCoarse { field_mt: f64, overlap: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("calibration did not converge after {iterations} iterations (best residual {best_residual:.3e})")]
    CalibrationFailed { iterations: usize, best_residual: f64 },

    #[error("invalid calibration setup: {0}")]
    InvalidCalibration(String),

    #[error("no decay to fit: {0}")]
    NoFit(String),

    #[error("ill-conditioned Arrhenius data: {0}")]
    IllConditioned(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid pulse sequence: {0}")]
    InvalidSequence(String),

    #[error("carrier {carrier_ghz} GHz is off-resonant from transition {transition_ghz} GHz by more than {tolerance_mhz} MHz")]
    OffResonant { carrier_ghz: f64, transition_ghz: f64, tolerance_mhz: f64 },

    #[error("no oscillation: {0}")]
    NoOscillation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
