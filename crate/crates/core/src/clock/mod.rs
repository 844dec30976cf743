// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Clock transitions: level diagrams, anticrossing search, calibration.

pub mod anticrossing;
pub mod calibrate;
pub mod diagram;

pub use anticrossing::{
    find_anticrossings, protection_profile, protection_profile_of, transition_frequency, CtPoint, CtSearch,
    ProtectionProfile,
};
pub use calibrate::{
    calibrate, CalibrationOptions, CalibrationReport, CalibrationTarget, FreeParam, Observable, Target,
};
pub use diagram::{level_diagram, uniform_grid, LevelDiagram};
