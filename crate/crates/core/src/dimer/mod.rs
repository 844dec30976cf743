// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Dipolar-coupled pair of molecules and its two-qubit operating space.

pub mod calibrate;
pub mod geometry;
pub mod operating;
pub mod system;

pub use calibrate::{calibrate_sec, calibrate_separation, OPERATING_FIELD_MT, OPERATING_VOLTAGE};
pub use geometry::DimerGeometry;
pub use operating::{
    composition_table, delta_f, delta_f_scan, identify_operating_space, operating_space, product_basis, DeltaFPoint,
    OperatingSpace, ProductBasis, Regime,
};
pub use system::{compose, composed_spectrum, dipolar_operator, sector_exchange, CouplingMode, DimerSystem};
