// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Single-molecule electro-nuclear spin Hamiltonian.

pub mod angular;
pub mod hamiltonian;
pub mod params;
pub mod stevens;

pub use angular::{angular_momentum_ops, AngularMomentumSpec, AngularOps};
pub use hamiltonian::{axial_field, build_hamiltonian, doublet_admixture, magnetic_moment};
pub use params::{EFieldResponse, ModelKind, Preset, SpinSystemParams, StevensCoefficients};
pub use stevens::stevens_operator;
