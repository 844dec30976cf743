// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Microwave and E-field pulse sequences on the two-qubit operating space.

pub mod init;
pub mod metrics;
pub mod propagate;
pub mod protocols;
pub mod sequence;
pub mod system;

pub use init::{example_ladder, initialization_transfer, InitLadder, InitReport, Manifold, PairLevel, Rung};
pub use metrics::{concurrence, fit_sinusoid, pure_density, uhlmann_fidelity, BellFamily};
pub use propagate::{basis_state, propagate_resolved, propagate_sequence, Damping, GateResult};
pub use protocols::{
    bell_protocol, bell_sequence, monomer_cancellation_check, rabi_pi_time, swap_oscillation, BellOptions, BellReport,
    MonomerReport, OscillationRecord, RabiScan,
};
pub use sequence::{resolve, Frame, PulseSequence, Resolved, Segment, DEFAULT_OMEGA_MHZ};
pub use system::{monomer_system, operating_system, DrivenSystem, Site, ELECTRONIC_DRIVE};
