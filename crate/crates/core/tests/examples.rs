// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Runs every example and checks what it reports.

#[allow(dead_code)]
#[path = "../examples/arrhenius.rs"]
mod arrhenius;
#[allow(dead_code)]
#[path = "../examples/bell_states.rs"]
mod bell_states;
#[allow(dead_code)]
#[path = "../examples/bell_with_damping.rs"]
mod bell_with_damping;
#[allow(dead_code)]
#[path = "../examples/calibrate_ct.rs"]
mod calibrate_ct;
#[allow(dead_code)]
#[path = "../examples/calibrate_dimer.rs"]
mod calibrate_dimer;
#[allow(dead_code)]
#[path = "../examples/custom_sequence.rs"]
mod custom_sequence;
#[allow(dead_code)]
#[path = "../examples/dimer_delta_f.rs"]
mod dimer_delta_f;
#[allow(dead_code)]
#[path = "../examples/initialization.rs"]
mod initialization;
#[allow(dead_code)]
#[path = "../examples/level_diagram.rs"]
mod level_diagram;
#[allow(dead_code)]
#[path = "../examples/protection.rs"]
mod protection;
#[allow(dead_code)]
#[path = "../examples/relaxation.rs"]
mod relaxation;
#[allow(dead_code)]
#[path = "../examples/swap_gate.rs"]
mod swap_gate;

use ctqsim::dimer::Regime;
use ctqsim::pulses::BellFamily;

#[test]
fn level_diagram_finds_the_clock_transitions() {
    let (levels, cts) = level_diagram::run_example().unwrap();
    assert_eq!(levels, 16);
    assert!(!cts.is_empty());
    assert!((cts[0].b_min_mt - 24.0).abs() < 0.2);
    assert!((cts[0].f_ct_ghz - 9.1).abs() < 1e-6);
}

#[test]
fn protection_slope_vanishes_at_the_ct() {
    let rows = protection::run_example().unwrap();
    let at_ct = rows.iter().find(|r| (r.0 - 24.0).abs() < 1e-9).unwrap();
    assert!(at_ct.1.abs() < 1e-6);
    assert!(at_ct.2 > 0.0);
    assert!(rows.iter().filter(|r| r.0 < 23.0).all(|r| r.1 < 0.0));
    assert!(rows.iter().filter(|r| r.0 > 25.0).all(|r| r.1 > 0.0));
}

#[test]
fn ct_calibration_converges() {
    let (delta, _a_z, residual) = calibrate_ct::run_example().unwrap();
    assert!((delta - 11.0).abs() < 1e-3);
    assert!(residual < 1e-8);
}

#[test]
fn relaxation_peaks_at_the_ct() {
    let rows = relaxation::run_example().unwrap();
    let best = rows.iter().max_by(|a, b| a.t1_us.unwrap_or(0.0).total_cmp(&b.t1_us.unwrap_or(0.0))).unwrap();
    assert_eq!(best.b_mt, 24.0);
    assert!((best.t1_us.unwrap() - 1.0).abs() < 1e-3);
}

#[test]
fn arrhenius_fit_is_log_linear() {
    let fit = arrhenius::run_example().unwrap();
    assert!(fit.r_squared > 0.99);
    assert!(fit.u_eff_cm1 > 0.0);
}

#[test]
fn delta_f_scan_has_both_regimes() {
    let pts = dimer_delta_f::run_example().unwrap();
    let off12 = pts.iter().find(|p| p.voltage == 0.0 && p.b_mt == 12.0).unwrap();
    assert!((off12.delta_f_mhz - 0.1).abs() < 1e-6);
    let on24 = pts.iter().find(|p| p.voltage == 300.0 && p.b_mt == 24.0).unwrap();
    assert_eq!(on24.regime, Regime::Asymmetric);
    let off24 = pts.iter().find(|p| p.voltage == 0.0 && p.b_mt == 24.0).unwrap();
    assert!(off24.delta_f_mhz.abs() < 1e-6);
}

#[test]
fn swap_gate_times() {
    let r = swap_gate::run_example().unwrap();
    assert!((r.frequency_mhz - 0.1).abs() < 1e-3);
    assert!((r.full_swap_ns - 5000.0).abs() < 50.0);
    assert!((r.half_rotation_ns - 2500.0).abs() < 25.0);
}

#[test]
fn bell_states_are_prepared() {
    let out = bell_states::run_example().unwrap();
    assert_eq!(out.len(), 2);
    for s in &out {
        assert!(s.fidelity > 0.99, "{:?}", s.family);
        assert!(s.concurrence > 0.98);
    }
    let phi = out.iter().find(|s| s.family == BellFamily::Phi).unwrap();
    assert!(phi.monomer_fidelity.iter().all(|f| *f > 0.99));
}

#[test]
fn damping_degrades_the_bell_state() {
    let out = bell_with_damping::run_example().unwrap();
    assert_eq!(out.len(), 3);
    assert!(out.windows(2).all(|w| w[1].1 < w[0].1 && w[1].2 < w[0].2));
    assert!(out[0].1 < 0.99 && out[0].1 > 0.5);
}

#[test]
fn initialization_reaches_the_operating_ground() {
    let r = initialization::run_example().unwrap();
    assert!(r.operating_population > 0.99);
    assert!(r.monomer_population < 0.1);
    assert!(r.rungs.iter().all(|g| g.ok));
    assert_eq!(r.pair_shift_mhz.len(), r.rungs.len());
}

#[test]
fn custom_sequence_frames_agree() {
    let (rwa, lab) = custom_sequence::run_example().unwrap();
    assert!(rwa[2] > 0.999);
    for (a, b) in rwa.iter().zip(&lab) {
        assert!((a - b).abs() < 1e-3);
    }
}

#[test]
fn dimer_calibration_hits_targets() {
    let (r, off, on) = calibrate_dimer::run_example().unwrap();
    assert!((r - 52.474).abs() < 1e-3);
    assert!((off - 0.1).abs() < 1e-9);
    assert!((on - 3.6976).abs() < 1e-6);
}
